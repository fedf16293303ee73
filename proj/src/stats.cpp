#include "cbeta/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace cbeta {

void RunningStats::merge(RunningStats const& other) noexcept
{
    if (other.count_ == 0)
        return;
    if (count_ == 0)
    {
        *this = other;
        return;
    }
    auto const n_a = static_cast<double>(count_);
    auto const n_b = static_cast<double>(other.count_);
    double const n = n_a + n_b;
    double const delta = other.mean_ - mean_;
    mean_ += delta * n_b / n;
    m2_ += other.m2_ + delta * delta * n_a * n_b / n;
    count_ += other.count_;
}

void LogSumAccumulator::add_log(double log_term) noexcept
{
    if (sum_ == 0.0)
    {
        ref_ = log_term;
        sum_ = 1.0;
        return;
    }
    double const shift = log_term - ref_;
    if (shift > 500.0)
    {
        sum_ = sum_ * std::exp(-shift) + 1.0;
        ref_ = log_term;
        return;
    }
    sum_ += std::exp(shift);
}

double LogSumAccumulator::log_value() const noexcept
{
    if (sum_ == 0.0)
        return -std::numeric_limits<double>::infinity();
    return ref_ + std::log(sum_);
}

double log_add_exp(double a, double b) noexcept
{
    if (a < b)
        std::swap(a, b);
    if (b == -std::numeric_limits<double>::infinity())
        return a;
    return a + std::log1p(std::exp(b - a));
}

double log_sum_exp(std::span<double const> values) noexcept
{
    if (values.empty())
        return -std::numeric_limits<double>::infinity();
    double const top = *std::max_element(values.begin(), values.end());
    if (!std::isfinite(top))
        return top;
    double sum = 0.0;
    for (double v : values)
        sum += std::exp(v - top);
    return top + std::log(sum);
}

LinearFit least_squares_line(std::span<double const> x, std::span<double const> y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("least_squares_line: size mismatch");
    if (x.size() < 2)
        throw std::invalid_argument("least_squares_line: need at least two points");

    auto const n = static_cast<double>(x.size());
    double x_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        x_mean += x[i];
        y_mean += y[i];
    }
    x_mean /= n;
    y_mean /= n;

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sxx += (x[i] - x_mean) * (x[i] - x_mean);
        sxy += (x[i] - x_mean) * (y[i] - y_mean);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("least_squares_line: abscissae are all equal");

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = y_mean - fit.slope * x_mean;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        double const r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / n);
    return fit;
}

}  // namespace cbeta
