#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace cbeta {

//! Mean/variance accumulator (Welford) with an exact pairwise merge.
//!
//! merge() is associative up to rounding; callers that need bit-identical
//! results fold partial accumulators in a fixed order.
class RunningStats
{
  public:
    void add(double x) noexcept
    {
        ++count_;
        double const delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }

    void merge(RunningStats const& other) noexcept;

    std::size_t count() const noexcept { return count_; }
    double mean() const noexcept { return count_ ? mean_ : std::numeric_limits<double>::quiet_NaN(); }
    //! Unbiased sample variance; zero for fewer than two samples.
    double variance() const noexcept
    {
        return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
    }
    double stddev() const noexcept { return std::sqrt(variance()); }
    double stderr_of_mean() const noexcept
    {
        return count_ ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
    }

  private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

//! Running log of a sum of positive terms given by their logarithms.
//!
//! Keeps a reference exponent so each add() costs a single exp().
class LogSumAccumulator
{
  public:
    void add_log(double log_term) noexcept;
    double log_value() const noexcept;
    bool empty() const noexcept { return sum_ == 0.0; }

  private:
    double ref_ = 0.0;
    double sum_ = 0.0;
};

//! log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b) noexcept;

//! log(sum exp(x_i)); -inf for an empty range.
double log_sum_exp(std::span<double const> values) noexcept;

//! Ordinary least squares fit y = intercept + slope * x.
struct LinearFit
{
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

LinearFit least_squares_line(std::span<double const> x, std::span<double const> y);

}  // namespace cbeta
