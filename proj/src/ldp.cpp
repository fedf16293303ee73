#include "cbeta/ldp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cbeta/opuc.hpp"
#include "cbeta/parallel.hpp"
#include "cbeta/stats.hpp"

namespace cbeta {
namespace {

void check_beta(double beta)
{
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("beta must be positive");
}

void check_measure(MeasureKind measure)
{
    if (measure == MeasureKind::QTheta)
        throw std::invalid_argument("measure must be q or q0");
}

double log_horizon(std::size_t n)
{
    if (n < 2)
        throw std::invalid_argument("horizon n must be at least 2");
    return std::log(static_cast<double>(n));
}

// Fits y = a x^2 + b x + c with weights w and returns (argmin, 2a).
std::optional<std::pair<double, double>> weighted_quadratic(std::vector<double> const& x,
                                                            std::vector<double> const& y,
                                                            std::vector<double> const& w)
{
    if (x.size() < 3)
        return std::nullopt;
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    double const x0 = x[x.size() / 2];
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        double const dx = x[i] - x0;
        Eigen::Vector3d const row(dx * dx, dx, 1.0);
        a += w[i] * row * row.transpose();
        rhs += w[i] * y[i] * row;
    }
    Eigen::Vector3d const coef = a.ldlt().solve(rhs);
    if (!(coef[0] > 0.0))
        return std::nullopt;
    return std::make_pair(x0 - coef[1] / (2.0 * coef[0]), 2.0 * coef[0]);
}

}  // namespace

TimeScale::TimeScale(std::size_t n) : n_(n)
{
    if (n == 0)
        throw std::invalid_argument("TimeScale: horizon must be positive");
    partial_.reserve(n + 1);
    partial_.push_back(0.0);
    double h = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
    {
        h += 1.0 / static_cast<double>(k);
        partial_.push_back(h);
    }
}

std::size_t TimeScale::index_at(double t) const
{
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("TimeScale: time must lie in [0, 1]");
    double const target = t * partial_.back();
    if (t == 1.0)
        return n_;
    // first index with H_k > t H_n, minus one
    auto const it = std::upper_bound(partial_.begin(), partial_.end(), target);
    return static_cast<std::size_t>(it - partial_.begin()) - 1;
}

double lambda_limit(double lambda, double beta)
{
    check_beta(beta);
    return 2.0 / beta * lambda * (lambda - 1.0);
}

double rate_eval(RateFunctionSpec const& spec, double x)
{
    check_beta(spec.beta);
    double const b = spec.beta;
    double const q = 2.0 / b;
    auto sq = [](double v) { return v * v; };
    switch (spec.which)
    {
        case RateKind::I:
            return x < 0.0 ? std::numeric_limits<double>::infinity() : b / 8.0 * sq(x - 1.0 - q);
        case RateKind::J:
            return x < 0.0 ? std::numeric_limits<double>::infinity() : b / 8.0 * sq(x - 1.0 + q);
        case RateKind::LambdaStarQ: return b / 8.0 * sq(x + q);
        case RateKind::LambdaStarQ0: return b / 8.0 * sq(x - q);
        case RateKind::Lambda: return lambda_limit(x, b);
    }
    throw std::invalid_argument("rate_eval: unknown rate function");
}

LogModulusPath run_log_modulus_path(std::size_t n, MeasureKind measure, double beta, std::uint64_t seed,
                                    std::uint64_t stream_id)
{
    check_measure(measure);
    RadialLaw const law = RadialLaw::cbeta(beta);
    RandomStream rng(seed, stream_id);
    LogModulusPath path;
    path.n = n;
    path.log_phi_inv_sq.reserve(n + 1);
    path.log_phi_inv_sq.push_back(0.0);
    LogSumAccumulator norm;
    norm.add_log(0.0);
    double l = 0.0;
    for (std::size_t k = 0; k < n; ++k)
    {
        Complex const g = draw_modified(law, measure, k, rng);
        if (!(std::norm(g) < kAbortRadius * kAbortRadius))
            throw NumericAbort("coefficient " + std::to_string(k) + " reached the unit circle");
        l += log_poisson_kernel(g);
        path.log_phi_inv_sq.push_back(l);
        norm.add_log(-l);
    }
    path.log_norm = norm.log_value();
    return path;
}

std::vector<double> zn_values(LogModulusPath const& path, TimeScale const& scale, std::span<double const> times)
{
    if (scale.n() != path.n)
        throw std::invalid_argument("zn_values: time scale and path horizons differ");
    double const ln = log_horizon(path.n);
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times)
        out.push_back(path.log_phi_inv_sq[scale.index_at(t)] / ln);
    return out;
}

std::vector<double> sample_zn_path(std::size_t n, std::span<double const> times, MeasureKind measure, double beta,
                                   std::uint64_t seed, std::uint64_t stream_id)
{
    for (double t : times)
    {
        if (!(t >= 0.0 && t <= 1.0))
            throw std::invalid_argument("sample_zn_path: times must lie in [0, 1]");
    }
    LogModulusPath const path = run_log_modulus_path(n, measure, beta, seed, stream_id);
    return zn_values(path, TimeScale(n), times);
}

double upsilon(std::size_t n, double log_norm)
{
    return log_norm / log_horizon(n);
}

double sample_log_norm(std::size_t n, MeasureKind measure, double beta, std::uint64_t seed, std::uint64_t stream_id)
{
    check_measure(measure);
    RadialLaw const law = RadialLaw::cbeta(beta);
    RandomStream rng(seed, stream_id);
    LogSumAccumulator norm;
    norm.add_log(0.0);
    double l = 0.0;
    for (std::size_t k = 0; k < n; ++k)
    {
        Complex const g = draw_modified(law, measure, k, rng);
        if (!(std::norm(g) < kAbortRadius * kAbortRadius))
            throw NumericAbort("coefficient " + std::to_string(k) + " reached the unit circle");
        l += log_poisson_kernel(g);
        norm.add_log(-l);
    }
    return norm.log_value();
}

double laplace_max(std::span<double const> times, std::span<double const> values)
{
    if (times.size() != values.size() || times.size() < 2)
        throw std::invalid_argument("laplace_max: need matching times and values");
    if (times.front() != 0.0 || times.back() != 1.0)
        throw std::invalid_argument("laplace_max: grid must cover [0, 1]");
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < times.size(); ++i)
    {
        if (i > 0 && !(times[i] > times[i - 1] && times[i] - times[i - 1] <= 1e-3 + 1e-15))
            throw std::invalid_argument("laplace_max: grid must be increasing with spacing <= 1e-3");
        best = std::max(best, times[i] - values[i]);
    }
    return best;
}

std::vector<double> uniform_times(std::size_t intervals)
{
    if (intervals == 0)
        throw std::invalid_argument("uniform_times: need at least one interval");
    std::vector<double> t(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i)
        t[i] = static_cast<double>(i) / static_cast<double>(intervals);
    t.back() = 1.0;
    return t;
}

std::vector<RateCurve> empirical_rate(EmpiricalRateOptions const& o)
{
    check_beta(o.beta);
    check_measure(o.measure);
    if (o.trials < 2 || o.bins < 3)
        throw std::invalid_argument("empirical_rate: need at least two trials and three bins");
    RateFunctionSpec const analytic{o.beta, o.measure == MeasureKind::Q ? RateKind::I : RateKind::J};

    std::vector<RateCurve> curves;
    for (std::size_t n : o.n_ladder)
    {
        double const ln = log_horizon(n);
        auto blocks = run_blocks<std::vector<double>>(o.trials, 16, o.workers, [&](std::size_t begin, std::size_t end) {
            std::vector<double> out;
            for (std::size_t t = begin; t < end; ++t)
            {
                try
                {
                    out.push_back(sample_log_norm(n, o.measure, o.beta, o.seed, t));
                }
                catch (NumericAbort const&)
                {
                    out.push_back(std::numeric_limits<double>::quiet_NaN());
                }
            }
            return out;
        });

        RateCurve curve;
        curve.n = n;
        curve.trials = o.trials;
        std::vector<double> ups;
        RunningStats log_norm_stats, ups_stats;
        for (auto const& b : blocks)
        {
            for (double v : b)
            {
                if (std::isnan(v))
                {
                    ++curve.aborts;
                    continue;
                }
                log_norm_stats.add(v);
                ups.push_back(v / ln);
                ups_stats.add(v / ln);
            }
        }
        curve.upsilon_mean = ups_stats.mean();
        curve.upsilon_sd = ups_stats.stddev();
        curve.log_norm_variance = log_norm_stats.variance();
        if (ups.size() < 2 || !(curve.upsilon_sd > 0.0))
        {
            curves.push_back(std::move(curve));
            continue;
        }

        // Bins span the mean +- 5 standard deviations, clipped at zero.
        double const lo = std::max(0.0, curve.upsilon_mean - 5.0 * curve.upsilon_sd);
        double const hi = curve.upsilon_mean + 5.0 * curve.upsilon_sd;
        double const width = (hi - lo) / static_cast<double>(o.bins);
        std::vector<std::size_t> counts(o.bins, 0);
        for (double u : ups)
        {
            if (u < lo || u >= hi)
                continue;
            auto const b = std::min(o.bins - 1, static_cast<std::size_t>((u - lo) / width));
            ++counts[b];
        }
        std::size_t const peak = *std::max_element(counts.begin(), counts.end());

        std::vector<double> fx, fy, fw;
        for (std::size_t b = 0; b < o.bins; ++b)
        {
            if (counts[b] == 0)
                continue;
            RatePoint p;
            p.x = lo + (static_cast<double>(b) + 0.5) * width;
            p.count = counts[b];
            p.n = n;
            p.empirical = -std::log(static_cast<double>(counts[b]) / static_cast<double>(peak)) / ln;
            p.analytic = rate_eval(analytic, p.x);
            curve.points.push_back(p);
            // Fit window: bins holding at least a tenth of the peak count.
            if (10 * counts[b] >= peak && counts[b] >= 5)
            {
                fx.push_back(p.x);
                fy.push_back(p.empirical);
                fw.push_back(static_cast<double>(counts[b]));
            }
        }
        if (auto fit = weighted_quadratic(fx, fy, fw))
        {
            curve.argmin = fit->first;
            curve.curvature = fit->second;
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

}  // namespace cbeta
