#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cbeta/verblunsky.hpp"

namespace cbeta {

//! Harmonic time scale: c_k = 1/k, K_n = H_n, mesh t_k = H_k / H_n.
class TimeScale
{
  public:
    explicit TimeScale(std::size_t n);

    std::size_t n() const noexcept { return n_; }
    double harmonic() const noexcept { return partial_.back(); }
    //! t_{k,n} for 0 <= k <= n.
    double mesh(std::size_t k) const { return partial_.at(k) / partial_.back(); }
    //! Largest k with t_{k,n} <= t; t must lie in [0, 1].
    std::size_t index_at(double t) const;

  private:
    std::size_t n_;
    std::vector<double> partial_;  // H_0 .. H_n
};

enum class RateKind
{
    I,             //!< beta/8 (x - 1 - 2/beta)^2 on x >= 0
    J,             //!< beta/8 (x - 1 + 2/beta)^2 on x >= 0
    LambdaStarQ,   //!< beta/8 (x + 2/beta)^2
    LambdaStarQ0,  //!< beta/8 (x - 2/beta)^2
    Lambda,        //!< (2/beta) lambda (lambda - 1)
};

struct RateFunctionSpec
{
    double beta = 2.0;
    RateKind which = RateKind::I;
};

//! (2/beta) lambda (lambda - 1).
double lambda_limit(double lambda, double beta);

//! Closed-form evaluation; +inf for I and J at x < 0.
double rate_eval(RateFunctionSpec const& spec, double x);

//! k log E[P_D(gamma_k, 1)^lambda] under Q or Q0 by deterministic quadrature.
//! Throws std::domain_error("divergent moment") outside the finite range.
double cumulant_oracle(std::size_t k, double lambda, double beta, MeasureKind measure);

//! One trajectory of log|phi_k(1)|^{-2}, k = 0..n, and its norm growth.
struct LogModulusPath
{
    std::size_t n = 0;
    std::vector<double> log_phi_inv_sq;  //!< index k = 0..n
    double log_norm = 0.0;               //!< log sum_{k <= n} |phi_k(1)|^2
};

LogModulusPath run_log_modulus_path(std::size_t n, MeasureKind measure, double beta, std::uint64_t seed,
                                    std::uint64_t stream_id);

//! Z_n(t) = log|phi_{k}(1)|^{-2} / log n at the largest k with t_{k,n} <= t.
std::vector<double> zn_values(LogModulusPath const& path, TimeScale const& scale, std::span<double const> times);

//! Runs one trajectory and evaluates Z_n on `times` (each in [0, 1]).
std::vector<double> sample_zn_path(std::size_t n, std::span<double const> times, MeasureKind measure, double beta,
                                   std::uint64_t seed, std::uint64_t stream_id);

//! Upsilon_n = log ||phi(1)||_n^2 / log n; n >= 2.
double upsilon(std::size_t n, double log_norm);

//! log ||phi(1)||_n^2 of one trajectory without storing the path.
double sample_log_norm(std::size_t n, MeasureKind measure, double beta, std::uint64_t seed, std::uint64_t stream_id);

//! max over the grid of (s - Z(s)). Times must be sorted, start at 0, end at 1
//! and have spacing at most 1e-3.
double laplace_max(std::span<double const> times, std::span<double const> values);

//! Equispaced times 0, 1/m, ..., 1.
std::vector<double> uniform_times(std::size_t intervals);

struct RatePoint
{
    double x = 0.0;
    double empirical = 0.0;
    double analytic = 0.0;
    std::size_t n = 0;
    std::size_t count = 0;
};

struct RateCurve
{
    std::size_t n = 0;
    std::size_t trials = 0;
    std::size_t aborts = 0;
    double upsilon_mean = 0.0;
    double upsilon_sd = 0.0;
    double log_norm_variance = 0.0;
    //! Non-empty bins only.
    std::vector<RatePoint> points;
    //! Weighted quadratic fit of the empirical rate near its minimum.
    std::optional<double> argmin;
    std::optional<double> curvature;
};

struct EmpiricalRateOptions
{
    std::vector<std::size_t> n_ladder{1 << 12, 1 << 14, 1 << 16};
    std::size_t trials = 10000;
    std::size_t bins = 40;
    MeasureKind measure = MeasureKind::Q;
    double beta = 4.0;
    std::uint64_t seed = 0;
    unsigned workers = 0;
};

//! Histograms Upsilon_n per horizon. The empirical rate of a bin is
//! -log(count / max count) / log n; the analytic curve is I under Q and J
//! under Q0.
std::vector<RateCurve> empirical_rate(EmpiricalRateOptions const& options);

}  // namespace cbeta
