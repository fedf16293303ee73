#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cbeta/verblunsky.hpp"

namespace cbeta {

//! Partial sums of |a_k|^2, kept in the log domain and, while finite, as
//! plain sums.
class JLNormLadder
{
  public:
    JLNormLadder() = default;
    explicit JLNormLadder(std::span<double const> log_sq_terms);

    void push_log(double log_sq_term);

    std::size_t size() const noexcept { return log_terms_.size(); }
    std::span<double const> log_sq_terms() const noexcept { return log_terms_; }
    //! log sum_{j <= k} |a_j|^2
    double log_prefix(std::size_t k) const { return log_prefix_.at(k); }
    //! sum_{j <= k} |a_j|^2; may be +inf for fast-growing terms.
    double prefix(std::size_t k) const { return prefix_.at(k); }

  private:
    std::vector<double> log_terms_;
    std::vector<double> log_prefix_;
    std::vector<double> prefix_;
};

//! log of sum_{k <= floor x} |a_k|^2 + (x - floor x) |a_{floor x + 1}|^2.
double log_jl_norm(JLNormLadder const& ladder, double x);

//! The same norm squared in linear form; exact when the plain sums are.
double jl_norm(JLNormLadder const& ladder, double x);

//! Root x(r) of (1 - r) ||phi||_x ||psi||_x = sqrt 2. Exact within the
//! bracketing integer segment; throws std::out_of_range("ladder exhausted")
//! when the ladders are too short.
double solve_xr(double r, JLNormLadder const& phi, JLNormLadder const& psi);

struct SlopeEstimate
{
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<std::size_t> sample_points;
    double residual = 0.0;
};

//! OLS of values[i] against log n[i].
SlopeEstimate estimate_slope(std::span<std::size_t const> n, std::span<double const> values);

//! 2 (1 - c) / (2 - c - d); requires c < 1 and d < 1.
double local_dimension(double c, double d);

//! ||phi||_x / ||psi||_x^{s / (2 - s)} along x_grid.
std::vector<double> jl_ratio_scan(JLNormLadder const& phi, JLNormLadder const& psi, double s,
                                  std::span<double const> x_grid);

//! 2^8, 2^9, ... up to n_max, with n_max appended when it is not a power of two.
std::vector<std::size_t> dyadic_checkpoints(std::size_t n_max, std::size_t first = 256);

struct DimensionOptions
{
    double beta = 4.0;
    std::size_t n_max = 1 << 17;
    std::size_t trials = 200;
    MeasureKind measure = MeasureKind::Q0;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    std::optional<double> truncate_delta;
};

struct DimensionReport
{
    DimensionOptions options;
    std::vector<std::size_t> checkpoints;
    std::vector<double> c_values;  //!< per completed trajectory, in index order
    std::vector<double> d_values;
    double c_mean = 0.0;
    double c_sd = 0.0;
    double d_mean = 0.0;
    double d_sd = 0.0;
    //! Plug-in local dimension; absent when beta <= 2 or a slope mean is >= 1.
    std::optional<double> s0_hat;
    std::size_t aborts = 0;
};

//! Samples trajectories of modified coefficients under Q or Q0 and regresses
//! c (log|phi_n(1)|^{-2}) and d (log|psi_n(1)|^{-2}) against log n.
DimensionReport run_dimension_experiment(DimensionOptions const& options);

}  // namespace cbeta
