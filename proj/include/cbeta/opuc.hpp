#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbeta/stats.hpp"
#include "cbeta/verblunsky.hpp"

namespace cbeta {

//! Raised when a recursion meets a coefficient too close to the unit circle
//! or produces a non-finite value.
class NumericAbort : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Coefficients with modulus at or above this radius abort a trajectory.
inline constexpr double kAbortRadius = 1.0 - 1e-12;

//---------------------------------------------------------------------------//
// Poisson kernel
//---------------------------------------------------------------------------//

//! P_D(z, 1) = (1 - |z|^2) / |1 - z|^2 for |z| < 1.
double poisson_kernel(Complex z);

//! log P_D(z, 1), accurate for small |z|.
double log_poisson_kernel(Complex z);

//---------------------------------------------------------------------------//
// Transfer-matrix recursion
//---------------------------------------------------------------------------//

struct EvalPoint
{
    double theta = 0.0;
    Complex z{1.0, 0.0};

    static EvalPoint at(double theta) { return {theta, std::polar(1.0, theta)}; }
};

//! phi_n, phi_n^* stored as value * e^{log_scale} and psi_n, psi_n^* as
//! value * e^{psi_log_scale}, at one point.
struct PolyState
{
    std::size_t n = 0;
    Complex phi{1.0, 0.0};
    Complex phi_star{1.0, 0.0};
    Complex psi{1.0, 0.0};
    Complex psi_star{1.0, 0.0};
    double log_scale = 0.0;
    double psi_log_scale = 0.0;

    static PolyState initial() { return {}; }

    double log_phi_inv_sq() const { return -2.0 * (std::log(std::abs(phi)) + log_scale); }
    double log_psi_inv_sq() const { return -2.0 * (std::log(std::abs(psi)) + psi_log_scale); }
};

//! One Szego step with prefactor rho_n^{-1}; psi uses the coefficient -alpha_n.
//! Rescales the stored values when they drift far from unit size.
PolyState szego_matrix_step(PolyState const& state, Complex alpha, EvalPoint const& point);

//! Runs szego_matrix_step over a coefficient prefix.
PolyState szego_evaluate(std::span<Complex const> alphas, EvalPoint const& point);

//---------------------------------------------------------------------------//
// Modified coefficients, Prufer phases, Poisson products
//---------------------------------------------------------------------------//

//! gamma_k = alpha_k B_k(1) with B_0(1) = 1.
std::vector<Complex> original_to_modified(std::span<Complex const> alphas);

//! Inverse of original_to_modified.
std::vector<Complex> modified_to_original(std::span<Complex const> gammas);

//! delta_{n+1}(theta) = delta_n + theta + 2 [arg(1 - g) - arg(1 - g e^{i delta_n})].
double prufer_step(double delta, double theta, Complex gamma);

//! Adds log P_D(gamma e^{i delta}, 1) to a running value of log|phi_n(e^{i theta})|^{-2}.
double log_phi_step(double log_phi_inv_sq, double delta, Complex gamma);

struct XYState
{
    double x = 0.0;
    double y = 1.0;
};

//! X_n = X_{n-1} + 2 Y_{n-1} Im w, Y_n = Y_{n-1} (1 + 2 Re w), w = g / (1 - g).
XYState xy_step(XYState prev, Complex gamma);

//! Running state of one trajectory driven by modified coefficients.
//!
//! After n steps it holds log|phi_n(1)|^{-2}, the second-kind accumulators
//! X_{n-1}, Y_{n-1} at z = 1, the JL norms of phi and psi at 1 up to index n,
//! and on an optional angle grid the relative Prufer phases delta_n(theta_j)
//! and log|phi_n(e^{i theta_j})|^{-2}.
class Trajectory
{
  public:
    explicit Trajectory(std::vector<double> grid = {});

    //! Consumes gamma_n. Throws NumericAbort when |gamma_n| >= kAbortRadius.
    void step(Complex gamma);

    std::size_t n() const noexcept { return n_; }

    double log_phi_inv_sq_at_1() const noexcept { return log_phi_inv_sq_at_1_; }
    //! log Y_{n-1}; equals log_phi_inv_sq_at_1 in exact arithmetic.
    double log_y() const noexcept { return std::log(y_) + log_xy_scale_; }
    double x() const noexcept { return x_ * std::exp(log_xy_scale_); }
    double y() const noexcept { return y_ * std::exp(log_xy_scale_); }
    //! log(X_{n-1}^2 + Y_{n-1}^2) = log|psi_n(1) / phi_n(1)|^2.
    double log_x2_plus_y2() const noexcept;
    double log_psi_inv_sq_at_1() const noexcept { return log_phi_inv_sq_at_1_ - log_x2_plus_y2(); }

    //! log sum_{k <= n} |phi_k(1)|^2 and the same for psi.
    double log_norm_phi() const noexcept { return norm_phi_.log_value(); }
    double log_norm_psi() const noexcept { return norm_psi_.log_value(); }

    std::span<double const> grid() const noexcept { return grid_; }
    std::span<double const> delta() const noexcept { return delta_; }
    std::span<double const> log_phi_inv_sq() const noexcept { return log_phi_; }

  private:
    std::size_t n_ = 0;
    double log_phi_inv_sq_at_1_ = 0.0;
    double x_ = 0.0;
    double y_ = 1.0;
    double log_xy_scale_ = 0.0;
    LogSumAccumulator norm_phi_;
    LogSumAccumulator norm_psi_;
    std::vector<double> grid_;
    std::vector<double> delta_;
    std::vector<double> offset_;
    std::vector<double> log_phi_;
};

//! Sorted angle grid with `resolution` equispaced points in (-pi, pi]; the
//! point 0 is always present.
std::vector<double> default_theta_grid(std::size_t resolution = 257);

//---------------------------------------------------------------------------//
// CMV matrices
//---------------------------------------------------------------------------//

struct CmvMatrix
{
    std::size_t size = 0;
    Eigen::MatrixXcd entries;

    //! max |(C^* C - I)_{ij}|
    double unitarity_error() const;
    //! Largest |i - j| over non-zero entries.
    std::size_t bandwidth() const;
};

//! n x n minor of L M built from alpha_0..alpha_{n-2} in the disk and a
//! unit-modulus terminal coefficient alpha_{n-1}.
CmvMatrix build_cmv(std::span<Complex const> coeffs);

}  // namespace cbeta
