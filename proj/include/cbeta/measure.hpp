#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cbeta/rng.hpp"
#include "cbeta/stats.hpp"
#include "cbeta/verblunsky.hpp"

namespace cbeta {

//! Bernstein-Szego density |phi_n(e^{i theta})|^{-2} / 2 pi on a sorted grid.
struct BsDensity
{
    std::size_t level = 0;
    std::vector<double> grid;
    std::vector<double> values;
    //! Mass of (-pi, grid[j]] under the periodic piecewise-linear interpolant.
    std::vector<double> cumulative;
    double total_mass = 0.0;
    //! Set when |total_mass - 1| > 1e-2, usually a grid too coarse for phi_n.
    bool normalization_warning = false;
};

//! Evaluates the density for the original coefficients `alphas` on `grid`,
//! which must be sorted and lie in (-pi, pi].
BsDensity bs_density(std::span<Complex const> alphas, std::vector<double> grid);

//! Same on the default equispaced grid of the given resolution.
BsDensity bs_density(std::span<Complex const> alphas, std::size_t resolution);

//! Inverse-transform draw from the density, linear in the cumulative between knots.
double sample_theta_bs(BsDensity const& density, RandomStream& rng);

struct MartingaleRow
{
    std::size_t n = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    bool pass = false;
};

struct MartingaleOptions
{
    std::size_t n_max = 64;
    std::size_t trials = 100000;
    double beta = 2.0;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    //! Allows n_max above 256, where heavy tails make the check meaningless
    //! at practical trial counts.
    bool override_cap = false;
};

//! Monte Carlo mean of |phi_n(e^{i theta})|^{-2} for n = 0..n_max with theta
//! uniform and coefficients under Q. Each row passes when within 3 standard
//! errors of 1.
std::vector<MartingaleRow> martingale_check(MartingaleOptions const& options);

//! Mean of P_D(gamma_k e^{i delta}, 1) over Q-draws of gamma_k.
RunningStats conditional_step_mean(double delta, std::size_t k, double beta, std::size_t trials,
                                   std::uint64_t seed, unsigned workers = 0);

struct IdentityLine
{
    double lhs = 0.0;
    double lhs_stderr = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

struct Q0IdentityReport
{
    std::size_t k = 0;
    double beta = 0.0;
    std::size_t trials = 0;
    //! E_Q0[Re gamma] against E_Q|gamma|^2.
    IdentityLine real_part;
    //! 2 E_Q0[(Im gamma)^2] against E_Q|gamma|^2 - E_Q|gamma|^4.
    IdentityLine imag_square;
    //! E_Q0[gamma^m] against E_Q|gamma|^{2m} for m = 1, 2, 3 (real parts).
    std::vector<IdentityLine> powers;
    //! Imaginary parts of E_Q0[gamma^m], which vanish by conjugation symmetry.
    std::vector<IdentityLine> powers_imag;
};

//! Checks the size-bias identities by pushing Q-samples through size_bias.
//! Lines pass when within 3 standard errors.
Q0IdentityReport q0_identity_check(std::size_t k, double beta, std::size_t trials, std::uint64_t seed,
                                   unsigned workers = 0);

struct MomentReport
{
    std::size_t k = 0;
    double beta = 0.0;
    std::size_t trials = 0;
    //! E|alpha_k|^2 and E|alpha_k|^4 against the Beta moments.
    IdentityLine second;
    IdentityLine fourth;
};

MomentReport moment_check(std::size_t k, double beta, std::size_t trials, std::uint64_t seed,
                          unsigned workers = 0);

}  // namespace cbeta
