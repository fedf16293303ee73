#include "cbeta/opuc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbeta {
namespace {

constexpr double kRescaleHigh = 1e100;
constexpr double kRescaleLow = 1e-100;

void require_in_disk(Complex z, char const* what)
{
    if (!(std::norm(z) < 1.0))
        throw std::invalid_argument(std::string(what) + ": coefficient must lie in the open unit disk");
}

// sqrt(1 - |a|^2) without cancellation near the circle.
double rho_of(Complex a)
{
    double const r = std::abs(a);
    return std::sqrt((1.0 - r) * (1.0 + r));
}

}  // namespace

double poisson_kernel(Complex z)
{
    require_in_disk(z, "poisson_kernel");
    double const r = std::abs(z);
    return (1.0 - r) * (1.0 + r) / std::norm(1.0 - z);
}

double log_poisson_kernel(Complex z)
{
    require_in_disk(z, "log_poisson_kernel");
    double const dx = 1.0 - z.real();
    return std::log1p(-std::norm(z)) - std::log(dx * dx + z.imag() * z.imag());
}

namespace {

void rescale_pair(Complex& a, Complex& b, double& log_scale)
{
    double const big = std::max(std::abs(a), std::abs(b));
    if (big > kRescaleHigh || (big < kRescaleLow && big > 0.0))
    {
        double const inv = 1.0 / big;
        a *= inv;
        b *= inv;
        log_scale += std::log(big);
    }
}

}  // namespace

PolyState szego_matrix_step(PolyState const& state, Complex alpha, EvalPoint const& point)
{
    require_in_disk(alpha, "szego_matrix_step");
    double const inv_rho = 1.0 / rho_of(alpha);
    Complex const a_bar = std::conj(alpha);
    Complex const z = point.z;

    PolyState next;
    next.n = state.n + 1;
    next.log_scale = state.log_scale;
    next.psi_log_scale = state.psi_log_scale;
    next.phi = (z * state.phi - a_bar * state.phi_star) * inv_rho;
    next.phi_star = (state.phi_star - alpha * z * state.phi) * inv_rho;
    next.psi = (z * state.psi + a_bar * state.psi_star) * inv_rho;
    next.psi_star = (state.psi_star + alpha * z * state.psi) * inv_rho;

    // The two pairs can drift apart by more than the double range, so each
    // carries its own scale.
    rescale_pair(next.phi, next.phi_star, next.log_scale);
    rescale_pair(next.psi, next.psi_star, next.psi_log_scale);
    return next;
}

PolyState szego_evaluate(std::span<Complex const> alphas, EvalPoint const& point)
{
    PolyState state = PolyState::initial();
    for (Complex a : alphas)
        state = szego_matrix_step(state, a, point);
    return state;
}

std::vector<Complex> original_to_modified(std::span<Complex const> alphas)
{
    std::vector<Complex> gammas;
    gammas.reserve(alphas.size());
    Complex b{1.0, 0.0};
    for (Complex a : alphas)
    {
        require_in_disk(a, "original_to_modified");
        Complex const g = a * b;
        gammas.push_back(g);
        b *= (1.0 - std::conj(g)) / (1.0 - g);
        b /= std::abs(b);
    }
    return gammas;
}

std::vector<Complex> modified_to_original(std::span<Complex const> gammas)
{
    std::vector<Complex> alphas;
    alphas.reserve(gammas.size());
    Complex b{1.0, 0.0};
    for (Complex g : gammas)
    {
        require_in_disk(g, "modified_to_original");
        alphas.push_back(g * std::conj(b));
        b *= (1.0 - std::conj(g)) / (1.0 - g);
        b /= std::abs(b);
    }
    return alphas;
}

double prufer_step(double delta, double theta, Complex gamma)
{
    require_in_disk(gamma, "prufer_step");
    Complex const rotated = gamma * std::polar(1.0, delta);
    return delta + theta + 2.0 * (std::arg(1.0 - gamma) - std::arg(1.0 - rotated));
}

double log_phi_step(double log_phi_inv_sq, double delta, Complex gamma)
{
    return log_phi_inv_sq + log_poisson_kernel(gamma * std::polar(1.0, delta));
}

XYState xy_step(XYState prev, Complex gamma)
{
    require_in_disk(gamma, "xy_step");
    Complex const w = gamma / (1.0 - gamma);
    return {prev.x + 2.0 * prev.y * w.imag(), prev.y * (1.0 + 2.0 * w.real())};
}

Trajectory::Trajectory(std::vector<double> grid)
    : grid_(std::move(grid)), delta_(grid_), log_phi_(grid_.size(), 0.0)
{
    norm_phi_.add_log(0.0);
    norm_psi_.add_log(0.0);
    offset_.assign(grid_.size(), 0.0);
}

double Trajectory::log_x2_plus_y2() const noexcept
{
    return 2.0 * (std::log(std::hypot(x_, y_)) + log_xy_scale_);
}

void Trajectory::step(Complex gamma)
{
    double const r2 = std::norm(gamma);
    if (!(r2 < kAbortRadius * kAbortRadius))
        throw NumericAbort("coefficient " + std::to_string(n_) + " reached the unit circle");

    log_phi_inv_sq_at_1_ += log_poisson_kernel(gamma);

    Complex const w = gamma / (1.0 - gamma);
    x_ += 2.0 * y_ * w.imag();
    y_ *= 1.0 + 2.0 * w.real();
    double const big = std::max(std::abs(x_), y_);
    if (big > kRescaleHigh || big < kRescaleLow)
    {
        x_ /= big;
        y_ /= big;
        log_xy_scale_ += std::log(big);
    }

    Complex const one_minus = 1.0 - gamma;
    double const base_arg = std::arg(one_minus);
    auto const next_index = static_cast<double>(n_ + 2);
    for (std::size_t j = 0; j < grid_.size(); ++j)
    {
        Complex const rotated = gamma * std::polar(1.0, delta_[j]);
        log_phi_[j] += log_poisson_kernel(rotated);
        // Kept as (n+1) theta plus an accumulated correction, so the free
        // recursion gives (n+1) theta with a single rounding.
        offset_[j] += 2.0 * (base_arg - std::arg(1.0 - rotated));
        delta_[j] = next_index * grid_[j] + offset_[j];
    }

    ++n_;
    if (!std::isfinite(log_phi_inv_sq_at_1_) || !std::isfinite(x_) || !std::isfinite(y_) || !(y_ > 0.0))
        throw NumericAbort("non-finite recursion state at step " + std::to_string(n_));

    norm_phi_.add_log(-log_phi_inv_sq_at_1_);
    norm_psi_.add_log(-log_psi_inv_sq_at_1());
}

std::vector<double> default_theta_grid(std::size_t resolution)
{
    if (resolution == 0)
        throw std::invalid_argument("default_theta_grid: resolution must be positive");
    // Angles 2 pi m / N with -N/2 < m <= N/2.
    auto const n = static_cast<long long>(resolution);
    long long const m_hi = n / 2;
    long long const m_lo = m_hi - n + 1;
    std::vector<double> grid;
    grid.reserve(resolution);
    for (long long m = m_lo; m <= m_hi; ++m)
        grid.push_back(kTwoPi * static_cast<double>(m) / static_cast<double>(n));
    return grid;
}

}  // namespace cbeta
