#include "cbeta/measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "cbeta/opuc.hpp"
#include "cbeta/parallel.hpp"

namespace cbeta {
namespace {

constexpr std::size_t kBlock = 4096;
// Agreement of Simpson and trapezoid, relative to the cell mass plus its
// width, needed to accept a cell.
constexpr double kCellTolerance = 1e-4;

IdentityLine make_line(RunningStats const& s, double rhs)
{
    IdentityLine line;
    line.lhs = s.mean();
    line.lhs_stderr = s.stderr_of_mean();
    line.rhs = rhs;
    line.pass = std::abs(line.lhs - line.rhs) <= 3.0 * line.lhs_stderr;
    return line;
}

template <std::size_t N>
std::array<RunningStats, N> fold(std::vector<std::array<RunningStats, N>> const& blocks)
{
    std::array<RunningStats, N> total{};
    for (auto const& b : blocks)
    {
        for (std::size_t i = 0; i < N; ++i)
            total[i].merge(b[i]);
    }
    return total;
}

//! Integral over [a, b] of a positive function given its endpoint values.
//! Accepts Simpson's rule once it agrees with the trapezoid; otherwise bisects.
//! Sharp peaks of high-order densities fall between grid points, so a plain
//! trapezoid over the grid loses mass.
template <class F>
double cell_integral(F const& f, double a, double b, double fa, double fb, int depth = 0)
{
    double const m = 0.5 * (a + b);
    double const fm = f(m);
    double const h = b - a;
    double const trap = 0.5 * h * (fa + fb);
    double const simpson = h * (fa + 4.0 * fm + fb) / 6.0;
    if (depth >= 40 || std::abs(simpson - trap) <= kCellTolerance * (simpson + h))
        return simpson;
    return cell_integral(f, a, m, fa, fm, depth + 1) + cell_integral(f, m, b, fm, fb, depth + 1);
}

void check_beta(double beta)
{
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("beta must be positive");
}

}  // namespace

BsDensity bs_density(std::span<Complex const> alphas, std::vector<double> grid)
{
    if (grid.empty())
        throw std::invalid_argument("bs_density: empty grid");
    for (std::size_t j = 0; j < grid.size(); ++j)
    {
        if (!(grid[j] > -kPi && grid[j] <= kPi) || (j > 0 && !(grid[j] > grid[j - 1])))
            throw std::invalid_argument("bs_density: grid must be strictly increasing in (-pi, pi]");
    }
    auto density = [&](double theta) {
        return std::exp(szego_evaluate(alphas, EvalPoint::at(theta)).log_phi_inv_sq()) / kTwoPi;
    };

    BsDensity d;
    d.level = alphas.size();
    d.values.reserve(grid.size());
    for (double theta : grid)
        d.values.push_back(density(theta));
    d.grid = std::move(grid);

    // Cells [-pi, g_0], [g_0, g_1], ..., [g_last, pi]; the density is periodic,
    // so both ends share the value at pi.
    double const v_edge = d.grid.back() == kPi ? d.values.back() : density(kPi);
    d.cumulative.resize(d.grid.size());
    double acc = cell_integral(density, -kPi, d.grid.front(), v_edge, d.values.front());
    d.cumulative[0] = acc;
    for (std::size_t j = 1; j < d.grid.size(); ++j)
    {
        acc += cell_integral(density, d.grid[j - 1], d.grid[j], d.values[j - 1], d.values[j]);
        d.cumulative[j] = acc;
    }
    if (d.grid.back() < kPi)
        acc += cell_integral(density, d.grid.back(), kPi, d.values.back(), v_edge);
    d.total_mass = acc;
    d.normalization_warning = std::abs(d.total_mass - 1.0) > 1e-2;
    return d;
}

BsDensity bs_density(std::span<Complex const> alphas, std::size_t resolution)
{
    return bs_density(alphas, default_theta_grid(resolution));
}

double sample_theta_bs(BsDensity const& density, RandomStream& rng)
{
    if (density.grid.empty() || !(density.total_mass > 0.0))
        throw std::invalid_argument("sample_theta_bs: empty density");
    double const target = rng.uniform() * density.total_mass;

    auto const& cum = density.cumulative;
    auto const it = std::lower_bound(cum.begin(), cum.end(), target);
    double x0, x1, c0, c1;
    if (it == cum.begin())
    {
        x0 = -kPi;
        c0 = 0.0;
        x1 = density.grid.front();
        c1 = cum.front();
    }
    else if (it == cum.end())
    {
        x0 = density.grid.back();
        c0 = cum.back();
        x1 = kPi;
        c1 = density.total_mass;
    }
    else
    {
        auto const j = static_cast<std::size_t>(it - cum.begin());
        x0 = density.grid[j - 1];
        c0 = cum[j - 1];
        x1 = density.grid[j];
        c1 = cum[j];
    }
    if (!(c1 > c0))
        return x1;
    return x0 + (x1 - x0) * (target - c0) / (c1 - c0);
}

std::vector<MartingaleRow> martingale_check(MartingaleOptions const& o)
{
    check_beta(o.beta);
    if (o.trials == 0)
        throw std::invalid_argument("martingale_check: trials must be positive");
    if (o.n_max > 256 && !o.override_cap)
        throw std::invalid_argument("martingale_check: n_max above 256 needs an explicit override");

    std::size_t const rows = o.n_max + 1;
    RadialLaw const law = RadialLaw::cbeta(o.beta);
    auto blocks = run_blocks<std::vector<RunningStats>>(
        o.trials, kBlock, o.workers, [&](std::size_t begin, std::size_t end) {
            std::vector<RunningStats> acc(rows);
            for (std::size_t t = begin; t < end; ++t)
            {
                RandomStream rng(o.seed, t);
                EvalPoint const point = EvalPoint::at(kTwoPi * rng.uniform() - kPi);
                PolyState s = PolyState::initial();
                acc[0].add(1.0);
                for (std::size_t n = 0; n < o.n_max; ++n)
                {
                    s = szego_matrix_step(s, law.sample(n, rng), point);
                    acc[n + 1].add(std::exp(s.log_phi_inv_sq()));
                }
            }
            return acc;
        });

    std::vector<RunningStats> total(rows);
    for (auto const& b : blocks)
    {
        for (std::size_t n = 0; n < rows; ++n)
            total[n].merge(b[n]);
    }
    std::vector<MartingaleRow> out;
    out.reserve(rows);
    for (std::size_t n = 0; n < rows; ++n)
    {
        MartingaleRow row;
        row.n = n;
        row.mean = total[n].mean();
        row.stderr_ = total[n].stderr_of_mean();
        row.pass = std::abs(row.mean - 1.0) <= 3.0 * row.stderr_;
        out.push_back(row);
    }
    return out;
}

RunningStats conditional_step_mean(double delta, std::size_t k, double beta, std::size_t trials,
                                   std::uint64_t seed, unsigned workers)
{
    check_beta(beta);
    Complex const phase = std::polar(1.0, delta);
    auto blocks = run_blocks<std::array<RunningStats, 1>>(
        trials, kBlock, workers, [&](std::size_t begin, std::size_t end) {
            std::array<RunningStats, 1> acc{};
            for (std::size_t t = begin; t < end; ++t)
            {
                RandomStream rng(seed, t);
                acc[0].add(poisson_kernel(sample_alpha_cbeta(k, beta, rng) * phase));
            }
            return acc;
        });
    return fold(blocks)[0];
}

Q0IdentityReport q0_identity_check(std::size_t k, double beta, std::size_t trials, std::uint64_t seed,
                                   unsigned workers)
{
    check_beta(beta);
    if (trials < 2)
        throw std::invalid_argument("q0_identity_check: need at least two trials");

    // 0: Re g, 1: 2 (Im g)^2, 2..4: Re g^m, 5..7: Im g^m
    auto blocks = run_blocks<std::array<RunningStats, 8>>(
        trials, kBlock, workers, [&](std::size_t begin, std::size_t end) {
            std::array<RunningStats, 8> acc{};
            for (std::size_t t = begin; t < end; ++t)
            {
                RandomStream rng(seed, t);
                Complex const g = size_bias(sample_alpha_cbeta(k, beta, rng));
                acc[0].add(g.real());
                acc[1].add(2.0 * g.imag() * g.imag());
                Complex p = g;
                for (int m = 0; m < 3; ++m)
                {
                    acc[2 + m].add(p.real());
                    acc[5 + m].add(p.imag());
                    p *= g;
                }
            }
            return acc;
        });
    auto const total = fold(blocks);

    Q0IdentityReport r;
    r.k = k;
    r.beta = beta;
    r.trials = trials;
    double const m2 = moment_oracle(k, beta, 2);
    double const m4 = moment_oracle(k, beta, 4);
    r.real_part = make_line(total[0], m2);
    r.imag_square = make_line(total[1], m2 - m4);
    for (int m = 1; m <= 3; ++m)
    {
        r.powers.push_back(make_line(total[1 + m], moment_oracle(k, beta, 2 * m)));
        r.powers_imag.push_back(make_line(total[4 + m], 0.0));
    }
    return r;
}

MomentReport moment_check(std::size_t k, double beta, std::size_t trials, std::uint64_t seed,
                          unsigned workers)
{
    check_beta(beta);
    if (trials < 2)
        throw std::invalid_argument("moment_check: need at least two trials");
    auto blocks = run_blocks<std::array<RunningStats, 2>>(
        trials, kBlock, workers, [&](std::size_t begin, std::size_t end) {
            std::array<RunningStats, 2> acc{};
            for (std::size_t t = begin; t < end; ++t)
            {
                RandomStream rng(seed, t);
                double const r2 = std::norm(sample_alpha_cbeta(k, beta, rng));
                acc[0].add(r2);
                acc[1].add(r2 * r2);
            }
            return acc;
        });
    auto const total = fold(blocks);

    MomentReport r;
    r.k = k;
    r.beta = beta;
    r.trials = trials;
    r.second = make_line(total[0], moment_oracle(k, beta, 2));
    r.fourth = make_line(total[1], moment_oracle(k, beta, 4));
    return r;
}

}  // namespace cbeta
