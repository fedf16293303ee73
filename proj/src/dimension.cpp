#include "cbeta/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cbeta/opuc.hpp"
#include "cbeta/parallel.hpp"
#include "cbeta/stats.hpp"

namespace cbeta {

JLNormLadder::JLNormLadder(std::span<double const> log_sq_terms)
{
    log_terms_.reserve(log_sq_terms.size());
    log_prefix_.reserve(log_sq_terms.size());
    prefix_.reserve(log_sq_terms.size());
    for (double t : log_sq_terms)
        push_log(t);
}

void JLNormLadder::push_log(double log_sq_term)
{
    log_terms_.push_back(log_sq_term);
    log_prefix_.push_back(log_prefix_.empty() ? log_sq_term : log_add_exp(log_prefix_.back(), log_sq_term));
    double const term = std::exp(log_sq_term);
    prefix_.push_back(prefix_.empty() ? term : prefix_.back() + term);
}

double log_jl_norm(JLNormLadder const& ladder, double x)
{
    if (ladder.size() == 0 || !(x >= 0.0) || x > static_cast<double>(ladder.size() - 1))
        throw std::out_of_range("jl_norm: index beyond the stored terms");
    double const fl = std::floor(x);
    auto const k = static_cast<std::size_t>(fl);
    double const frac = x - fl;
    double const head = ladder.log_prefix(k);
    if (frac == 0.0)
        return head;
    return log_add_exp(head, std::log(frac) + ladder.log_sq_terms()[k + 1]);
}

double jl_norm(JLNormLadder const& ladder, double x)
{
    double const log_value = log_jl_norm(ladder, x);
    double const fl = std::floor(x);
    auto const k = static_cast<std::size_t>(fl);
    double linear = ladder.prefix(k);
    if (x > fl)
        linear += (x - fl) * std::exp(ladder.log_sq_terms()[k + 1]);
    return std::isfinite(linear) ? linear : std::exp(log_value);
}

double solve_xr(double r, JLNormLadder const& phi, JLNormLadder const& psi)
{
    if (!(r >= 0.0 && r < 1.0))
        throw std::invalid_argument("solve_xr: r must lie in [0, 1)");
    std::size_t const len = std::min(phi.size(), psi.size());
    if (len == 0)
        throw std::out_of_range("ladder exhausted");

    // log of 2 / (1 - r)^2; the root is where log||phi||^2 + log||psi||^2 hits it.
    double const target = std::log(2.0) - 2.0 * std::log1p(-r);
    auto g = [&](std::size_t k) { return phi.log_prefix(k) + psi.log_prefix(k); };

    if (g(0) >= target)
        return 0.0;
    if (g(len - 1) < target)
        throw std::out_of_range("ladder exhausted");

    std::size_t lo = 0, hi = len - 1;  // g(lo) < target <= g(hi)
    while (hi - lo > 1)
    {
        std::size_t const mid = lo + (hi - lo) / 2;
        (g(mid) < target ? lo : hi) = mid;
    }

    // On [lo, lo + 1]: (A + f a)(B + f b) = e^target, written as
    // (1 + f p)(1 + f q) = T with p = a / A, q = b / B.
    double const p = std::exp(phi.log_sq_terms()[hi] - phi.log_prefix(lo));
    double const q = std::exp(psi.log_sq_terms()[hi] - psi.log_prefix(lo));
    double const tm1 = std::expm1(target - g(lo));
    double const s = p + q;
    double const f = 2.0 * tm1 / (s + std::sqrt(s * s + 4.0 * p * q * tm1));
    return static_cast<double>(lo) + std::clamp(f, 0.0, 1.0);
}

SlopeEstimate estimate_slope(std::span<std::size_t const> n, std::span<double const> values)
{
    if (n.size() != values.size())
        throw std::invalid_argument("estimate_slope: size mismatch");
    if (n.size() < 2)
        throw std::invalid_argument("estimate_slope: need at least two checkpoints");
    std::vector<double> x;
    x.reserve(n.size());
    for (std::size_t i = 0; i < n.size(); ++i)
    {
        if (n[i] < 2 || (i > 0 && n[i] <= n[i - 1]))
            throw std::invalid_argument("estimate_slope: checkpoints must be increasing and >= 2");
        x.push_back(std::log(static_cast<double>(n[i])));
    }
    LinearFit const fit = least_squares_line(x, values);
    return {fit.slope, fit.intercept, {n.begin(), n.end()}, fit.rms_residual};
}

double local_dimension(double c, double d)
{
    if (!(c < 1.0) || !(d < 1.0))
        throw std::invalid_argument("local_dimension: requires c < 1 and d < 1");
    return 2.0 * (1.0 - c) / (2.0 - c - d);
}

std::vector<double> jl_ratio_scan(JLNormLadder const& phi, JLNormLadder const& psi, double s,
                                  std::span<double const> x_grid)
{
    if (!(s > 0.0 && s <= 1.0))
        throw std::invalid_argument("jl_ratio_scan: s must lie in (0, 1]");
    double const t = s / (2.0 - s);
    std::vector<double> out;
    out.reserve(x_grid.size());
    for (double x : x_grid)
        out.push_back(std::exp(0.5 * log_jl_norm(phi, x) - 0.5 * t * log_jl_norm(psi, x)));
    return out;
}

std::vector<std::size_t> dyadic_checkpoints(std::size_t n_max, std::size_t first)
{
    std::vector<std::size_t> out;
    for (std::size_t n = first; n <= n_max; n *= 2)
        out.push_back(n);
    if (!out.empty() && out.back() != n_max)
        out.push_back(n_max);
    return out;
}

DimensionReport run_dimension_experiment(DimensionOptions const& o)
{
    if (o.measure == MeasureKind::QTheta)
        throw std::invalid_argument("run_dimension_experiment: measure must be q or q0");
    if (o.trials == 0)
        throw std::invalid_argument("run_dimension_experiment: trials must be positive");

    DimensionReport report;
    report.options = o;
    report.checkpoints = dyadic_checkpoints(o.n_max);
    if (report.checkpoints.size() < 2)
        throw std::invalid_argument("run_dimension_experiment: n_max must be at least 512");
    RadialLaw const law = RadialLaw::cbeta(o.beta, o.truncate_delta);
    auto const& cps = report.checkpoints;

    struct Slopes
    {
        bool ok = false;
        double c = 0.0;
        double d = 0.0;
    };
    auto blocks = run_blocks<std::vector<Slopes>>(o.trials, 4, o.workers, [&](std::size_t begin, std::size_t end) {
        std::vector<Slopes> out;
        std::vector<double> lphi(cps.size()), lpsi(cps.size());
        for (std::size_t t = begin; t < end; ++t)
        {
            RandomStream rng(o.seed, t);
            Trajectory traj;
            Slopes s;
            try
            {
                std::size_t next = 0;
                for (std::size_t n = 0; n < o.n_max; ++n)
                {
                    traj.step(draw_modified(law, o.measure, n, rng));
                    if (traj.n() == cps[next])
                    {
                        lphi[next] = traj.log_phi_inv_sq_at_1();
                        lpsi[next] = traj.log_psi_inv_sq_at_1();
                        ++next;
                    }
                }
                s.c = estimate_slope(cps, lphi).slope;
                s.d = estimate_slope(cps, lpsi).slope;
                s.ok = true;
            }
            catch (NumericAbort const&)
            {
            }
            out.push_back(s);
        }
        return out;
    });

    RunningStats cs, ds;
    for (auto const& block : blocks)
    {
        for (auto const& s : block)
        {
            if (!s.ok)
            {
                ++report.aborts;
                continue;
            }
            report.c_values.push_back(s.c);
            report.d_values.push_back(s.d);
            cs.add(s.c);
            ds.add(s.d);
        }
    }
    report.c_mean = cs.mean();
    report.c_sd = cs.stddev();
    report.d_mean = ds.mean();
    report.d_sd = ds.stddev();
    if (o.beta > 2.0 && cs.count() > 0 && report.c_mean < 1.0 && report.d_mean < 1.0)
        report.s0_hat = local_dimension(report.c_mean, report.d_mean);
    return report;
}

}  // namespace cbeta
