#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cbeta/measure.hpp"
#include "cbeta/opuc.hpp"
#include "oracles.hpp"

using namespace cbeta;

TEST_CASE("density at level 0 is exactly uniform")
{
    BsDensity const d = bs_density(std::vector<Complex>{}, 256);
    CHECK(d.level == 0);
    for (double v : d.values)
        CHECK(v == 1.0 / kTwoPi);
    CHECK(d.total_mass == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(d.normalization_warning);
}

TEST_CASE("density at level 1 with alpha_0 = 1/2")
{
    std::vector<Complex> const a{0.5};
    BsDensity const d = bs_density(a, std::vector<double>{-1.0, 0.0, 2.0});
    CHECK(d.values[1] == doctest::Approx(3.0 / kTwoPi));
    CHECK(d.values[0] == doctest::Approx(poisson_kernel(0.5 * std::polar(1.0, 1.0)) / kTwoPi));
}

TEST_CASE("density integrates to one and stays positive")
{
    RadialLaw const law = RadialLaw::cbeta(2.0);
    for (std::uint64_t t = 0; t < 5; ++t)
    {
        for (std::size_t n : {1u, 8u, 64u})
        {
            auto const a = sample_sequence(law, MeasureTag::q(), n, 4, t).coeffs;
            BsDensity const d = bs_density(a, 4096);
            CHECK(std::abs(d.total_mass - 1.0) <= 1e-3);
            for (double v : d.values)
                REQUIRE(v > 0.0);
            CHECK(std::is_sorted(d.cumulative.begin(), d.cumulative.end()));
        }
    }
}

TEST_CASE("coarse grids trigger the normalization warning")
{
    std::vector<Complex> a(40, Complex(0.95));
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] *= std::polar(1.0, 0.7 * static_cast<double>(i));
    CHECK(bs_density(a, 8).normalization_warning);
}

TEST_CASE("sampling from the uniform density")
{
    BsDensity const d = bs_density(std::vector<Complex>{}, 512);
    std::size_t const n = 100000;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        RandomStream rng(6, i);
        xs[i] = sample_theta_bs(d, rng);
    }
    double const ks = oracle::ks_statistic(xs, [](double x) { return (x + kPi) / kTwoPi; });
    CHECK(ks < oracle::ks_critical_1pct(n));
}

TEST_CASE("sampled angles follow the tabulated cumulative")
{
    auto const a = sample_sequence(RadialLaw::cbeta(1.0), MeasureTag::q(), 20, 8, 0).coeffs;
    BsDensity const d = bs_density(a, 2048);
    std::size_t const n = 100000;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        RandomStream rng(7, i);
        xs[i] = sample_theta_bs(d, rng);
    }
    std::sort(xs.begin(), xs.end());
    double sup = 0.0;
    for (std::size_t j = 0; j < d.grid.size(); j += 7)
    {
        double const emp = static_cast<double>(std::upper_bound(xs.begin(), xs.end(), d.grid[j]) - xs.begin()) / n;
        sup = std::max(sup, std::abs(emp - d.cumulative[j] / d.total_mass));
    }
    CHECK(sup <= 0.01);
}

TEST_CASE("mixing densities over Q-trajectories flattens the theta marginal")
{
    // Var |phi_n|^{-2} = prod (b_k + 1)/(b_k - 1) - 1 at each angle, so with
    // 200 trajectories a 5% band needs a large beta.
    double const beta = 2000.0;
    std::size_t const trials = 200;
    auto const grid = default_theta_grid(512);
    std::vector<double> mean(grid.size(), 0.0);
    for (std::uint64_t t = 0; t < trials; ++t)
    {
        auto const a = sample_sequence(RadialLaw::cbeta(beta), MeasureTag::q(), 32, 10, t).coeffs;
        BsDensity const d = bs_density(a, grid);
        for (std::size_t j = 0; j < grid.size(); ++j)
            mean[j] += d.values[j] / trials;
    }
    double sup = 0.0;
    for (double m : mean)
        sup = std::max(sup, std::abs(m * kTwoPi - 1.0));
    CHECK(sup <= 0.05);
}

TEST_CASE("martingale check")
{
    MartingaleOptions o;
    o.n_max = 16;
    o.trials = 100000;
    o.beta = 4.0;
    o.seed = 3;
    auto const rows = martingale_check(o);
    REQUIRE(rows.size() == 17);
    CHECK(rows[0].mean == 1.0);
    CHECK(rows[0].stderr_ == 0.0);
    for (auto const& r : rows)
        CHECK(r.pass);

    o.n_max = 300;
    CHECK_THROWS_AS(martingale_check(o), std::invalid_argument);
    o.override_cap = true;
    o.trials = 10;
    CHECK(martingale_check(o).size() == 301);
}

TEST_CASE("one-step conditional means")
{
    for (double delta : {0.0, 1.0, 2.0})
    {
        RunningStats const s = conditional_step_mean(delta, 0, 4.0, 200000, 12);
        CHECK(std::abs(s.mean() - 1.0) <= 3.0 * s.stderr_of_mean());
    }
}

TEST_CASE("Q0 identities at k = 0, beta = 2")
{
    Q0IdentityReport const r = q0_identity_check(0, 2.0, 200000, 5);
    CHECK(r.real_part.rhs == doctest::Approx(0.5));
    CHECK(r.imag_square.rhs == doctest::Approx(1.0 / 6.0));
    CHECK(r.real_part.pass);
    CHECK(r.imag_square.pass);
    for (auto const& l : r.powers)
        CHECK(l.pass);
    for (auto const& l : r.powers_imag)
        CHECK(l.pass);
}

TEST_CASE("Q0 real part decays like 2 / (beta k)")
{
    std::size_t const k = 10000;
    double const beta = 2.0;
    Q0IdentityReport const r = q0_identity_check(k, beta, 20000000, 6);
    CHECK(r.real_part.lhs * beta * k / 2.0 == doctest::Approx(1.0).epsilon(0.05));
    CHECK(r.real_part.pass);
}

TEST_CASE("moment check")
{
    MomentReport const m = moment_check(0, 2.0, 200000, 1);
    CHECK(m.second.rhs == doctest::Approx(0.5));
    CHECK(m.fourth.rhs == doctest::Approx(1.0 / 3.0));
    CHECK(m.second.pass);
    CHECK(m.fourth.pass);
}

TEST_CASE("results do not depend on the worker count")
{
    MartingaleOptions o;
    o.n_max = 8;
    o.trials = 20000;
    o.beta = 2.0;
    o.workers = 1;
    auto const a = martingale_check(o);
    o.workers = 5;
    auto const b = martingale_check(o);
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        CHECK(a[i].mean == b[i].mean);
        CHECK(a[i].stderr_ == b[i].stderr_);
    }
}
