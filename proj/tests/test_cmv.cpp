#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cbeta/opuc.hpp"
#include "oracles.hpp"

using namespace cbeta;

TEST_CASE("size one: the conjugated terminal coefficient")
{
    Complex const lambda = std::polar(1.0, 0.8);
    std::vector<Complex> const c{lambda};
    CmvMatrix const m = build_cmv(c);
    CHECK(m.size == 1);
    CHECK(m.entries(0, 0) == std::conj(lambda));
}

TEST_CASE("size two matches the hand product")
{
    Complex const a0(0.3, -0.2);
    Complex const a1 = std::polar(1.0, -1.1);
    double const rho0 = std::sqrt(1.0 - std::norm(a0));
    std::vector<Complex> const c{a0, a1};
    CmvMatrix const m = build_cmv(c);
    CHECK(std::abs(m.entries(0, 0) - std::conj(a0)) < 1e-15);
    CHECK(std::abs(m.entries(0, 1) - rho0 * std::conj(a1)) < 1e-15);
    CHECK(std::abs(m.entries(1, 0) - rho0) < 1e-15);
    CHECK(std::abs(m.entries(1, 1) + a0 * std::conj(a1)) < 1e-15);
}

TEST_CASE("free interior coefficients give a unitary matrix")
{
    for (std::size_t n : {2u, 5u, 10u})
    {
        std::vector<Complex> c(n, 0.0);
        c.back() = 1.0;
        CmvMatrix const m = build_cmv(c);
        CHECK(m.unitarity_error() <= 1e-12);
        CHECK(m.bandwidth() <= 2);
    }
}

TEST_CASE("random prefixes: unitary and five-diagonal")
{
    oracle::Gen g(12);
    for (std::size_t n : {4u, 16u, 64u, 101u})
    {
        for (int rep = 0; rep < 5; ++rep)
        {
            auto c = g.disk_vector(n, 0.999);
            c.back() = std::polar(1.0, g.uniform(-kPi, kPi));
            CmvMatrix const m = build_cmv(c);
            CHECK(m.size == n);
            CHECK(m.unitarity_error() <= 1e-12);
            CHECK(m.bandwidth() <= 2);
        }
    }
}

TEST_CASE("input validation")
{
    std::vector<Complex> bad_terminal{0.1, 0.5};
    CHECK_THROWS_AS(build_cmv(bad_terminal), std::invalid_argument);
    std::vector<Complex> bad_interior{1.2, 1.0};
    CHECK_THROWS_AS(build_cmv(bad_interior), std::invalid_argument);
    std::vector<Complex> empty;
    CHECK_THROWS_AS(build_cmv(empty), std::invalid_argument);
}
