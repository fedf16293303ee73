#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cbeta/ldp.hpp"
#include "cbeta/stats.hpp"

namespace cbeta {
namespace {

constexpr double kTolerance = 1e-11;
constexpr double kMaxLog = 700.0;

// Mean over the angle of P(z)^lambda - 1 for |z|^2 = 1 - u, z = r e^{i phi}.
// Under Q the kernel is (1 - |z|^2) / |1 - z|^2. Under Q0 the coefficient is
// pushed through the coupling map z -> z (1 + conj z) / (1 + z), for which
// 1 - z* = u / (1 + z) and the kernel becomes |1 + z|^2 / u. Both squared
// moduli are written as (1 - r)^2 + 4 r w with w = sin^2 or cos^2 of phi / 2,
// which stays accurate as r -> 1.
double angular_mean(double u, double lambda, MeasureKind measure)
{
    double const r = std::sqrt(1.0 - u);
    double const log_u = std::log(u);
    double const log_a2 = 2.0 * (log_u - std::log1p(r));  // log (1 - r)^2
    double const log_4r = std::log(4.0 * r);
    auto integrand = [&](double phi, double phi_c) {
        // phi_c is the signed distance to the nearer endpoint of [0, pi]
        double const half_to_pi = phi_c > 0.0 ? 0.5 * phi_c : 0.5 * (kPi - phi);
        double const w = measure == MeasureKind::Q ? std::sin(0.5 * phi) : std::sin(half_to_pi);
        double const log_den = log_add_exp(log_a2, log_4r + 2.0 * std::log(w));
        double const log_p = measure == MeasureKind::Q ? log_u - log_den : log_den - log_u;
        // Overflow is confined to u below ~1e-100, where the radial weight is nil.
        return std::expm1(std::min(lambda * log_p, kMaxLog));
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(integrand, 0.0, kPi, kTolerance) / kPi;
}

}  // namespace

double cumulant_oracle(std::size_t k, double lambda, double beta, MeasureKind measure)
{
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("beta must be positive");
    if (measure == MeasureKind::QTheta)
        throw std::invalid_argument("cumulant_oracle: measure must be q or q0");
    double const b = beta * (static_cast<double>(k) + 1.0) / 2.0;
    bool const finite = measure == MeasureKind::Q ? (lambda > -b && lambda < b + 1.0)
                                                  : (lambda > -b - 1.0 && lambda < b);
    if (!finite)
        throw std::domain_error("divergent moment");
    if (lambda == 0.0)
        return 0.0;

    // |gamma|^2 ~ Beta(1, b). With t = (1 - |gamma|^2)^b the radial density
    // becomes uniform on (0, 1) and u = 1 - |gamma|^2 = t^{1/b}.
    auto radial = [&](double t, double tc) {
        double const log_t = tc > 0.0 ? std::log1p(-tc) : std::log(t);
        double const u = std::exp(log_t / b);
        // u underflows only for t below ~1e-300, where the weight is nil; at
        // u = 1 the kernel is identically 1.
        if (!(u > 0.0) || u >= 1.0)
            return 0.0;
        return angular_mean(u, lambda, measure);
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    double const excess = ts.integrate(radial, 0.0, 1.0, kTolerance);
    return static_cast<double>(k) * std::log1p(excess);
}

}  // namespace cbeta
