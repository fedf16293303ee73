#include "cbeta/verblunsky.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cbeta/opuc.hpp"

namespace cbeta {
namespace {

// Largest radius the samplers emit; keeps every coefficient strictly inside
// the disk after rounding.
constexpr double kMaxRadius = 1.0 - 0x1.0p-52;

void check_delta(std::optional<double> delta)
{
    if (delta && !(*delta > 0.0 && *delta < 1.0))
        throw std::invalid_argument("truncation delta must lie in (0, 1)");
}

Complex polar_unit(double radius, double angle)
{
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace

RadialLaw::RadialLaw(Kind kind, std::optional<double> delta)
    : kind_(std::move(kind)), truncation_delta_(delta)
{
}

RadialLaw RadialLaw::cbeta(double beta, std::optional<double> truncation_delta)
{
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("beta must be positive");
    check_delta(truncation_delta);
    return RadialLaw(CbetaRadial{beta}, truncation_delta);
}

RadialLaw RadialLaw::fixed_table(std::vector<double> radii, std::optional<double> truncation_delta)
{
    for (double r : radii)
    {
        if (!(r >= 0.0 && r < 1.0))
            throw std::invalid_argument("fixed_table radii must lie in [0, 1)");
    }
    check_delta(truncation_delta);
    return RadialLaw(FixedTableRadial{std::move(radii)}, truncation_delta);
}

double RadialLaw::beta() const
{
    if (auto const* c = std::get_if<CbetaRadial>(&kind_))
        return c->beta;
    throw std::logic_error("beta() requested from a fixed_table law");
}

Complex RadialLaw::sample(std::size_t k, RandomStream& rng) const
{
    Complex alpha;
    if (auto const* c = std::get_if<CbetaRadial>(&kind_))
    {
        alpha = sample_alpha_cbeta(k, c->beta, rng);
    }
    else
    {
        auto const& table = std::get<FixedTableRadial>(kind_).radii;
        if (k >= table.size())
            throw std::out_of_range("fixed_table law has no radius for index " + std::to_string(k));
        rng.uniform();  // same two-uniform layout as the cbeta sampler
        alpha = polar_unit(table[k], kTwoPi * rng.uniform());
    }
    if (truncation_delta_)
        alpha = truncate(alpha, *truncation_delta_);
    return alpha;
}

std::string RadialLaw::describe() const
{
    std::ostringstream os;
    if (auto const* c = std::get_if<CbetaRadial>(&kind_))
        os << "cbeta(beta=" << c->beta << ")";
    else
        os << "fixed_table(" << std::get<FixedTableRadial>(kind_).radii.size() << " radii)";
    if (truncation_delta_)
        os << " truncated at 1-" << *truncation_delta_;
    return os.str();
}

std::string MeasureTag::name() const
{
    switch (kind)
    {
        case MeasureKind::Q: return "q";
        case MeasureKind::Q0: return "q0";
        case MeasureKind::QTheta: return "qtheta";
    }
    return "?";
}

Complex sample_alpha_cbeta(std::size_t k, double beta, RandomStream& rng)
{
    if (!(beta > 0.0))
        throw std::invalid_argument("sample_alpha_cbeta: beta must be positive");
    double const b = beta * (static_cast<double>(k) + 1.0) / 2.0;
    // Inverse CDF of Beta(1, b): r^2 = 1 - U^{1/b}, in the log domain.
    double const r2 = -std::expm1(std::log(rng.uniform()) / b);
    double const r = std::min(std::sqrt(r2), kMaxRadius);
    return polar_unit(r, kTwoPi * rng.uniform());
}

double moment_oracle(std::size_t k, double beta, int power)
{
    if (power != 0 && power != 2 && power != 4 && power != 6)
        throw std::invalid_argument("moment_oracle: power must be 0, 2, 4 or 6");
    if (!(beta > 0.0))
        throw std::invalid_argument("moment_oracle: beta must be positive");
    double const b = beta * (static_cast<double>(k) + 1.0) / 2.0;
    double value = 1.0;
    for (int j = 1; j <= power / 2; ++j)
        value *= j / (j + b);
    return value;
}

Complex truncate(Complex alpha, double delta)
{
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("truncate: delta must lie in (0, 1)");
    double const r = std::abs(alpha);
    if (!(r < 1.0))
        throw std::invalid_argument("truncate: coefficient must lie in the open unit disk");
    double const limit = 1.0 - delta;
    if (r <= limit)
        return alpha;
    return alpha * (limit / r);
}

Complex size_bias(Complex gamma)
{
    if (!(std::norm(gamma) < 1.0))
        throw std::invalid_argument("size_bias: coefficient must lie in the open unit disk");
    // (1 + conj g) / (1 + g) = u / conj(u) = u^2 / |u|^2 with u = 1 + conj g
    Complex const u = 1.0 + std::conj(gamma);
    return gamma * (u * u) / std::norm(u);
}

VerblunskySequence rotate_to_qtheta(VerblunskySequence const& seq, double theta)
{
    if (seq.measure.kind != MeasureKind::Q0)
        throw std::invalid_argument("rotate_to_qtheta: input sequence must be sampled under Q0");
    VerblunskySequence out = seq;
    if (seq.kind == CoefficientKind::Modified)
        out.coeffs = modified_to_original(seq.coeffs);
    for (std::size_t n = 0; n < out.coeffs.size(); ++n)
        out.coeffs[n] *= std::polar(1.0, -(static_cast<double>(n) + 1.0) * theta);
    out.kind = CoefficientKind::Original;
    out.measure = MeasureTag::q_theta(theta);
    return out;
}

Complex draw_modified(RadialLaw const& law, MeasureKind measure, std::size_t k, RandomStream& rng)
{
    Complex const gamma = law.sample(k, rng);
    switch (measure)
    {
        case MeasureKind::Q: return gamma;
        case MeasureKind::Q0: return size_bias(gamma);
        case MeasureKind::QTheta: break;
    }
    throw std::invalid_argument("draw_modified: Q_theta draws need the full sequence");
}

VerblunskySequence sample_sequence(RadialLaw const& law,
                                   MeasureTag measure,
                                   std::size_t count,
                                   std::uint64_t seed,
                                   std::uint64_t stream_id)
{
    VerblunskySequence seq;
    seq.law = law;
    seq.seed = seed;
    seq.stream_id = stream_id;
    seq.coeffs.reserve(count);

    RandomStream rng(seed, stream_id);
    MeasureKind const base = measure.kind == MeasureKind::Q ? MeasureKind::Q : MeasureKind::Q0;
    for (std::size_t k = 0; k < count; ++k)
        seq.coeffs.push_back(draw_modified(law, base, k, rng));

    if (base == MeasureKind::Q)
    {
        seq.measure = MeasureTag::q();
        seq.kind = CoefficientKind::Original;
        return seq;
    }
    seq.measure = MeasureTag::q0();
    seq.kind = CoefficientKind::Modified;
    if (measure.kind == MeasureKind::QTheta)
        return rotate_to_qtheta(seq, measure.theta);
    return seq;
}

}  // namespace cbeta
