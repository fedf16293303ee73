#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cbeta/rng.hpp"

namespace cbeta {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

//---------------------------------------------------------------------------//
// Radial laws
//---------------------------------------------------------------------------//

//! CbetaE radial law: |alpha_k|^2 ~ Beta(1, beta (k+1) / 2).
struct CbetaRadial
{
    double beta;
};

//! Deterministic radii r_k = radii[k] with a uniform angle.
struct FixedTableRadial
{
    std::vector<double> radii;
};

//! Rotationally invariant law of a Verblunsky coefficient, indexed by k.
class RadialLaw
{
  public:
    using Kind = std::variant<CbetaRadial, FixedTableRadial>;

    static RadialLaw cbeta(double beta, std::optional<double> truncation_delta = std::nullopt);
    static RadialLaw fixed_table(std::vector<double> radii,
                                 std::optional<double> truncation_delta = std::nullopt);

    Kind const& kind() const noexcept { return kind_; }
    std::optional<double> truncation_delta() const noexcept { return truncation_delta_; }
    bool is_cbeta() const noexcept { return std::holds_alternative<CbetaRadial>(kind_); }
    //! beta of a cbeta law; throws for fixed tables.
    double beta() const;

    //! Draws coefficient k: radius from the law, angle uniform, then the
    //! optional radial truncation. Consumes exactly two uniforms.
    Complex sample(std::size_t k, RandomStream& rng) const;

    std::string describe() const;

  private:
    RadialLaw(Kind kind, std::optional<double> delta);

    Kind kind_;
    std::optional<double> truncation_delta_;
};

//---------------------------------------------------------------------------//
// Measures and sequences
//---------------------------------------------------------------------------//

enum class MeasureKind
{
    Q,       //!< independent rotationally invariant coefficients
    Q0,      //!< size-biased law: coefficients given the sampled point 1
    QTheta,  //!< coefficients given the sampled point e^{i theta}
};

struct MeasureTag
{
    MeasureKind kind = MeasureKind::Q;
    double theta = 0.0;  //!< only meaningful for QTheta

    static MeasureTag q() { return {MeasureKind::Q, 0.0}; }
    static MeasureTag q0() { return {MeasureKind::Q0, 0.0}; }
    static MeasureTag q_theta(double theta) { return {MeasureKind::QTheta, theta}; }

    std::string name() const;
};

//! Whether a stored sequence holds the original coefficients alpha_k or the
//! modified coefficients gamma_k = alpha_k B_k(1). Under Q the two laws agree.
enum class CoefficientKind
{
    Original,
    Modified,
};

struct VerblunskySequence
{
    std::vector<Complex> coeffs;
    RadialLaw law = RadialLaw::cbeta(2.0);
    MeasureTag measure;
    CoefficientKind kind = CoefficientKind::Original;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

//---------------------------------------------------------------------------//
// Operations
//---------------------------------------------------------------------------//

//! e^{2 pi i U} r with r^2 ~ Beta(1, beta (k+1)/2).
Complex sample_alpha_cbeta(std::size_t k, double beta, RandomStream& rng);

//! E|alpha_k|^{power} for the CbetaE law; power must be 0, 2, 4 or 6.
double moment_oracle(std::size_t k, double beta, int power);

//! Radial clamp at 1 - delta, argument preserved.
Complex truncate(Complex alpha, double delta);

//! Coupling map gamma (1 + conj(gamma)) / (1 + gamma) taking Q-samples to
//! Q0-samples. Preserves the modulus.
Complex size_bias(Complex gamma);

//! Multiplies coefficient n by e^{-i (n+1) theta}. The input must be a Q0
//! sequence; modified coefficients are first converted to original ones.
VerblunskySequence rotate_to_qtheta(VerblunskySequence const& seq, double theta);

//! Draws the first `count` coefficients of stream (seed, stream_id).
//!
//! Q yields original coefficients (equally valid as modified ones), Q0 yields
//! modified coefficients through size_bias, QTheta yields original
//! coefficients through Q0 followed by rotate_to_qtheta.
VerblunskySequence sample_sequence(RadialLaw const& law,
                                   MeasureTag measure,
                                   std::size_t count,
                                   std::uint64_t seed,
                                   std::uint64_t stream_id);

//! One modified coefficient under Q or Q0 (no rotation), the per-step draw
//! used by the trajectory engine.
Complex draw_modified(RadialLaw const& law, MeasureKind measure, std::size_t k, RandomStream& rng);

}  // namespace cbeta
