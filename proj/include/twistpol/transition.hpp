#pragma once

// Photoexcitation amplitudes of a single atom displaced from the axis of a
// twisted beam.
//
// The atom sits at impact parameter (b, phi_b) in the focal plane. The
// transition considered is l_i = l_f - 1, m_i = 0  ->  (l_f, m_f): one photon
// absorbed in the lowest multipole, with the radial matrix element and the
// overall plane-wave normalization scaled out (set to 1), since every
// observable built here is a ratio or a normalized density matrix. What
// remains is pure geometry: Bessel factors from translating the beam to the
// atom's frame and angular-momentum algebra from the photon's spin/orbital
// content.
//
// For one mode, the partial amplitude for absorbing the spin-lambda field
// component is
//
//   g(lambda, m_f) = i^{m_f - 2 m_gamma} e^{-i (m_f - m_gamma) phi_b}
//                    J_{m_gamma - m_f}(kappa b)
//                    d^{(l_f - 1)}_{m_f - lambda, 0}(theta_k)
//                    C^{l_f m_f}_{l_f - 1, m_f - lambda; 1 lambda}
//
// and the full amplitude weights each g with the mode's polarization content:
//
//   M(m_f) = sum_modes weight * sum_{lambda in mask} g(lambda, m_f)
//            * d^1_{lambda Lambda}(theta_k).
//
// The lambda = 0 term is the longitudinal-field contribution; masking it out
// reproduces a paraxial (transverse-only) calculation.

#include <complex>
#include <stdexcept>
#include <vector>

#include "twistpol/angular.hpp"
#include "twistpol/beam.hpp"
#include "twistpol/density.hpp"

namespace twistpol {

// Which spherical field components the atom is allowed to absorb.
struct FieldMask {
  bool plus = true;   // lambda = +1
  bool zero = true;   // lambda =  0 (longitudinal)
  bool minus = true;  // lambda = -1

  static constexpr FieldMask full() { return {true, true, true}; }
  static constexpr FieldMask transverse() { return {true, false, true}; }
  static constexpr FieldMask longitudinal() { return {false, true, false}; }

  bool includes(int lambda) const {
    switch (lambda) {
      case 1: return plus;
      case 0: return zero;
      case -1: return minus;
      default: throw std::domain_error("FieldMask: lambda must be -1, 0 or +1");
    }
  }

  bool any() const { return plus || zero || minus; }

  bool operator==(const FieldMask&) const = default;
};

struct TransitionSpec {
  int l_f = 1;                        // final orbital angular momentum (>= 1)
  FieldMask mask = FieldMask::full();
};

inline void validate_transition(const TransitionSpec& t) {
  if (t.l_f < 1) throw std::domain_error("TransitionSpec: l_f must be >= 1");
  if (!t.mask.any()) throw std::domain_error("TransitionSpec: field mask excludes everything");
}

// Atom location in the focal plane, cylindrical coordinates (wavelengths).
struct AtomPosition {
  double b = 0.0;      // impact parameter, >= 0
  double phi_b = 0.0;  // azimuth of the displacement
};

inline void validate_position(const AtomPosition& p) {
  if (!(p.b >= 0.0)) throw std::domain_error("AtomPosition: b must be >= 0");
}

// Geometric partial amplitude g(lambda, m_f) for one mode (mode weight and
// the photon polarization factor d^1_{lambda Lambda} are NOT included here).
// Out-of-range magnetic quantum numbers return exactly 0, so callers may sum
// blindly over lambda and m_f.
inline std::complex<double> g_factor(const TwistedMode& mode, const TransitionSpec& transition,
                                     int m_f, int lambda, const AtomPosition& pos) {
  validate_transition(transition);
  validate_position(pos);
  if (lambda < -1 || lambda > 1)
    throw std::domain_error("g_factor: lambda must be -1, 0 or +1");

  const int l_f = transition.l_f;
  if (std::abs(m_f) > l_f) return 0.0;
  if (std::abs(m_f - lambda) > l_f - 1) return 0.0;  // no initial substate to come from

  const double cg =
      clebsch_gordan(2 * (l_f - 1), 2 * (m_f - lambda), 2, 2 * lambda, 2 * l_f, 2 * m_f);
  if (cg == 0.0) return 0.0;

  const double rotation = wigner_small_d(2 * (l_f - 1), 2 * (m_f - lambda), 0, mode.theta_k);
  const double radial = bessel_j(mode.m_gamma - m_f, mode.kappa() * pos.b);
  const std::complex<double> phase =
      detail::unit_imag_pow(m_f - 2 * mode.m_gamma) *
      std::exp(std::complex<double>(0.0, -(m_f - mode.m_gamma) * pos.phi_b));
  return phase * radial * rotation * cg;
}

// Amplitudes for every final substate m_f = +l_f ... -l_f at one atom
// position, with the per-lambda attribution retained. Sums are accumulated
// lambda-major in the fixed order (-1, +1, 0) so that
// full = transverse + longitudinal holds bit-exactly.
class AmplitudeSet {
 public:
  AmplitudeSet(int l_f, AtomPosition pos)
      : l_f_(l_f), pos_(pos), total_(static_cast<std::size_t>(2 * l_f + 1), {0.0, 0.0}),
        by_lambda_(static_cast<std::size_t>(3 * (2 * l_f + 1)), {0.0, 0.0}) {}

  int l_f() const { return l_f_; }
  const AtomPosition& position() const { return pos_; }

  // total amplitude M(m_f)
  const std::complex<double>& amp(int m_f) const { return total_[slot(m_f)]; }

  // contribution of one absorbed field component (zero for masked lambda)
  const std::complex<double>& component(int m_f, int lambda) const {
    if (lambda < -1 || lambda > 1)
      throw std::domain_error("AmplitudeSet: lambda must be -1, 0 or +1");
    return by_lambda_[slot(m_f) * 3 + static_cast<std::size_t>(1 - lambda)];
  }

  double total_intensity() const {
    double s = 0.0;
    for (const auto& a : total_) s += std::norm(a);
    return s;
  }

  bool all_zero() const {
    for (const auto& a : total_) {
      if (a != std::complex<double>(0.0, 0.0)) return false;
    }
    return true;
  }

 private:
  friend AmplitudeSet amplitudes(const Beam&, const TransitionSpec&, const AtomPosition&);

  std::complex<double>& amp_slot(int m_f) { return total_[slot(m_f)]; }
  std::complex<double>& component_slot(int m_f, int lambda) {
    return by_lambda_[slot(m_f) * 3 + static_cast<std::size_t>(1 - lambda)];
  }

  std::size_t slot(int m_f) const {
    if (std::abs(m_f) > l_f_) throw std::domain_error("AmplitudeSet: |m_f| exceeds l_f");
    return static_cast<std::size_t>(l_f_ - m_f);
  }

  int l_f_;
  AtomPosition pos_;
  std::vector<std::complex<double>> total_;
  std::vector<std::complex<double>> by_lambda_;
};

inline AmplitudeSet amplitudes(const Beam& beam, const TransitionSpec& transition,
                               const AtomPosition& pos) {
  validate_transition(transition);
  validate_position(pos);
  AmplitudeSet out(transition.l_f, pos);
  for (int m_f = -transition.l_f; m_f <= transition.l_f; ++m_f) {
    // longitudinal term last: full-mask totals fold as (transverse) + longitudinal
    for (int lambda : {-1, 1, 0}) {
      if (!transition.mask.includes(lambda)) continue;
      std::complex<double> s(0.0, 0.0);
      for (const auto& mode : beam.modes()) {
        s += mode.weight * g_factor(mode, transition, m_f, lambda, pos) *
             wigner_small_d(2, 2 * lambda, 2 * mode.helicity, mode.theta_k);
      }
      out.component_slot(m_f, lambda) = s;
      out.amp_slot(m_f) += s;
    }
  }
  return out;
}

// Single amplitude M(m_f).
inline std::complex<double> amplitude(const Beam& beam, const TransitionSpec& transition,
                                      int m_f, const AtomPosition& pos) {
  if (std::abs(m_f) > transition.l_f)
    throw std::domain_error("amplitude: |m_f| exceeds l_f");
  return amplitudes(beam, transition, pos).amp(m_f);
}

// Amplitude into a fine-structure state |j m_j> = sum_{m_s} C |l_f m_f; s m_s>
// for a spectator electron spin m_s (doubled integers; twice_ms = +-1). The
// spin does not interact with the field, so the amplitude is the orbital one
// weighted by the recoupling coefficient. Incompatible (j, m_j, m_s) return 0
// through the Clebsch-Gordan selection rules.
inline std::complex<double> amplitude_jm(const Beam& beam, const TransitionSpec& transition,
                                         int twice_j, int twice_mj, int twice_ms,
                                         const AtomPosition& pos) {
  validate_transition(transition);
  if (std::abs(twice_ms) != 1)
    throw std::domain_error("amplitude_jm: twice_ms must be +1 or -1");
  const double cg = clebsch_gordan(2 * transition.l_f, twice_mj - twice_ms, 1, twice_ms,
                                   twice_j, twice_mj);
  if (cg == 0.0) return {0.0, 0.0};
  const int m_f = (twice_mj - twice_ms) / 2;
  return cg * amplitude(beam, transition, m_f, pos);
}

// Benchmark ratio |M(m_gamma = 0, Lambda = -1, j = 5/2, m_j = -1/2)| /
//                 |M(m_gamma = 2, Lambda = +1, j = 5/2, m_j = 3/2)|
// for an S -> D transition (l_f = 2, m_s = -1/2), the configuration in which
// the longitudinal field triples the numerator: as theta_k -> 0 the ratio
// tends to 3/sqrt(2) with the longitudinal field included and to 1/sqrt(2)
// without it. Both amplitudes carry the same J_0(kappa b), so the ratio is
// independent of b between Bessel nodes; at a node the denominator vanishes
// and NodePointError is thrown.
inline double sd_amplitude_ratio(double theta_k, double b, bool with_longitudinal) {
  const TransitionSpec transition{
      2, with_longitudinal ? FieldMask::full() : FieldMask::transverse()};
  const AtomPosition pos{b, 0.0};
  const Beam den_beam = Beam::single(theta_k, 2, 1);
  const std::complex<double> num =
      amplitude_jm(Beam::single(theta_k, 0, -1), transition, 5, -1, -1, pos);
  const std::complex<double> den = amplitude_jm(den_beam, transition, 5, 3, -1, pos);
  // Node detection must be relative: at a Bessel zero the computed amplitude
  // underflows to ~1e-16 of its on-axis value rather than to exactly 0. Both
  // amplitudes carry J_0(kappa b), so the denominator's on-axis value
  // (J_0(0) = 1) is the natural scale.
  const double scale = std::abs(amplitude_jm(den_beam, transition, 5, 3, -1, AtomPosition{}));
  if (std::abs(den) <= 1e-12 * scale) throw NodePointError(b, pos.phi_b);
  return std::abs(num) / std::abs(den);
}

// Paraxial limits of sd_amplitude_ratio.
inline const double sd_ratio_paraxial_full = 3.0 / std::sqrt(2.0);
inline const double sd_ratio_paraxial_transverse = 1.0 / std::sqrt(2.0);

}  // namespace twistpol
