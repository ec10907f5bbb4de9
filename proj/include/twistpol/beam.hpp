#pragma once

// Monochromatic twisted-photon (Bessel) beams and their local field.
//
// Units and gauge: lengths are measured in wavelengths, so the wave number is
// k = 2 pi and the transverse momentum of a mode with pitch angle theta_k is
// kappa = 2 pi sin(theta_k). Fields are evaluated in the z = 0 focal plane at
// t = 0 with unit overall amplitude. A mode carries total angular momentum
// projection m_gamma along the beam axis and helicity Lambda = +-1.
//
// The spin components (spherical basis lambda = +1, 0, -1) of the vector
// potential of one mode at cylindrical position (rho, phi) are
//
//   a_lambda(rho, phi) = i^{-lambda} d^1_{lambda Lambda}(theta_k)
//                        J_{m_gamma - lambda}(kappa rho)
//                        e^{i (m_gamma - lambda) phi}
//
// i.e. each spin component carries orbital angular momentum m_gamma - lambda
// so that the total is m_gamma. lambda = 0 is the longitudinal field that a
// paraxial treatment drops.

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "twistpol/angular.hpp"
#include "twistpol/density.hpp"

namespace twistpol {

// One Bessel mode. weight is the complex coefficient it contributes with when
// superposed with other modes of the same cone angle.
struct TwistedMode {
  double theta_k = 0.1;                   // cone (pitch) angle, radians
  int m_gamma = 1;                        // total angular momentum projection
  int helicity = 1;                       // Lambda, +1 or -1
  std::complex<double> weight{1.0, 0.0};  // superposition coefficient

  double kappa() const { return two_pi * std::sin(theta_k); }
  double kz() const { return two_pi * std::cos(theta_k); }
};

inline void validate_mode(const TwistedMode& mode) {
  if (!(mode.theta_k > 0.0) || !(mode.theta_k < 0.5 * pi))
    throw std::domain_error("TwistedMode: theta_k must lie in (0, pi/2), got " +
                            std::to_string(mode.theta_k));
  if (mode.helicity != 1 && mode.helicity != -1)
    throw std::domain_error("TwistedMode: helicity must be +1 or -1, got " +
                            std::to_string(mode.helicity));
}

// A coherent superposition of Bessel modes sharing one cone angle (one value
// of kappa and k_z), so the superposition is still monochromatic with a
// common transverse profile scale.
class Beam {
 public:
  explicit Beam(std::vector<TwistedMode> modes) : modes_(std::move(modes)) {
    if (modes_.empty()) throw std::domain_error("Beam: at least one mode required");
    for (const auto& m : modes_) validate_mode(m);
    for (const auto& m : modes_)
      if (m.theta_k != modes_.front().theta_k)
        throw std::domain_error("Beam: all modes must share the same theta_k");
  }

  static Beam single(double theta_k, int m_gamma, int helicity) {
    return Beam({TwistedMode{theta_k, m_gamma, helicity, {1.0, 0.0}}});
  }

  const std::vector<TwistedMode>& modes() const { return modes_; }
  double theta_k() const { return modes_.front().theta_k; }
  double kappa() const { return modes_.front().kappa(); }

  // Same beam with each mode weight multiplied by (-1)^{m_gamma}. Used when
  // relating photon-side and atom-side observables of a superposition: the
  // excitation amplitude's displacement phase references each mode's field
  // with this extra parity factor, and folding it into the weights puts the
  // photon field in the frame the excited atom actually sees. For a single
  // mode it is a global phase with no effect on any observable.
  Beam parity_weighted() const {
    std::vector<TwistedMode> modes = modes_;
    for (auto& m : modes)
      if (m.m_gamma % 2 != 0) m.weight = -m.weight;
    return Beam(std::move(modes));
  }

 private:
  std::vector<TwistedMode> modes_;
};

// Spherical spin components of the local vector potential.
struct FieldComponents {
  std::complex<double> a_plus{0.0, 0.0};   // lambda = +1
  std::complex<double> a_zero{0.0, 0.0};   // lambda =  0 (longitudinal)
  std::complex<double> a_minus{0.0, 0.0};  // lambda = -1

  std::complex<double> component(int lambda) const {
    switch (lambda) {
      case 1: return a_plus;
      case 0: return a_zero;
      case -1: return a_minus;
      default: throw std::domain_error("FieldComponents: lambda must be -1, 0 or +1");
    }
  }

  std::complex<double>& component(int lambda) {
    switch (lambda) {
      case 1: return a_plus;
      case 0: return a_zero;
      case -1: return a_minus;
      default: throw std::domain_error("FieldComponents: lambda must be -1, 0 or +1");
    }
  }

  double intensity() const {
    return std::norm(a_plus) + std::norm(a_zero) + std::norm(a_minus);
  }
};

// Field of a single mode at (rho, phi).
inline FieldComponents field_components(const TwistedMode& mode, double rho, double phi) {
  if (rho < 0.0) throw std::domain_error("field_components: rho must be >= 0");
  validate_mode(mode);
  FieldComponents f;
  const double x = mode.kappa() * rho;
  for (int lambda : {1, 0, -1}) {
    const int n = mode.m_gamma - lambda;
    const std::complex<double> azimuthal =
        std::exp(std::complex<double>(0.0, n * phi));
    f.component(lambda) = mode.weight * detail::unit_imag_pow(-lambda) *
                          wigner_small_d(2, 2 * lambda, 2 * mode.helicity, mode.theta_k) *
                          bessel_j(n, x) * azimuthal;
  }
  return f;
}

// Field of a coherent superposition: weighted sum of the mode fields.
inline FieldComponents field_components(const Beam& beam, double rho, double phi) {
  FieldComponents total;
  for (const auto& mode : beam.modes()) {
    const FieldComponents f = field_components(mode, rho, phi);
    total.a_plus += f.a_plus;
    total.a_zero += f.a_zero;
    total.a_minus += f.a_minus;
  }
  return total;
}

// Photon spin density matrix at a point: normalized projector onto the local
// spin state (a_+, a_0, a_-). Indices are helicity values +1, 0, -1. Throws
// NodePointError carrying (rho, phi) where the total field vanishes.
inline DensityMatrix photon_density_matrix(const Beam& beam, double rho, double phi) {
  const FieldComponents f = field_components(beam, rho, phi);
  if (f.intensity() <= 0.0) throw NodePointError(rho, phi);
  const std::complex<double> amps[3] = {f.a_plus, f.a_zero, f.a_minus};
  return DensityMatrix::pure(amps);
}

}  // namespace twistpol
