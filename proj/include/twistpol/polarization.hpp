#pragma once

// Polarization observables of the excited atom (and of the photon field):
// spin density matrices, irreducible tensor polarizations T_KM and alignment
// parameters B_K, <l_z>, and for l = 1 the Cartesian vector/tensor
// parameterization {p_i, p_ij} together with the photon <-> atom transfer
// relations.

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "twistpol/angular.hpp"
#include "twistpol/beam.hpp"
#include "twistpol/density.hpp"
#include "twistpol/transition.hpp"

namespace twistpol {

// Pure-state density matrix of the excited level. Throws NodePointError with
// the atom position when every amplitude vanishes.
inline DensityMatrix density_from_amplitudes(const AmplitudeSet& amps) {
  if (amps.total_intensity() <= 0.0)
    throw NodePointError(amps.position().b, amps.position().phi_b);
  std::vector<std::complex<double>> a;
  a.reserve(static_cast<std::size_t>(2 * amps.l_f() + 1));
  for (int m = amps.l_f(); m >= -amps.l_f(); --m) a.push_back(amps.amp(m));
  return DensityMatrix::pure(a);
}

// Incoherent mixture: rho = sum_k w_k |a_k><a_k| / tr(...), e.g. an average
// over atom positions or spectator-spin orientations. Weights scale the
// unnormalized projectors, so a member's share is w_k * total_intensity_k.
inline DensityMatrix density_from_mixture(
    std::span<const std::pair<double, AmplitudeSet>> members) {
  if (members.empty()) throw std::domain_error("density_from_mixture: no members");
  const int l_f = members.front().second.l_f();
  DensityMatrix rho(l_f);
  double trace = 0.0;
  for (const auto& [weight, amps] : members) {
    if (amps.l_f() != l_f)
      throw std::domain_error("density_from_mixture: mixed l_f values");
    if (weight < 0.0) throw std::domain_error("density_from_mixture: negative weight");
    for (int r = -l_f; r <= l_f; ++r)
      for (int c = -l_f; c <= l_f; ++c)
        rho(r, c) += weight * amps.amp(r) * std::conj(amps.amp(c));
    trace += weight * amps.total_intensity();
  }
  if (trace <= 0.0) throw NodePointError(members.front().second.position().b,
                                         members.front().second.position().phi_b);
  for (int r = -l_f; r <= l_f; ++r)
    for (int c = -l_f; c <= l_f; ++c) rho(r, c) /= trace;
  return rho;
}

// Statistical (Fano) tensor T_KM = sqrt(2K+1) sum_{m m'} rho_{m'm}
// C^{l m'}_{l m; K M}, K = 0 ... 2l, |M| <= K. T_00 = 1 for a normalized
// density matrix; T_{K,-M} = (-1)^M T_KM^* for a Hermitian one.
inline std::complex<double> tensor_polarization(const DensityMatrix& rho, int K, int M) {
  const int l = rho.ell();
  if (K < 0 || K > 2 * l)
    throw std::domain_error("tensor_polarization: K must lie in [0, 2l]");
  if (std::abs(M) > K) throw std::domain_error("tensor_polarization: |M| exceeds K");
  std::complex<double> t(0.0, 0.0);
  for (int m = -l; m <= l; ++m) {
    const int mp = m + M;
    if (std::abs(mp) > l) continue;
    t += rho(mp, m) * clebsch_gordan(2 * l, 2 * m, 2 * K, 2 * M, 2 * l, 2 * mp);
  }
  return std::sqrt(2.0 * K + 1.0) * t;
}

// Alignment parameter B_K = T_K0 (real for any Hermitian density matrix);
// depends only on the populations w(m).
inline double alignment(const DensityMatrix& rho, int K) {
  if (K < 1 || K > 2 * rho.ell())
    throw std::domain_error("alignment: K must lie in [1, 2l]");
  return tensor_polarization(rho, K, 0).real();
}

// Mean magnetic quantum number <l_z> = sum_m m w(m).
inline double mean_lz(const DensityMatrix& rho) {
  double s = 0.0;
  for (int m = -rho.ell(); m <= rho.ell(); ++m) s += m * rho.w(m);
  return s;
}

// Cartesian polarization parameters of a spin-1 system: vector part
// p_i = <S_i> and the five independent tensor components
// p_ij = <(3/2)(S_i S_j + S_j S_i) - 2 delta_ij>.
struct CartesianPolarization {
  double p_x = 0.0, p_y = 0.0, p_z = 0.0;
  double p_xy = 0.0, p_xz = 0.0, p_yz = 0.0;
  double p_xx_minus_yy = 0.0;
  double p_zz = 0.0;
};

// {p_i, p_ij} from spherical amplitudes (a_+, a_0, a_-); normalization is
// applied internally. The Cartesian components follow the spherical-basis
// convention a^{+-} = (-+ a_x + i a_y)/sqrt(2), a^0 = a_z, under which a pure
// a_+ state has p_z = p_zz = +1.
inline CartesianPolarization cartesian_polarizations(std::complex<double> a_plus,
                                                     std::complex<double> a_zero,
                                                     std::complex<double> a_minus) {
  const double norm = std::norm(a_plus) + std::norm(a_zero) + std::norm(a_minus);
  if (norm <= 0.0) throw NodePointError(std::nan(""), std::nan(""));
  const double r = 1.0 / std::sqrt(norm);
  a_plus *= r;
  a_zero *= r;
  a_minus *= r;

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const std::complex<double> i_unit(0.0, 1.0);
  const std::complex<double> a_x = (a_minus - a_plus) * inv_sqrt2;
  const std::complex<double> a_y = -i_unit * (a_plus + a_minus) * inv_sqrt2;
  const std::complex<double> a_z = a_zero;

  CartesianPolarization p;
  // p_i = <S_i> = -i eps_{ijk} a_j^* a_k
  p.p_x = 2.0 * std::imag(std::conj(a_y) * a_z);
  p.p_y = 2.0 * std::imag(std::conj(a_z) * a_x);
  p.p_z = 2.0 * std::imag(std::conj(a_x) * a_y);

  p.p_zz = std::norm(a_plus) + std::norm(a_minus) - 2.0 * std::norm(a_zero);
  p.p_xx_minus_yy =
      3.0 * (a_plus * std::conj(a_minus) + a_minus * std::conj(a_plus)).real();
  p.p_xy = (1.5 * i_unit * (a_plus * std::conj(a_minus) - a_minus * std::conj(a_plus))).real();
  const double f = 3.0 / (2.0 * std::sqrt(2.0));
  p.p_xz = (f * (a_plus * std::conj(a_zero) + a_zero * std::conj(a_plus) -
                 a_minus * std::conj(a_zero) - a_zero * std::conj(a_minus)))
               .real();
  p.p_yz = (f * i_unit *
            (a_plus * std::conj(a_zero) - a_zero * std::conj(a_plus) +
             a_minus * std::conj(a_zero) - a_zero * std::conj(a_minus)))
               .real();
  return p;
}

inline CartesianPolarization cartesian_polarizations(const FieldComponents& f) {
  return cartesian_polarizations(f.a_plus, f.a_zero, f.a_minus);
}

// Atom-side overload; defined for p states only.
inline CartesianPolarization cartesian_polarizations(const AmplitudeSet& amps) {
  if (amps.l_f() != 1)
    throw std::domain_error("cartesian_polarizations: defined for l_f = 1 only");
  if (amps.total_intensity() <= 0.0)
    throw NodePointError(amps.position().b, amps.position().phi_b);
  return cartesian_polarizations(amps.amp(1), amps.amp(0), amps.amp(-1));
}

namespace detail {

using Mat3 = std::array<std::array<std::complex<double>, 3>, 3>;

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline void axpy(Mat3& acc, std::complex<double> s, const Mat3& m) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc[i][j] += s * m[i][j];
}

}  // namespace detail

// Inverse of cartesian_polarizations at the density-matrix level:
//   rho = (1/3) { 1 + (3/2) p_i S_i + (2/3)(p_xy P_xy + p_yz P_yz + p_xz P_xz)
//                 + (1/6)(p_xx - p_yy)(P_xx - P_yy) + (1/2) p_zz P_zz }
// with P_ij = (3/2)(S_i S_j + S_j S_i) - 2 delta_ij, in the descending-m
// basis {+1, 0, -1}.
inline DensityMatrix density_from_cartesian(const CartesianPolarization& p) {
  using detail::Mat3;
  using detail::axpy;
  using detail::operator*;

  const double r = 1.0 / std::sqrt(2.0);
  const std::complex<double> iu(0.0, 1.0);
  const Mat3 sx{{{{0, r, 0}}, {{r, 0, r}}, {{0, r, 0}}}};
  const Mat3 sy{{{{0, -iu * r, 0}}, {{iu * r, 0, -iu * r}}, {{0, iu * r, 0}}}};
  const Mat3 sz{{{{1, 0, 0}}, {{0, 0, 0}}, {{0, 0, -1}}}};
  const Mat3 id{{{{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}}};

  auto quad = [&](const Mat3& a, const Mat3& b, bool diagonal) {
    Mat3 q{};
    axpy(q, 1.5, a * b);
    axpy(q, 1.5, b * a);
    if (diagonal) axpy(q, -2.0, id);
    return q;
  };

  Mat3 acc{};
  axpy(acc, 1.0, id);
  axpy(acc, 1.5 * p.p_x, sx);
  axpy(acc, 1.5 * p.p_y, sy);
  axpy(acc, 1.5 * p.p_z, sz);
  axpy(acc, (2.0 / 3.0) * p.p_xy, quad(sx, sy, false));
  axpy(acc, (2.0 / 3.0) * p.p_yz, quad(sy, sz, false));
  axpy(acc, (2.0 / 3.0) * p.p_xz, quad(sx, sz, false));
  Mat3 xx_minus_yy = quad(sx, sx, true);
  axpy(xx_minus_yy, -1.0, quad(sy, sy, true));
  axpy(acc, (1.0 / 6.0) * p.p_xx_minus_yy, xx_minus_yy);
  axpy(acc, 0.5 * p.p_zz, quad(sz, sz, true));

  DensityMatrix rho(1);
  for (int r_ = 0; r_ < 3; ++r_)
    for (int c = 0; c < 3; ++c) rho(1 - r_, 1 - c) = acc[r_][c] / 3.0;
  return rho;
}

// One row of the photon <-> atom transfer table: the displayed relations say
// photon == sign * atom.
struct RelationRow {
  const char* name;
  double photon;
  double atom;
  int sign;

  double discrepancy() const { return std::abs(photon - sign * atom); }
};

struct RelationReport {
  CartesianPolarization photon;
  CartesianPolarization atom;
  std::array<RelationRow, 8> rows;

  double max_discrepancy() const {
    double d = 0.0;
    for (const auto& row : rows) d = std::max(d, row.discrepancy());
    return d;
  }
};

// Polarization transfer in a dipole transition (l_f = 1): the excited atom's
// {p_i, p_ij} against the local photon field's. The tensor components and p_z
// transfer directly; p_x, p_y, p_xz, p_yz flip sign because the amplitude
// picks up the photon field with the longitudinal component reversed. The
// photon side is evaluated on the parity-weighted beam (see
// Beam::parity_weighted); for a single mode that is the plain local field.
inline RelationReport photon_atom_relations(const Beam& beam, const AtomPosition& pos) {
  const AmplitudeSet amps =
      amplitudes(beam, TransitionSpec{1, FieldMask::full()}, pos);
  if (amps.total_intensity() <= 0.0) throw NodePointError(pos.b, pos.phi_b);
  const CartesianPolarization atom = cartesian_polarizations(amps);
  const CartesianPolarization photon =
      cartesian_polarizations(field_components(beam.parity_weighted(), pos.b, pos.phi_b));

  RelationReport report{photon, atom,
                        {RelationRow{"p_x", photon.p_x, atom.p_x, -1},
                         RelationRow{"p_y", photon.p_y, atom.p_y, -1},
                         RelationRow{"p_z", photon.p_z, atom.p_z, 1},
                         RelationRow{"p_xy", photon.p_xy, atom.p_xy, 1},
                         RelationRow{"p_xz", photon.p_xz, atom.p_xz, -1},
                         RelationRow{"p_yz", photon.p_yz, atom.p_yz, -1},
                         RelationRow{"p_xx-p_yy", photon.p_xx_minus_yy, atom.p_xx_minus_yy, 1},
                         RelationRow{"p_zz", photon.p_zz, atom.p_zz, 1}}};
  return report;
}

// Everything the CLI prints for one atom position.
struct PolarizationReport {
  int l_f;
  AtomPosition position;
  double probability;  // unnormalized total excitation strength sum_m |M(m)|^2
  DensityMatrix rho;
  double mean_lz;
  std::vector<double> alignments;  // B_K, K = 1 ... 2 l_f
  // multipoles[K][M] = T_KM for M = 0 ... K (negative M follow by symmetry)
  std::vector<std::vector<std::complex<double>>> multipoles;
  std::optional<CartesianPolarization> cartesian;  // l_f = 1 only
};

inline PolarizationReport polarization_report(const AmplitudeSet& amps) {
  DensityMatrix rho = density_from_amplitudes(amps);
  PolarizationReport report{amps.l_f(),
                            amps.position(),
                            amps.total_intensity(),
                            std::move(rho),
                            0.0,
                            {},
                            {},
                            std::nullopt};
  report.mean_lz = mean_lz(report.rho);
  for (int k = 1; k <= 2 * report.l_f; ++k)
    report.alignments.push_back(alignment(report.rho, k));
  for (int k = 0; k <= 2 * report.l_f; ++k) {
    std::vector<std::complex<double>> row;
    for (int m = 0; m <= k; ++m) row.push_back(tensor_polarization(report.rho, k, m));
    report.multipoles.push_back(std::move(row));
  }
  if (report.l_f == 1) report.cartesian = cartesian_polarizations(amps);
  return report;
}

}  // namespace twistpol
