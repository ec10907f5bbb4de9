#pragma once

// Shared spin density-matrix container plus the error thrown when an
// observable is requested at a point where the relevant intensity vanishes
// (a beam or excitation node), carrying the offending location.

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace twistpol {

// Thrown when normalizing by a vanishing intensity. radius/azimuth give the
// cylindrical location (beam point or atom position) that produced the node.
class NodePointError : public std::runtime_error {
 public:
  NodePointError(double radius, double azimuth)
      : std::runtime_error("node point: zero intensity at (r = " + std::to_string(radius) +
                           ", phi = " + std::to_string(azimuth) + ")"),
        radius_(radius),
        azimuth_(azimuth) {}

  double radius() const { return radius_; }
  double azimuth() const { return azimuth_; }

 private:
  double radius_;
  double azimuth_;
};

// Density matrix on a (2l+1)-dimensional magnetic substate space, rows and
// columns indexed by the projection m itself in descending order
// (m = +l ... -l), so rho(m', m) reads like the textbook element rho_{m' m}.
// The same container describes the photon spin matrix (l = 1, index =
// helicity).
class DensityMatrix {
 public:
  explicit DensityMatrix(int ell) : ell_(ell) {
    if (ell < 0) throw std::domain_error("DensityMatrix: l must be >= 0");
    data_.assign(static_cast<std::size_t>(dim()) * dim(), {0.0, 0.0});
  }

  // Normalized pure-state projector |a><a| / <a|a> from amplitudes listed in
  // descending-m order. Throws NodePointError (location unknown, reported as
  // NaN) when every amplitude vanishes.
  static DensityMatrix pure(std::span<const std::complex<double>> amps) {
    const int dim = static_cast<int>(amps.size());
    if (dim < 1 || dim % 2 == 0)
      throw std::domain_error("DensityMatrix::pure: need an odd number (2l+1) of amplitudes");
    double norm = 0.0;
    for (const auto& a : amps) norm += std::norm(a);
    if (norm <= 0.0) throw NodePointError(std::nan(""), std::nan(""));
    DensityMatrix rho((dim - 1) / 2);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        rho.data_[static_cast<std::size_t>(r) * dim + c] = amps[r] * std::conj(amps[c]) / norm;
    return rho;
  }

  int ell() const { return ell_; }
  int dim() const { return 2 * ell_ + 1; }

  std::complex<double>& operator()(int m_row, int m_col) {
    return data_[index(m_row, m_col)];
  }
  const std::complex<double>& operator()(int m_row, int m_col) const {
    return data_[index(m_row, m_col)];
  }

  // Diagonal population w(m); real by construction for any valid state.
  double w(int m) const { return (*this)(m, m).real(); }

  double trace() const {
    double t = 0.0;
    for (int m = -ell_; m <= ell_; ++m) t += w(m);
    return t;
  }

  bool is_hermitian(double tol) const {
    for (int r = -ell_; r <= ell_; ++r)
      for (int c = -ell_; c <= ell_; ++c)
        if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
    return true;
  }

  // Frobenius distance ||rho^2 - rho||; ~0 together with trace 1 and
  // hermiticity certifies a pure state (eigenvalues {1, 0, ...}).
  double idempotency_defect() const {
    double acc = 0.0;
    for (int r = -ell_; r <= ell_; ++r) {
      for (int c = -ell_; c <= ell_; ++c) {
        std::complex<double> sq(0.0, 0.0);
        for (int k = -ell_; k <= ell_; ++k) sq += (*this)(r, k) * (*this)(k, c);
        acc += std::norm(sq - (*this)(r, c));
      }
    }
    return std::sqrt(acc);
  }

 private:
  std::size_t index(int m_row, int m_col) const {
    if (std::abs(m_row) > ell_ || std::abs(m_col) > ell_)
      throw std::domain_error("DensityMatrix: |m| exceeds l");
    return static_cast<std::size_t>(ell_ - m_row) * dim() + static_cast<std::size_t>(ell_ - m_col);
  }

  int ell_;
  std::vector<std::complex<double>> data_;
};

}  // namespace twistpol
