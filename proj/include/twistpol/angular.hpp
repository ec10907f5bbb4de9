#pragma once

// Angular-momentum kernel: Wigner small-d matrices, Clebsch-Gordan
// coefficients (Condon-Shortley phases), and integer-order Bessel functions.
//
// All angular momenta are passed as doubled integers (2j, 2m) so half-integer
// spins are exact; callers working with integer l simply pass 2*l.

#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace twistpol {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// A (j, m) pair in doubled-integer form. Construction validates the pair, so
// an AngMomentum in hand is always a legal projection.
struct AngMomentum {
  int twice_j;
  int twice_m;

  AngMomentum(int twice_j_, int twice_m_) : twice_j(twice_j_), twice_m(twice_m_) {
    if (twice_j < 0)
      throw std::domain_error("AngMomentum: 2j must be >= 0, got " + std::to_string(twice_j));
    if (((twice_j + twice_m) & 1) != 0)
      throw std::domain_error("AngMomentum: 2j and 2m must have the same parity");
    if (std::abs(twice_m) > twice_j)
      throw std::domain_error("AngMomentum: |m| exceeds j");
  }

  double j() const { return 0.5 * twice_j; }
  double m() const { return 0.5 * twice_m; }
};

namespace detail {

// Largest 2j we support; factorial arguments never exceed 2j+1.
inline constexpr int max_twice_j = 80;

inline const std::array<double, max_twice_j + 2>& factorial_table() {
  static const std::array<double, max_twice_j + 2> table = [] {
    std::array<double, max_twice_j + 2> t{};
    t[0] = 1.0;
    for (std::size_t n = 1; n < t.size(); ++n) t[n] = t[n - 1] * static_cast<double>(n);
    return t;
  }();
  return table;
}

inline double fact(int n) { return factorial_table()[static_cast<std::size_t>(n)]; }

// x^n for n >= 0 by repeated multiplication; ipow(x, 0) == 1 exactly, which
// keeps d^j(theta = 0) an exact Kronecker delta.
inline double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

inline int parity(int n) { return (n % 2 == 0) ? 1 : -1; }

inline void check_projection(const char* fn, int twice_j, int twice_m) {
  if (twice_j < 0 || twice_j > max_twice_j)
    throw std::domain_error(std::string(fn) + ": 2j out of supported range [0, " +
                            std::to_string(max_twice_j) + "]");
  if (((twice_j + twice_m) & 1) != 0)
    throw std::domain_error(std::string(fn) + ": 2j and 2m must have the same parity");
}

// i^n for any integer n.
inline std::complex<double> unit_imag_pow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace detail

// Wigner small-d matrix element d^j_{m1 m2}(theta) from the factorial-sum
// representation
//   d^j_{m1 m2} = sqrt[(j+m1)!(j-m1)!(j+m2)!(j-m2)!]
//     * sum_s (-1)^{m1-m2+s} cos(t/2)^{2j+m2-m1-2s} sin(t/2)^{m1-m2+2s}
//            / [(j+m2-s)! s! (m1-m2+s)! (j-m1-s)!].
// Convention check: d^1_{1,1} = cos^2(t/2), d^1_{1,0} = -sin(t)/sqrt(2),
// d^1_{0,0} = cos(t).
inline double wigner_small_d(int twice_j, int twice_m1, int twice_m2, double theta) {
  detail::check_projection("wigner_small_d", twice_j, twice_m1);
  detail::check_projection("wigner_small_d", twice_j, twice_m2);
  if (std::abs(twice_m1) > twice_j || std::abs(twice_m2) > twice_j)
    throw std::domain_error("wigner_small_d: |m| exceeds j");

  const int jp1 = (twice_j + twice_m1) / 2;  // j + m1
  const int jm1 = (twice_j - twice_m1) / 2;  // j - m1
  const int jp2 = (twice_j + twice_m2) / 2;  // j + m2
  const int jm2 = (twice_j - twice_m2) / 2;  // j - m2
  const int dm = (twice_m1 - twice_m2) / 2;  // m1 - m2 (always an integer)

  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const double pref =
      std::sqrt(detail::fact(jp1) * detail::fact(jm1) * detail::fact(jp2) * detail::fact(jm2));

  const int s_lo = std::max(0, -dm);
  const int s_hi = std::min(jp2, jm1);
  double sum = 0.0;
  for (int k = s_lo; k <= s_hi; ++k) {
    const double denom =
        detail::fact(jp2 - k) * detail::fact(k) * detail::fact(dm + k) * detail::fact(jm1 - k);
    sum += detail::parity(dm + k) * detail::ipow(c, twice_j - dm - 2 * k) *
           detail::ipow(s, dm + 2 * k) / denom;
  }
  return pref * sum;
}

// Clebsch-Gordan coefficient C^{J M}_{j1 m1; j2 m2} (Racah's closed form,
// Condon-Shortley phases). Selection-rule failures -- M != m1+m2, triangle
// violation, |m| > j, non-integer perimeter -- return exactly 0 so callers can
// sum blindly over quantum numbers; only parity-inconsistent (2j, 2m) pairs
// are treated as errors.
inline double clebsch_gordan(int twice_j1, int twice_m1, int twice_j2, int twice_m2,
                             int twice_J, int twice_M) {
  detail::check_projection("clebsch_gordan", twice_j1, twice_m1);
  detail::check_projection("clebsch_gordan", twice_j2, twice_m2);
  detail::check_projection("clebsch_gordan", twice_J, twice_M);

  if (twice_M != twice_m1 + twice_m2) return 0.0;
  if (std::abs(twice_m1) > twice_j1 || std::abs(twice_m2) > twice_j2 ||
      std::abs(twice_M) > twice_J)
    return 0.0;
  if (twice_J < std::abs(twice_j1 - twice_j2) || twice_J > twice_j1 + twice_j2) return 0.0;
  if (((twice_j1 + twice_j2 + twice_J) & 1) != 0) return 0.0;

  const int a1 = (twice_j1 + twice_m1) / 2;  // j1 + m1
  const int b1 = (twice_j1 - twice_m1) / 2;  // j1 - m1
  const int a2 = (twice_j2 + twice_m2) / 2;  // j2 + m2
  const int b2 = (twice_j2 - twice_m2) / 2;  // j2 - m2
  const int aJ = (twice_J + twice_M) / 2;    // J + M
  const int bJ = (twice_J - twice_M) / 2;    // J - M

  const int p = (twice_j1 + twice_j2 - twice_J) / 2;
  const int q = (twice_j1 - twice_j2 + twice_J) / 2;
  const int r = (-twice_j1 + twice_j2 + twice_J) / 2;
  const int tot = (twice_j1 + twice_j2 + twice_J) / 2 + 1;

  const double pref = std::sqrt(static_cast<double>(twice_J + 1) * detail::fact(p) *
                                detail::fact(q) * detail::fact(r) / detail::fact(tot) *
                                detail::fact(aJ) * detail::fact(bJ) * detail::fact(a1) *
                                detail::fact(b1) * detail::fact(a2) * detail::fact(b2));

  const int u = (twice_J - twice_j2 + twice_m1) / 2;  // J - j2 + m1
  const int v = (twice_J - twice_j1 - twice_m2) / 2;  // J - j1 - m2
  const int k_lo = std::max({0, -u, -v});
  const int k_hi = std::min({p, b1, a2});

  double sum = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) {
    sum += detail::parity(k) /
           (detail::fact(k) * detail::fact(p - k) * detail::fact(b1 - k) * detail::fact(a2 - k) *
            detail::fact(u + k) * detail::fact(v + k));
  }
  return pref * sum;
}

// Bessel function of the first kind, integer order (negative orders allowed
// via J_{-n} = (-1)^n J_n). Backed by std::cyl_bessel_j, which is accurate to
// ~1e-13 relative or better across the argument range used here.
inline double bessel_j(int order, double x) {
  if (!std::isfinite(x)) throw std::domain_error("bessel_j: argument must be finite");
  bool negate = false;
  if (x < 0.0) {  // J_n(-x) = (-1)^n J_n(x)
    x = -x;
    negate ^= (order % 2 != 0);
  }
  int n = order;
  if (n < 0) {
    n = -n;
    negate ^= (n % 2 != 0);
  }
  const double v = std::cyl_bessel_j(static_cast<double>(n), x);
  return negate ? -v : v;
}

}  // namespace twistpol
