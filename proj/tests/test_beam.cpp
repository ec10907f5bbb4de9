#include "twistpol/beam.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"

using namespace twistpol;
using Catch::Matchers::WithinAbs;

namespace {
void check_close(std::complex<double> got, std::complex<double> want, double tol) {
  CAPTURE(got, want, tol);
  CHECK(std::abs(got - want) <= tol);
}
}  // namespace

TEST_CASE("TwistedMode and Beam validate their construction", "[beam]") {
  CHECK_NOTHROW(Beam::single(0.1, -2, 1));
  CHECK_THROWS_AS(Beam(std::vector<TwistedMode>{}), std::domain_error);
  CHECK_THROWS_AS(Beam::single(0.0, 1, 1), std::domain_error);   // theta_k out of range
  CHECK_THROWS_AS(Beam::single(1.6, 1, 1), std::domain_error);   // theta_k >= pi/2
  CHECK_THROWS_AS(Beam::single(0.1, 1, 0), std::domain_error);   // bad helicity
  CHECK_THROWS_AS(Beam({TwistedMode{0.1, 1, 1, {1, 0}}, TwistedMode{0.2, 2, 1, {1, 0}}}),
                  std::domain_error);  // mismatched cone angles
  CHECK_THAT(Beam::single(0.1, 1, 1).kappa(), WithinAbs(two_pi * std::sin(0.1), 1e-15));
}

TEST_CASE("on-axis field keeps only the lambda = m_gamma component", "[beam]") {
  const double theta = 0.2;

  // m_gamma = 0, helicity -1: only the longitudinal component survives at
  // rho = 0, with value d^1_{0,-1}(theta) = -sin(theta)/sqrt(2) exactly.
  const FieldComponents f = field_components(TwistedMode{theta, 0, -1, {1, 0}}, 0.0, 0.0);
  CHECK(f.a_plus == std::complex<double>(0.0, 0.0));
  CHECK(f.a_minus == std::complex<double>(0.0, 0.0));
  CHECK_THAT(f.a_zero.real(), WithinAbs(-std::sin(theta) / std::sqrt(2.0), 1e-15));
  CHECK(f.a_zero.imag() == 0.0);
  CHECK_THAT(std::abs(f.a_zero), WithinAbs(std::sin(theta) / std::sqrt(2.0), 1e-15));

  // |m_gamma| >= 2 has no on-axis field at all (exact zeros).
  const FieldComponents g = field_components(TwistedMode{theta, 3, 1, {1, 0}}, 0.0, 1.3);
  CHECK(g.a_plus == std::complex<double>(0.0, 0.0));
  CHECK(g.a_zero == std::complex<double>(0.0, 0.0));
  CHECK(g.a_minus == std::complex<double>(0.0, 0.0));
}

TEST_CASE("paraxial modes reduce to a single helicity component", "[beam]") {
  const double theta = 1e-6;
  const TwistedMode mode{theta, 2, 1, {1, 0}};
  const double rho = 0.44 / mode.kappa();  // kappa*rho = 0.44, away from Bessel zeros
  const double phi = 0.9;
  const FieldComponents f = field_components(mode, rho, phi);

  const std::complex<double> expected =
      detail::unit_imag_pow(-1) * bessel_j(1, 0.44) *
      std::exp(std::complex<double>(0.0, (mode.m_gamma - 1) * phi));
  check_close(f.a_plus, expected, 1e-10);
  CHECK(std::abs(f.a_zero) < 2e-6);
  CHECK(std::abs(f.a_minus) < 1e-11);
}

TEST_CASE("field components match the angular-quadrature oracle", "[beam][property]") {
  std::mt19937 rng(90125);
  std::uniform_real_distribution<double> thetas(0.01, 0.8);
  std::uniform_int_distribution<int> mgs(-3, 3);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> rhos(0.0, 5.0);
  std::uniform_real_distribution<double> phis(0.0, 2.0 * pi);

  for (int rep = 0; rep < 20; ++rep) {
    const TwistedMode mode{thetas(rng), mgs(rng), coin(rng) ? 1 : -1, {1, 0}};
    const double rho = rhos(rng), phi = phis(rng);
    const FieldComponents f = field_components(mode, rho, phi);
    for (int lambda : {1, 0, -1}) {
      const std::complex<double> ref = oracle::field_component_quadrature(
          mode.theta_k, mode.m_gamma, mode.helicity, lambda, rho, phi);
      const double scale = std::max(std::abs(ref), 1e-6);
      CAPTURE(mode.theta_k, mode.m_gamma, mode.helicity, lambda, rho, phi);
      CHECK(std::abs(f.component(lambda) - ref) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("compact Wigner form equals the explicit trig expansion", "[beam]") {
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> thetas(0.01, 1.4);
  std::uniform_int_distribution<int> mgs(-4, 4);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> rhos(0.0, 4.0);
  std::uniform_real_distribution<double> phis(0.0, 2.0 * pi);

  for (int rep = 0; rep < 50; ++rep) {
    const TwistedMode mode{thetas(rng), mgs(rng), coin(rng) ? 1 : -1, {1, 0}};
    const double rho = rhos(rng), phi = phis(rng);
    const FieldComponents f = field_components(mode, rho, phi);
    const double x = mode.kappa() * rho;
    for (int lambda : {1, 0, -1}) {
      // d^1 written as explicit half-angle trig, phases i^{-lambda} spelled out
      const std::complex<double> iphase =
          lambda == 1 ? std::complex<double>(0, -1)
                      : (lambda == 0 ? std::complex<double>(1, 0) : std::complex<double>(0, 1));
      const std::complex<double> want =
          iphase * oracle::d1(lambda, mode.helicity, mode.theta_k) *
          oracle::bessel_series(mode.m_gamma - lambda, x) *
          std::exp(std::complex<double>(0.0, (mode.m_gamma - lambda) * phi));
      check_close(f.component(lambda), want, 1e-13);
    }
  }
}

TEST_CASE("single-mode field is azimuthally covariant", "[beam][property]") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> phis(0.0, 2.0 * pi);
  const TwistedMode mode{0.3, 2, -1, {1, 0}};
  const double rho = 1.7;
  const FieldComponents base = field_components(mode, rho, 0.0);
  for (int rep = 0; rep < 25; ++rep) {
    const double phi = phis(rng);
    const FieldComponents f = field_components(mode, rho, phi);
    for (int lambda : {1, 0, -1}) {
      const std::complex<double> rotated =
          base.component(lambda) *
          std::exp(std::complex<double>(0.0, (mode.m_gamma - lambda) * phi));
      check_close(f.component(lambda), rotated, 1e-14);
      // component magnitudes are phi-independent
      CHECK_THAT(std::abs(f.component(lambda)), WithinAbs(std::abs(base.component(lambda)), 1e-14));
    }
  }
}

TEST_CASE("superposition field is the weighted sum of mode fields", "[beam]") {
  const TwistedMode m1{0.1, -2, 1, {0.6, 0.2}};
  const TwistedMode m2{0.1, 3, -1, {-0.4, 1.1}};
  const Beam beam({m1, m2});
  const double rho = 0.8, phi = 2.2;
  const FieldComponents f = field_components(beam, rho, phi);
  const FieldComponents f1 = field_components(m1, rho, phi);
  const FieldComponents f2 = field_components(m2, rho, phi);
  for (int lambda : {1, 0, -1})
    check_close(f.component(lambda), f1.component(lambda) + f2.component(lambda), 1e-15);
}

TEST_CASE("photon density matrix is a pure normalized state", "[beam]") {
  const Beam beam({TwistedMode{0.1, -2, 1, {1, 0}}, TwistedMode{0.1, 3, -1, {1, 0}}});
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> rhos(0.05, 3.0);
  std::uniform_real_distribution<double> phis(0.0, 2.0 * pi);
  for (int rep = 0; rep < 30; ++rep) {
    const double rho = rhos(rng), phi = phis(rng);
    const DensityMatrix rho_g = photon_density_matrix(beam, rho, phi);
    REQUIRE(rho_g.ell() == 1);
    CHECK(rho_g.is_hermitian(1e-14));
    CHECK_THAT(rho_g.trace(), WithinAbs(1.0, 1e-12));
    CHECK(rho_g.idempotency_defect() < 1e-12);
    for (int m = -1; m <= 1; ++m) {
      CHECK(rho_g.w(m) >= -1e-15);
      CHECK(rho_g.w(m) <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("photon density matrix limiting cases", "[beam]") {
  // paraxial helicity +1: pure lambda = +1 state
  {
    const Beam beam = Beam::single(1e-6, 1, 1);
    const DensityMatrix rho = photon_density_matrix(beam, 0.44 / beam.kappa(), 0.3);
    CHECK_THAT(rho.w(1), WithinAbs(1.0, 1e-11));
    CHECK(rho.w(0) < 1e-11);
    CHECK(rho.w(-1) < 1e-11);
  }
  // on-axis m_gamma = 0 mode: purely longitudinal photon
  {
    const Beam beam = Beam::single(0.3, 0, -1);
    const DensityMatrix rho = photon_density_matrix(beam, 0.0, 0.0);
    CHECK(rho.w(1) == 0.0);
    CHECK(rho.w(0) == 1.0);
    CHECK(rho.w(-1) == 0.0);
    CHECK(rho(1, 0) == std::complex<double>(0.0, 0.0));
  }
}

TEST_CASE("photon density matrix reports node points with their location", "[beam]") {
  // on-axis node of a high-m_gamma mode
  const Beam vortex = Beam::single(0.1, 2, 1);
  CHECK_THROWS_AS(photon_density_matrix(vortex, 0.0, 0.0), NodePointError);
  try {
    photon_density_matrix(vortex, 0.0, 1.25);
  } catch (const NodePointError& e) {
    CHECK(e.radius() == 0.0);
    CHECK(e.azimuth() == 1.25);
  }
  // destructive superposition: node everywhere
  const Beam dark({TwistedMode{0.1, 1, 1, {1, 0}}, TwistedMode{0.1, 1, 1, {-1, 0}}});
  CHECK_THROWS_AS(photon_density_matrix(dark, 0.7, 0.2), NodePointError);
}

TEST_CASE("parity-weighted beam flips odd-m_gamma weights only", "[beam]") {
  const Beam beam({TwistedMode{0.1, -2, 1, {1, 0}}, TwistedMode{0.1, 3, -1, {2, 0}}});
  const Beam flipped = beam.parity_weighted();
  CHECK(flipped.modes()[0].weight == std::complex<double>(1, 0));
  CHECK(flipped.modes()[1].weight == std::complex<double>(-2, 0));

  // single-mode observables are unchanged (global phase at most)
  const Beam one = Beam::single(0.15, 3, -1);
  const DensityMatrix a = photon_density_matrix(one, 1.1, 0.7);
  const DensityMatrix b = photon_density_matrix(one.parity_weighted(), 1.1, 0.7);
  for (int r = -1; r <= 1; ++r)
    for (int c = -1; c <= 1; ++c) check_close(a(r, c), b(r, c), 1e-15);
}

TEST_CASE("field evaluation rejects negative radius", "[beam]") {
  CHECK_THROWS_AS(field_components(TwistedMode{0.1, 1, 1, {1, 0}}, -0.5, 0.0),
                  std::domain_error);
}
