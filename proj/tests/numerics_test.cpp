#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dppalm/numerics/linalg.hpp"
#include "dppalm/numerics/quadrature.hpp"
#include "dppalm/numerics/special.hpp"
#include "oracles.hpp"

using namespace dppalm;

TEST(Gamma, KnownValues) {
  EXPECT_DOUBLE_EQ(gamma_fn(1.0), 1.0);
  EXPECT_NEAR(gamma_fn(0.5), std::sqrt(std::numbers::pi), 1e-15);
  EXPECT_NEAR(gamma_fn(5.0), 24.0, 1e-12);
}

TEST(Gamma, RejectsPoles) {
  EXPECT_THROW(gamma_fn(0.0), Error);
  EXPECT_THROW(gamma_fn(-2.0), Error);
  EXPECT_NO_THROW(gamma_fn(-0.5));
}

TEST(Gamma, RecurrenceHolds) {
  for (double x = 0.1; x <= 20.0; x += 0.0737) {
    EXPECT_NEAR(gamma_fn(x + 1.0) / (x * gamma_fn(x)), 1.0, 1e-12) << "x = " << x;
  }
}

TEST(BesselJ1, KnownValues) {
  EXPECT_EQ(bessel_j1(0.0), 0.0);
  EXPECT_NEAR(bessel_j1(1.0), 0.4400505857449335, 1e-13);
  EXPECT_NEAR(bessel_j1(3.8317059702075123), 0.0, 1e-13);
}

TEST(BesselJ1, FirstZeroBracketedBySeries) {
  // Sign change of the series oracle around the documented zero.
  EXPECT_GT(oracle::j1_series(3.8317059702L - 1e-7L), 0.0L);
  EXPECT_LT(oracle::j1_series(3.8317059702L + 1e-7L), 0.0L);
}

TEST(BesselJ1, MatchesSeriesAndBound) {
  for (double x = -10.0; x <= 10.0; x += 0.01) {
    const double j = bessel_j1(x);
    EXPECT_NEAR(j, static_cast<double>(oracle::j1_series(x)), 1e-12) << "x = " << x;
    EXPECT_LE(std::abs(j), 1.0 / std::sqrt(2.0));
  }
  for (double x = 10.0; x <= 1000.0; x += 0.37) EXPECT_LE(std::abs(bessel_j1(x)), 1.0 / std::sqrt(2.0));
}

TEST(SphereArea, LowDimensions) {
  EXPECT_NEAR(sphere_area(1), 2.0 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(sphere_area(2), 4.0 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(sphere_area(3), 2.0 * std::numbers::pi * std::numbers::pi, 1e-13);
}

TEST(Gegenbauer, KnownValues) {
  EXPECT_EQ(gegenbauer(0, 0.7, 0.2), 1.0);
  EXPECT_NEAR(gegenbauer(1, 0.5, 0.3), 0.3, 1e-15);
  EXPECT_NEAR(gegenbauer(2, 0.5, 0.5), -0.125, 1e-15);
}

TEST(Gegenbauer, LegendreClosedForms) {
  for (int ell = 0; ell <= 3; ++ell) {
    for (double t = -1.0; t <= 1.0; t += 0.01) {
      EXPECT_NEAR(gegenbauer(ell, 0.5, t), oracle::legendre(ell, t), 1e-12);
      EXPECT_NEAR(gegenbauer_ratio(ell, 0.5, t), oracle::legendre(ell, t), 1e-12);
    }
  }
}

TEST(Gegenbauer, ChebyshevLimit) {
  for (int ell = 0; ell <= 12; ++ell) {
    for (double t = -1.0; t <= 1.0; t += 0.05) {
      EXPECT_NEAR(gegenbauer_ratio(ell, 0.0, t), std::cos(ell * std::acos(t)), 1e-12);
    }
  }
}

TEST(Gegenbauer, RatioIsOneAtOne) {
  for (double lambda : {0.0, 0.5, 1.0, 2.5}) {
    for (double r : gegenbauer_ratios(40, lambda, 1.0)) EXPECT_NEAR(r, 1.0, 1e-12);
  }
}

TEST(HermitianEig, SmallExamples) {
  const HermitianEig id = hermitian_eig(CMatrix::Identity(2, 2));
  EXPECT_NEAR(id.eigenvalues(0), 1.0, 1e-15);
  EXPECT_NEAR(id.eigenvalues(1), 1.0, 1e-15);
  CMatrix half(2, 2);
  half << 0.5, 0.5, 0.5, 0.5;
  const HermitianEig e = hermitian_eig(half);
  EXPECT_NEAR(e.eigenvalues(0), 1.0, 1e-15);
  EXPECT_NEAR(e.eigenvalues(1), 0.0, 1e-15);
}

TEST(HermitianEig, RejectsNonHermitian) {
  CMatrix m(2, 2);
  m << 1.0, 2.0, 0.0, 1.0;
  EXPECT_THROW(hermitian_eig(m), Error);
}

TEST(HermitianEig, RandomReconstruction) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 15;
    const CMatrix k = oracle::random_hermitian(n, rng);
    const HermitianEig e = hermitian_eig(k);
    const double scale = 1.0 + oracle::max_abs(k);
    EXPECT_LE(oracle::max_abs(k - e.reconstruct()), 1e-9 * scale);
    EXPECT_LE(oracle::max_abs(e.eigenvectors.adjoint() * e.eigenvectors - CMatrix::Identity(n, n)), 1e-9);
    for (int i = 1; i < n; ++i) EXPECT_GE(e.eigenvalues(i - 1), e.eigenvalues(i));
  }
}

TEST(PsdSqrt, Examples) {
  EXPECT_LE(oracle::max_abs(psd_sqrt(CMatrix::Identity(3, 3)) - CMatrix::Identity(3, 3)), 1e-15);
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const CMatrix s = psd_sqrt(d);
  EXPECT_NEAR(s(0, 0).real(), 2.0, 1e-14);
  EXPECT_NEAR(s(1, 1).real(), 3.0, 1e-14);
  EXPECT_NEAR(std::abs(s(0, 1)), 0.0, 1e-14);
}

TEST(PsdSqrt, RandomSquares) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 6;
    const CMatrix a = oracle::random_hermitian(n, rng);
    const CMatrix k = a * a;
    const CMatrix s = psd_sqrt(k);
    EXPECT_LE(oracle::max_abs(s - s.adjoint()), 1e-12);
    EXPECT_LE(oracle::max_abs(s * s - k), 1e-8 * (1.0 + oracle::max_abs(k)));
  }
}

TEST(PsdSqrt, RejectsNegative) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(1, 1) = -0.5;
  EXPECT_THROW(psd_sqrt(m), Error);
}

TEST(QuadratureSpec, Validation) {
  QuadratureSpec s;
  EXPECT_NO_THROW(s.validate());
  s.relative_tolerance = 0.0;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.max_subdivisions = 0;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.truncation_radius = -1.0;
  EXPECT_THROW(s.validate(), Error);
}

TEST(Integrate, PolynomialAndOscillatory) {
  QuadratureSpec s;
  EXPECT_NEAR(integrate([](double x) { return x * x; }, 0.0, 3.0, s).value, 9.0, 1e-12);
  EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, 100.0, s).value, 1.0 - std::cos(100.0), 1e-10);
}

TEST(Integrate, GaussLegendreScheme) {
  QuadratureSpec s;
  s.scheme = QuadratureScheme::gauss_legendre;
  s.max_subdivisions = 64;
  const QuadratureResult r = integrate([](double x) { return std::exp(x); }, 0.0, 2.0, s);
  EXPECT_NEAR(r.value, std::exp(2.0) - 1.0, 1e-12);
  EXPECT_LE(r.error, 1e-10);
}

TEST(Integrate, ReportsNonConvergence) {
  QuadratureSpec s;
  s.max_subdivisions = 3;
  s.relative_tolerance = 1e-14;
  EXPECT_THROW(integrate([](double x) { return std::sin(1.0 / (x + 1e-4)); }, 0.0, 1.0, s), Error);
}

TEST(IntegrateRadial, ExponentialAndRayleigh) {
  QuadratureSpec s;
  s.truncation_radius = 20.0;
  const RadialIntegral e = integrate_radial([](double r) { return std::exp(-r); }, s);
  EXPECT_NEAR(e.value, 1.0, 1e-10);
  EXPECT_FALSE(e.diverged);
  const RadialIntegral g = integrate_radial(oracle::rayleigh, s);
  EXPECT_NEAR(g.value, 1.0, 1e-10);
  EXPECT_EQ(g.tail_estimate, 0.0);
}

TEST(IntegrateRadial, JincRadialMass) {
  QuadratureSpec s;
  s.truncation_radius = 1000.0;
  const RadialIntegral r = integrate_radial([](double x) { return 2.0 * std::pow(bessel_j1(2.0 * x), 2) / x; }, s);
  EXPECT_NEAR(r.value, 1.0, 1e-6);
  EXPECT_GT(r.tail_estimate, 0.0);
  // Radial mass ~ 1/(pi r^2): fitted exponent near 2.
  EXPECT_NEAR(r.tail_exponent, 2.0, 0.01);
}

TEST(IntegrateRadial, PowerLawTail) {
  QuadratureSpec s;
  s.truncation_radius = 10.0;
  // Integral of 1/(1+r)^3 over (0, inf) is 1/2.
  const RadialIntegral r = integrate_radial([](double x) { return std::pow(1.0 + x, -3.0); }, s);
  EXPECT_NEAR(r.value, 0.5, 1e-4);
  EXPECT_LE(std::abs(r.value - 0.5), r.error + 1e-12);
}

TEST(IntegrateRadial, FlagsDivergence) {
  QuadratureSpec s;
  s.truncation_radius = 50.0;
  EXPECT_TRUE(integrate_radial([](double x) { return 1.0 / (1.0 + x); }, s).diverged);
  EXPECT_TRUE(integrate_radial([](double x) { return 1.0 / std::sqrt(1.0 + x); }, s).diverged);
}

TEST(IntegrateRadial, RequiresTruncationRadius) {
  EXPECT_THROW(integrate_radial([](double x) { return std::exp(-x); }, QuadratureSpec{}), Error);
}
