#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "dppalm/analysis/discretize.hpp"
#include "dppalm/analysis/mc_validate.hpp"
#include "dppalm/analysis/moments.hpp"
#include "dppalm/models/euclidean.hpp"
#include "dppalm/models/sphere.hpp"
#include "dppalm/sampling.hpp"
#include "oracles.hpp"

using namespace dppalm;

namespace {

const double pi = std::numbers::pi;
const Point origin = Point::plane({0.0, 0.0});

// Integral of r^k 2 J1(2r)^2 / r over [a, b], with J1 from the C++ standard
// library so that it stays independent of the library's Bessel routine.
double jinc_partial_moment(double k, double a, double b) {
  auto f = [k](double r) {
    const double j = std::cyl_bessel_j(1.0, 2.0 * r);
    return std::pow(r, k) * 2.0 * j * j / r;
  };
  return oracle::integrate(f, oracle::uniform_edges(a, b, static_cast<int>(2.0 * (b - a)) + 1));
}

Kernel diagonal_kernel(double rho) {
  KernelDescriptor desc;
  desc.family = "diagonal";
  return Kernel(
      GroundSpace::euclidean(2),
      [rho](const Point& v, const Point& w) { return v.x() == w.x() ? Complex(rho) : Complex(0.0); }, desc);
}

std::vector<double> default_radii() {
  std::vector<double> r;
  for (int i = 0; i <= 100; ++i) r.push_back(0.05 * i);
  return r;
}

}  // namespace

TEST(JincMomentClosed, Examples) {
  EXPECT_NEAR(jinc_moment_closed(0.0), 1.0, 1e-14);
  EXPECT_NEAR(jinc_moment_closed(-1.0), 16.0 / (3.0 * pi), 1e-13);
  EXPECT_TRUE(std::isinf(jinc_moment_closed(1.0)));
  EXPECT_TRUE(std::isinf(jinc_moment_closed(1.5)));
  EXPECT_THROW(jinc_moment_closed(-2.0), Error);
}

TEST(GinibreMoment, Examples) {
  EXPECT_NEAR(ginibre_moment(0.0, 1.0 / pi), 1.0, 1e-15);
  EXPECT_NEAR(ginibre_moment(2.0, 1.0 / pi), 1.0, 1e-14);
  EXPECT_NEAR(ginibre_moment(1.0, 1.0 / pi), std::sqrt(pi) / 2.0, 1e-14);
  EXPECT_THROW(ginibre_moment(-3.0, 1.0), Error);
  EXPECT_THROW(ginibre_moment(1.0, 0.0), Error);
}

TEST(MomentQuadrature, JincExamples) {
  const Kernel j = jinc_kernel(2);
  EXPECT_NEAR(moment_quadrature(j, origin, 0.0).quadrature, 1.0, 1e-6);
  const MomentResult half = moment_quadrature(j, origin, 0.5);
  EXPECT_NEAR(half.quadrature, jinc_moment_closed(0.5), 1e-3 * jinc_moment_closed(0.5));
}

TEST(MomentQuadrature, GinibreExample) {
  const MomentResult m = moment_quadrature(ginibre_kernel({1.0, 1.0}), origin, 1.0);
  EXPECT_NEAR(m.quadrature, std::sqrt(pi) / 2.0, 1e-6);
  EXPECT_FALSE(m.diverged);
}

TEST(MomentQuadrature, JincMatchesClosedForm) {
  const Kernel j = jinc_kernel(2);
  for (double k : {-1.5, -1.0, -0.5, 0.0, 0.5, 0.9}) {
    const MomentResult m = moment_quadrature(j, origin, k);
    const double closed = jinc_moment_closed(k);
    EXPECT_FALSE(m.diverged) << "k = " << k;
    EXPECT_LE(std::abs(m.quadrature - closed), std::max(1e-3 * closed, m.tail_estimate)) << "k = " << k;
  }
}

TEST(MomentQuadrature, JincDivergesFromOrderOne) {
  const Kernel j = jinc_kernel(2);
  for (double k : {1.0, 1.5}) {
    const MomentResult m = moment_quadrature(j, origin, k);
    EXPECT_TRUE(m.diverged) << "k = " << k;
    EXPECT_TRUE(std::isinf(m.quadrature));
  }
}

TEST(MomentQuadrature, PartialIntegralsAreNotCauchy) {
  // Increments over [R, 2R] settle to a positive constant (k = 1) or grow
  // (k = 1.5); for a convergent order they shrink geometrically.
  for (double k : {1.0, 1.5}) {
    double previous = jinc_partial_moment(k, 50.0, 100.0);
    for (double r = 100.0; r <= 400.0; r *= 2.0) {
      const double inc = jinc_partial_moment(k, r, 2.0 * r);
      EXPECT_GT(inc, 0.9 * previous) << "k = " << k << " R = " << r;
      EXPECT_GT(inc, 0.2);
      previous = inc;
    }
  }
  double previous = jinc_partial_moment(0.5, 50.0, 100.0);
  for (double r = 100.0; r <= 400.0; r *= 2.0) {
    const double inc = jinc_partial_moment(0.5, r, 2.0 * r);
    EXPECT_LT(inc, 0.8 * previous) << "R = " << r;
    previous = inc;
  }
}

TEST(MomentQuadrature, RejectsUnsupportedKernels) {
  EXPECT_THROW(moment_quadrature(jinc_kernel(1), Point::coords({0.0}), 0.0), Error);
  EXPECT_THROW(moment_quadrature(jinc_kernel(2), origin, -2.5), Error);
}

TEST(RadialProfile, GinibreIsRayleigh) {
  const RadialProfile p = radial_profile(ginibre_kernel({1.0, 1.0}), origin, default_radii());
  for (std::size_t i = 0; i < p.radii.size(); ++i) EXPECT_NEAR(p.density[i], oracle::rayleigh(p.radii[i]), 1e-10);
}

TEST(RadialProfile, JincMatchesBesselForm) {
  const RadialProfile p = radial_profile(jinc_kernel(2), origin, default_radii());
  for (std::size_t i = 0; i < p.radii.size(); ++i) EXPECT_NEAR(p.density[i], oracle::jinc_radial(p.radii[i]), 1e-8);
}

TEST(RadialProfile, JincTailIsHeavier) {
  const std::vector<double> radii = default_radii();
  const RadialProfile g = radial_profile(ginibre_kernel({1.0, 1.0}), origin, radii);
  const RadialProfile j = radial_profile(jinc_kernel(2), origin, radii);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] >= 4.0) {
      EXPECT_GT(j.density[i], g.density[i]) << "r = " << radii[i];
    }
  }
  EXPECT_LE(g.grid_mass(), 1.0 + 1e-3);
  EXPECT_LE(j.grid_mass(), 1.0 + 1e-3);
}

TEST(RadialProfile, RejectsDecreasingRadii) {
  EXPECT_THROW(radial_profile(jinc_kernel(2), origin, {1.0, 0.5}), Error);
}

TEST(GridDiscretize, ConstantDiagonalKernel) {
  const double rho = 2.0;
  const Discretization d = grid_discretize(diagonal_kernel(rho), Window::box({{0.0, 1.0}, {0.0, 1.0}}), 4);
  ASSERT_EQ(d.dpp.n(), 16u);
  const CMatrix expected = CMatrix::Identity(16, 16) * (rho / 16.0);
  EXPECT_LE(oracle::max_abs(d.dpp.matrix() - expected), 1e-15);
  EXPECT_NEAR(d.expected_count, rho, 1e-14);
  EXPECT_TRUE(d.clamped.empty());
}

TEST(GridDiscretize, FiniteKernelPassesThrough) {
  CMatrix k(2, 2);
  k << 0.5, 0.2, 0.2, 0.4;
  const Discretization d = grid_discretize(matrix_kernel(k), Window{}, 1);
  EXPECT_LE(oracle::max_abs(d.dpp.matrix() - k), 1e-15);
}

TEST(GridDiscretize, GinibreMeanCount) {
  const Discretization d = grid_discretize(ginibre_kernel({1.0, 1.0}), Window::box({{-3.0, 3.0}, {-3.0, 3.0}}), 24);
  EXPECT_NEAR(d.expected_count, 36.0 / pi, 1e-9);
  Rng rng(17);
  const int draws = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double c = static_cast<double>(sample_spectral(d.dpp, rng).size());
    sum += c;
    sum_sq += c * c;
  }
  const double mean = sum / draws;
  const double sigma = std::sqrt((sum_sq / draws - mean * mean) / draws);
  EXPECT_LE(std::abs(mean - 36.0 / pi), 3.0 * sigma);
}

TEST(GridDiscretize, ThinningMatchesRescaledKernel) {
  // Thinning standard Ginibre by alpha*beta and dilating by sqrt(beta) gives
  // Ginibre(alpha, beta); compare point counts on matching windows.
  const double alpha = 0.5, beta = 1.5;
  const Discretization base = grid_discretize(ginibre_kernel({1.0, 1.0}), Window::box({{-3.0, 3.0}, {-3.0, 3.0}}), 20);
  const double s = 3.0 * std::sqrt(beta);
  const Discretization target = grid_discretize(ginibre_kernel({alpha, beta}), Window::box({{-s, s}, {-s, s}}), 20);
  EXPECT_NEAR(target.expected_count, alpha * beta * base.expected_count, 1e-9);
  EXPECT_NEAR(target.expected_count / (4.0 * s * s), alpha / pi, 1e-9);

  Rng rng(23);
  const int draws = 5000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    double kept = 0.0;
    for (std::size_t n = sample_spectral(base.dpp, rng).size(); n > 0; --n) kept += rng.uniform() < alpha * beta;
    sum += kept;
    sum_sq += kept * kept;
  }
  const double mean = sum / draws;
  const double sigma = std::sqrt((sum_sq / draws - mean * mean) / draws);
  EXPECT_LE(std::abs(mean / (4.0 * s * s) - alpha / pi), 3.0 * sigma / (4.0 * s * s));
}

TEST(GridDiscretize, CoarseJincGrid) {
  // Near-projection kernels leak spectrum above 1 on coarse cells.
  const Kernel j = jinc_kernel(2);
  try {
    grid_discretize(j, Window::box({{-2.0, 2.0}, {-2.0, 2.0}}), 2);
    ADD_FAILURE() << "expected a spectrum error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
    EXPECT_NE(std::string(e.what()).find("spectrum"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("resolution"), std::string::npos);
  }
  const Discretization mild = grid_discretize(j, Window::box({{-2.43, 2.43}, {-2.43, 2.43}}), 3);
  ASSERT_FALSE(mild.clamped.empty());
  for (double x : mild.clamped) EXPECT_GT(x, 1.0);
  EXPECT_LE(mild.dpp.eig().eigenvalues(0), 1.0 + 1e-12);
}

TEST(GridDiscretize, SizeGuard) {
  try {
    grid_discretize(ginibre_kernel({1.0, 1.0}), Window::box({{-3.0, 3.0}, {-3.0, 3.0}}), 65);
    ADD_FAILURE() << "expected a size guard";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::size_guard);
  }
}

TEST(GridDiscretize, RejectsBadWindows) {
  EXPECT_THROW(grid_discretize(ginibre_kernel({1.0, 1.0}), Window::box({{-1.0, 1.0}}), 4), Error);
  EXPECT_THROW(grid_discretize(ginibre_kernel({1.0, 1.0}), Window::box({{1.0, -1.0}, {0.0, 1.0}}), 4), Error);
  EXPECT_THROW(grid_discretize(ginibre_kernel({1.0, 1.0}), Window::box({{-1.0, 1.0}, {-1.0, 1.0}}), 0), Error);
}

TEST(GridDiscretize, SphereCells) {
  const SphereModel s2 = sphere_model(2, 0.1, {0.5, 0.3, 0.2});
  const Discretization d2 = grid_discretize(sphere_series_kernel(s2), Window::full_sphere(), 8);
  EXPECT_EQ(d2.dpp.n(), 128u);
  double area = 0.0;
  for (double m : d2.cell_measure) area += m;
  EXPECT_NEAR(area, 4.0 * pi, 1e-12);
  EXPECT_NEAR(d2.expected_count, 0.1 * 4.0 * pi, 1e-10);
  for (const Point& c : d2.centers) EXPECT_NEAR(c.x().norm(), 1.0, 1e-14);

  const SphereModel s1 = sphere_model(1, 0.1, {0.5, 0.3, 0.2});
  const Discretization d1 = grid_discretize(sphere_series_kernel(s1), Window::full_sphere(), 40);
  EXPECT_EQ(d1.dpp.n(), 40u);
  EXPECT_NEAR(d1.expected_count, 0.1 * 2.0 * pi, 1e-10);
}

TEST(ChiSquare, PerfectFitAndMismatch) {
  const std::vector<double> probs{0.25, 0.25, 0.5};
  const ChiSquareResult exact = chi_square_test({250.0, 250.0, 500.0}, probs);
  EXPECT_NEAR(exact.statistic, 0.0, 1e-12);
  EXPECT_EQ(exact.dof, 2);
  EXPECT_NEAR(exact.p_value, 1.0, 1e-12);
  const ChiSquareResult off = chi_square_test({400.0, 100.0, 500.0}, probs);
  EXPECT_NEAR(off.statistic, 180.0, 1e-9);
  EXPECT_LT(off.p_value, 1e-30);
}

TEST(ChiSquare, MergesSparseBins) {
  const ChiSquareResult r = chi_square_test({95.0, 3.0, 2.0}, {0.95, 0.03, 0.02});
  EXPECT_EQ(r.bins, 1);
  EXPECT_EQ(r.dof, 0);
}

TEST(McValidateCoupling, DiagonalKernel) {
  CMatrix k = CMatrix::Zero(3, 3);
  k(0, 0) = 0.3;
  k(1, 1) = 0.7;
  k(2, 2) = 0.5;
  const McCouplingReport r = mc_validate_coupling(matrix_kernel(k), Point::site(2), Window{}, 1, 100000, 5);
  EXPECT_NEAR(r.max_flow, 1.0, 1e-8);
  EXPECT_NEAR(r.p_exact, 0.7, 1e-12);
  EXPECT_TRUE(r.p_within_3sigma);
  // Zero off-diagonal: the displaced point is the anchor or nothing.
  EXPECT_EQ(r.displaced_counts[0], 0.0);
  EXPECT_EQ(r.displaced_counts[2], 0.0);
  EXPECT_GT(r.displaced_counts[1], 0.0);
  EXPECT_EQ(r.xi_outside_difference, 0u);
}

TEST(McValidateCoupling, GinibreSmallWindow) {
  const McCouplingReport r =
      mc_validate_coupling(ginibre_kernel({1.0, 1.0}), origin, Window::box({{-1.0, 1.0}, {-1.0, 1.0}}), 3, 100000, 3);
  EXPECT_EQ(r.anchor_site, 5u);  // center cell of the 3 x 3 grid
  EXPECT_NEAR(r.max_flow, 1.0, 1e-8);
  EXPECT_TRUE(r.p_within_3sigma);
  EXPECT_TRUE(r.chi_square_pass) << "p-value " << r.chi_square.p_value;
  EXPECT_EQ(r.xi_outside_difference, 0u);
  double mass = 0.0;
  for (double f : r.density_exact) mass += f;
  EXPECT_NEAR(mass, 1.0, 1e-9);
}

TEST(McValidateCoupling, SizeGuard) {
  try {
    mc_validate_coupling(ginibre_kernel({1.0, 1.0}), origin, Window::box({{-1.0, 1.0}, {-1.0, 1.0}}), 4, 10, 1);
    ADD_FAILURE() << "expected a size guard";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::size_guard);
  }
}
