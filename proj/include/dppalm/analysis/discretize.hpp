#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dppalm/finite_dpp.hpp"
#include "dppalm/kernel.hpp"

namespace dppalm {

// Region to discretize: an axis-aligned box in R^d, or the whole sphere.
struct Window {
  std::vector<std::pair<double, double>> bounds;  // one (lo, hi) per axis; empty for the sphere

  static Window box(std::vector<std::pair<double, double>> b) { return Window{std::move(b)}; }
  static Window full_sphere() { return Window{}; }
  double volume() const {
    double v = 1.0;
    for (const auto& [lo, hi] : bounds) v *= hi - lo;
    return v;
  }
};

struct Discretization {
  FiniteDpp dpp;
  std::vector<Point> centers;
  std::vector<double> cell_measure;
  std::vector<double> clamped;  // eigenvalues that fell outside [0, 1] before clamping
  double expected_count = 0.0;  // trace, estimates the integral of K(u,u) over the window

  // Index (1-based) of the cell whose center is nearest to p.
  std::size_t nearest_site(const Point& p) const {
    if (p.is_site()) return p.index();
    std::size_t best = 1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centers.size(); ++i) {
      const double d = (centers[i].x() - p.x()).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = i + 1;
      }
    }
    return best;
  }
};

inline constexpr std::size_t max_grid_sites = 4096;
inline constexpr double discretization_spectrum_slack = 1e-3;

namespace detail {

inline void box_cells(const Window& w, int resolution, std::vector<Point>& centers, std::vector<double>& measure) {
  const std::size_t d = w.bounds.size();
  std::vector<double> step(d);
  double cell = 1.0;
  for (std::size_t a = 0; a < d; ++a) {
    const auto [lo, hi] = w.bounds[a];
    if (!(hi > lo)) throw domain_error("grid_discretize: window bounds must be increasing");
    step[a] = (hi - lo) / resolution;
    cell *= step[a];
  }
  std::size_t total = 1;
  for (std::size_t a = 0; a < d; ++a) total *= static_cast<std::size_t>(resolution);
  for (std::size_t idx = 0; idx < total; ++idx) {
    RVector x(static_cast<Eigen::Index>(d));
    std::size_t rest = idx;
    for (std::size_t a = 0; a < d; ++a) {
      const std::size_t i = rest % static_cast<std::size_t>(resolution);
      rest /= static_cast<std::size_t>(resolution);
      x(static_cast<Eigen::Index>(a)) = w.bounds[a].first + (i + 0.5) * step[a];
    }
    centers.push_back(Point::coords(std::move(x)));
    measure.push_back(cell);
  }
}

// Equal-area cells: on S^2 equal steps in z times equal steps in longitude
// (Archimedes), on S^1 equal arcs.
inline void sphere_cells(int d, int resolution, std::vector<Point>& centers, std::vector<double>& measure) {
  const double two_pi = 2.0 * std::numbers::pi;
  if (d == 1) {
    for (int i = 0; i < resolution; ++i) {
      const double phi = two_pi * (i + 0.5) / resolution;
      centers.push_back(Point::coords({std::cos(phi), std::sin(phi)}));
      measure.push_back(two_pi / resolution);
    }
    return;
  }
  if (d != 2) throw domain_error("grid_discretize: sphere grids exist for d = 1, 2 only");
  const int bands = resolution;
  const int sectors = 2 * resolution;
  const double area = 4.0 * std::numbers::pi / (bands * sectors);
  for (int b = 0; b < bands; ++b) {
    const double z = -1.0 + 2.0 * (b + 0.5) / bands;
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int k = 0; k < sectors; ++k) {
      const double phi = two_pi * (k + 0.5) / sectors;
      RVector x(3);
      x << s * std::cos(phi), s * std::sin(phi), z;
      centers.push_back(Point::coords(x.normalized()));
      measure.push_back(area);
    }
  }
}

}  // namespace detail

/// Midpoint discretization: K_grid(i, j) = K(c_i, c_j) sqrt(m_i m_j) on the
/// cell centers c_i with cell measures m_i. Finite kernels pass through
/// unchanged.
///
/// Eigenvalues up to 1e-3 outside [0, 1] are clamped and listed in
/// `clamped`; larger excursions mean the cells are too coarse for the
/// kernel and raise a spectrum error.
inline Discretization grid_discretize(const Kernel& k, const Window& window, int resolution) {
  std::vector<Point> centers;
  std::vector<double> measure;
  switch (k.space().kind()) {
    case GroundSpace::Kind::finite:
      for (std::size_t v = 1; v <= k.space().sites(); ++v) {
        centers.push_back(Point::site(v));
        measure.push_back(1.0);
      }
      break;
    case GroundSpace::Kind::euclidean:
      if (resolution < 1) throw domain_error("grid_discretize: resolution must be positive");
      if (window.bounds.size() != static_cast<std::size_t>(k.space().dimension())) {
        throw domain_error("grid_discretize: window dimension does not match the kernel");
      }
      if (std::pow(static_cast<double>(resolution), k.space().dimension()) > static_cast<double>(max_grid_sites)) {
        throw size_guard_error("grid_discretize: more than " + std::to_string(max_grid_sites) + " cells");
      }
      detail::box_cells(window, resolution, centers, measure);
      break;
    case GroundSpace::Kind::sphere:
      if (resolution < 1) throw domain_error("grid_discretize: resolution must be positive");
      if (2.0 * resolution * resolution > static_cast<double>(max_grid_sites)) {
        throw size_guard_error("grid_discretize: more than " + std::to_string(max_grid_sites) + " cells");
      }
      detail::sphere_cells(k.space().dimension(), resolution, centers, measure);
      break;
  }

  const auto n = static_cast<Eigen::Index>(centers.size());
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const Complex v = k(centers[i], centers[j]) * std::sqrt(measure[i] * measure[j]);
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
    m(i, i) = m(i, i).real();
  }

  const HermitianEig eig = hermitian_eig(m);
  std::vector<double> clamped;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double lambda = eig.eigenvalues(i);
    if (lambda < -1e-12 || lambda > 1.0 + 1e-12) clamped.push_back(lambda);
    if (lambda > 1.0 + discretization_spectrum_slack || lambda < -discretization_spectrum_slack) {
      throw validation_error(condition::spectrum,
                             "discretized kernel has eigenvalue " + std::to_string(lambda) +
                                 " outside [0, 1]; the cells are too coarse for this kernel, raise the resolution "
                                 "to shrink them");
    }
  }
  const bool rebuild = std::any_of(clamped.begin(), clamped.end(), [](double x) { return x < -1e-6 || x > 1.0 + 1e-6; });
  if (rebuild) m = hermitian_function(eig, [](double x) { return std::clamp(x, 0.0, 1.0); });
  FiniteDpp dpp = validate(m);
  const double trace = dpp.matrix().trace().real();
  return Discretization{std::move(dpp), std::move(centers), std::move(measure), std::move(clamped), trace};
}

}  // namespace dppalm
