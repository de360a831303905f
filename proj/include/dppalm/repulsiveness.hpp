#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "dppalm/kernel.hpp"
#include "dppalm/numerics/quadrature.hpp"

namespace dppalm {

inline constexpr double min_anchor_intensity = 1e-12;

inline double require_intensity(const Kernel& k, const Point& u) {
  check_point(k.space(), u);
  const double kuu = k.intensity_at(u);
  if (!(kuu > min_anchor_intensity)) {
    throw validation_error(condition::vanishing_intensity,
                           "K(u,u) = " + std::to_string(kuu) + " is not positive at the anchor");
  }
  return kuu;
}

/// det[K(u_i, u_j)], the n-point joint intensity.
inline double joint_intensity(const Kernel& k, const std::vector<Point>& points) {
  if (points.empty() || points.size() > 12) throw domain_error("joint_intensity takes between 1 and 12 points");
  const auto n = static_cast<Eigen::Index>(points.size());
  CMatrix gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    check_point(k.space(), points[i]);
    for (Eigen::Index j = 0; j < n; ++j) gram(i, j) = k(points[i], points[j]);
  }
  const double det = gram.determinant().real();
  if (det < -1e-10) {
    throw validation_error(condition::positive_definiteness,
                           "Gram determinant " + std::to_string(det) + " is negative");
  }
  return std::max(det, 0.0);
}

// g(u, v) = 1 - |r(u, v)|^2 with the 0/0 = 0 convention.
inline double pair_correlation(const Kernel& k, const Point& u, const Point& v) {
  const double kuu = k.intensity_at(u);
  const double kvv = k.intensity_at(v);
  if (!(kuu > 0.0) || !(kvv > 0.0)) return 0.0;
  return 1.0 - std::norm(k(u, v)) / (kuu * kvv);
}

/// Kernel of the reduced Palm distribution at u:
/// K^u(v, w) = K(v, w) - K(v, u) K(u, w) / K(u, u).
inline Kernel palm_kernel(const Kernel& k, const Point& u) {
  const double kuu = require_intensity(k, u);
  KernelDescriptor desc = k.descriptor();
  desc.family = "palm(" + desc.family + ")";
  desc.symmetry = k.space().kind() == GroundSpace::Kind::finite ? Symmetry::finite : Symmetry::none;
  desc.intensity.reset();
  desc.expected_p.reset();
  return Kernel(
      k.space(),
      [k, u, kuu](const Point& v, const Point& w) { return k(v, w) - k(v, u) * k(u, w) / kuu; },
      std::move(desc));
}

/// Intensity of the displaced point, rho_u(v) = |K(u, v)|^2 / K(u, u).
inline double displacement_intensity(const Kernel& k, const Point& u, const Point& v) {
  const double kuu = require_intensity(k, u);
  check_point(k.space(), v);
  return std::norm(k(u, v)) / kuu;
}

// (rho(v), rho^u(v)); the Palm intensity never exceeds the original.
inline std::pair<double, double> palm_intensity_dominated(const Kernel& k, const Point& u, const Point& v) {
  const double kuu = require_intensity(k, u);
  check_point(k.space(), v);
  const double rho = k.intensity_at(v);
  const double rho_u = rho - std::norm(k(v, u)) / kuu;
  return {rho, rho_u};
}

struct ProfileEntry {
  double coordinate;  // site index, distance, or angle depending on the space
  double f_u;
};

struct RepulsivenessReport {
  Point anchor;
  double p_u = 0.0;
  double norm_sq = 0.0;  // integral of |K(u, .)|^2
  double quadrature_error = 0.0;
  double tail_estimate = 0.0;
  std::vector<ProfileEntry> density_profile;
};

namespace detail {

// Unit vector orthogonal to x (x a unit vector of length >= 2).
inline RVector orthogonal_unit(const RVector& x) {
  Eigen::Index axis = 0;
  x.cwiseAbs().minCoeff(&axis);
  RVector e = RVector::Zero(x.size());
  e(axis) = 1.0;
  e -= e.dot(x) * x;
  return e.normalized();
}

inline Point euclidean_offset(const Point& u, double r) {
  RVector x = u.x();
  x(0) += r;
  return Point::coords(std::move(x));
}

inline Point sphere_rotate(const Point& u, const RVector& e, double theta) {
  return Point::coords(std::cos(theta) * u.x() + std::sin(theta) * e);
}

}  // namespace detail

/// Default truncation radius for a kernel's radial integrals.
inline double default_truncation(const Kernel& k, const QuadratureSpec& spec) {
  if (spec.truncation_radius) return *spec.truncation_radius;
  if (k.descriptor().truncation_radius) return *k.descriptor().truncation_radius;
  return 50.0 * k.descriptor().length_scale;
}

/// p_u, ||K(u, .)||^2 and a sampled profile of f_u = |K(u, .)|^2 / ||K(u, .)||^2.
///
/// Finite spaces use exact sums. Euclidean kernels must declare a
/// stationary modulus; their integral reduces to a radial one along the
/// first axis. Sphere kernels must be isotropic and integrate over the polar
/// angle from u.
inline RepulsivenessReport repulsiveness_p(const Kernel& k, const Point& u, const QuadratureSpec& spec = {},
                                           int profile_points = 21) {
  const double kuu = require_intensity(k, u);
  const GroundSpace& space = k.space();
  RepulsivenessReport rep{u, 0.0, 0.0, 0.0, 0.0, {}};
  std::vector<double> grid;

  std::function<double(double)> modulus_sq;  // |K(u, x(c))|^2 as a function of the profile coordinate

  switch (space.kind()) {
    case GroundSpace::Kind::finite: {
      for (std::size_t v = 1; v <= space.sites(); ++v) {
        const double m = std::norm(k(u, Point::site(v)));
        rep.norm_sq += m;
      }
      for (std::size_t v = 1; v <= space.sites(); ++v) grid.push_back(static_cast<double>(v));
      modulus_sq = [&k, &u](double c) { return std::norm(k(u, Point::site(static_cast<std::size_t>(c)))); };
      break;
    }
    case GroundSpace::Kind::euclidean: {
      if (k.descriptor().symmetry != Symmetry::stationary_modulus) {
        throw domain_error("repulsiveness_p: Euclidean kernels must declare a stationary modulus");
      }
      const int d = space.dimension();
      const double shell = sphere_area(d - 1);
      modulus_sq = [&k, &u](double r) { return std::norm(k(u, detail::euclidean_offset(u, r))); };
      QuadratureSpec radial = spec;
      radial.truncation_radius = default_truncation(k, spec);
      const RadialIntegral ri = integrate_radial(
          [&](double r) { return shell * std::pow(r, d - 1) * modulus_sq(r); }, radial);
      if (ri.diverged) throw numerical_error("repulsiveness_p: |K(u,.)|^2 is not integrable");
      rep.norm_sq = ri.value;
      rep.quadrature_error = ri.error;
      rep.tail_estimate = ri.tail_estimate;
      const double reach = 4.0 * k.descriptor().length_scale;
      for (int i = 0; i < profile_points; ++i) grid.push_back(reach * i / std::max(1, profile_points - 1));
      break;
    }
    case GroundSpace::Kind::sphere: {
      if (k.descriptor().symmetry != Symmetry::sphere_isotropic) {
        throw domain_error("repulsiveness_p: sphere kernels must be isotropic");
      }
      const int d = space.dimension();
      const double shell = sphere_area(d - 1);
      const RVector e = detail::orthogonal_unit(u.x());
      modulus_sq = [&k, &u, e](double theta) { return std::norm(k(u, detail::sphere_rotate(u, e, theta))); };
      const QuadratureResult qr = integrate(
          [&](double theta) { return shell * std::pow(std::sin(theta), d - 1) * modulus_sq(theta); }, 0.0,
          std::numbers::pi, spec);
      rep.norm_sq = qr.value;
      rep.quadrature_error = qr.error;
      for (int i = 0; i < profile_points; ++i) grid.push_back(std::numbers::pi * i / std::max(1, profile_points - 1));
      break;
    }
  }

  rep.p_u = rep.norm_sq / kuu;
  rep.quadrature_error /= kuu;
  rep.tail_estimate /= kuu;
  if (rep.p_u > 1.0 + 1e-6) {
    throw validation_error(condition::spectrum, "p_u = " + std::to_string(rep.p_u) +
                                                    " exceeds 1; the kernel has an eigenvalue above 1");
  }
  for (double c : grid) {
    const double f = rep.norm_sq > 0.0 ? modulus_sq(c) / rep.norm_sq : 0.0;
    rep.density_profile.push_back({c, f});
  }
  return rep;
}

}  // namespace dppalm
