#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "dppalm/kernel.hpp"
#include "dppalm/numerics/quadrature.hpp"
#include "dppalm/numerics/special.hpp"
#include "dppalm/repulsiveness.hpp"

namespace dppalm {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// E|Z_u - u|^k for the displaced point of the planar jinc DPP:
/// Gamma(1+k/2) Gamma(1-k) / (Gamma(2-k/2) Gamma(1-k/2)^2) on (-2, 1),
/// infinite from k = 1 on.
inline double jinc_moment_closed(double k) {
  if (!(k > -2.0)) throw domain_error("jinc_moment_closed: order must exceed -2");
  if (k >= 1.0) return infinity;
  const double g = gamma_fn(1.0 - 0.5 * k);
  return gamma_fn(1.0 + 0.5 * k) * gamma_fn(1.0 - k) / (gamma_fn(2.0 - 0.5 * k) * g * g);
}

// E|Z_u - u|^k for the Ginibre displaced point, whose squared distance is
// exponential: Gamma(1 + k/2) / (pi rho)^{k/2}.
inline double ginibre_moment(double k, double rho) {
  if (!(k > -2.0)) throw domain_error("ginibre_moment: order must exceed -2");
  if (!(rho > 0.0)) throw domain_error("ginibre_moment: rho must be positive");
  return gamma_fn(1.0 + 0.5 * k) / std::pow(std::numbers::pi * rho, 0.5 * k);
}

struct MomentResult {
  double k = 0.0;
  double closed_form = std::numeric_limits<double>::quiet_NaN();  // +inf when the moment is infinite
  double quadrature = 0.0;                                       // +inf when the integral diverged
  double abs_error = 0.0;      // quadrature plus extrapolation error budget
  double tail_estimate = 0.0;  // extrapolated contribution beyond the explicit range
  bool diverged = false;
};

/// E|Z_u - u|^order by quadrature of the radial mass of f_u on R^2,
/// normalized by ||K(u, .)||^2 computed the same way.
inline MomentResult moment_quadrature(const Kernel& k, const Point& u, double order, const QuadratureSpec& spec = {}) {
  if (k.space().kind() != GroundSpace::Kind::euclidean || k.space().dimension() != 2 ||
      k.descriptor().symmetry != Symmetry::stationary_modulus) {
    throw domain_error("moment_quadrature: needs an isotropic kernel on R^2");
  }
  if (!(order > -2.0)) throw domain_error("moment_quadrature: order must exceed -2");
  require_intensity(k, u);
  QuadratureSpec radial = spec;
  radial.truncation_radius = default_truncation(k, spec);
  auto mass = [&](double r) { return 2.0 * std::numbers::pi * r * std::norm(k(u, detail::euclidean_offset(u, r))); };

  const RadialIntegral norm = integrate_radial(mass, radial);
  if (norm.diverged || !(norm.value > 0.0)) throw numerical_error("moment_quadrature: f_u is not normalizable");
  const RadialIntegral num = integrate_radial(
      [&](double r) { return r > 0.0 ? std::pow(r, order) * mass(r) : 0.0; }, radial);

  MomentResult out;
  out.k = order;
  if (num.diverged) {
    out.diverged = true;
    out.quadrature = infinity;
    out.tail_estimate = infinity;
    out.abs_error = infinity;
    return out;
  }
  out.quadrature = num.value / norm.value;
  out.tail_estimate = num.tail_estimate / norm.value;
  out.abs_error = std::abs(out.quadrature) * (num.error / std::abs(num.value) + norm.error / norm.value);
  return out;
}

// Radial density of |Z_u - u| sampled on a grid.
struct RadialProfile {
  std::string model;
  std::vector<double> radii;
  std::vector<double> density;

  // Trapezoid rule over the grid.
  double grid_mass() const {
    double s = 0.0;
    for (std::size_t i = 1; i < radii.size(); ++i) s += 0.5 * (density[i] + density[i - 1]) * (radii[i] - radii[i - 1]);
    return s;
  }
};

/// Density of |Z_u - u|: the shell area S_{d-1} r^{d-1} times f_u at
/// distance r (2 pi r f_u(r) in the plane).
inline RadialProfile radial_profile(const Kernel& k, const Point& u, const std::vector<double>& radii,
                                    const QuadratureSpec& spec = {}) {
  if (k.space().kind() != GroundSpace::Kind::euclidean) throw domain_error("radial_profile: Euclidean kernels only");
  const RepulsivenessReport rep = repulsiveness_p(k, u, spec, 0);
  if (!(rep.p_u > 0.0)) throw domain_error("radial_profile: p_u vanishes");
  const int d = k.space().dimension();
  const double shell = sphere_area(d - 1);
  RadialProfile out{k.descriptor().family, radii, {}};
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (i > 0 && !(radii[i] > radii[i - 1])) throw domain_error("radial_profile: radii must increase");
    const double r = radii[i];
    const double f = std::norm(k(u, detail::euclidean_offset(u, r))) / rep.norm_sq;
    out.density.push_back(shell * std::pow(r, d - 1) * f);
  }
  return out;
}

}  // namespace dppalm
