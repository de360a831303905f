#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "dppalm/kernel.hpp"
#include "dppalm/numerics/quadrature.hpp"
#include "dppalm/numerics/special.hpp"

namespace dppalm {

// Scaled beta-Ginibre parameters: intensity alpha/pi, spatial scale beta.
struct GinibreParams {
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw validation_error(condition::param_bound, "alpha must be positive");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw validation_error(condition::param_bound, "beta must be positive");
    if (alpha * beta > 1.0 + 1e-12) {
      throw validation_error(condition::param_bound,
                             "alpha*beta exceeds 1 (alpha*beta = " + std::to_string(alpha * beta) + ")");
    }
  }
};

/// K(v,w) = (alpha/pi) exp(v conj(w)/beta - (|v|^2 + |w|^2)/(2 beta)) on the
/// complex plane, identified with R^2.
inline Kernel ginibre_kernel(const GinibreParams& p) {
  p.validate();
  const double alpha = p.alpha, beta = p.beta;
  KernelDescriptor desc;
  desc.family = "ginibre";
  desc.params = {{"alpha", alpha}, {"beta", beta}};
  desc.symmetry = Symmetry::stationary_modulus;
  desc.intensity = alpha / std::numbers::pi;
  desc.length_scale = std::sqrt(beta);
  desc.truncation_radius = 8.0 * std::sqrt(beta);
  desc.expected_p = alpha * beta;
  return Kernel(
      GroundSpace::euclidean(2),
      [alpha, beta](const Point& v, const Point& w) {
        const Complex zv = v.as_complex(), zw = w.as_complex();
        const Complex exponent = zv * std::conj(zw) / beta - (std::norm(zv) + std::norm(zw)) / (2.0 * beta);
        return alpha / std::numbers::pi * std::exp(exponent);
      },
      std::move(desc));
}

namespace detail {

// sin(x)/(pi x), the stationary profile of the most repulsive kernel on R.
inline double sinc_profile(double r) {
  if (r < 1e-4) return (1.0 - r * r / 6.0) / std::numbers::pi;
  return std::sin(r) / (std::numbers::pi * r);
}

// J1(2r)/(pi r) on R^2.
inline double jinc_profile(double r) {
  if (r < 1e-5) return (1.0 - r * r / 2.0) / std::numbers::pi;
  return bessel_j1(2.0 * r) / (std::numbers::pi * r);
}

inline double euclidean_distance(const Point& v, const Point& w) { return (v.x() - w.x()).norm(); }

}  // namespace detail

/// Globally most repulsive stationary kernel on R^d at intensity 1/pi:
/// the Fourier transform of the indicator of a centred ball of volume 1/pi.
/// Closed forms exist for d = 1 (sinc) and d = 2 (jinc).
inline Kernel jinc_kernel(int d) {
  if (d != 1 && d != 2) {
    throw domain_error("jinc_kernel: closed form only for d = 1, 2; use jinc_kernel_quadrature");
  }
  KernelDescriptor desc;
  desc.family = d == 1 ? "sinc" : "jinc";
  desc.params = {{"d", static_cast<double>(d)}};
  desc.symmetry = Symmetry::stationary_modulus;
  desc.intensity = 1.0 / std::numbers::pi;
  desc.length_scale = 1.0;
  desc.truncation_radius = 4000.0;
  desc.expected_p = 1.0;
  auto profile = d == 1 ? &detail::sinc_profile : &detail::jinc_profile;
  return Kernel(
      GroundSpace::euclidean(d),
      [profile](const Point& v, const Point& w) { return Complex(profile(detail::euclidean_distance(v, w)), 0.0); },
      std::move(desc));
}

// Radius of the ball in frequency space whose volume is 1/pi.
inline double jinc_ball_radius(int d) {
  return std::pow(d * gamma_fn(0.5 * d) / (2.0 * std::pow(std::numbers::pi, 1.0 + 0.5 * d)), 1.0 / d);
}

/// Same kernel for any d >= 1, evaluated by direct quadrature of the
/// Fourier-ball integral. Slow: each evaluation is a nested 1-D integral.
inline Kernel jinc_kernel_quadrature(int d) {
  if (d < 1) throw domain_error("jinc_kernel_quadrature: d must be positive");
  const double a = jinc_ball_radius(d);
  auto value = [d, a](double r) {
    QuadratureSpec spec;
    spec.relative_tolerance = 1e-12;
    spec.absolute_tolerance = 1e-14;
    if (d == 1) {
      return integrate([r](double s) { return 2.0 * std::cos(2.0 * std::numbers::pi * s * r); }, 0.0, a, spec).value;
    }
    const double shell = sphere_area(d - 2);
    auto angular = [d, r, spec](double s) {
      return integrate(
                 [d, r, s](double phi) {
                   return std::pow(std::sin(phi), d - 2) * std::cos(2.0 * std::numbers::pi * s * r * std::cos(phi));
                 },
                 0.0, std::numbers::pi, spec)
          .value;
    };
    return integrate([&](double s) { return shell * std::pow(s, d - 1) * angular(s); }, 0.0, a, spec).value;
  };
  KernelDescriptor desc;
  desc.family = "jinc-quadrature";
  desc.params = {{"d", static_cast<double>(d)}};
  desc.symmetry = Symmetry::stationary_modulus;
  desc.intensity = 1.0 / std::numbers::pi;
  desc.expected_p = 1.0;
  return Kernel(
      GroundSpace::euclidean(d),
      [value](const Point& v, const Point& w) { return Complex(value(detail::euclidean_distance(v, w)), 0.0); },
      std::move(desc));
}

/// Independent thinning with retention alpha*beta followed by scaling the
/// points by beta^{1/d}: K_new(v, w) = alpha K(v / beta^{1/d}, w / beta^{1/d}).
inline Kernel thin_rescale(const Kernel& k, double alpha, double beta) {
  if (k.space().kind() != GroundSpace::Kind::euclidean) throw domain_error("thin_rescale: Euclidean kernels only");
  if (!(beta > 0.0 && beta <= 1.0)) throw validation_error(condition::param_bound, "thin_rescale: beta must lie in (0, 1]");
  if (!(alpha > 0.0 && alpha <= 1.0 / beta + 1e-12)) {
    throw validation_error(condition::param_bound, "thin_rescale: alpha must lie in (0, 1/beta]");
  }
  const int d = k.space().dimension();
  const double scale = std::pow(beta, 1.0 / d);
  KernelDescriptor desc = k.descriptor();
  desc.family = "thin_rescale(" + desc.family + ")";
  desc.params["alpha"] = alpha;
  desc.params["beta"] = beta;
  if (desc.intensity) *desc.intensity *= alpha;
  desc.length_scale *= scale;
  if (desc.truncation_radius) *desc.truncation_radius *= scale;
  if (desc.expected_p && *desc.expected_p == 1.0) {
    desc.expected_p = alpha * beta;
  } else {
    desc.expected_p.reset();
  }
  return Kernel(
      k.space(),
      [k, alpha, scale](const Point& v, const Point& w) {
        return alpha * k(Point::coords(v.x() / scale), Point::coords(w.x() / scale));
      },
      std::move(desc));
}

}  // namespace dppalm
