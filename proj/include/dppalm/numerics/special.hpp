#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "dppalm/errors.hpp"

namespace dppalm {

inline double gamma_fn(double x) {
  if (x <= 0.0 && x == std::floor(x)) {
    throw domain_error("gamma_fn: pole at nonpositive integer " + std::to_string(x));
  }
  return std::tgamma(x);
}

// Bessel function of the first kind, order one.
inline double bessel_j1(double x) { return boost::math::cyl_bessel_j(1, x); }

// Surface measure of the unit sphere S^d embedded in R^{d+1}.
inline double sphere_area(int d) {
  const double h = 0.5 * (d + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / gamma_fn(h);
}

/// Gegenbauer polynomial C_ell^(lambda)(t) by the three-term recurrence.
///
/// lambda == 0 is the circle (d = 1) case. There C_ell^(0) vanishes for
/// ell >= 1, so the Chebyshev limit T_ell(t) is returned instead. With that
/// convention gegenbauer_ratio(ell, 0, t) == cos(ell * acos(t)).
inline double gegenbauer(int ell, double lambda, double t) {
  if (ell < 0) throw domain_error("gegenbauer: negative degree");
  if (lambda < 0.0) throw domain_error("gegenbauer: negative lambda");
  if (ell == 0) return 1.0;
  if (lambda == 0.0) {
    double prev = 1.0, cur = t;
    for (int n = 2; n <= ell; ++n) {
      const double next = 2.0 * t * cur - prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }
  double prev = 1.0, cur = 2.0 * lambda * t;
  for (int n = 2; n <= ell; ++n) {
    const double next = (2.0 * t * (n + lambda - 1.0) * cur - (n + 2.0 * lambda - 2.0) * prev) / n;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Normalized values C_ell(t)/C_ell(1) for ell = 0..max_degree.
///
/// Runs the recurrence directly on the normalized sequence, which stays in
/// [-1, 1] and so cannot overflow for large degrees.
inline std::vector<double> gegenbauer_ratios(int max_degree, double lambda, double t) {
  if (max_degree < 0) throw domain_error("gegenbauer_ratios: negative degree");
  if (lambda < 0.0) throw domain_error("gegenbauer_ratios: negative lambda");
  std::vector<double> r(static_cast<std::size_t>(max_degree) + 1);
  r[0] = 1.0;
  if (max_degree == 0) return r;
  r[1] = t;  // C_1(t)/C_1(1) = t for every lambda, including the Chebyshev limit
  for (int n = 2; n <= max_degree; ++n) {
    if (lambda == 0.0) {
      r[n] = 2.0 * t * r[n - 1] - r[n - 2];
      continue;
    }
    // C_n(1) = C_{n-1}(1) (n + 2 lambda - 1) / n.
    const double a = 2.0 * (n + lambda - 1.0) / (n + 2.0 * lambda - 1.0);
    const double b = (n - 1.0) / (n + 2.0 * lambda - 1.0);
    r[n] = a * t * r[n - 1] - b * r[n - 2];
  }
  return r;
}

inline double gegenbauer_ratio(int ell, double lambda, double t) {
  return gegenbauer_ratios(ell, lambda, t).back();
}

}  // namespace dppalm
