#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dppalm/errors.hpp"

namespace dppalm {

enum class QuadratureScheme { gauss_legendre, adaptive };

struct QuadratureSpec {
  QuadratureScheme scheme = QuadratureScheme::adaptive;
  double relative_tolerance = 1e-11;
  // Absolute floor so that integrals which vanish identically terminate.
  double absolute_tolerance = 1e-15;
  // Panel budget: number of panels for the fixed scheme, cap on bisections
  // for the adaptive one.
  int max_subdivisions = 200000;
  // Upper limit of the explicitly integrated range for improper radial
  // integrals. Unset means the caller picks a model-dependent default.
  std::optional<double> truncation_radius;

  void validate() const {
    if (!(relative_tolerance > 0.0)) throw domain_error("QuadratureSpec: relative_tolerance must be positive");
    if (max_subdivisions < 1) throw domain_error("QuadratureSpec: max_subdivisions must be at least 1");
    if (truncation_radius && !(*truncation_radius > 0.0)) {
      throw domain_error("QuadratureSpec: truncation_radius must be positive");
    }
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

namespace detail {

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename F>
Panel gauss_kronrod_panel(F& f, double a, double b) {
  using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
  const auto& xk = gk::abscissa();
  const auto& wk = gk::weights();
  using g7 = boost::math::quadrature::gauss<double, 7>;
  const auto& wg = g7::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  // Boost stores the non-negative half of the symmetric rule; even indices
  // of the Kronrod abscissae coincide with the Gauss nodes.
  const double fc = f(c);
  double kron = wk[0] * fc;
  double gauss = wg[0] * fc;
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double dx = h * xk[i];
    const double s = f(c - dx) + f(c + dx);
    kron += wk[i] * s;
    if (i % 2 == 0) gauss += wg[i / 2] * s;
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

template <typename F>
QuadratureResult composite_gauss_legendre(F& f, double a, double b, int panels) {
  using gl = boost::math::quadrature::gauss<double, 20>;
  const auto& x = gl::abscissa();
  const auto& w = gl::weights();
  double total = 0.0;
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * width;
    const double h = 0.5 * width;
    double s = (x[0] == 0.0) ? w[0] * f(c) : 0.0;
    for (std::size_t i = (x[0] == 0.0 ? 1 : 0); i < x.size(); ++i) s += w[i] * (f(c - h * x[i]) + f(c + h * x[i]));
    total += s * h;
  }
  return {total, 0.0, panels};
}

}  // namespace detail

/// Definite integral of f over [a, b].
///
/// `absolute_target`, when positive, overrides the tolerance derived from
/// the spec; the radial driver uses it to budget tail blocks against the
/// size of the whole integral rather than the block itself.
template <typename F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureSpec& spec, double absolute_target = 0.0) {
  spec.validate();
  if (a == b) return {};
  if (spec.scheme == QuadratureScheme::gauss_legendre) {
    const int panels = spec.max_subdivisions;
    const QuadratureResult fine = detail::composite_gauss_legendre(f, a, b, panels);
    const QuadratureResult coarse = detail::composite_gauss_legendre(f, a, b, std::max(1, panels / 2));
    return {fine.value, std::abs(fine.value - coarse.value), panels};
  }

  constexpr int initial_panels = 16;
  std::priority_queue<detail::Panel> heap;
  double value = 0.0, error = 0.0;
  const double width = (b - a) / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == initial_panels) ? b : lo + width;
    auto p = detail::gauss_kronrod_panel(f, lo, hi);
    value += p.value;
    error += p.error;
    heap.push(p);
  }
  int subdivisions = 0;
  auto target = [&] {
    return absolute_target > 0.0 ? absolute_target
                                 : std::max(spec.absolute_tolerance, spec.relative_tolerance * std::abs(value));
  };
  while (error > target()) {
    if (subdivisions >= spec.max_subdivisions) {
      throw numerical_error("integration over [" + std::to_string(a) + ", " + std::to_string(b) +
                            "] did not converge within " + std::to_string(spec.max_subdivisions) +
                            " subdivisions (error estimate " + std::to_string(error) + ")");
    }
    const detail::Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval collapsed to machine resolution; accept its contribution.
      error -= worst.error;
      heap.push({worst.a, worst.b, worst.value, 0.0});
      continue;
    }
    const auto left = detail::gauss_kronrod_panel(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_panel(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  // Re-sum to shed the drift of the running totals.
  double resum = 0.0, reerr = 0.0;
  while (!heap.empty()) {
    resum += heap.top().value;
    reerr += heap.top().error;
    heap.pop();
  }
  return {resum, reerr, subdivisions};
}

// Result of an improper integral over (0, inf).
struct RadialIntegral {
  double value = 0.0;           // explicit part plus extrapolated tail
  double error = 0.0;           // quadrature error plus tail-extrapolation uncertainty
  double truncated = 0.0;       // explicit part, smoothly cut off between 4R and 8R
  double tail_estimate = 0.0;   // extrapolated remainder
  double tail_exponent = std::numeric_limits<double>::infinity();  // fitted a in f ~ r^{-a}
  bool diverged = false;
};

// Fitted tail exponents below 1 + this margin are reported as divergent.
inline constexpr double divergence_margin = 0.05;

namespace detail {

// C-infinity step: 0 for x <= 1, 1 for x >= 2.
inline double smooth_step(double x) {
  if (x <= 1.0) return 0.0;
  if (x >= 2.0) return 1.0;
  const double a = std::exp(-1.0 / (x - 1.0));
  const double b = std::exp(-1.0 / (2.0 - x));
  return a / (a + b);
}

}  // namespace detail

/// Integral of f over (0, inf) with power-law tail extrapolation.
///
/// With R the spec's truncation radius, the range beyond R is tiled by the
/// smooth dyadic partition of unity B_i(r) = h(r/R_i) - h(r/2R_i), R_i =
/// 2^i R, h a C-infinity step from 1 to 2. The head (0, 2R) and the masses
/// M_0, M_1 of the first two blocks are integrated directly. For
/// f ~ C r^{-a} the block masses are geometric with ratio q = 2^{1-a}, so
/// the rest is M_1 q / (1 - q). Smooth block edges keep oscillating tails
/// (Bessel-type integrands) out of the fitted ratio. A second fit using the
/// block at R/2 gives an alternative tail; the gap is charged to the error.
/// Fitted a <= 1 + divergence_margin marks the integral divergent.
template <typename F>
RadialIntegral integrate_radial(F&& f, const QuadratureSpec& spec) {
  spec.validate();
  if (!spec.truncation_radius) throw domain_error("integrate_radial: truncation_radius is required");
  const double r = *spec.truncation_radius;

  const QuadratureResult head_a = integrate(f, 0.0, r, spec);
  const QuadratureResult head_b =
      integrate([&](double x) { return f(x) * (1.0 - detail::smooth_step(x / r)); }, r, 2.0 * r, spec);
  const double scale = std::abs(head_a.value + head_b.value);
  const double block_target = std::max(spec.absolute_tolerance, 0.1 * spec.relative_tolerance * scale);
  auto block = [&](double ri) {
    return integrate(
        [&](double x) { return f(x) * (detail::smooth_step(x / ri) - detail::smooth_step(x / (2.0 * ri))); }, ri,
        4.0 * ri, spec, block_target);
  };
  const QuadratureResult m0 = block(r);
  const QuadratureResult m1 = block(2.0 * r);

  RadialIntegral out;
  out.truncated = head_a.value + head_b.value + m0.value + m1.value;
  out.error = head_a.error + head_b.error + m0.error + m1.error;

  const double negligible = std::max(spec.absolute_tolerance, spec.relative_tolerance * std::abs(out.truncated));
  if (std::abs(m1.value) <= negligible) {
    // Faster than any power: the last block already sits below tolerance.
    out.value = out.truncated;
    out.error += std::abs(m1.value);
    return out;
  }
  const double q = m1.value / m0.value;
  if (!(q > 0.0)) {
    throw numerical_error("integrate_radial: tail blocks change sign; no power-law tail to extrapolate");
  }
  out.tail_exponent = 1.0 - std::log2(q);
  if (out.tail_exponent <= 1.0 + divergence_margin) {
    out.diverged = true;
    out.value = std::copysign(std::numeric_limits<double>::infinity(), out.truncated);
    out.tail_estimate = out.value;
    return out;
  }
  out.tail_estimate = m1.value * q / (1.0 - q);
  const QuadratureResult m_prev = block(0.5 * r);
  const double q_prev = m0.value / m_prev.value;
  double alternative = out.tail_estimate;
  if (q_prev > 0.0 && q_prev < 1.0) alternative = m1.value * q_prev / (1.0 - q_prev);
  out.value = out.truncated + out.tail_estimate;
  out.error += std::abs(out.tail_estimate - alternative);
  return out;
}

}  // namespace dppalm
