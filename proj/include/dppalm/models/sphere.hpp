#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dppalm/kernel.hpp"
#include "dppalm/numerics/special.hpp"

namespace dppalm {

/// Dimension of the space of degree-ell spherical harmonics on S^d.
/// On the circle the constant harmonic has multiplicity 1.
inline double harmonic_multiplicity(int ell, int d) {
  if (ell < 0 || d < 1) throw domain_error("harmonic_multiplicity: need ell >= 0 and d >= 1");
  if (d == 1) return ell == 0 ? 1.0 : 2.0;
  // (2 ell + d - 1)/(d - 1) * binom(ell + d - 2, d - 2)
  double binom = 1.0;
  for (int i = 1; i <= d - 2; ++i) binom *= static_cast<double>(ell + i) / i;
  return (2.0 * ell + d - 1.0) / (d - 1.0) * binom;
}

// Isotropic DPP on S^d specified by its Schoenberg coefficients beta_ell
// (a probability mass function) and intensity rho:
//   K0(t) = rho * sum_ell beta_ell C_ell(t) / C_ell(1).
struct SphereModel {
  int d = 2;
  double rho = 0.0;
  std::vector<double> beta;         // beta_0..beta_{L_max}
  double tail_bound = 0.0;          // bound on sum_{ell > L_max} beta_ell
  std::vector<double> eigenvalues;  // lambda_ell = rho sigma_d beta_ell / m_ell
  std::vector<double> multiplicities;

  int max_degree() const { return static_cast<int>(beta.size()) - 1; }
  double area() const { return sphere_area(d); }
};

/// Builds and validates a sphere model.
///
/// `tail_bound` bounds the coefficient mass beyond the last supplied degree.
/// When omitted it is the missing mass 1 - sum(beta), which is exact for a
/// probability mass function.
inline SphereModel sphere_model(int d, double rho, std::vector<double> coeffs,
                                std::optional<double> tail_bound = std::nullopt) {
  if (d < 1) throw domain_error("sphere_model: d must be at least 1");
  if (coeffs.empty()) throw validation_error(condition::param_bound, "sphere_model: no coefficients");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw validation_error(condition::param_bound, "sphere_model: rho must be positive");
  double sum = 0.0;
  for (double b : coeffs) {
    if (!(b >= 0.0) || !std::isfinite(b)) {
      throw validation_error(condition::param_bound, "sphere_model: coefficients must be nonnegative");
    }
    sum += b;
  }
  if (sum > 1.0 + 1e-9) throw validation_error(condition::param_bound, "sphere_model: coefficients sum above 1");
  const double missing = std::max(0.0, 1.0 - sum);
  const double tail = tail_bound.value_or(missing);
  if (tail < 0.0) throw validation_error(condition::param_bound, "sphere_model: negative tail bound");
  if (missing > tail + 1e-9) {
    throw validation_error(condition::param_bound, "sphere_model: coefficients plus tail bound do not reach 1");
  }

  SphereModel m{d, rho, std::move(coeffs), tail, {}, {}};
  const double sigma = m.area();
  for (int ell = 0; ell <= m.max_degree(); ++ell) {
    const double mult = harmonic_multiplicity(ell, d);
    const double lambda = rho * sigma * m.beta[ell] / mult;
    if (lambda > 1.0 + 1e-12) {
      throw validation_error(condition::existence_bound,
                             "rho = " + std::to_string(rho) + " exceeds the existence bound " +
                                 std::to_string(mult / (sigma * m.beta[ell])) + " set by degree " +
                                 std::to_string(ell));
    }
    m.multiplicities.push_back(mult);
    m.eigenvalues.push_back(std::min(lambda, 1.0));
  }
  return m;
}

struct SphereP {
  double value = 0.0;       // truncated series
  double tail_bound = 0.0;  // rigorous bound on the omitted terms
  std::string warning;      // nonempty when the omitted degrees cannot be certified
};

/// p_u = rho sigma_d sum_ell beta_ell^2 / m_ell, independent of u.
///
/// The omitted terms satisfy sum_{ell > L} beta^2/m <= T^2 / m_{L+1} for a
/// tail mass T, because beta_ell <= T and m grows with ell.
inline SphereP sphere_p(const SphereModel& m) {
  SphereP out;
  double s = 0.0;
  for (int ell = 0; ell <= m.max_degree(); ++ell) s += m.beta[ell] * m.beta[ell] / m.multiplicities[ell];
  const double sigma = m.area();
  out.value = m.rho * sigma * s;
  const double next_mult = harmonic_multiplicity(m.max_degree() + 1, m.d);
  out.tail_bound = m.rho * sigma * m.tail_bound * m.tail_bound / next_mult;
  // Omitted degrees have lambda <= rho sigma T / m_{L+1}; above 1 that
  // leaves existence unverified.
  if (m.rho * sigma * m.tail_bound / next_mult > 1.0) {
    out.warning = "unbounded tail: omitted coefficient mass " + std::to_string(m.tail_bound) +
                  " could violate the existence bound";
  }
  return out;
}

/// K0(t) evaluated from the truncated Gegenbauer series.
inline double sphere_series_k0(const SphereModel& m, double t) {
  t = std::clamp(t, -1.0, 1.0);
  const auto ratios = gegenbauer_ratios(m.max_degree(), 0.5 * (m.d - 1), t);
  double s = 0.0;
  for (int ell = 0; ell <= m.max_degree(); ++ell) s += m.beta[ell] * ratios[ell];
  return m.rho * s;
}

namespace detail {

template <typename K0>
Kernel isotropic_sphere_kernel(int d, K0 k0, KernelDescriptor desc) {
  desc.symmetry = Symmetry::sphere_isotropic;
  return Kernel(
      GroundSpace::sphere(d),
      [k0](const Point& v, const Point& w) { return Complex(k0(std::clamp(v.x().dot(w.x()), -1.0, 1.0)), 0.0); },
      std::move(desc));
}

}  // namespace detail

inline Kernel sphere_series_kernel(const SphereModel& m) {
  KernelDescriptor desc;
  desc.family = "sphere-coefficients";
  desc.params = {{"d", static_cast<double>(m.d)}, {"rho", m.rho}};
  desc.intensity = sphere_series_k0(m, 1.0);
  desc.expected_p = sphere_p(m).value;
  return detail::isotropic_sphere_kernel(m.d, [m](double t) { return sphere_series_k0(m, t); }, std::move(desc));
}

struct MultiquadricModel {
  SphereModel model;
  Kernel kernel;  // closed form rho (1 - delta) / sqrt(1 + delta^2 - 2 delta t)
};

inline double multiquadric_rho_max(double delta) { return 1.0 / (4.0 * std::numbers::pi * (1.0 - delta)); }

/// Multiquadric model on S^2 with geometric coefficients beta_ell = (1 - delta) delta^ell.
inline MultiquadricModel multiquadric(double delta, double rho) {
  if (!(delta > 0.0 && delta < 1.0)) throw validation_error(condition::param_bound, "multiquadric: delta must lie in (0, 1)");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw validation_error(condition::param_bound, "multiquadric: rho must be positive");
  const double rho_max = multiquadric_rho_max(delta);
  if (rho > rho_max * (1.0 + 1e-12)) {
    throw validation_error(condition::existence_bound, "multiquadric: rho = " + std::to_string(rho) +
                                                           " exceeds the existence bound " + std::to_string(rho_max));
  }
  // Truncate once the omitted mass delta^{L+1} drops below 1e-14; the series
  // kernel then matches the closed form to rho * 1e-14.
  const int max_degree = static_cast<int>(std::ceil(std::log(1e-14) / std::log(delta)));
  std::vector<double> coeffs(static_cast<std::size_t>(max_degree) + 1);
  for (int ell = 0; ell <= max_degree; ++ell) coeffs[ell] = (1.0 - delta) * std::pow(delta, ell);
  SphereModel m = sphere_model(2, std::min(rho, rho_max), std::move(coeffs), std::pow(delta, max_degree + 1));

  KernelDescriptor desc;
  desc.family = "sphere-multiquadric";
  desc.params = {{"delta", delta}, {"rho", rho}};
  desc.intensity = rho;
  desc.expected_p = sphere_p(m).value;
  Kernel k = detail::isotropic_sphere_kernel(
      2, [delta, rho](double t) { return rho * (1.0 - delta) / std::sqrt(1.0 + delta * delta - 2.0 * delta * t); },
      std::move(desc));
  return {std::move(m), std::move(k)};
}

// Closed-form sum of the degree series for the multiquadric p_u:
// 4 pi rho (1 - delta)^2 artanh(delta) / delta.
inline double multiquadric_p_series_sum(double delta, double rho) {
  return 4.0 * std::numbers::pi * rho * (1.0 - delta) * (1.0 - delta) * std::atanh(delta) / delta;
}

// 4 pi rho (1 - delta)/(1 + delta): the degree series with the 1/m_ell
// factor dropped. Differs from the true p_u for every delta in (0, 1);
// reports carry it next to the series value with a discrepancy flag.
inline double multiquadric_p_without_multiplicity(double delta, double rho) {
  return 4.0 * std::numbers::pi * rho * (1.0 - delta) / (1.0 + delta);
}

}  // namespace dppalm
