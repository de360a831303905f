#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "dppalm/analysis/discretize.hpp"
#include "dppalm/coupling.hpp"
#include "dppalm/finite_dpp.hpp"
#include "dppalm/sampling.hpp"

namespace dppalm {

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int bins = 0;
};

/// Pearson goodness of fit of `counts` against `probabilities`. Adjacent bins
/// are merged until every bin expects at least `min_expected` counts.
inline ChiSquareResult chi_square_test(const std::vector<double>& counts, const std::vector<double>& probabilities,
                                       double min_expected = 20.0) {
  double total = 0.0;
  for (double c : counts) total += c;
  std::vector<double> obs, exp;
  double o = 0.0, e = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    o += counts[i];
    e += probabilities[i] * total;
    if (e >= min_expected) {
      obs.push_back(o);
      exp.push_back(e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (exp.empty()) {
      obs.push_back(o);
      exp.push_back(e);
    } else {
      obs.back() += o;
      exp.back() += e;
    }
  }
  ChiSquareResult out;
  out.bins = static_cast<int>(exp.size());
  out.dof = out.bins - 1;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    if (exp[i] > 0.0) out.statistic += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  }
  if (out.dof >= 1) {
    boost::math::chi_squared dist(out.dof);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  }
  return out;
}

// Normal-approximation sigma of a binomial proportion.
inline double binomial_sigma(double p, std::size_t draws) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(draws));
}

struct McCouplingReport {
  std::size_t anchor_site = 0;
  double max_flow = 0.0;
  double p_exact = 0.0;
  double p_empirical = 0.0;
  double p_sigma = 0.0;
  bool p_within_3sigma = false;
  std::vector<double> density_exact;      // f_u over the cells
  std::vector<double> displaced_counts;   // histogram of the displaced cell
  ChiSquareResult chi_square;
  bool chi_square_pass = false;           // p-value at least 1%
  std::size_t xi_outside_difference = 0;  // draws violating T within S, |S \ T| <= 1; must stay 0
};

/// Discretizes k, builds exact laws of X and X^u on the grid, confirms a
/// coupling exists, draws from it and compares empirical p_u and the
/// displaced-point histogram with the exact predictions.
inline McCouplingReport mc_validate_coupling(const Kernel& k, const Point& u, const Window& window, int resolution,
                                             std::size_t samples, std::uint64_t seed) {
  const Discretization disc = grid_discretize(k, window, resolution);
  const std::size_t n = disc.dpp.n();
  check_law_size(n, max_coupling_sites, "mc_validate_coupling");
  McCouplingReport rep;
  rep.anchor_site = disc.nearest_site(u);

  const FiniteDpp palm = palm_matrix(disc.dpp, rep.anchor_site);
  const CouplingResult coupling = coupling_feasible(subset_law(disc.dpp), subset_law(palm), rep.anchor_site);
  rep.max_flow = coupling.max_flow;
  if (!coupling.table) {
    throw Error(ErrorKind::theorem_violation, "coupling-infeasible",
                "max flow " + std::to_string(coupling.max_flow) + " < 1 on the discretized kernel");
  }
  const XiLaw xi = xi_law(*coupling.table, disc.dpp, rep.anchor_site);
  rep.p_exact = xi.p;
  rep.density_exact = xi.density;

  Rng rng(seed);
  const CoupledSampler sampler(*coupling.table);
  rep.displaced_counts.assign(n, 0.0);
  std::size_t nonempty = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto [s, t] = sampler.draw(rng);
    const Subset diff = s & ~t;
    if ((t & ~s) != 0 || subset_size(diff) > 1) ++rep.xi_outside_difference;
    if (diff == 0) continue;
    ++nonempty;
    rep.displaced_counts[static_cast<std::size_t>(std::countr_zero(diff))] += 1.0;
  }
  rep.p_empirical = static_cast<double>(nonempty) / static_cast<double>(samples);
  rep.p_sigma = binomial_sigma(rep.p_exact, samples);
  rep.p_within_3sigma = std::abs(rep.p_empirical - rep.p_exact) <= 3.0 * rep.p_sigma + 1e-12;
  rep.chi_square = chi_square_test(rep.displaced_counts, rep.density_exact);
  rep.chi_square_pass = rep.chi_square.p_value >= 0.01;
  return rep;
}

}  // namespace dppalm
