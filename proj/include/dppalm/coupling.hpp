#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "dppalm/finite_dpp.hpp"
#include "dppalm/sampling.hpp"

namespace dppalm {

namespace detail {

// Dinic's algorithm on real capacities. Residuals below `eps` count as
// saturated.
class FlowNetwork {
 public:
  struct Edge {
    int to;
    double cap;
    double flow;
  };

  explicit FlowNetwork(int nodes) : adj_(nodes), level_(nodes), iter_(nodes) {}

  int add_edge(int from, int to, double cap) {
    adj_[from].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({to, cap, 0.0});
    adj_[to].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({from, 0.0, 0.0});
    return static_cast<int>(edges_.size()) - 2;
  }

  const Edge& edge(int id) const { return edges_[id]; }

  double max_flow(int s, int t) {
    double total = 0.0;
    while (bfs(s, t)) {
      std::fill(iter_.begin(), iter_.end(), 0);
      while (true) {
        const double f = dfs(s, t, std::numeric_limits<double>::infinity());
        if (f <= eps) break;
        total += f;
      }
    }
    return total;
  }

 private:
  static constexpr double eps = 1e-15;

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int id : adj_[v]) {
        const Edge& e = edges_[id];
        if (e.cap - e.flow > eps && level_[e.to] < 0) {
          level_[e.to] = level_[v] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  double dfs(int v, int t, double pushed) {
    if (v == t) return pushed;
    for (int& i = iter_[v]; i < static_cast<int>(adj_[v].size()); ++i) {
      const int id = adj_[v][i];
      Edge& e = edges_[id];
      if (e.cap - e.flow <= eps || level_[e.to] != level_[v] + 1) continue;
      const double f = dfs(e.to, t, std::min(pushed, e.cap - e.flow));
      if (f > eps) {
        e.flow += f;
        edges_[id ^ 1].flow -= f;
        return f;
      }
    }
    return 0.0;
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace detail

// Joint law of (X, X^u) supported on pairs with T contained in S and
// |S \ T| <= 1.
struct CouplingTable {
  std::size_t n = 0;
  std::size_t anchor = 0;
  std::map<std::pair<Subset, Subset>, double> joint;

  std::vector<double> row_sums() const {
    std::vector<double> r(std::size_t{1} << n, 0.0);
    for (const auto& [st, p] : joint) r[st.first] += p;
    return r;
  }
  std::vector<double> column_sums() const {
    std::vector<double> c(std::size_t{1} << n, 0.0);
    for (const auto& [st, p] : joint) c[st.second] += p;
    return c;
  }
};

struct CouplingResult {
  double max_flow = 0.0;
  std::optional<CouplingTable> table;
};

inline constexpr double coupling_flow_tolerance = 1e-8;

/// Decides whether X and X^u admit a coupling with X^u contained in X and at
/// most one extra point, as a transport problem: a unit of mass must flow
/// from lawX over the admissible pairs (S, T) into lawXu. Returns the max
/// flow and, when it reaches 1 - 1e-8, the coupling read off the flow.
inline CouplingResult coupling_feasible(const SubsetLaw& law_x, const SubsetLaw& law_xu, std::size_t u) {
  if (law_x.n != law_xu.n) throw domain_error("coupling_feasible: laws live on different site sets");
  const std::size_t n = law_x.n;
  if (u < 1 || u > n) throw domain_error("coupling_feasible: anchor outside the site set");
  check_law_size(n, max_coupling_sites, "coupling_feasible");
  const Subset states = Subset{1} << n;
  const Subset ubit = site_bit(u);
  for (Subset t = 0; t < states; ++t) {
    if ((t & ubit) && law_xu[t] > 1e-12) throw domain_error("coupling_feasible: lawXu puts mass on sets containing u");
  }

  // Nodes: source, one per S, one per T, sink.
  const int source = 0;
  const int first_s = 1;
  const int first_t = first_s + static_cast<int>(states);
  const int sink = first_t + static_cast<int>(states);
  detail::FlowNetwork net(sink + 1);
  for (Subset s = 0; s < states; ++s) {
    if (law_x[s] > 0.0) net.add_edge(source, first_s + static_cast<int>(s), law_x[s]);
    if (law_xu[s] > 0.0) net.add_edge(first_t + static_cast<int>(s), sink, law_xu[s]);
  }
  std::vector<std::pair<int, std::pair<Subset, Subset>>> pair_edges;
  for (Subset s = 0; s < states; ++s) {
    if (law_x[s] <= 0.0) continue;
    auto link = [&](Subset t) {
      if (law_xu[t] <= 0.0) return;
      pair_edges.push_back({net.add_edge(first_s + static_cast<int>(s), first_t + static_cast<int>(t), 2.0), {s, t}});
    };
    link(s);
    for (Subset rest = s; rest; rest &= rest - 1) link(s & ~(rest & (~rest + 1)));
  }

  CouplingResult out;
  out.max_flow = net.max_flow(source, sink);
  if (out.max_flow >= 1.0 - coupling_flow_tolerance) {
    CouplingTable table{n, u, {}};
    for (const auto& [id, st] : pair_edges) {
      const double f = net.edge(id).flow;
      if (f > 0.0) table.joint[st] += f;
    }
    out.table = std::move(table);
  }
  return out;
}

struct XiLaw {
  double p = 0.0;               // P(xi_u nonempty)
  std::vector<double> density;  // law of the displaced point given xi_u nonempty; entry v-1 for site v
};

/// Law of the difference xi_u = X \ X^u under a coupling table.
inline XiLaw xi_law(const CouplingTable& table, const FiniteDpp& dpp, std::size_t u) {
  if (table.n != dpp.n() || table.anchor != u) throw domain_error("xi_law: table does not match kernel and anchor");
  XiLaw out{0.0, std::vector<double>(table.n, 0.0)};
  for (const auto& [st, mass] : table.joint) {
    const Subset diff = st.first & ~st.second;
    if (diff == 0) continue;
    out.p += mass;
    out.density[static_cast<std::size_t>(std::countr_zero(diff))] += mass;
  }
  if (out.p > 0.0) {
    for (double& d : out.density) d /= out.p;
  }
  return out;
}

// Draws (S, T) pairs from a coupling table by inverse-CDF lookup.
class CoupledSampler {
 public:
  explicit CoupledSampler(const CouplingTable& table) {
    double acc = 0.0;
    for (const auto& [st, p] : table.joint) {
      acc += p;
      pairs_.push_back(st);
      cdf_.push_back(acc);
    }
    if (pairs_.empty()) throw domain_error("CoupledSampler: empty coupling table");
  }

  std::pair<Subset, Subset> draw(Rng& rng) const {
    const double target = rng.uniform() * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), pairs_.size() - 1);
    return pairs_[i];
  }

 private:
  std::vector<std::pair<Subset, Subset>> pairs_;
  std::vector<double> cdf_;
};

inline std::pair<Subset, Subset> sample_coupled(const CouplingTable& table, std::uint64_t seed) {
  Rng rng(seed);
  return CoupledSampler(table).draw(rng);
}

}  // namespace dppalm
