#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "dppalm/finite_dpp.hpp"

namespace dppalm {

// Seeded generator with a platform-independent uniform draw, so that fixed
// seeds reproduce bit-identical samples everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform on [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Sequential exact sampler: visit sites in index order, include site i with
/// its current conditional inclusion probability, then condition the kernel
/// on the outcome by a Schur complement. O(n^3) per draw.
inline Subset sample_exact(const FiniteDpp& dpp, Rng& rng) {
  check_law_size(dpp.n(), 31, "sample_exact");
  const auto n = static_cast<Eigen::Index>(dpp.n());
  CMatrix m = dpp.matrix();
  Subset out = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = std::clamp(m(i, i).real(), 0.0, 1.0);
    const bool keep = rng.uniform() < p;
    if (keep) out |= Subset{1} << i;
    const Eigen::Index rest = n - i - 1;
    if (rest == 0) break;
    // Conditioning on inclusion divides by K_ii, on exclusion by K_ii - 1.
    const double pivot = keep ? p : p - 1.0;
    if (pivot == 0.0) continue;
    const CVector col = m.col(i).tail(rest);
    m.bottomRightCorner(rest, rest) -= col * col.adjoint() / pivot;
  }
  return out;
}

inline Subset sample_exact(const FiniteDpp& dpp, std::uint64_t seed) {
  Rng rng(seed);
  return sample_exact(dpp, rng);
}

/// Spectral sampler: choose eigenvectors independently with probability
/// equal to their eigenvalue, then sample the projection DPP they span one
/// point at a time. With z_v the feature vector of site v (row v of the
/// chosen eigenvectors, conjugated), the next site is drawn with probability
/// proportional to the squared residual of z_v off the span of the features
/// already picked. O(n k^2) per draw for k selected eigenvectors, which
/// makes it the practical choice for discretized kernels with many sites.
/// Returns 0-based site indices.
inline std::vector<Eigen::Index> sample_spectral(const FiniteDpp& dpp, Rng& rng) {
  const HermitianEig& eig = dpp.eig();
  std::vector<Eigen::Index> chosen;
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
    if (rng.uniform() < eig.eigenvalues(k)) chosen.push_back(k);
  }
  const Eigen::Index n = eig.eigenvectors.rows();
  const auto k = static_cast<Eigen::Index>(chosen.size());
  CMatrix z(k, n);  // column v is z_v
  for (Eigen::Index j = 0; j < k; ++j) z.row(j) = eig.eigenvectors.col(chosen[static_cast<std::size_t>(j)]).adjoint();

  Eigen::VectorXd residual = z.colwise().squaredNorm().transpose();
  CMatrix basis(k, k);
  std::vector<Eigen::Index> sample;
  for (Eigen::Index step = 0; step < k; ++step) {
    const Eigen::VectorXd weights = residual.cwiseMax(0.0);
    double target = rng.uniform() * weights.sum();
    Eigen::Index site = 0;
    for (; site + 1 < n; ++site) {
      target -= weights(site);
      if (target < 0.0) break;
    }
    sample.push_back(site);
    // Gram-Schmidt step, repeated once for orthogonality at round-off.
    CVector e = z.col(site);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index b = 0; b < step; ++b) e -= basis.col(b) * basis.col(b).dot(e);
    }
    e.normalize();
    basis.col(step) = e;
    residual -= (e.adjoint() * z).cwiseAbs2().transpose();
    residual(site) = 0.0;
  }
  std::sort(sample.begin(), sample.end());
  return sample;
}

}  // namespace dppalm
