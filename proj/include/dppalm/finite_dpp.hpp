#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dppalm/kernel.hpp"
#include "dppalm/numerics/linalg.hpp"

namespace dppalm {

// Subsets of a finite ground space as bitmasks; site s (1-based) is bit s-1.
using Subset = std::uint32_t;

inline constexpr std::size_t max_law_sites = 16;
inline constexpr std::size_t max_coupling_sites = 12;

inline constexpr Subset site_bit(std::size_t site) { return Subset{1} << (site - 1); }
inline int subset_size(Subset s) { return std::popcount(s); }

/// A DPP on {1, ..., n}: Hermitian kernel matrix with spectrum in [0, 1].
class FiniteDpp {
 public:
  const CMatrix& matrix() const { return matrix_; }
  const HermitianEig& eig() const { return eig_; }
  std::size_t n() const { return static_cast<std::size_t>(matrix_.rows()); }
  Complex operator()(std::size_t v, std::size_t w) const {
    return matrix_(static_cast<Eigen::Index>(v - 1), static_cast<Eigen::Index>(w - 1));
  }
  double diag(std::size_t v) const { return (*this)(v, v).real(); }
  Kernel kernel() const { return matrix_kernel(matrix_); }

  friend FiniteDpp validate(const CMatrix& matrix);

 private:
  FiniteDpp(CMatrix m, HermitianEig e) : matrix_(std::move(m)), eig_(std::move(e)) {}
  CMatrix matrix_;
  HermitianEig eig_;  // eigenvalues clamped to [0, 1]
};

/// Checks Hermitian symmetry and 0 <= spectrum <= 1.
///
/// Eigenvalues within 1e-6 outside [0, 1] are clamped onto it; the stored
/// matrix is the Hermitian part of the input.
inline FiniteDpp validate(const CMatrix& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw validation_error(condition::non_hermitian, "kernel matrix must be square and nonempty");
  }
  const double scale = 1.0 + max_abs(matrix);
  if (hermitian_defect(matrix) > 1e-10 * scale) {
    throw validation_error(condition::non_hermitian,
                           "matrix deviates from its adjoint by " + std::to_string(hermitian_defect(matrix)));
  }
  CMatrix sym = 0.5 * (matrix + matrix.adjoint());
  HermitianEig eig = hermitian_eig(sym);
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    double& lambda = eig.eigenvalues(i);
    if (lambda < -1e-6 || lambda > 1.0 + 1e-6) {
      throw validation_error(condition::spectrum,
                             "eigenvalue " + std::to_string(lambda) + " lies outside [0, 1]");
    }
    lambda = std::clamp(lambda, 0.0, 1.0);
  }
  return FiniteDpp(std::move(sym), std::move(eig));
}

inline void check_site(const FiniteDpp& dpp, std::size_t u) {
  if (u < 1 || u > dpp.n()) throw domain_error("site " + std::to_string(u) + " outside [1, " + std::to_string(dpp.n()) + "]");
}

inline CMatrix principal_submatrix(const CMatrix& m, Subset a) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (a & (Subset{1} << i)) idx.push_back(i);
  }
  CMatrix sub(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) sub(i, j) = m(idx[i], idx[j]);
  }
  return sub;
}

// P(A is contained in X) = det K_A.
inline double inclusion_prob(const FiniteDpp& dpp, Subset a) {
  if (a == 0) throw domain_error("inclusion_prob: A must be nonempty");
  if (a >> dpp.n()) throw domain_error("inclusion_prob: A has sites beyond n");
  return std::clamp(principal_submatrix(dpp.matrix(), a).determinant().real(), 0.0, 1.0);
}

// Exact law of X: probability of every subset, indexed by bitmask.
struct SubsetLaw {
  std::size_t n = 0;
  std::vector<double> probabilities;  // size 2^n

  double operator[](Subset s) const { return probabilities[s]; }
  double total() const {
    double t = 0.0;
    for (double p : probabilities) t += p;
    return t;
  }
};

inline void check_law_size(std::size_t n, std::size_t limit, const char* what) {
  if (n > limit) {
    throw size_guard_error(std::string(what) + ": n = " + std::to_string(n) + " exceeds the limit of " +
                           std::to_string(limit) + " sites");
  }
}

/// P(X = S) = (-1)^{n-|S|} det(K - I_{S^c}) for every S.
inline SubsetLaw subset_law(const FiniteDpp& dpp) {
  const std::size_t n = dpp.n();
  check_law_size(n, max_law_sites, "subset_law");
  SubsetLaw law{n, std::vector<double>(std::size_t{1} << n)};
  CMatrix m = dpp.matrix();
  for (Subset s = 0; s < (Subset{1} << n); ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const bool in = s & (Subset{1} << i);
      m(i, i) = dpp.matrix()(i, i) - (in ? 0.0 : 1.0);
    }
    const double sign = ((n - subset_size(s)) % 2 == 0) ? 1.0 : -1.0;
    double p = sign * m.determinant().real();
    if (p < -1e-12) throw numerical_error("subset_law: probability " + std::to_string(p) + " is negative");
    law.probabilities[s] = std::max(p, 0.0);
  }
  return law;
}

/// Reduced Palm kernel at site u: K - K_{.u} K_{u.} / K_uu.
inline FiniteDpp palm_matrix(const FiniteDpp& dpp, std::size_t u) {
  check_site(dpp, u);
  const double kuu = dpp.diag(u);
  if (!(kuu > 1e-12)) throw validation_error(condition::vanishing_intensity, "K_uu vanishes at the anchor");
  const Eigen::Index i = static_cast<Eigen::Index>(u - 1);
  const CMatrix col = dpp.matrix().col(i);
  return validate(dpp.matrix() - col * col.adjoint() / kuu);
}

// p_u = sum_v |K_uv|^2 / K_uu.
inline double p_u_finite(const FiniteDpp& dpp, std::size_t u) {
  check_site(dpp, u);
  const double kuu = dpp.diag(u);
  if (!(kuu > 1e-12)) throw validation_error(condition::vanishing_intensity, "K_uu vanishes at the anchor");
  return std::clamp(dpp.matrix().col(static_cast<Eigen::Index>(u - 1)).squaredNorm() / kuu, 0.0, 1.0);
}

/// Projection dilation Q = [[K, L], [L, I - K]] with L = sqrt(K (I - K)).
///
/// L is formed from the cached spectrum of K; K and K(I - K) share
/// eigenvectors, and going through a fresh eigendecomposition of the product
/// would mix the lambda = 0 and lambda = 1 eigenspaces.
inline CMatrix dilate(const FiniteDpp& dpp) {
  const auto n = static_cast<Eigen::Index>(dpp.n());
  const CMatrix& k = dpp.matrix();
  // Products at round-off level are zeroed: the square root would turn
  // 1e-16 into 1e-8 on eigenvalues that are 0 or 1.
  CMatrix l = hermitian_function(dpp.eig(), [](double x) {
    const double v = x * (1.0 - x);
    return v > 1e-15 ? std::sqrt(v) : 0.0;
  });
  l = 0.5 * (l + l.adjoint());
  CMatrix q(2 * n, 2 * n);
  q.topLeftCorner(n, n) = k;
  q.topRightCorner(n, n) = l;
  q.bottomLeftCorner(n, n) = l;
  q.bottomRightCorner(n, n) = CMatrix::Identity(n, n) - k;
  return q;
}

struct DilationPair {
  CMatrix q;
  CVector psi_u;  // unit eigenvector of q for eigenvalue 1
  CMatrix q_u;    // q - psi_u psi_u^*
};

/// psi_u = Q e_u / sqrt(K_uu). The upper-left block of Q - psi psi^* is the
/// Palm kernel at u.
inline DilationPair palm_eigenvector(const FiniteDpp& dpp, std::size_t u) {
  check_site(dpp, u);
  const double kuu = dpp.diag(u);
  if (!(kuu > 1e-12)) throw validation_error(condition::vanishing_intensity, "K_uu vanishes at the anchor");
  DilationPair pair;
  pair.q = dilate(dpp);
  pair.psi_u = pair.q.col(static_cast<Eigen::Index>(u - 1)) / std::sqrt(kuu);
  pair.q_u = pair.q - pair.psi_u * pair.psi_u.adjoint();
  return pair;
}

struct DilationDefects {
  double idempotence = 0.0;   // ||Q^2 - Q||_max
  double eigenvector = 0.0;   // ||Q psi - psi||
  double unit_norm = 0.0;     // | ||psi|| - 1 |
  double compression = 0.0;   // ||[Q_u]_{11} - K^u||_max
};

inline DilationDefects dilation_defects(const FiniteDpp& dpp, std::size_t u, const DilationPair& pair) {
  const auto n = static_cast<Eigen::Index>(dpp.n());
  const CMatrix palm = palm_matrix(dpp, u).matrix();
  return {max_abs(pair.q * pair.q - pair.q), (pair.q * pair.psi_u - pair.psi_u).norm(),
          std::abs(pair.psi_u.norm() - 1.0), max_abs(pair.q_u.topLeftCorner(n, n) - palm)};
}

}  // namespace dppalm
