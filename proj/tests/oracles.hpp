#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's numerics; agreement with the library is the point of the check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

// J1 by its ascending series in long double.
inline long double j1_series(long double x) {
  const long double h = x / 2.0L;
  long double term = h;  // m = 0
  long double sum = term;
  for (int m = 1; m < 200; ++m) {
    term *= -h * h / (static_cast<long double>(m) * (m + 1));
    sum += term;
    if (std::fabs(term) < 1e-30L * std::fabs(sum) && m > 2 * std::fabs(h)) break;
  }
  return sum;
}

// Legendre polynomials of degree <= 3 in closed form.
inline double legendre(int ell, double t) {
  switch (ell) {
    case 0: return 1.0;
    case 1: return t;
    case 2: return 0.5 * (3.0 * t * t - 1.0);
    case 3: return 0.5 * (5.0 * t * t * t - 3.0 * t);
  }
  return std::nan("");
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
struct GaussRule {
  std::vector<double> x, w;
};

inline GaussRule gauss_rule(int n) {
  GaussRule g{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    long double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    long double dp = 0.0L;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1.0L, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2.0L * k - 1.0L) * z * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0L);
      const long double step = p1 / dp;
      z -= step;
      if (std::fabs(step) < 1e-19L) break;
    }
    g.x[i] = static_cast<double>(z);
    g.w[i] = static_cast<double>(2.0L / ((1.0L - z * z) * dp * dp));
  }
  return g;
}

// Composite Gauss-Legendre over the panel edges `edges`.
inline double integrate(const std::function<double(double)>& f, const std::vector<double>& edges, int order = 20) {
  static thread_local std::vector<GaussRule> cache(64);
  GaussRule& g = cache.at(order);
  if (g.x.empty()) g = gauss_rule(order);
  long double total = 0.0L;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double c = 0.5 * (edges[p] + edges[p + 1]);
    const double h = 0.5 * (edges[p + 1] - edges[p]);
    for (int i = 0; i < order; ++i) total += g.w[i] * h * f(c + h * g.x[i]);
  }
  return static_cast<double>(total);
}

inline std::vector<double> uniform_edges(double a, double b, int panels) {
  std::vector<double> e(panels + 1);
  for (int i = 0; i <= panels; ++i) e[i] = a + (b - a) * i / panels;
  return e;
}

inline double rayleigh(double r) { return 2.0 * r * std::exp(-r * r); }

// Radial density of the planar jinc displacement at beta = 1.
inline double jinc_radial(double r) {
  if (r == 0.0) return 0.0;
  const long double j = j1_series(2.0L * r);
  return static_cast<double>(2.0L * j * j / r);
}

// P(X = S) for every S by inclusion-exclusion over inclusion probabilities:
// P(X = S) = sum_{A superset of S} (-1)^{|A \ S|} det K_A.
inline std::vector<double> inclusion_exclusion_law(const CMatrix& k) {
  const int n = static_cast<int>(k.rows());
  const std::uint32_t states = 1u << n;
  std::vector<double> incl(states);
  for (std::uint32_t a = 0; a < states; ++a) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (a >> i & 1u) idx.push_back(i);
    }
    CMatrix sub(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = 0; j < idx.size(); ++j) sub(i, j) = k(idx[i], idx[j]);
    }
    incl[a] = idx.empty() ? 1.0 : sub.determinant().real();
  }
  std::vector<double> law(states, 0.0);
  for (std::uint32_t s = 0; s < states; ++s) {
    for (std::uint32_t a = 0; a < states; ++a) {
      if ((a & s) != s) continue;
      const int extra = __builtin_popcount(a & ~s);
      law[s] += (extra % 2 ? -1.0 : 1.0) * incl[a];
    }
  }
  return law;
}

// Haar-distributed unitary from the QR factorization of a complex Gaussian matrix.
inline CMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng));
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) q.col(j) *= std::polar(1.0, std::arg(r(j, j)));
  return q;
}

// U diag(lambda) U* with lambda in [0, 1]. Eigenvalues are exactly 1 with
// probability `p_one`, exactly 0 with probability `p_zero`.
inline CMatrix random_kernel(int n, std::mt19937_64& rng, double p_one = 0.25, double p_zero = 0.1,
                             std::vector<double>* spectrum = nullptr) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> lambda(n);
  for (double& l : lambda) {
    const double c = u(rng);
    l = c < p_one ? 1.0 : (c < p_one + p_zero ? 0.0 : u(rng));
  }
  if (spectrum) *spectrum = lambda;
  const CMatrix v = random_unitary(n, rng);
  Eigen::VectorXcd d(n);
  for (int i = 0; i < n; ++i) d(i) = lambda[i];
  CMatrix k = v * d.asDiagonal() * v.adjoint();
  // Exact Hermitian symmetry.
  return 0.5 * (k + k.adjoint()).eval();
}

// Random Hermitian matrix with entries of order `scale`.
inline CMatrix random_hermitian(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g;
  CMatrix z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) z(i, j) = scale * Complex(g(rng), g(rng));
  }
  return 0.5 * (z + z.adjoint()).eval();
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
