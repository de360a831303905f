#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "dppalm/errors.hpp"

namespace dppalm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double hermitian_defect(const CMatrix& m) { return max_abs(m - m.adjoint()); }

// Spectral data of a Hermitian matrix. Eigenvalues are sorted descending and
// column k of `eigenvectors` belongs to eigenvalues[k].
struct HermitianEig {
  RVector eigenvalues;
  CMatrix eigenvectors;

  CMatrix reconstruct() const {
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
  }
};

inline HermitianEig hermitian_eig(const CMatrix& k) {
  if (k.rows() != k.cols()) throw domain_error("hermitian_eig: matrix is not square");
  const double scale = 1.0 + max_abs(k);
  if (hermitian_defect(k) > 1e-9 * scale) {
    throw validation_error(condition::non_hermitian,
                           "matrix deviates from its adjoint by " + std::to_string(hermitian_defect(k)));
  }
  const CMatrix sym = 0.5 * (k + k.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw numerical_error("hermitian_eig: eigensolver failed");
  const Eigen::Index n = k.rows();
  HermitianEig out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues(i) = solver.eigenvalues()(n - 1 - i);
    out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

// V f(Lambda) V* for a real function f of the eigenvalues.
template <typename F>
CMatrix hermitian_function(const HermitianEig& eig, F&& f) {
  RVector mapped(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = f(eig.eigenvalues(i));
  return eig.eigenvectors * mapped.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
}

/// Hermitian positive semidefinite square root.
///
/// Eigenvalues in [-1e-6, 0) are treated as round-off and mapped to zero;
/// anything more negative means the input was not PSD.
inline CMatrix psd_sqrt(const CMatrix& k) {
  const HermitianEig eig = hermitian_eig(k);
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) < -1e-6) {
      throw validation_error(condition::spectrum,
                             "psd_sqrt: negative eigenvalue " + std::to_string(eig.eigenvalues(i)));
    }
  }
  CMatrix s = hermitian_function(eig, [](double x) { return std::sqrt(std::max(x, 0.0)); });
  return 0.5 * (s + s.adjoint());
}

}  // namespace dppalm
