#pragma once

#include <Eigen/Eigenvalues>

#include "entmon/linalg.hpp"

namespace entmon::detail {

// Tridiagonal-QR eigensystem for hot loops; same layout as hermitian_eigensystem.
inline HermitianSpectrum fast_eigensystem(const ComplexMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.rows());
  // Row-major storage read column-major is the transpose, i.e. the conjugate.
  const Eigen::Map<const Eigen::MatrixXcd> m(a.data().data(), n, n);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.conjugate());
  HermitianSpectrum spec{std::vector<double>(a.rows()), ComplexMatrix(a.rows(), a.rows())};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;  // ascending to descending
    spec.eigenvalues[k] = es.eigenvalues()(src);
    for (Eigen::Index i = 0; i < n; ++i) spec.eigenvectors(i, k) = es.eigenvectors()(i, src);
  }
  return spec;
}

}  // namespace entmon::detail
