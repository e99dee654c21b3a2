#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "entmon/linalg.hpp"
#include "entmon/random.hpp"

namespace entmon::testing {

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (auto& z : m.data()) z = complex_normal(rng);
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
  const ComplexMatrix g = random_matrix(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return e;
}

// Reference spectrum from a different algorithm (tridiagonal QR), ascending.
inline std::vector<double> reference_eigenvalues(const ComplexMatrix& m) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(m), Eigen::EigenvaluesOnly);
  const auto& v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

inline double reference_trace_norm(const ComplexMatrix& m) {
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
  return svd.singularValues().sum();
}

// -Tr rho log rho + ... computed through matrix logarithms of the reference solver.
inline double reference_relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  auto log_of = [](const ComplexMatrix& m) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(m));
    const Eigen::VectorXd l = es.eigenvalues().array().log();
    return Eigen::MatrixXcd(es.eigenvectors() * l.asDiagonal() * es.eigenvectors().adjoint());
  };
  const Eigen::MatrixXcd r = to_eigen(rho);
  return (r * (log_of(rho) - log_of(sigma))).trace().real();
}

// Kronecker product by explicit four-index summation.
inline ComplexMatrix kron_by_loops(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Bipartite partial trace by index summation; drop 0 removes A, 1 removes B.
inline ComplexMatrix partial_trace_by_loops(const ComplexMatrix& rho, std::size_t da, std::size_t db,
                                            std::size_t drop) {
  if (drop == 1) {
    ComplexMatrix out(da, da);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j)
        for (std::size_t k = 0; k < db; ++k) out(i, j) += rho(i * db + k, j * db + k);
    return out;
  }
  ComplexMatrix out(db, db);
  for (std::size_t k = 0; k < db; ++k)
    for (std::size_t l = 0; l < db; ++l)
      for (std::size_t i = 0; i < da; ++i) out(k, l) += rho(i * db + k, i * db + l);
  return out;
}

// Bipartite partial transpose by index swapping.
inline ComplexMatrix partial_transpose_by_loops(const ComplexMatrix& rho, std::size_t da, std::size_t db,
                                                std::size_t party) {
  ComplexMatrix out(da * db, da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t k = 0; k < db; ++k)
      for (std::size_t j = 0; j < da; ++j)
        for (std::size_t l = 0; l < db; ++l) {
          const std::size_t r = party == 0 ? j * db + k : i * db + l;
          const std::size_t c = party == 0 ? i * db + l : j * db + k;
          out(r, c) = rho(i * db + k, j * db + l);
        }
  return out;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace entmon::testing
