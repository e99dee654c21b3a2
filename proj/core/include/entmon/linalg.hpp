#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "entmon/matrix.hpp"

namespace entmon {

using Dims = std::vector<std::size_t>;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kJacobiTol = 1e-13;
inline constexpr double kEntropyCutoff = 1e-15;
inline constexpr double kSupportCutoff = 1e-12;

struct HermitianSpectrum {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // columns, unitary
};

std::size_t total_dimension(std::span<const std::size_t> dims);

/// Kronecker product, index (i_a * rows_b + i_b).
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
Vector tensor(std::span<const Complex> a, std::span<const Complex> b);

/// Traces out register `drop`. Registers are listed slowest-first.
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                            std::size_t drop);
/// Traces out every register whose index appears in `drop`.
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                            std::span<const std::size_t> drop);

ComplexMatrix partial_transpose(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                                std::size_t party);
ComplexMatrix partial_transpose(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                                std::span<const std::size_t> parties);

/// Reorders tensor factors: register k of the result is register order[k] of the input.
ComplexMatrix permute_registers(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                                std::span<const std::size_t> order);

/// Lifts `op`, acting on the product of `targets` (in the listed order), to the
/// full space with identity elsewhere.
ComplexMatrix embed_operator(const ComplexMatrix& op, std::span<const std::size_t> dims,
                             std::span<const std::size_t> targets);

/// Cyclic complex Jacobi diagonalization. Throws ContractError on
/// non-Hermitian input (max-abs defect above herm_tol).
HermitianSpectrum hermitian_eigensystem(const ComplexMatrix& a, double herm_tol = kHermitianTol);
/// Same iteration without accumulating eigenvectors.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a, double herm_tol = kHermitianTol);

/// Singular values, descending (one-sided Jacobi).
std::vector<double> singular_values(const ComplexMatrix& a);

/// V f(diag) V^dagger.
ComplexMatrix apply_spectral_function(const HermitianSpectrum& spec,
                                      const std::function<double(double)>& f);

/// Sum of singular values. Hermitian inputs take the eigenvalue path.
double trace_norm(const ComplexMatrix& a);

double purity(const ComplexMatrix& rho);

/// -sum lambda log lambda, natural log, 0 log 0 = 0.
double von_neumann_entropy(const ComplexMatrix& rho);
double entropy_of_spectrum(std::span<const double> eigenvalues);

/// Tr rho log rho - Tr rho log sigma in nats; +infinity when supp(rho) is not
/// inside supp(sigma).
double relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma);
/// Variant reusing a precomputed decomposition of sigma.
double relative_entropy(const ComplexMatrix& rho, double neg_entropy_rho,
                        const HermitianSpectrum& sigma_spec);

}  // namespace entmon
