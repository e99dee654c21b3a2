#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "entmon/linalg.hpp"
#include "entmon/random.hpp"
#include "support.hpp"

namespace entmon {
namespace {

using testing::kron_by_loops;
using testing::partial_trace_by_loops;
using testing::partial_transpose_by_loops;
using testing::random_hermitian;
using testing::random_matrix;

const double kLog2 = std::numbers::ln2;

ComplexMatrix bell_projector() {
  const double s = 1.0 / std::sqrt(2.0);
  const Vector v{s, 0.0, 0.0, s};
  return ComplexMatrix::projector(v);
}

TEST(Tensor, IdentitiesGiveIdentity) {
  EXPECT_EQ(tensor(ComplexMatrix::identity(2), ComplexMatrix::identity(2)), ComplexMatrix::identity(4));
}

TEST(Tensor, BasisProjectorsPlaceSingleEntry) {
  const Vector e0{1.0, 0.0};
  const Vector e1{0.0, 1.0};
  const auto p = tensor(ComplexMatrix::projector(e0), ComplexMatrix::projector(e1));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(p(i, j), Complex(i == 1 && j == 1 ? 1.0 : 0.0));
}

TEST(Tensor, MatchesIndexLoopsOnRectangularFactors) {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_matrix(2, 3, rng);
    const auto b = random_matrix(3, 2, rng);
    EXPECT_EQ(max_abs_diff(tensor(a, b), kron_by_loops(a, b)), 0.0);
  }
}

TEST(PartialTrace, ProductStateGivesFactor) {
  Rng rng(2);
  const auto a = random_density(2, 2, rng);
  const auto b = random_density(3, 2, rng);
  const std::vector<std::size_t> dims{2, 3};
  EXPECT_LT(max_abs_diff(partial_trace(tensor(a, b), dims, 1), a), 1e-14);
  EXPECT_LT(max_abs_diff(partial_trace(tensor(a, b), dims, 0), b), 1e-14);
}

TEST(PartialTrace, BellMarginalIsMaximallyMixed) {
  const std::vector<std::size_t> dims{2, 2};
  EXPECT_LT(max_abs_diff(partial_trace(bell_projector(), dims, 1), 0.5 * ComplexMatrix::identity(2)), 1e-15);
}

TEST(PartialTrace, MatchesIndexLoops) {
  Rng rng(3);
  for (std::size_t da = 1; da <= 4; ++da)
    for (std::size_t db = 1; db <= 4; ++db) {
      const auto rho = random_density(da * db, da * db, rng);
      const std::vector<std::size_t> dims{da, db};
      for (std::size_t drop = 0; drop < 2; ++drop)
        EXPECT_LT(max_abs_diff(partial_trace(rho, dims, drop), partial_trace_by_loops(rho, da, db, drop)), 1e-15);
    }
}

TEST(PartialTrace, ThreeRegistersMatchesNestedTraces) {
  Rng rng(4);
  const auto rho = random_density(12, 12, rng);
  const std::vector<std::size_t> dims{2, 3, 2};
  const std::vector<std::size_t> drop{1, 2};
  // Tr_{BC} = Tr_B of the (A, BC) grouping.
  EXPECT_LT(max_abs_diff(partial_trace(rho, dims, drop), partial_trace_by_loops(rho, 2, 6, 1)), 1e-15);
  const std::vector<std::size_t> drop_a{0};
  EXPECT_LT(max_abs_diff(partial_trace(rho, dims, drop_a), partial_trace_by_loops(rho, 2, 6, 0)), 1e-15);
}

TEST(PartialTrace, AdjointOfIdentityExtension) {
  Rng rng(5);
  const auto rho = random_density(6, 6, rng);
  const auto a = random_hermitian(2, rng);
  const std::vector<std::size_t> dims{2, 3};
  const Complex lhs = trace_of_product(tensor(a, ComplexMatrix::identity(3)), rho);
  const Complex rhs = trace_of_product(a, partial_trace(rho, dims, 1));
  EXPECT_LT(std::abs(lhs - rhs), 1e-13);
}

TEST(PartialTrace, RejectsMismatchedDimensions) {
  const std::vector<std::size_t> dims{2, 3};
  EXPECT_THROW(partial_trace(ComplexMatrix::identity(4), dims, 0), StructuralError);
  EXPECT_THROW(partial_trace(ComplexMatrix::identity(6), dims, 2), StructuralError);
}

TEST(PartialTranspose, BellSpectrum) {
  const std::vector<std::size_t> dims{2, 2};
  const auto ev = hermitian_eigenvalues(partial_transpose(bell_projector(), dims, 1));
  const std::vector<double> expected{0.5, 0.5, 0.5, -0.5};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(ev[i], expected[i], 1e-14);
}

TEST(PartialTranspose, MatchesIndexLoops) {
  Rng rng(6);
  for (std::size_t da = 1; da <= 3; ++da)
    for (std::size_t db = 1; db <= 4; ++db) {
      const auto rho = random_density(da * db, da * db, rng);
      const std::vector<std::size_t> dims{da, db};
      for (std::size_t p = 0; p < 2; ++p)
        EXPECT_EQ(partial_transpose(rho, dims, p), partial_transpose_by_loops(rho, da, db, p));
    }
}

TEST(PartialTranspose, InvolutionAndInvariants) {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const auto rho = random_density(6, 1 + uniform_index(6, rng), rng);
    const std::vector<std::size_t> dims{2, 3};
    const auto pt = partial_transpose(rho, dims, 1);
    EXPECT_EQ(partial_transpose(pt, dims, 1), rho);
    EXPECT_LT(std::abs(pt.trace() - rho.trace()), 1e-14);
    EXPECT_LT(hermiticity_defect(pt), 1e-15);
  }
}

TEST(PartialTranspose, ProductStatesStayPositive) {
  Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    const auto a = random_density(3, 3, rng);
    const auto b = random_density(2, 2, rng);
    const std::vector<std::size_t> dims{3, 2};
    const auto pt = partial_transpose(tensor(a, b), dims, 1);
    EXPECT_LT(max_abs_diff(pt, tensor(a, b.transpose())), 1e-15);
    EXPECT_GE(hermitian_eigenvalues(pt).back(), -1e-13);
  }
}

TEST(PartialTranspose, RejectsMismatchedDimensions) {
  const std::vector<std::size_t> dims{2, 2};
  EXPECT_THROW(partial_transpose(ComplexMatrix::identity(6), dims, 0), StructuralError);
}

TEST(PermuteRegisters, SwapMapsProductFactors) {
  Rng rng(9);
  const auto a = random_density(2, 2, rng);
  const auto b = random_density(3, 3, rng);
  const std::vector<std::size_t> dims{2, 3};
  const std::vector<std::size_t> order{1, 0};
  EXPECT_LT(max_abs_diff(permute_registers(tensor(a, b), dims, order), tensor(b, a)), 1e-15);
}

TEST(EmbedOperator, MiddleRegister) {
  Rng rng(10);
  const auto op = random_matrix(3, 3, rng);
  const std::vector<std::size_t> dims{2, 3, 2};
  const std::vector<std::size_t> targets{1};
  const auto expected = tensor(tensor(ComplexMatrix::identity(2), op), ComplexMatrix::identity(2));
  EXPECT_LT(max_abs_diff(embed_operator(op, dims, targets), expected), 1e-15);
}

TEST(Eigensystem, IdentityHasUnitSpectrum) {
  for (std::size_t d = 1; d <= 6; ++d)
    for (double v : hermitian_eigenvalues(ComplexMatrix::identity(d))) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(Eigensystem, DiagonalIsSortedDescending) {
  const std::vector<double> d{3.0, 1.0, 2.0};
  const auto ev = hermitian_eigenvalues(ComplexMatrix::diagonal(d));
  EXPECT_EQ(ev, (std::vector<double>{3.0, 2.0, 1.0}));
}

TEST(Eigensystem, ReconstructsRandomHermitian) {
  Rng rng(12);
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto a = random_hermitian(n, rng);
    const auto spec = hermitian_eigensystem(a);
    EXPECT_LT(unitarity_defect(spec.eigenvectors), 1e-12);
    const auto back = apply_spectral_function(spec, [](double x) { return x; });
    EXPECT_LT(max_abs_diff(back, a), 1e-10);
    for (std::size_t k = 1; k < n; ++k) EXPECT_GE(spec.eigenvalues[k - 1], spec.eigenvalues[k]);
  }
}

TEST(Eigensystem, AgreesWithReferenceSolver) {
  Rng rng(13);
  for (std::size_t n = 2; n <= 16; n += 2) {
    const auto a = random_hermitian(n, rng);
    auto ours = hermitian_eigenvalues(a);
    std::reverse(ours.begin(), ours.end());
    EXPECT_LT(testing::max_abs_diff(ours, testing::reference_eigenvalues(a)), 1e-11);
  }
}

TEST(Eigensystem, RejectsNonHermitian) {
  ComplexMatrix a(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(hermitian_eigensystem(a), ContractError);
}

TEST(SingularValues, AgreeWithReferenceTraceNorm) {
  Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_matrix(4, 4, rng);
    EXPECT_NEAR(trace_norm(a), testing::reference_trace_norm(a), 1e-11);
    const auto sv = singular_values(a);
    for (std::size_t k = 1; k < sv.size(); ++k) EXPECT_GE(sv[k - 1], sv[k]);
  }
}

TEST(TraceNorm, DensityOperatorsHaveUnitNorm) {
  Rng rng(15);
  for (std::size_t d = 1; d <= 6; ++d) EXPECT_NEAR(trace_norm(random_density(d, d, rng)), 1.0, 1e-13);
}

TEST(TraceNorm, NormAxioms) {
  Rng rng(16);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_hermitian(4, rng);
    const auto b = random_hermitian(4, rng);
    EXPECT_LE(trace_norm(a + b), trace_norm(a) + trace_norm(b) + 1e-12);
    EXPECT_NEAR(trace_norm(-2.5 * a), 2.5 * trace_norm(a), 1e-11);
    EXPECT_GE(trace_norm(a), 0.0);
  }
}

TEST(TraceNorm, MultiplicativeOnTensorProducts) {
  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_hermitian(2 + uniform_index(3, rng), rng);
    const auto b = random_hermitian(2 + uniform_index(3, rng), rng);
    const double lhs = trace_norm(tensor(a, b));
    EXPECT_LT(std::abs(lhs - trace_norm(a) * trace_norm(b)), 1e-10 * std::max(1.0, lhs));
  }
}

TEST(TraceNorm, AdditiveOnOrthogonalSupports) {
  Rng rng(18);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_hermitian(3, rng);
    const auto b = random_hermitian(3, rng);
    ComplexMatrix block(6, 6);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        block(i, j) = a(i, j);
        block(i + 3, j + 3) = b(i, j);
      }
    // Conjugating by a unitary hides the block structure from the solver.
    const auto u = haar_unitary(6, rng);
    EXPECT_LT(std::abs(trace_norm(sandwich(u, block)) - trace_norm(a) - trace_norm(b)), 1e-10);
  }
}

TEST(Entropy, PureAndMaximallyMixed) {
  Rng rng(19);
  EXPECT_NEAR(von_neumann_entropy(random_density(4, 1, rng)), 0.0, 1e-12);
  for (std::size_t d = 1; d <= 6; ++d)
    EXPECT_NEAR(von_neumann_entropy((1.0 / d) * ComplexMatrix::identity(d)), std::log(double(d)), 1e-14);
  const std::vector<double> half{0.5, 0.5, 0.0, 0.0};
  EXPECT_NEAR(von_neumann_entropy(ComplexMatrix::diagonal(half)), kLog2, 1e-15);
  EXPECT_NEAR(von_neumann_entropy(partial_trace(bell_projector(), std::vector<std::size_t>{2, 2}, 1)), kLog2,
              1e-14);
}

TEST(RelativeEntropy, SelfIsZero) {
  Rng rng(20);
  for (int t = 0; t < 20; ++t) {
    const auto rho = random_density(4, 1 + uniform_index(4, rng), rng);
    EXPECT_NEAR(relative_entropy(rho, rho), 0.0, 1e-10);
  }
}

TEST(RelativeEntropy, PureAgainstMaximallyMixed) {
  Rng rng(21);
  for (std::size_t d = 2; d <= 5; ++d)
    EXPECT_NEAR(relative_entropy(random_density(d, 1, rng), (1.0 / d) * ComplexMatrix::identity(d)),
                std::log(double(d)), 1e-12);
}

TEST(RelativeEntropy, DisjointSupportIsInfinite) {
  const std::vector<double> p0{1.0, 0.0};
  const std::vector<double> p1{0.0, 1.0};
  const double v = relative_entropy(ComplexMatrix::diagonal(p0), ComplexMatrix::diagonal(p1));
  EXPECT_TRUE(std::isinf(v) && v > 0);
}

TEST(RelativeEntropy, MatchesReferenceOnFullRankStates) {
  Rng rng(22);
  for (int t = 0; t < 30; ++t) {
    const auto rho = random_density(4, 4, rng);
    const auto sigma = random_density(4, 4, rng);
    const double v = relative_entropy(rho, sigma);
    EXPECT_NEAR(v, testing::reference_relative_entropy(rho, sigma), 1e-10);
    EXPECT_GT(v, 0.0);
  }
}

TEST(RelativeEntropy, JointlyConvex) {
  Rng rng(23);
  for (int t = 0; t < 30; ++t) {
    const auto r1 = random_density(3, 3, rng), r2 = random_density(3, 3, rng);
    const auto s1 = random_density(3, 3, rng), s2 = random_density(3, 3, rng);
    const double p = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double mixed = relative_entropy(p * r1 + (1 - p) * r2, p * s1 + (1 - p) * s2);
    EXPECT_LE(mixed, p * relative_entropy(r1, s1) + (1 - p) * relative_entropy(r2, s2) + 1e-12);
  }
}

TEST(RelativeEntropy, FlaggedDecomposition) {
  // D(sum p_i rho_i (x) |i><i| || sum q_i sigma_i (x) |i><i|) = D(p||q) + sum p_i D(rho_i||sigma_i).
  Rng rng(24);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + uniform_index(2, rng);
    const auto p = dirichlet_uniform(n, rng);
    const auto q = dirichlet_uniform(n, rng);
    ComplexMatrix lhs_rho(3 * n, 3 * n), lhs_sigma(3 * n, 3 * n);
    double rhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = random_density(3, 3, rng);
      const auto s = random_density(3, 3, rng);
      std::vector<double> flag(n, 0.0);
      flag[i] = 1.0;
      lhs_rho += p[i] * tensor(r, ComplexMatrix::diagonal(flag));
      lhs_sigma += q[i] * tensor(s, ComplexMatrix::diagonal(flag));
      rhs += p[i] * std::log(p[i] / q[i]) + p[i] * relative_entropy(r, s);
    }
    EXPECT_NEAR(relative_entropy(lhs_rho, lhs_sigma), rhs, 1e-10);
  }
}

TEST(Random, DerivedStreamsAreReproducibleAndDistinct) {
  auto a = derive_rng(1, "stream", 0, 3);
  auto b = derive_rng(1, "stream", 0, 3);
  auto c = derive_rng(1, "stream", 0, 4);
  auto d = derive_rng(1, "other", 0, 3);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
  EXPECT_EQ(stable_hash("abc"), stable_hash("abc"));
  EXPECT_NE(stable_hash("abc"), stable_hash("abd"));
}

TEST(Random, DirichletIsOnSimplex) {
  Rng rng(25);
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto p = dirichlet_uniform(n, rng);
    double s = 0.0;
    for (double x : p) {
      EXPECT_GE(x, 0.0);
      s += x;
    }
    EXPECT_NEAR(s, 1.0, 1e-14);
  }
}

TEST(Random, HaarUnitaryIsUnitary) {
  Rng rng(26);
  for (std::size_t d = 1; d <= 8; ++d) EXPECT_LT(unitarity_defect(haar_unitary(d, rng)), 1e-12);
  EXPECT_NEAR(std::abs(haar_unitary(1, rng)(0, 0)), 1.0, 1e-15);
}

TEST(Random, HaarFirstEntryMoment) {
  // E |U_00|^2 = 1/d for Haar unitaries.
  Rng rng(27);
  const std::size_t d = 4, n = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = std::norm(haar_unitary(d, rng)(0, 0));
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / n);
  EXPECT_LT(std::abs(mean - 1.0 / d), 3.0 * se);
  // Second moment 2 / (d (d + 1)).
  EXPECT_NEAR(sum_sq / n, 2.0 / (d * (d + 1)), 0.01);
}

TEST(Random, DensityHasRequestedRank) {
  Rng rng(28);
  for (std::size_t d = 1; d <= 5; ++d)
    for (std::size_t r = 1; r <= d; ++r) {
      const auto rho = random_density(d, r, rng);
      EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
      const auto ev = hermitian_eigenvalues(rho);
      std::size_t rank = 0;
      for (double v : ev) {
        EXPECT_GE(v, -1e-12);
        if (v > 1e-12) ++rank;
      }
      EXPECT_EQ(rank, r);
    }
  EXPECT_NEAR(purity(random_density(4, 1, rng)), 1.0, 1e-12);
}

TEST(Random, DensityRejectsBadRank) {
  Rng rng(29);
  EXPECT_THROW(random_density(3, 0, rng), StructuralError);
  EXPECT_THROW(random_density(3, 4, rng), StructuralError);
}

}  // namespace
}  // namespace entmon
