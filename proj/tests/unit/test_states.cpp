#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "entmon/measures.hpp"
#include "entmon/states.hpp"
#include "support.hpp"

namespace entmon {
namespace {

ComplexMatrix basis_projector(std::size_t d, std::size_t k) { return ComplexMatrix::projector(basis_vector(d, k)); }

TEST(DensityOperator, AcceptsValidState) {
  Rng rng(1);
  const DensityOperator rho(random_density(6, 3, rng), Dims{2, 3});
  EXPECT_EQ(rho.dims(), (Dims{2, 3}));
  EXPECT_EQ(rho.registers()[1].label, "B");
  EXPECT_EQ(rho.registers()[1].owner, "B");
  EXPECT_EQ(rho.index_of("B"), 1u);
  EXPECT_THROW(rho.index_of("C"), StructuralError);
  EXPECT_EQ(rho.owners(), (std::vector<std::string>{"A", "B"}));
}

TEST(DensityOperator, RejectsBrokenInvariants) {
  ComplexMatrix nonherm = 0.5 * ComplexMatrix::identity(2);
  nonherm(0, 1) = 0.1;
  EXPECT_THROW(DensityOperator(nonherm, Dims{2}), ContractError);
  EXPECT_THROW(DensityOperator(ComplexMatrix::identity(2), Dims{2}), ContractError);
  const std::vector<double> neg{1.5, -0.5};
  EXPECT_THROW(DensityOperator(ComplexMatrix::diagonal(neg), Dims{2}), ContractError);
  EXPECT_THROW(DensityOperator(0.25 * ComplexMatrix::identity(4), Dims{2, 3}), StructuralError);
  EXPECT_THROW(DensityOperator(ComplexMatrix(2, 3), Dims{2}), StructuralError);
  EXPECT_THROW(DensityOperator(0.25 * ComplexMatrix::identity(4),
                               std::vector<Register>{{"A", "A", 2}, {"A", "B", 2}}),
               StructuralError);
}

TEST(DensityOperator, TrustedConstructionSkipsOnlyPositivity) {
  const std::vector<double> neg{1.5, -0.5};
  const std::vector<Register> regs{{"A", "A", 2}};
  EXPECT_NO_THROW(DensityOperator::from_trusted(ComplexMatrix::diagonal(neg), regs));
  EXPECT_THROW(DensityOperator::from_trusted(ComplexMatrix::identity(2), regs), ContractError);
}

TEST(Ensemble, ValidatesWeightsAndLayout) {
  Rng rng(2);
  const auto a = random_state({2, 2}, rng);
  const auto b = random_state({2, 2}, rng);
  const auto c = random_state({2, 3}, rng);
  EXPECT_THROW(Ensemble({0.5, 0.6}, {a, b}), ContractError);
  EXPECT_THROW(Ensemble({1.5, -0.5}, {a, b}), ContractError);
  EXPECT_THROW(Ensemble({0.5, 0.5}, {a, c}), StructuralError);
  EXPECT_THROW(Ensemble({1.0}, {a, b}), StructuralError);
  const Ensemble e({0.25, 0.75}, {a, b});
  EXPECT_EQ(e.labels(), (std::vector<std::string>{"0", "1"}));
  EXPECT_LT(max_abs_diff(e.average().matrix(), 0.25 * a.matrix() + 0.75 * b.matrix()), 1e-15);
}

TEST(FlagBasis, RandomBasisIsOrthonormal) {
  Rng rng(3);
  for (std::size_t d = 1; d <= 6; ++d)
    for (std::size_t n = 1; n <= d; ++n) {
      const auto basis = FlagBasis::random("B", d, n, rng);
      EXPECT_EQ(basis.size(), n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          EXPECT_NEAR(std::abs(inner(basis.vector(i), basis.vector(j))), i == j ? 1.0 : 0.0, 1e-12);
    }
}

TEST(FlagBasis, RejectsNonOrthonormalVectors) {
  ComplexMatrix v(2, 2);
  v(0, 0) = 1.0;
  v(0, 1) = 1.0;
  EXPECT_THROW(FlagBasis("B", v), ContractError);
  Rng rng(4);
  EXPECT_THROW(FlagBasis::random("B", 2, 3, rng), StructuralError);
}

TEST(FlagMix, SingleStateIsProductWithFirstFlag) {
  Rng rng(5);
  const auto rho = random_state({2, 2}, rng);
  const auto f = flag_mix(Ensemble({1.0}, {rho}), "B", FlagBasis::computational("B", 3));
  EXPECT_LT(max_abs_diff(f.matrix(), tensor(rho.matrix(), basis_projector(3, 0))), 1e-15);
  const auto& flag = f.registers().back();
  EXPECT_EQ(flag.label, "B'");
  EXPECT_EQ(flag.owner, "B");
  EXPECT_EQ(flag.dim, 3u);
}

TEST(FlagMix, IdenticalStatesGiveDiagonalFlag) {
  Rng rng(6);
  const auto rho = random_state({2, 3}, rng);
  const std::vector<double> p{0.2, 0.3, 0.5};
  const auto f = flag_mix(Ensemble(p, {rho, rho, rho}), "A", FlagBasis::computational("A", 3));
  EXPECT_LT(max_abs_diff(f.matrix(), tensor(rho.matrix(), ComplexMatrix::diagonal(p))), 1e-15);
  EXPECT_EQ(f.registers().back().label, "A'");
}

TEST(FlagMix, TracingFlagGivesAverageAndSpectraUnite) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const auto ens = random_ensemble({2, 2}, 3, rng);
    const auto f = flag_mix(ens, "B", FlagBasis::random("B", 4, 3, rng));
    const auto dims = f.dims();
    EXPECT_LT(max_abs_diff(partial_trace(f.matrix(), dims, 2), ens.average().matrix()), 1e-14);
    std::vector<double> expected;
    for (std::size_t i = 0; i < ens.size(); ++i)
      for (double v : hermitian_eigenvalues(ens.states()[i].matrix())) expected.push_back(ens.weights()[i] * v);
    for (std::size_t k = expected.size(); k < f.dimension(); ++k) expected.push_back(0.0);
    std::sort(expected.begin(), expected.end());
    auto got = hermitian_eigenvalues(f.matrix());
    std::sort(got.begin(), got.end());
    EXPECT_LT(testing::max_abs_diff(got, expected), 1e-12);
  }
}

TEST(FlagMix, RejectsTooFewFlagsAndUnknownParty) {
  Rng rng(8);
  const auto ens = random_ensemble({2, 2}, 3, rng);
  EXPECT_THROW(flag_mix(ens, "B", FlagBasis::computational("B", 2)), StructuralError);
  EXPECT_THROW(flag_mix(ens, "C", FlagBasis::computational("C", 3)), StructuralError);
}

TEST(FlagMix, FlagSingleMatchesProduct) {
  Rng rng(9);
  const auto rho = random_state({2, 2}, rng);
  const auto basis = FlagBasis::random("A", 3, 3, rng);
  const auto f = flag_single(rho, 2, "A", basis);
  EXPECT_LT(max_abs_diff(f.matrix(), tensor(rho.matrix(), ComplexMatrix::projector(basis.vector(2)))), 1e-15);
  EXPECT_THROW(flag_single(rho, 3, "A", basis), StructuralError);
}

TEST(FlagMix, RepeatedFlagsGetFreshLabels) {
  Rng rng(10);
  const auto rho = random_state({2, 2}, rng);
  const auto once = flag_single(rho, 0, "B", FlagBasis::computational("B", 2));
  const auto twice = flag_single(once, 1, "B", FlagBasis::computational("B", 2));
  EXPECT_EQ(twice.registers().back().label, "B''");
  EXPECT_EQ(fresh_register_label(twice, "A"), "A'");
}

TEST(EmbedAncilla, TrivialAncillaKeepsMatrix) {
  Rng rng(11);
  const auto rho = random_state({2, 3}, rng);
  const auto one = single_register_state(ComplexMatrix::identity(1), "X", "X");
  EXPECT_EQ(embed_ancilla(rho, one, "A").matrix(), rho.matrix());
}

TEST(EmbedAncilla, PartialTraceAndPurity) {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto rho = random_state({2, 2}, rng);
    const auto sigma = single_register_state(random_density(3, 2, rng), "X", "X");
    const auto big = embed_ancilla(rho, sigma, "A");
    EXPECT_EQ(big.registers().back().owner, "A");
    EXPECT_LT(max_abs_diff(partial_trace(big.matrix(), big.dims(), 2), rho.matrix()), 1e-14);
    EXPECT_NEAR(purity(big.matrix()), purity(rho.matrix()) * purity(sigma.matrix()), 1e-13);
  }
}

TEST(EmbedAncilla, RejectsUnknownSite) {
  Rng rng(13);
  const auto rho = random_state({2, 2}, rng);
  const auto sigma = single_register_state(random_density(2, 2, rng), "X", "X");
  EXPECT_THROW(embed_ancilla(rho, sigma, "Z"), StructuralError);
}

TEST(MaxEntangled, PureWithMaximallyMixedMarginals) {
  for (std::size_t d = 2; d <= 5; ++d) {
    const auto phi = max_entangled(d);
    EXPECT_NEAR(purity(phi.matrix()), 1.0, 1e-14);
    const auto id = (1.0 / d) * ComplexMatrix::identity(d);
    EXPECT_LT(max_abs_diff(partial_trace(phi.matrix(), phi.dims(), 0), id), 1e-15);
    EXPECT_LT(max_abs_diff(partial_trace(phi.matrix(), phi.dims(), 1), id), 1e-15);
  }
  EXPECT_THROW(max_entangled(1), StructuralError);
}

TEST(Isotropic, EndpointsAndPartialTransposeThreshold) {
  for (std::size_t d = 2; d <= 4; ++d) {
    EXPECT_LT(max_abs_diff(isotropic(d, 1.0).matrix(), max_entangled(d).matrix()), 1e-15);
    const double f = 1.0 / double(d * d);
    EXPECT_LT(max_abs_diff(isotropic(d, f).matrix(), f * ComplexMatrix::identity(d * d)), 1e-15);
  }
  // For d = 2 the smallest eigenvalue of the partial transpose is (1 - 2F) / 2.
  for (double fid : {0.3, 0.5, 0.6, 0.9}) {
    const auto rho = isotropic(2, fid);
    const auto pt = partial_transpose(rho.matrix(), rho.dims(), 1);
    EXPECT_NEAR(hermitian_eigenvalues(pt).back(), (1.0 - 2.0 * fid) / 2.0, 1e-14);
  }
  EXPECT_THROW(isotropic(2, 1.1), StructuralError);
  EXPECT_THROW(isotropic(2, -0.1), StructuralError);
}

TEST(RandomSeparable, PositivePartialTranspose) {
  Rng rng(14);
  for (int t = 0; t < 30; ++t) {
    const auto rho = random_separable(2, 3, rng);
    EXPECT_GE(hermitian_eigenvalues(partial_transpose(rho.matrix(), rho.dims(), 1)).back(), -1e-13);
    EXPECT_NEAR(negativity(rho), 1.0, 1e-12);
  }
  const auto pure = random_separable(3, 3, 1, rng);
  EXPECT_NEAR(purity(pure.matrix()), 1.0, 1e-13);
  EXPECT_THROW(random_separable(2, 2, 0, rng), StructuralError);
}

TEST(RandomState, ReproducibleFromSeed) {
  auto r1 = derive_rng(5, "state", 0, 0);
  auto r2 = derive_rng(5, "state", 0, 0);
  EXPECT_EQ(random_state({2, 3}, r1).matrix(), random_state({2, 3}, r2).matrix());
}

TEST(RandomEnsemble, SizesAndWeights) {
  Rng rng(15);
  const auto e = random_ensemble({2, 2, 2}, 4, rng);
  EXPECT_EQ(e.size(), 4u);
  double s = 0.0;
  for (double w : e.weights()) s += w;
  EXPECT_NEAR(s, 1.0, 1e-14);
  EXPECT_EQ(e.states()[3].dims(), (Dims{2, 2, 2}));
}

}  // namespace
}  // namespace entmon
