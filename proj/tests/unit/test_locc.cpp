#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "entmon/locc.hpp"
#include "entmon/measures.hpp"
#include "support.hpp"

namespace entmon {
namespace {

// K on the first of two registers or the second, by explicit Kronecker products.
ComplexMatrix lift(const ComplexMatrix& k, std::size_t party, std::size_t da, std::size_t db) {
  return party == 0 ? testing::kron_by_loops(k, ComplexMatrix::identity(db))
                    : testing::kron_by_loops(ComplexMatrix::identity(da), k);
}

ComplexMatrix cnot() {
  ComplexMatrix u(4, 4);
  u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1.0;
  return u;
}

TEST(KrausInstrument, RejectsIncompleteOperators) {
  EXPECT_THROW(KrausInstrument("A", {0.5 * ComplexMatrix::identity(2)}), ContractError);
  EXPECT_THROW(KrausInstrument("A", {ComplexMatrix::identity(2), ComplexMatrix::identity(3)}), StructuralError);
  EXPECT_NEAR(KrausInstrument::identity("A", 3).completeness_defect(), 0.0, 1e-15);
}

TEST(ApplyInstrument, IdentityKeepsState) {
  Rng rng(1);
  const auto rho = random_state({2, 3}, rng);
  const auto e = apply_instrument(rho, KrausInstrument::identity("B", 3));
  ASSERT_EQ(e.size(), 1u);
  EXPECT_DOUBLE_EQ(e.weights()[0], 1.0);
  EXPECT_LT(max_abs_diff(e.states()[0].matrix(), rho.matrix()), 1e-15);
}

TEST(ApplyInstrument, ProbabilitiesAndPostMeasurementAverage) {
  Rng rng(2);
  for (int t = 0; t < 30; ++t) {
    const auto rho = random_state({2, 3}, rng);
    const std::size_t party = uniform_index(2, rng);
    const std::size_t d = party == 0 ? 2 : 3;
    const auto inst = sample_local_instrument(party == 0 ? "A" : "B", d, 3, rng);
    const auto e = apply_instrument(rho, inst);
    ComplexMatrix expected(6, 6);
    for (const auto& k : inst.kraus_ops()) expected += sandwich(lift(k, party, 2, 3), rho.matrix());
    EXPECT_LT(max_abs_diff(e.average().matrix(), expected), 1e-13);
    for (std::size_t i = 0; i < e.size(); ++i) {
      EXPECT_NEAR(e.states()[i].matrix().trace().real(), 1.0, 1e-13);
      EXPECT_GE(min_eigenvalue(e.states()[i]), -1e-12);
    }
  }
}

TEST(ApplyInstrument, FlagReadoutRecoversEnsemble) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto ens = random_ensemble({2, 2}, 3, rng);
    const auto basis = FlagBasis::computational("B", 3);
    const auto flagged = flag_mix(ens, "B", basis);
    std::vector<ComplexMatrix> projectors;
    for (std::size_t i = 0; i < 3; ++i) projectors.push_back(ComplexMatrix::projector(basis.vector(i)));
    const auto out = apply_instrument(flagged, KrausInstrument::projective("B'", projectors));
    ASSERT_EQ(out.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_NEAR(out.weights()[i], ens.weights()[i], 1e-12);
      const auto expected = tensor(ens.states()[i].matrix(), projectors[i]);
      EXPECT_LT(max_abs_diff(out.states()[i].matrix(), expected), 1e-10);
    }
  }
}

TEST(ApplyInstrument, DropsImpossibleOutcomes) {
  const auto rho = DensityOperator(tensor(ComplexMatrix::projector(basis_vector(2, 0)), 0.5 * ComplexMatrix::identity(2)),
                                   Dims{2, 2});
  const auto inst = KrausInstrument::projective(
      "A", {ComplexMatrix::projector(basis_vector(2, 0)), ComplexMatrix::projector(basis_vector(2, 1))});
  const auto e = apply_instrument(rho, inst);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e.labels()[0], "0");
  EXPECT_THROW(apply_instrument(rho, KrausInstrument::identity("A", 3)), StructuralError);
}

TEST(MeasurementFromUnitary, IdentityGivesTrivialMeasurement) {
  const auto inst = measurement_from_unitary("B", ComplexMatrix::identity(6), 3, FlagBasis::computational("B'", 3));
  ASSERT_EQ(inst.outcomes(), 3u);
  EXPECT_EQ(inst.kraus_ops()[0], ComplexMatrix::identity(2));
  EXPECT_EQ(inst.kraus_ops()[1].max_abs(), 0.0);
  EXPECT_EQ(inst.kraus_ops()[2].max_abs(), 0.0);
}

TEST(MeasurementFromUnitary, ControlledNotMeasuresComputationalBasis) {
  const auto inst = measurement_from_unitary("B", cnot(), 2, FlagBasis::computational("B'", 2));
  EXPECT_EQ(inst.kraus_ops()[0], ComplexMatrix::projector(basis_vector(2, 0)));
  EXPECT_EQ(inst.kraus_ops()[1], ComplexMatrix::projector(basis_vector(2, 1)));
}

TEST(MeasurementFromUnitary, MatchesAncillaCircuit) {
  // sum_i K_i rho K_i^dagger equals Tr_B' U (rho (x) |0><0|) U^dagger.
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 2 + uniform_index(2, rng), n = 2 + uniform_index(2, rng);
    const auto u = haar_unitary(d * n, rng);
    const auto inst = measurement_from_unitary("A", u, n, FlagBasis::random("A'", n, n, rng));
    const auto rho = random_density(d, d, rng);
    ComplexMatrix channel(d, d);
    for (const auto& k : inst.kraus_ops()) channel += sandwich(k, rho);
    const auto big = sandwich(u, testing::kron_by_loops(rho, ComplexMatrix::projector(basis_vector(n, 0))));
    EXPECT_LT(max_abs_diff(channel, testing::partial_trace_by_loops(big, d, n, 1)), 1e-13);
  }
}

TEST(MeasurementFromUnitary, RandomUnitariesAreComplete) {
  Rng rng(5);
  for (std::size_t d = 2; d <= 6; ++d)
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 1 + uniform_index(4, rng);
      const auto inst = measurement_from_unitary("A", haar_unitary(d * n, rng), n,
                                                 FlagBasis::random("A'", n, n, rng));
      EXPECT_LT(inst.completeness_defect(), 1e-12);
    }
}

TEST(MeasurementFromUnitary, RejectsBadInput) {
  ComplexMatrix bad = ComplexMatrix::identity(4);
  bad(0, 0) = 2.0;
  EXPECT_THROW(measurement_from_unitary("A", bad, 2, FlagBasis::computational("A'", 2)), ContractError);
  EXPECT_THROW(measurement_from_unitary("A", ComplexMatrix::identity(5), 2, FlagBasis::computational("A'", 2)),
               StructuralError);
}

TEST(Dephase, LeavesDiagonalStatesAlone) {
  Rng rng(6);
  const auto p = dirichlet_uniform(6, rng);
  const DensityOperator rho(ComplexMatrix::diagonal(p), Dims{2, 3});
  EXPECT_LT(max_abs_diff(dephase(rho, "B", FlagBasis::computational("B", 3)).matrix(), rho.matrix()), 1e-16);
}

TEST(Dephase, PlusStateBecomesMaximallyMixed) {
  const double s = 1.0 / std::sqrt(2.0);
  const Vector plus{s, s};
  const auto rho = single_register_state(ComplexMatrix::projector(plus), "A", "A");
  const auto out = dephase(rho, "A", FlagBasis::computational("A", 2));
  EXPECT_LT(max_abs_diff(out.matrix(), 0.5 * ComplexMatrix::identity(2)), 1e-15);
}

TEST(Dephase, FlaggedStatesAreFixedOnTheFlag) {
  Rng rng(7);
  const auto basis = FlagBasis::random("B", 3, 3, rng);
  const auto flagged = flag_mix(random_ensemble({2, 2}, 3, rng), "B", basis);
  EXPECT_LT(max_abs_diff(dephase(flagged, "B'", basis).matrix(), flagged.matrix()), 1e-13);
}

TEST(Dephase, RejectsIncompleteBasis) {
  Rng rng(8);
  const auto rho = random_state({2, 3}, rng);
  EXPECT_THROW(dephase(rho, "B", FlagBasis::random("B", 3, 2, rng)), StructuralError);
}

TEST(RandomPhaseDephasing, EqualsPinching) {
  Rng rng(9);
  for (std::size_t d = 2; d <= 6; ++d)
    for (int t = 0; t < 100; ++t) {
      const auto rho = random_state({2, d}, rng);
      const auto basis = FlagBasis::random("B", d, d, rng);
      EXPECT_LT(max_abs_diff(random_phase_dephasing_average(rho, "B", basis).matrix(), dephase(rho, "B", basis).matrix()),
                1e-12);
    }
}

TEST(WeylOperators, UnitaryAndOrthogonal) {
  for (std::size_t d = 2; d <= 4; ++d)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        const auto w = weyl_operator(d, a, b);
        EXPECT_LT(unitarity_defect(w), 1e-14);
        if (a != 0 || b != 0) {
          EXPECT_LT(std::abs(w.trace()), 1e-13);
        }
      }
}

TEST(TwirlDecouple, EqualsPartialTraceTimesMaximallyMixed) {
  Rng rng(10);
  for (std::size_t d = 2; d <= 6; ++d)
    for (int t = 0; t < 100; ++t) {
      const auto rho = random_state({2, d}, rng);
      const auto reduced = testing::partial_trace_by_loops(rho.matrix(), 2, d, 1);
      const auto expected = testing::kron_by_loops(reduced, (1.0 / d) * ComplexMatrix::identity(d));
      EXPECT_LT(max_abs_diff(twirl_decouple(rho, "B").matrix(), expected), 1e-12);
    }
}

TEST(TwirlDecouple, KeepsRegisterInPlace) {
  Rng rng(11);
  const auto rho = random_state({3, 2}, rng);
  const auto out = twirl_decouple(rho, "A");
  EXPECT_EQ(out.registers(), rho.registers());
  const auto expected =
      testing::kron_by_loops((1.0 / 3) * ComplexMatrix::identity(3), testing::partial_trace_by_loops(rho.matrix(), 3, 2, 0));
  EXPECT_LT(max_abs_diff(out.matrix(), expected), 1e-12);
  EXPECT_NEAR(negativity(out), 1.0, 1e-12);
}

TEST(DiscardRegister, DropsAncilla) {
  Rng rng(12);
  const auto rho = random_state({2, 2}, rng);
  const auto big = embed_ancilla(rho, single_register_state(random_density(3, 3, rng), "X", "X"), "B");
  const auto back = discard_register(big, "B'");
  EXPECT_EQ(back.registers(), rho.registers());
  EXPECT_LT(max_abs_diff(back.matrix(), rho.matrix()), 1e-14);
}

TEST(LocalUnitary, PreservesSpectrum) {
  Rng rng(13);
  const auto rho = random_state({2, 3}, rng);
  const auto out = apply_local_unitary(rho, haar_unitary(3, rng), {1});
  EXPECT_LT(testing::max_abs_diff(hermitian_eigenvalues(out.matrix()), hermitian_eigenvalues(rho.matrix())), 1e-12);
}

TEST(SampleLocalInstrument, SingleOutcomeIsUnitary) {
  Rng rng(14);
  const auto inst = sample_local_instrument("A", 3, 1, rng);
  ASSERT_EQ(inst.outcomes(), 1u);
  EXPECT_LT(unitarity_defect(inst.kraus_ops()[0]), 1e-12);
}

TEST(SampleLocalInstrument, OutcomesEquallyLikelyOnMaximallyMixedState) {
  // For Haar instruments, E p_i = 1/n on I/d.
  Rng rng(15);
  const std::size_t d = 2, n = 3, samples = 4000;
  const auto rho = DensityOperator((1.0 / d) * ComplexMatrix::identity(d), Dims{d});
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto inst = sample_local_instrument("A", d, n, rng);
    const double p0 = trace_of_product(inst.kraus_ops()[0].adjoint() * inst.kraus_ops()[0], rho.matrix()).real();
    sum += p0;
    sum_sq += p0 * p0;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum_sq / samples - mean * mean) / samples);
  EXPECT_LT(std::abs(mean - 1.0 / n), 3.0 * se);
}

TEST(SampleProjectiveInstrument, ProjectorsPartitionIdentity) {
  Rng rng(16);
  for (int t = 0; t < 50; ++t) {
    const auto inst = sample_projective_instrument("B", 4, rng);
    EXPECT_LT(inst.completeness_defect(), 1e-12);
    for (const auto& p : inst.kraus_ops()) EXPECT_LT(max_abs_diff(p * p, p), 1e-12);
  }
}

TEST(Protocol, IdentityProtocol) {
  Rng rng(17);
  const auto rho = random_state({2, 2}, rng);
  const auto e = run_protocol(rho, Protocol::identity("A", 2));
  ASSERT_EQ(e.size(), 1u);
  EXPECT_LT(max_abs_diff(e.states()[0].matrix(), rho.matrix()), 1e-15);
}

TEST(Protocol, ShapeAndAlternation) {
  Rng rng(18);
  const auto regs = standard_registers({2, 3});
  const auto one = sample_locc_protocol(regs, 1, 2, rng);
  EXPECT_EQ(one.depth(), 1u);
  EXPECT_EQ(one.leaf_count(), 2u);
  const auto p = sample_locc_protocol(regs, 3, 2, rng);
  EXPECT_EQ(p.depth(), 3u);
  EXPECT_EQ(p.leaf_count(), 8u);
  EXPECT_EQ(p.root.instrument.party(), "A");
  EXPECT_EQ(p.root.next[1].instrument.party(), "B");
  EXPECT_EQ(p.root.next[0].next[1].instrument.party(), "A");
  EXPECT_EQ(p.root.next[1].instrument.dim(), 3u);
  EXPECT_THROW(sample_locc_protocol(regs, 0, 2, rng), StructuralError);
}

TEST(Protocol, TwoRoundsMatchSequentialComposition) {
  Rng rng(19);
  for (int t = 0; t < 30; ++t) {
    const auto rho = random_state({2, 3}, rng);
    const auto p = sample_locc_protocol(rho.registers(), 2, 2, rng);
    const auto e = run_protocol(rho, p);
    ComplexMatrix expected(6, 6);
    std::vector<ComplexMatrix> branch;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        const auto k = lift(p.root.next[i].instrument.kraus_ops()[j], 1, 2, 3) *
                       lift(p.root.instrument.kraus_ops()[i], 0, 2, 3);
        branch.push_back(sandwich(k, rho.matrix()));
        expected += branch.back();
      }
    EXPECT_LT(max_abs_diff(e.average().matrix(), expected), 1e-13);
    ASSERT_EQ(e.size(), 4u);
    EXPECT_EQ(e.labels()[3], "1.1");
    for (std::size_t b = 0; b < 4; ++b) {
      const double pb = branch[b].trace().real();
      EXPECT_NEAR(e.weights()[b], pb, 1e-13);
      EXPECT_LT(max_abs_diff(e.states()[b].matrix(), (1.0 / pb) * branch[b]), 1e-11);
    }
  }
}

}  // namespace
}  // namespace entmon
