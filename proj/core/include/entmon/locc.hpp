#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "entmon/states.hpp"

namespace entmon {

inline constexpr double kCompletenessTol = 1e-10;
inline constexpr double kPruneThreshold = 1e-14;

/// Local instrument {K_i} on one register, identity elsewhere.
class KrausInstrument {
 public:
  /// Throws ContractError unless sum_i K_i^dagger K_i = I within 1e-10.
  KrausInstrument(std::string party, std::vector<ComplexMatrix> kraus_ops,
                  std::vector<std::string> outcome_labels = {});

  static KrausInstrument identity(std::string party, std::size_t dim);
  /// Projective measurement; the projectors must sum to the identity.
  static KrausInstrument projective(std::string party, std::vector<ComplexMatrix> projectors);

  const std::string& party() const { return party_; }
  std::size_t dim() const { return kraus_.front().rows(); }
  std::size_t outcomes() const { return kraus_.size(); }
  const std::vector<ComplexMatrix>& kraus_ops() const { return kraus_; }
  const std::vector<std::string>& outcome_labels() const { return labels_; }

  /// max_abs(sum K^dagger K - I)
  double completeness_defect() const;

 private:
  std::string party_;
  std::vector<ComplexMatrix> kraus_;
  std::vector<std::string> labels_;
};

/// p_i = Tr K_i rho K_i^dagger, sigma_i = K_i rho K_i^dagger / p_i. Outcomes with
/// p_i < 1e-14 are dropped and the remaining weights renormalized.
Ensemble apply_instrument(const DensityOperator& rho, const KrausInstrument& inst);

/// Kraus operators (I (x) <b_i|) U (I (x) |0>) of the procedure: attach B' in |0>,
/// apply U on B B', read B' out in `readout`, discard B'.
KrausInstrument measurement_from_unitary(std::string party, const ComplexMatrix& u,
                                         std::size_t ancilla_dim, const FlagBasis& readout);

/// Pinching sum_i P_i rho P_i with P_i = |b_i><b_i| on `party`.
DensityOperator dephase(const DensityOperator& rho, std::string_view party, const FlagBasis& basis);

/// (1/d) sum_k V_k rho V_k^dagger, V_k = sum_j w^{jk} |b_j><b_j|, w = exp(2 pi i / d).
DensityOperator random_phase_dephasing_average(const DensityOperator& rho, std::string_view party,
                                               const FlagBasis& basis);

/// Clock-and-shift unitary X^a Z^b on dimension d.
ComplexMatrix weyl_operator(std::size_t d, std::size_t a, std::size_t b);

/// Average over the d^2 Weyl operators on `party`; yields Tr_party(rho) (x) I/d
/// with the register kept in place.
DensityOperator twirl_decouple(const DensityOperator& rho, std::string_view party);

/// Drops a register (trusted: the result is a state by construction).
DensityOperator discard_register(const DensityOperator& rho, std::string_view label);

/// U rho U^dagger with U acting on the listed registers.
DensityOperator apply_local_unitary(const DensityOperator& rho, const ComplexMatrix& u,
                                    const std::vector<std::size_t>& targets);

/// Haar unitary on d * n_outcomes fed to measurement_from_unitary with a
/// computational readout.
KrausInstrument sample_local_instrument(std::string party, std::size_t d, std::size_t n_outcomes,
                                        Rng& rng);

/// Von Neumann measurement in a Haar-random basis with the basis vectors grouped
/// into projectors of random rank >= 1 (possibly incomplete, i.e. not rank one).
KrausInstrument sample_projective_instrument(std::string party, std::size_t d, Rng& rng);

/// One node of the transcript tree. `next` is empty at a leaf, otherwise it
/// holds one child per outcome of `instrument`.
struct ProtocolNode {
  KrausInstrument instrument;
  std::vector<ProtocolNode> next;
};

struct Protocol {
  ProtocolNode root;

  static Protocol identity(std::string party, std::size_t dim);
  std::size_t leaf_count() const;
  std::size_t depth() const;
};

/// Alternating-party protocol (registers of `parties` in order, cycling), each
/// node an independent sample_local_instrument.
Protocol sample_locc_protocol(const std::vector<Register>& parties, std::size_t rounds,
                              std::size_t outcomes_per_round, Rng& rng);

/// Leaf ensemble with transcript labels "i.j.k".
Ensemble run_protocol(const DensityOperator& rho, const Protocol& protocol);

}  // namespace entmon
