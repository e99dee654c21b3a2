#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entmon/linalg.hpp"
#include "entmon/random.hpp"

namespace entmon {

inline constexpr double kStateTol = 1e-10;
inline constexpr double kWeightTol = 1e-12;

/// One tensor factor of the state space. `owner` names the lab holding it;
/// ancillas and flag registers carry primed labels ("B'") owned by their lab.
struct Register {
  std::string label;
  std::string owner;
  std::size_t dim = 1;

  friend bool operator==(const Register&, const Register&) = default;
};

/// Registers A, B, C, ... each owned by the lab of the same name.
std::vector<Register> standard_registers(const Dims& dims);

class DensityOperator {
 public:
  /// Checks every invariant, including positivity (min eigenvalue >= -1e-10).
  DensityOperator(ComplexMatrix matrix, std::vector<Register> registers);
  DensityOperator(ComplexMatrix matrix, const Dims& dims);

  /// Checks structure, Hermiticity and trace only. For matrices that are
  /// states by construction (CP images, mixtures, products of states).
  static DensityOperator from_trusted(ComplexMatrix matrix, std::vector<Register> registers);

  const ComplexMatrix& matrix() const { return matrix_; }
  const std::vector<Register>& registers() const { return registers_; }
  Dims dims() const;
  std::size_t dimension() const { return matrix_.rows(); }

  /// Throws StructuralError for unknown labels.
  std::size_t index_of(std::string_view label) const;
  bool has_register(std::string_view label) const;
  std::vector<std::size_t> owned_by(std::string_view owner) const;
  /// Distinct owners in first-appearance order.
  std::vector<std::string> owners() const;

 private:
  DensityOperator(ComplexMatrix matrix, std::vector<Register> registers, bool check_positivity);

  ComplexMatrix matrix_;
  std::vector<Register> registers_;
};

double min_eigenvalue(const DensityOperator& rho);

/// Weighted list of states sharing one register layout.
class Ensemble {
 public:
  Ensemble(std::vector<double> weights, std::vector<DensityOperator> states,
           std::vector<std::string> labels = {});

  std::size_t size() const { return states_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<DensityOperator>& states() const { return states_; }
  /// Outcome or transcript labels; defaults to "0", "1", ...
  const std::vector<std::string>& labels() const { return labels_; }

  /// sum_i p_i rho_i
  DensityOperator average() const;

 private:
  std::vector<double> weights_;
  std::vector<DensityOperator> states_;
  std::vector<std::string> labels_;
};

/// Orthonormal vectors (columns) on a local register.
class FlagBasis {
 public:
  FlagBasis(std::string party, ComplexMatrix vectors);

  static FlagBasis computational(std::string party, std::size_t dim);
  /// The first `count` columns of a Haar unitary.
  static FlagBasis random(std::string party, std::size_t dim, std::size_t count, Rng& rng);

  const std::string& party() const { return party_; }
  std::size_t dim() const { return vectors_.rows(); }
  std::size_t size() const { return vectors_.cols(); }
  bool complete() const { return size() == dim(); }
  Vector vector(std::size_t i) const { return vectors_.column(i); }
  const ComplexMatrix& vectors() const { return vectors_; }

 private:
  std::string party_;
  ComplexMatrix vectors_;
};

/// Unused label for a new register owned by `owner`: owner', owner'', ...
std::string fresh_register_label(const DensityOperator& rho, std::string_view owner);

/// sum_i p_i rho_i (x) |i><i| with the flag register appended last and owned
/// by `flag_party`.
DensityOperator flag_mix(const Ensemble& ensemble, std::string_view flag_party,
                         const FlagBasis& basis);

/// rho (x) |i><i| on a new trailing register, laid out exactly as flag_mix does.
DensityOperator flag_single(const DensityOperator& rho, std::size_t i, std::string_view flag_party,
                            const FlagBasis& basis);

/// rho (x) sigma with sigma's register owned by `site` (an existing owner).
DensityOperator embed_ancilla(const DensityOperator& rho, const DensityOperator& sigma,
                              std::string_view site);

/// Single-register state with the given label and owner.
DensityOperator single_register_state(ComplexMatrix matrix, std::string label, std::string owner);

Vector basis_vector(std::size_t d, std::size_t k);

DensityOperator max_entangled(std::size_t d);

/// F P_max + (1 - F)(I - P_max)/(d^2 - 1).
DensityOperator isotropic(std::size_t d, double fidelity);

/// sum_k q_k |a_k><a_k| (x) |b_k><b_k|, Haar product vectors, Dirichlet weights.
DensityOperator random_separable(std::size_t dim_a, std::size_t dim_b, std::size_t terms, Rng& rng);
/// Default term count (d_A d_B)^2.
DensityOperator random_separable(std::size_t dim_a, std::size_t dim_b, Rng& rng);

/// random_density on the full space of `dims`, standard registers.
DensityOperator random_state(const Dims& dims, std::size_t rank, Rng& rng);
/// Rank drawn uniformly from 1..dim.
DensityOperator random_state(const Dims& dims, Rng& rng);

/// Ensemble of `size` random states with Dirichlet weights.
Ensemble random_ensemble(const Dims& dims, std::size_t size, Rng& rng);

}  // namespace entmon
