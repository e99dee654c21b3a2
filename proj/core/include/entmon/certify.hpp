#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entmon/measures.hpp"

namespace entmon {

struct CheckConfig {
  std::size_t trials = 200;  // per dimension profile
  double tol = 1e-8;
  /// Lab dimensions per profile; labs are named A, B, C, ...
  std::vector<Dims> dims = {{2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 2, 2}};
  /// Trial t of a profile uses ensemble_sizes[t % size].
  std::vector<std::size_t> ensemble_sizes = {2, 3};
  std::size_t rounds = 2;
  std::size_t outcomes = 2;
  std::uint64_t seed = 0;
  /// Worker threads for trials; 0 picks the hardware concurrency.
  std::size_t threads = 0;

  /// Throws StructuralError on zero counts, a nonpositive tol, or a profile
  /// with fewer than two labs or a zero dimension.
  void validate() const;

  /// Defaults for `f`: the full sweep at tol 1e-8 for closed-form measures, a
  /// reduced sweep {2x2, 2x3} with 10 trials at tol 5e-3 otherwise.
  static CheckConfig defaults_for(const MeasureHandle& f);
};

struct NamedState {
  std::string name;
  DensityOperator state;
};

struct NamedValue {
  std::string name;
  double value = 0.0;
};

/// Everything needed to reproduce one violation.
struct Witness {
  std::string check;
  std::string probe;
  std::string part;
  Dims profile;            // empty for constructed instances
  std::int64_t trial = 0;  // negative for constructed instances
  double violation = 0.0;
  std::vector<NamedState> inputs;
  std::vector<NamedValue> values;
};

struct CheckReport {
  std::string name;
  std::size_t trials = 0;
  /// Positive means the condition is broken; equality conditions report the
  /// largest absolute deviation.
  double worst_violation = 0.0;
  double tol = 0.0;
  bool passed = true;
  std::optional<Witness> witness;
  std::vector<CheckReport> parts;
  std::string note;
};

/// f(sum p_i rho_i) - sum p_i f(rho_i).
CheckReport check_convexity(const MeasureHandle& f, const CheckConfig& cfg);
/// |f(U rho U^dagger) - f(rho)| for products of Haar local unitaries.
CheckReport check_lui(const MeasureHandle& f, const CheckConfig& cfg);
/// f(rho (x) sigma_X) - f(rho) and its negative, per site, mixed and pure sigma_X.
CheckReport check_ancilla_invariance(const MeasureHandle& f, const CheckConfig& cfg);
/// Affinity on flagged mixtures, per flag site, variant and direction.
CheckReport check_flags(const MeasureHandle& f, const CheckConfig& cfg);
/// |f(rho (x) |i><i|) - f(rho)| with computational flags.
CheckReport check_flag_equivalence(const MeasureHandle& f, const CheckConfig& cfg);
/// Parts a (ancilla), b (partial trace), c (local unitaries), d (incomplete
/// von Neumann measurements), each as a non-increase condition.
CheckReport check_vidal(const MeasureHandle& f, const CheckConfig& cfg);
/// sum p_i f(sigma_i) - f(rho) over sampled multi-round LOCC protocols.
CheckReport check_strong_monotonicity(const MeasureHandle& f, const CheckConfig& cfg);
/// f(sum p_i sigma_i) - f(rho) over the same protocols.
CheckReport check_weak_monotonicity(const MeasureHandle& f, const CheckConfig& cfg);

/// Names accepted by run_check and replay, in certification order.
std::vector<std::string> check_names();
CheckReport run_check(std::string_view name, const MeasureHandle& f, const CheckConfig& cfg);

/// Recomputes the violation recorded in `w` from the seed alone.
double replay(const MeasureHandle& f, const CheckConfig& cfg, const Witness& w);

struct Certification {
  std::string measure;
  std::vector<CheckReport> checks;
  /// convexity, LUI and FLAGS all pass.
  bool predicted_monotone = false;
  /// Vidal a-d and strong monotonicity all pass.
  bool direct_monotone = false;
  /// The equivalence is only claimed for convex functions.
  bool theorem_applicable = false;
  bool consistent = true;
  std::vector<std::string> inconsistencies;

  std::string_view verdict() const {
    return predicted_monotone ? "PREDICTED-MONOTONE" : "NOT-MONOTONE";
  }
  const CheckReport* find(std::string_view name) const;
};

Certification certify_measure(const MeasureHandle& f, const CheckConfig& cfg);
/// Verdicts and consistency from already computed reports (one per check name).
Certification assess(std::string measure, std::vector<CheckReport> checks, double tol);

/// Certification agrees with f.expected_monotone and raised no inconsistency.
bool matches_expectation(const MeasureHandle& f, const Certification& c);

}  // namespace entmon
