#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entmon/states.hpp"

namespace entmon {

/// Owners on the "A" side of a bipartite cut; every other owner is on side B.
struct Bipartition {
  std::vector<std::string> side_a;
};

/// Side A = the first owner of rho (A|BC... cut).
Bipartition default_cut(const DensityOperator& rho);

/// rho with its registers regrouped as (side A) (x) (side B).
struct BipartiteView {
  ComplexMatrix matrix;
  std::size_t dim_a = 1;
  std::size_t dim_b = 1;
};
BipartiteView to_bipartite(const DensityOperator& rho, const Bipartition& cut);

/// || rho^{T_A} ||_1 across the cut.
double negativity(const DensityOperator& rho, const Bipartition& cut);
double negativity(const DensityOperator& rho);

enum class SolverStatus { converged, unconverged };
std::string_view to_string(SolverStatus s);

struct ReeConfig {
  std::size_t max_iterations = 300;
  double convergence_tol = 1e-6;  // Frank-Wolfe duality gap
  std::size_t restarts = 8;
  std::size_t inner_seesaw_sweeps = 20;
  std::uint64_t seed = 0;

  /// Throws StructuralError if a count is zero or the tolerance is not positive.
  void validate() const;
};

struct ProductTerm {
  double weight = 0.0;
  Vector a;
  Vector b;
};

/// sigma = sum_k w_k |a_k><a_k| (x) |b_k><b_k|, separable by construction.
struct SeparableApprox {
  std::vector<ProductTerm> terms;
  ComplexMatrix sigma;
  std::size_t dim_a = 1;
  std::size_t dim_b = 1;

  static ComplexMatrix assemble(const std::vector<ProductTerm>& terms);
};

struct ReeResult {
  double value = 0.0;  // upper bound on the relative entropy of entanglement
  SeparableApprox witness;
  SolverStatus status = SolverStatus::unconverged;
  std::size_t iterations = 0;
  double gap = 0.0;             // last Frank-Wolfe gap estimate
  std::vector<double> history;  // objective after every accepted iteration
};

/// Conditional-gradient minimization of sigma -> S(rho | sigma) over separable
/// states across `cut`.
ReeResult ree(const DensityOperator& rho, const ReeConfig& cfg, const Bipartition& cut);
ReeResult ree(const DensityOperator& rho, const ReeConfig& cfg = {});

struct PptResult {
  double value = 0.0;
  SolverStatus status = SolverStatus::unconverged;
  std::size_t iterations = 0;
  ComplexMatrix sigma;
};

/// min S(rho | sigma) over states with positive partial transpose: log-det
/// barriers on sigma and sigma^{T_B}, damped Newton steps, barrier weight driven
/// down until the central-path gap bound 2 n mu falls below `tol`.
PptResult ppt_relative_entropy(const DensityOperator& rho, double tol, const Bipartition& cut);
PptResult ppt_relative_entropy(const DensityOperator& rho, double tol = 1e-9);

/// Euclidean projection of a Hermitian matrix onto unit-trace PSD matrices.
ComplexMatrix project_to_density(const ComplexMatrix& x);
/// Projection onto {X : X^{T_B} >= 0} for a dim_a x dim_b split.
ComplexMatrix project_to_ppt_cone(const ComplexMatrix& x, std::size_t dim_a, std::size_t dim_b);

using Evaluator = std::function<double(const DensityOperator&)>;

/// A named real functional on density operators.
struct MeasureHandle {
  std::string name;
  Evaluator evaluate;
  bool declared_convex = true;
  /// Closed-form evaluation (tight tolerance profile) vs optimization-based.
  bool exact = true;
  /// What certification is expected to conclude.
  bool expected_monotone = true;
  /// Optional independent evaluation used to second-guess solver noise.
  Evaluator oracle;

  double operator()(const DensityOperator& rho) const { return evaluate(rho); }
};

MeasureHandle negativity_measure();
MeasureHandle ree_measure(const ReeConfig& cfg = {});
/// Tr rho^2: convex and LUI, but not affine on flagged mixtures.
MeasureHandle control_purity();
/// S(rho_A): not convex.
MeasureHandle control_reduction_entropy();
MeasureHandle constant_measure(double value = 0.0);
/// rho_00: affine but basis dependent.
MeasureHandle control_first_diagonal();

/// CLI names: negativity, ree, control-purity, control-reduction-entropy.
std::optional<MeasureHandle> measure_by_name(std::string_view name, const ReeConfig& cfg = {});
std::vector<std::string> builtin_measure_names();

}  // namespace entmon
