#include "entmon/measures.hpp"

#include <algorithm>
#include <cmath>

namespace entmon {

namespace {

std::vector<std::size_t> side_a_registers(const DensityOperator& rho, const Bipartition& cut) {
  if (cut.side_a.empty()) throw StructuralError("bipartition: side A is empty");
  const auto owners = rho.owners();
  for (const auto& o : cut.side_a)
    if (std::find(owners.begin(), owners.end(), o) == owners.end())
      throw StructuralError("bipartition: unknown party '" + o + "'");
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < rho.registers().size(); ++k) {
    const auto& owner = rho.registers()[k].owner;
    if (std::find(cut.side_a.begin(), cut.side_a.end(), owner) != cut.side_a.end()) idx.push_back(k);
  }
  if (idx.size() == rho.registers().size()) throw StructuralError("bipartition: side B is empty");
  return idx;
}

}  // namespace

Bipartition default_cut(const DensityOperator& rho) { return {{rho.owners().front()}}; }

BipartiteView to_bipartite(const DensityOperator& rho, const Bipartition& cut) {
  const auto a = side_a_registers(rho, cut);
  std::vector<std::size_t> order = a;
  for (std::size_t k = 0; k < rho.registers().size(); ++k)
    if (std::find(a.begin(), a.end(), k) == a.end()) order.push_back(k);
  BipartiteView view;
  for (auto k : a) view.dim_a *= rho.registers()[k].dim;
  view.dim_b = rho.dimension() / view.dim_a;
  const Dims dims = rho.dims();
  view.matrix = permute_registers(rho.matrix(), dims, order);
  return view;
}

double negativity(const DensityOperator& rho, const Bipartition& cut) {
  const auto a = side_a_registers(rho, cut);
  return trace_norm(partial_transpose(rho.matrix(), rho.dims(), a));
}

double negativity(const DensityOperator& rho) { return negativity(rho, default_cut(rho)); }

std::string_view to_string(SolverStatus s) {
  return s == SolverStatus::converged ? "converged" : "unconverged";
}

MeasureHandle negativity_measure() {
  MeasureHandle h;
  h.name = "negativity";
  h.evaluate = [](const DensityOperator& rho) { return negativity(rho); };
  return h;
}

MeasureHandle ree_measure(const ReeConfig& cfg) {
  cfg.validate();
  MeasureHandle h;
  h.name = "ree";
  h.evaluate = [cfg](const DensityOperator& rho) { return ree(rho, cfg).value; };
  h.exact = false;
  h.oracle = [](const DensityOperator& rho) { return ppt_relative_entropy(rho).value; };
  return h;
}

MeasureHandle control_purity() {
  MeasureHandle h;
  h.name = "control-purity";
  h.evaluate = [](const DensityOperator& rho) { return purity(rho.matrix()); };
  h.expected_monotone = false;
  return h;
}

MeasureHandle control_reduction_entropy() {
  MeasureHandle h;
  h.name = "control-reduction-entropy";
  h.evaluate = [](const DensityOperator& rho) {
    const auto cut = default_cut(rho);
    std::vector<std::size_t> drop;
    for (std::size_t k = 0; k < rho.registers().size(); ++k)
      if (rho.registers()[k].owner != cut.side_a.front()) drop.push_back(k);
    return von_neumann_entropy(partial_trace(rho.matrix(), rho.dims(), drop));
  };
  h.declared_convex = false;
  h.expected_monotone = false;
  return h;
}

MeasureHandle constant_measure(double value) {
  MeasureHandle h;
  h.name = "constant";
  h.evaluate = [value](const DensityOperator&) { return value; };
  return h;
}

MeasureHandle control_first_diagonal() {
  MeasureHandle h;
  h.name = "control-first-diagonal";
  h.evaluate = [](const DensityOperator& rho) { return rho.matrix()(0, 0).real(); };
  h.expected_monotone = false;
  return h;
}

std::optional<MeasureHandle> measure_by_name(std::string_view name, const ReeConfig& cfg) {
  if (name == "negativity") return negativity_measure();
  if (name == "ree") return ree_measure(cfg);
  if (name == "control-purity") return control_purity();
  if (name == "control-reduction-entropy") return control_reduction_entropy();
  return std::nullopt;
}

std::vector<std::string> builtin_measure_names() {
  return {"negativity", "ree", "control-purity", "control-reduction-entropy"};
}

}  // namespace entmon
