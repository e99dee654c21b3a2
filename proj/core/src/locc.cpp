#include "entmon/locc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace entmon {

namespace {

struct Branch {
  std::size_t outcome;
  double probability;
  ComplexMatrix state;  // normalized
};

std::vector<Branch> branches(const DensityOperator& rho, const KrausInstrument& inst) {
  const std::size_t idx = rho.index_of(inst.party());
  if (rho.registers()[idx].dim != inst.dim())
    throw StructuralError("instrument on " + inst.party() + " has dimension " +
                          std::to_string(inst.dim()) + ", register has " +
                          std::to_string(rho.registers()[idx].dim));
  const Dims dims = rho.dims();
  const std::size_t target[] = {idx};
  std::vector<Branch> out;
  double kept = 0.0;
  for (std::size_t i = 0; i < inst.outcomes(); ++i) {
    const auto k = embed_operator(inst.kraus_ops()[i], dims, target);
    auto m = sandwich(k, rho.matrix());
    const double p = m.trace().real();
    if (p < kPruneThreshold) continue;
    m *= Complex(1.0 / p, 0.0);
    kept += p;
    out.push_back({i, p, std::move(m)});
  }
  if (out.empty()) throw ContractError("instrument annihilates the state");
  for (auto& b : out) b.probability /= kept;
  return out;
}

void run_node(const DensityOperator& rho, const ProtocolNode& node, double weight,
              const std::string& prefix, std::vector<double>& weights,
              std::vector<DensityOperator>& states, std::vector<std::string>& labels) {
  for (auto& b : branches(rho, node.instrument)) {
    const std::string label =
        prefix.empty() ? node.instrument.outcome_labels()[b.outcome]
                       : prefix + "." + node.instrument.outcome_labels()[b.outcome];
    auto state = DensityOperator::from_trusted(std::move(b.state), rho.registers());
    if (node.next.empty()) {
      weights.push_back(weight * b.probability);
      states.push_back(std::move(state));
      labels.push_back(label);
    } else {
      run_node(state, node.next.at(b.outcome), weight * b.probability, label, weights, states,
               labels);
    }
  }
}

ProtocolNode sample_node(const std::vector<Register>& parties, std::size_t depth,
                         std::size_t rounds, std::size_t outcomes, Rng& rng) {
  const auto& party = parties[depth % parties.size()];
  ProtocolNode node{sample_local_instrument(party.label, party.dim, outcomes, rng), {}};
  if (depth + 1 < rounds) {
    for (std::size_t i = 0; i < outcomes; ++i)
      node.next.push_back(sample_node(parties, depth + 1, rounds, outcomes, rng));
  }
  return node;
}

std::size_t count_leaves(const ProtocolNode& node) {
  if (node.next.empty()) return node.instrument.outcomes();
  std::size_t n = 0;
  for (const auto& c : node.next) n += count_leaves(c);
  return n;
}

std::size_t node_depth(const ProtocolNode& node) {
  std::size_t d = 0;
  for (const auto& c : node.next) d = std::max(d, node_depth(c));
  return d + 1;
}

}  // namespace

KrausInstrument::KrausInstrument(std::string party, std::vector<ComplexMatrix> kraus_ops,
                                 std::vector<std::string> outcome_labels)
    : party_(std::move(party)), kraus_(std::move(kraus_ops)), labels_(std::move(outcome_labels)) {
  if (kraus_.empty()) throw StructuralError("instrument needs at least one Kraus operator");
  for (const auto& k : kraus_)
    if (!k.square() || k.rows() != kraus_.front().rows())
      throw StructuralError("Kraus operators must be square with a common dimension");
  if (labels_.empty()) {
    for (std::size_t i = 0; i < kraus_.size(); ++i) labels_.push_back(std::to_string(i));
  } else if (labels_.size() != kraus_.size()) {
    throw StructuralError("outcome label count mismatch");
  }
  const double defect = completeness_defect();
  if (defect > kCompletenessTol)
    throw ContractError("instrument violates completeness (defect " + std::to_string(defect) + ")");
}

KrausInstrument KrausInstrument::identity(std::string party, std::size_t dim) {
  return KrausInstrument(std::move(party), {ComplexMatrix::identity(dim)});
}

KrausInstrument KrausInstrument::projective(std::string party,
                                            std::vector<ComplexMatrix> projectors) {
  return KrausInstrument(std::move(party), std::move(projectors));
}

double KrausInstrument::completeness_defect() const {
  ComplexMatrix sum(dim(), dim());
  for (const auto& k : kraus_) sum += k.adjoint() * k;
  return max_abs_diff(sum, ComplexMatrix::identity(dim()));
}

Ensemble apply_instrument(const DensityOperator& rho, const KrausInstrument& inst) {
  std::vector<double> weights;
  std::vector<DensityOperator> states;
  std::vector<std::string> labels;
  for (auto& b : branches(rho, inst)) {
    weights.push_back(b.probability);
    states.push_back(DensityOperator::from_trusted(std::move(b.state), rho.registers()));
    labels.push_back(inst.outcome_labels()[b.outcome]);
  }
  return Ensemble(std::move(weights), std::move(states), std::move(labels));
}

KrausInstrument measurement_from_unitary(std::string party, const ComplexMatrix& u,
                                         std::size_t ancilla_dim, const FlagBasis& readout) {
  if (ancilla_dim == 0 || !u.square() || u.rows() % ancilla_dim != 0)
    throw StructuralError("measurement_from_unitary: " + shape_string(u) +
                          " is not an operator on B (x) B' with dim B' = " +
                          std::to_string(ancilla_dim));
  const double defect = unitarity_defect(u);
  if (defect > 1e-10)
    throw ContractError("measurement_from_unitary: U is not unitary (defect " +
                        std::to_string(defect) + ")");
  if (readout.dim() != ancilla_dim || !readout.complete())
    throw StructuralError("measurement_from_unitary: readout must be a complete basis of B'");
  const std::size_t d = u.rows() / ancilla_dim;
  std::vector<ComplexMatrix> kraus;
  for (std::size_t i = 0; i < ancilla_dim; ++i) {
    const auto b = readout.vector(i);
    ComplexMatrix k(d, d);
    for (std::size_t row = 0; row < d; ++row)
      for (std::size_t col = 0; col < d; ++col) {
        Complex s = 0.0;
        for (std::size_t a = 0; a < ancilla_dim; ++a)
          s += std::conj(b[a]) * u(row * ancilla_dim + a, col * ancilla_dim);
        k(row, col) = s;
      }
    kraus.push_back(std::move(k));
  }
  return KrausInstrument(std::move(party), std::move(kraus));
}

DensityOperator dephase(const DensityOperator& rho, std::string_view party, const FlagBasis& basis) {
  const std::size_t idx = rho.index_of(party);
  if (basis.dim() != rho.registers()[idx].dim || !basis.complete())
    throw StructuralError("dephase: basis must span register " + std::string(party));
  const Dims dims = rho.dims();
  const std::size_t target[] = {idx};
  ComplexMatrix out(rho.dimension(), rho.dimension());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto p = embed_operator(ComplexMatrix::projector(basis.vector(i)), dims, target);
    out += p * rho.matrix() * p;
  }
  return DensityOperator::from_trusted(std::move(out), rho.registers());
}

DensityOperator random_phase_dephasing_average(const DensityOperator& rho, std::string_view party,
                                               const FlagBasis& basis) {
  const std::size_t idx = rho.index_of(party);
  if (basis.dim() != rho.registers()[idx].dim || !basis.complete())
    throw StructuralError("random_phase_dephasing_average: basis must span register " +
                          std::string(party));
  const std::size_t d = basis.dim();
  const Dims dims = rho.dims();
  const std::size_t target[] = {idx};
  std::vector<ComplexMatrix> projectors;
  for (std::size_t j = 0; j < d; ++j) projectors.push_back(ComplexMatrix::projector(basis.vector(j)));

  ComplexMatrix out(rho.dimension(), rho.dimension());
  for (std::size_t k = 0; k < d; ++k) {
    ComplexMatrix v(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % d) / d;
      v += std::polar(1.0, angle) * projectors[j];
    }
    out += sandwich(embed_operator(v, dims, target), rho.matrix());
  }
  out *= Complex(1.0 / d, 0.0);
  return DensityOperator::from_trusted(std::move(out), rho.registers());
}

ComplexMatrix weyl_operator(std::size_t d, std::size_t a, std::size_t b) {
  ComplexMatrix w(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>((b * j) % d) / d;
    w((j + a) % d, j) = std::polar(1.0, angle);
  }
  return w;
}

DensityOperator twirl_decouple(const DensityOperator& rho, std::string_view party) {
  const std::size_t idx = rho.index_of(party);
  const std::size_t d = rho.registers()[idx].dim;
  const Dims dims = rho.dims();
  const std::size_t target[] = {idx};
  ComplexMatrix out(rho.dimension(), rho.dimension());
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      out += sandwich(embed_operator(weyl_operator(d, a, b), dims, target), rho.matrix());
  out *= Complex(1.0 / static_cast<double>(d * d), 0.0);
  return DensityOperator::from_trusted(std::move(out), rho.registers());
}

DensityOperator discard_register(const DensityOperator& rho, std::string_view label) {
  const std::size_t idx = rho.index_of(label);
  if (rho.registers().size() == 1) throw StructuralError("cannot discard the only register");
  auto regs = rho.registers();
  regs.erase(regs.begin() + static_cast<std::ptrdiff_t>(idx));
  return DensityOperator::from_trusted(partial_trace(rho.matrix(), rho.dims(), idx), std::move(regs));
}

DensityOperator apply_local_unitary(const DensityOperator& rho, const ComplexMatrix& u,
                                    const std::vector<std::size_t>& targets) {
  return DensityOperator::from_trusted(sandwich(embed_operator(u, rho.dims(), targets), rho.matrix()),
                                       rho.registers());
}

KrausInstrument sample_local_instrument(std::string party, std::size_t d, std::size_t n_outcomes,
                                        Rng& rng) {
  if (n_outcomes < 1) throw StructuralError("sample_local_instrument: need at least one outcome");
  const auto u = haar_unitary(d * n_outcomes, rng);
  return measurement_from_unitary(std::move(party), u, n_outcomes,
                                  FlagBasis::computational("readout", n_outcomes));
}

KrausInstrument sample_projective_instrument(std::string party, std::size_t d, Rng& rng) {
  const auto u = haar_unitary(d, rng);
  const std::size_t groups = 1 + uniform_index(d, rng);
  // Random composition of d into `groups` positive parts.
  std::vector<std::size_t> cuts;
  std::vector<std::size_t> pool;
  for (std::size_t k = 1; k < d; ++k) pool.push_back(k);
  std::shuffle(pool.begin(), pool.end(), rng);
  cuts.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(groups - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(d);

  std::vector<ComplexMatrix> projectors;
  std::size_t start = 0;
  for (auto end : cuts) {
    ComplexMatrix p(d, d);
    for (std::size_t k = start; k < end; ++k) p += ComplexMatrix::projector(u.column(k));
    projectors.push_back(std::move(p));
    start = end;
  }
  return KrausInstrument::projective(std::move(party), std::move(projectors));
}

Protocol Protocol::identity(std::string party, std::size_t dim) {
  return Protocol{ProtocolNode{KrausInstrument::identity(std::move(party), dim), {}}};
}

std::size_t Protocol::leaf_count() const { return count_leaves(root); }
std::size_t Protocol::depth() const { return node_depth(root); }

Protocol sample_locc_protocol(const std::vector<Register>& parties, std::size_t rounds,
                              std::size_t outcomes_per_round, Rng& rng) {
  if (rounds < 1) throw StructuralError("sample_locc_protocol: rounds must be at least 1");
  if (parties.empty()) throw StructuralError("sample_locc_protocol: no parties");
  return Protocol{sample_node(parties, 0, rounds, outcomes_per_round, rng)};
}

Ensemble run_protocol(const DensityOperator& rho, const Protocol& protocol) {
  std::vector<double> weights;
  std::vector<DensityOperator> states;
  std::vector<std::string> labels;
  run_node(rho, protocol.root, 1.0, "", weights, states, labels);
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return Ensemble(std::move(weights), std::move(states), std::move(labels));
}

}  // namespace entmon
