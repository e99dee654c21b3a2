#include "entmon/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace entmon {

namespace {

std::string dims_to_string(const Dims& dims) {
  std::string s;
  for (std::size_t k = 0; k < dims.size(); ++k) s += (k ? "x" : "") + std::to_string(dims[k]);
  return s;
}

}  // namespace

std::vector<Register> standard_registers(const Dims& dims) {
  std::vector<Register> regs;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (k >= 26) throw StructuralError("at most 26 standard parties");
    const std::string label(1, static_cast<char>('A' + k));
    regs.push_back({label, label, dims[k]});
  }
  return regs;
}

DensityOperator::DensityOperator(ComplexMatrix matrix, std::vector<Register> registers)
    : DensityOperator(std::move(matrix), std::move(registers), true) {}

DensityOperator::DensityOperator(ComplexMatrix matrix, const Dims& dims)
    : DensityOperator(std::move(matrix), standard_registers(dims), true) {}

DensityOperator DensityOperator::from_trusted(ComplexMatrix matrix,
                                              std::vector<Register> registers) {
  return DensityOperator(std::move(matrix), std::move(registers), false);
}

DensityOperator::DensityOperator(ComplexMatrix matrix, std::vector<Register> registers,
                                 bool check_positivity)
    : matrix_(std::move(matrix)), registers_(std::move(registers)) {
  if (registers_.empty()) throw StructuralError("density operator needs at least one register");
  for (std::size_t k = 0; k < registers_.size(); ++k) {
    if (registers_[k].dim == 0) throw StructuralError("register " + registers_[k].label + " has dimension 0");
    if (registers_[k].label.empty() || registers_[k].owner.empty())
      throw StructuralError("register labels and owners must be non-empty");
    for (std::size_t j = 0; j < k; ++j)
      if (registers_[j].label == registers_[k].label)
        throw StructuralError("duplicate register label " + registers_[k].label);
  }
  if (!matrix_.square())
    throw StructuralError("density operator matrix is not square: " + shape_string(matrix_));
  const Dims d = dims();
  if (total_dimension(d) != matrix_.rows())
    throw StructuralError("register dimensions " + dims_to_string(d) + " do not match matrix " +
                          shape_string(matrix_));
  const double herm = hermiticity_defect(matrix_);
  if (herm > kStateTol)
    throw ContractError("density operator is not Hermitian (defect " + std::to_string(herm) + ")");
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > kStateTol)
    throw ContractError("density operator trace " + std::to_string(tr) + " != 1");
  if (check_positivity) {
    const auto eig = hermitian_eigenvalues(matrix_);
    if (eig.back() < -kStateTol)
      throw ContractError("density operator has negative eigenvalue " + std::to_string(eig.back()));
  }
}

Dims DensityOperator::dims() const {
  Dims d;
  for (const auto& r : registers_) d.push_back(r.dim);
  return d;
}

std::size_t DensityOperator::index_of(std::string_view label) const {
  for (std::size_t k = 0; k < registers_.size(); ++k)
    if (registers_[k].label == label) return k;
  throw StructuralError("unknown register label '" + std::string(label) + "'");
}

bool DensityOperator::has_register(std::string_view label) const {
  return std::any_of(registers_.begin(), registers_.end(),
                     [&](const Register& r) { return r.label == label; });
}

std::vector<std::size_t> DensityOperator::owned_by(std::string_view owner) const {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < registers_.size(); ++k)
    if (registers_[k].owner == owner) idx.push_back(k);
  return idx;
}

std::vector<std::string> DensityOperator::owners() const {
  std::vector<std::string> out;
  for (const auto& r : registers_)
    if (std::find(out.begin(), out.end(), r.owner) == out.end()) out.push_back(r.owner);
  return out;
}

double min_eigenvalue(const DensityOperator& rho) {
  return hermitian_eigenvalues(rho.matrix()).back();
}

Ensemble::Ensemble(std::vector<double> weights, std::vector<DensityOperator> states,
                   std::vector<std::string> labels)
    : weights_(std::move(weights)), states_(std::move(states)), labels_(std::move(labels)) {
  if (states_.empty()) throw StructuralError("ensemble must contain at least one state");
  if (weights_.size() != states_.size())
    throw StructuralError("ensemble has " + std::to_string(weights_.size()) + " weights for " +
                          std::to_string(states_.size()) + " states");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw ContractError("ensemble weight is negative");
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightTol)
    throw ContractError("ensemble weights sum to " + std::to_string(total));
  for (const auto& s : states_)
    if (s.registers() != states_.front().registers())
      throw StructuralError("ensemble states do not share a register layout");
  if (labels_.empty()) {
    for (std::size_t i = 0; i < states_.size(); ++i) labels_.push_back(std::to_string(i));
  } else if (labels_.size() != states_.size()) {
    throw StructuralError("ensemble label count mismatch");
  }
}

DensityOperator Ensemble::average() const {
  ComplexMatrix m(states_.front().dimension(), states_.front().dimension());
  for (std::size_t i = 0; i < size(); ++i) m += weights_[i] * states_[i].matrix();
  return DensityOperator::from_trusted(std::move(m), states_.front().registers());
}

FlagBasis::FlagBasis(std::string party, ComplexMatrix vectors)
    : party_(std::move(party)), vectors_(std::move(vectors)) {
  if (vectors_.cols() > vectors_.rows())
    throw StructuralError("flag basis has more vectors than its register dimension");
  const auto gram = vectors_.adjoint() * vectors_;
  const double defect = max_abs_diff(gram, ComplexMatrix::identity(vectors_.cols()));
  if (defect > 1e-12)
    throw ContractError("flag vectors are not orthonormal (defect " + std::to_string(defect) + ")");
}

FlagBasis FlagBasis::computational(std::string party, std::size_t dim) {
  return FlagBasis(std::move(party), ComplexMatrix::identity(dim));
}

FlagBasis FlagBasis::random(std::string party, std::size_t dim, std::size_t count, Rng& rng) {
  if (count > dim) throw StructuralError("flag basis: more vectors than dimension");
  const auto u = haar_unitary(dim, rng);
  ComplexMatrix v(dim, count);
  for (std::size_t j = 0; j < count; ++j) v.set_column(j, u.column(j));
  return FlagBasis(std::move(party), std::move(v));
}

std::string fresh_register_label(const DensityOperator& rho, std::string_view owner) {
  std::string label(owner);
  do {
    label += "'";
  } while (rho.has_register(label));
  return label;
}

DensityOperator flag_mix(const Ensemble& ensemble, std::string_view flag_party,
                         const FlagBasis& basis) {
  if (ensemble.size() > basis.size())
    throw StructuralError("flag_mix: ensemble of size " + std::to_string(ensemble.size()) +
                          " needs at least that many flags, basis has " +
                          std::to_string(basis.size()));
  const auto& first = ensemble.states().front();
  const auto owners = first.owners();
  if (std::find(owners.begin(), owners.end(), flag_party) == owners.end())
    throw StructuralError("flag_mix: unknown flag party '" + std::string(flag_party) + "'");

  ComplexMatrix m(first.dimension() * basis.dim(), first.dimension() * basis.dim());
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const auto flag = ComplexMatrix::projector(basis.vector(i));
    m += ensemble.weights()[i] * tensor(ensemble.states()[i].matrix(), flag);
  }
  auto regs = first.registers();
  regs.push_back({fresh_register_label(first, flag_party), std::string(flag_party), basis.dim()});
  return DensityOperator::from_trusted(std::move(m), std::move(regs));
}

DensityOperator flag_single(const DensityOperator& rho, std::size_t i, std::string_view flag_party,
                            const FlagBasis& basis) {
  if (i >= basis.size()) throw StructuralError("flag_single: flag index out of range");
  Ensemble single({1.0}, {rho});
  ComplexMatrix vectors(basis.dim(), 1);
  vectors.set_column(0, basis.vector(i));
  return flag_mix(single, flag_party, FlagBasis(basis.party(), std::move(vectors)));
}

DensityOperator embed_ancilla(const DensityOperator& rho, const DensityOperator& sigma,
                              std::string_view site) {
  if (sigma.registers().size() != 1)
    throw StructuralError("embed_ancilla: ancilla must be a single-register state");
  const auto owners = rho.owners();
  if (std::find(owners.begin(), owners.end(), site) == owners.end())
    throw StructuralError("embed_ancilla: unknown site '" + std::string(site) + "'");
  auto regs = rho.registers();
  regs.push_back({fresh_register_label(rho, site), std::string(site), sigma.dimension()});
  return DensityOperator::from_trusted(tensor(rho.matrix(), sigma.matrix()), std::move(regs));
}

DensityOperator single_register_state(ComplexMatrix matrix, std::string label, std::string owner) {
  const std::size_t d = matrix.rows();
  return DensityOperator(std::move(matrix), {{std::move(label), std::move(owner), d}});
}

Vector basis_vector(std::size_t d, std::size_t k) {
  if (k >= d) throw StructuralError("basis index out of range");
  Vector v(d, 0.0);
  v[k] = 1.0;
  return v;
}

DensityOperator max_entangled(std::size_t d) {
  if (d < 2) throw StructuralError("max_entangled: d must be at least 2");
  Vector psi(d * d, 0.0);
  for (std::size_t k = 0; k < d; ++k) psi[k * d + k] = 1.0 / std::sqrt(static_cast<double>(d));
  return DensityOperator::from_trusted(ComplexMatrix::projector(psi), standard_registers({d, d}));
}

DensityOperator isotropic(std::size_t d, double fidelity) {
  if (d < 2) throw StructuralError("isotropic: d must be at least 2");
  if (!(fidelity >= 0.0 && fidelity <= 1.0))
    throw StructuralError("isotropic: fidelity must lie in [0, 1]");
  const auto p = max_entangled(d).matrix();
  const double n = static_cast<double>(d * d);
  ComplexMatrix m = fidelity * p;
  m += ((1.0 - fidelity) / (n - 1.0)) * (ComplexMatrix::identity(d * d) - p);
  return DensityOperator::from_trusted(std::move(m), standard_registers({d, d}));
}

DensityOperator random_separable(std::size_t dim_a, std::size_t dim_b, std::size_t terms, Rng& rng) {
  if (terms < 1) throw StructuralError("random_separable: need at least one term");
  const auto weights = dirichlet_uniform(terms, rng);
  ComplexMatrix m(dim_a * dim_b, dim_a * dim_b);
  for (std::size_t k = 0; k < terms; ++k) {
    const auto a = haar_vector(dim_a, rng);
    const auto b = haar_vector(dim_b, rng);
    m += weights[k] * ComplexMatrix::projector(tensor(a, b));
  }
  return DensityOperator::from_trusted(std::move(m), standard_registers({dim_a, dim_b}));
}

DensityOperator random_separable(std::size_t dim_a, std::size_t dim_b, Rng& rng) {
  return random_separable(dim_a, dim_b, (dim_a * dim_b) * (dim_a * dim_b), rng);
}

DensityOperator random_state(const Dims& dims, std::size_t rank, Rng& rng) {
  return DensityOperator::from_trusted(random_density(total_dimension(dims), rank, rng),
                                       standard_registers(dims));
}

DensityOperator random_state(const Dims& dims, Rng& rng) {
  const std::size_t d = total_dimension(dims);
  return random_state(dims, 1 + uniform_index(d, rng), rng);
}

Ensemble random_ensemble(const Dims& dims, std::size_t size, Rng& rng) {
  auto weights = dirichlet_uniform(size, rng);
  std::vector<DensityOperator> states;
  for (std::size_t i = 0; i < size; ++i) states.push_back(random_state(dims, rng));
  return Ensemble(std::move(weights), std::move(states));
}

}  // namespace entmon
