#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "entmon/measures.hpp"
#include "eigen_bridge.hpp"
#include "lbfgs.hpp"

namespace entmon {

namespace {

// Finite stand-in for +infinity inside line searches.
constexpr double kHuge = 1e300;
constexpr int kLineSearchBits = 34;  // ~6e-11 relative precision in t
constexpr std::uintmax_t kLineSearchMaxEvals = 200;
constexpr std::size_t kPolishEvery = 25;

struct Objective {
  const ComplexMatrix& rho;
  double neg_entropy;

  explicit Objective(const ComplexMatrix& r) : rho(r), neg_entropy(-von_neumann_entropy(r)) {}

  double operator()(const ComplexMatrix& sigma) const {
    return relative_entropy(rho, neg_entropy, detail::fast_eigensystem(sigma));
  }
  double operator()(const HermitianSpectrum& spec) const {
    return relative_entropy(rho, neg_entropy, spec);
  }
};

// Gradient of sigma -> -Tr rho log sigma: -V (L o V^dagger rho V) V^dagger, where L
// holds the divided differences of log over the spectrum of sigma. On the
// numerical kernel of sigma the block is zero: a finite objective means rho has
// no weight there, and what is left is rounding noise divided by ~0.
ComplexMatrix gradient(const ComplexMatrix& rho, const HermitianSpectrum& spec) {
  const std::size_t n = rho.rows();
  const auto& v = spec.eigenvectors;
  ComplexMatrix r = v.adjoint() * rho * v;
  std::vector<double> lam(n);
  for (std::size_t k = 0; k < n; ++k) lam[k] = std::max(spec.eigenvalues[k], 1e-14);
  const double kernel = kSupportCutoff * std::max(1.0, spec.eigenvalues.front());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      if (spec.eigenvalues[j] <= kernel && spec.eigenvalues[k] <= kernel) {
        r(j, k) = 0.0;
        continue;
      }
      const double diff = lam[j] - lam[k];
      const double l = std::abs(diff) <= 1e-10 * std::max(lam[j], lam[k])
                           ? 2.0 / (lam[j] + lam[k])
                           : (std::log(lam[j]) - std::log(lam[k])) / diff;
      r(j, k) *= -l;
    }
  return v * r * v.adjoint();
}

HermitianSpectrum scaled(HermitianSpectrum spec, double factor) {
  for (auto& l : spec.eigenvalues) l *= factor;
  return spec;
}

double expectation(const ComplexMatrix& h, const Vector& psi) {
  return std::real(inner(psi, h * std::span<const Complex>(psi)));
}

Vector top_eigenvector(const ComplexMatrix& m, double* value) {
  auto spec = hermitian_eigensystem(m, INFINITY);
  if (value != nullptr) *value = spec.eigenvalues.front();
  return spec.eigenvectors.column(0);
}

// (I (x) <b|) H (I (x) |b>)
ComplexMatrix reduce_over_b(const ComplexMatrix& h, const Vector& b, std::size_t da, std::size_t db) {
  ComplexMatrix m(da, da);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t ip = 0; ip < da; ++ip) {
      Complex s = 0.0;
      for (std::size_t j = 0; j < db; ++j) {
        Complex row = 0.0;
        for (std::size_t jp = 0; jp < db; ++jp) row += h(i * db + j, ip * db + jp) * b[jp];
        s += std::conj(b[j]) * row;
      }
      m(i, ip) = s;
    }
  return m;
}

// (<a| (x) I) H (|a> (x) I)
ComplexMatrix reduce_over_a(const ComplexMatrix& h, const Vector& a, std::size_t da, std::size_t db) {
  ComplexMatrix m(db, db);
  for (std::size_t j = 0; j < db; ++j)
    for (std::size_t jp = 0; jp < db; ++jp) {
      Complex s = 0.0;
      for (std::size_t i = 0; i < da; ++i) {
        Complex row = 0.0;
        for (std::size_t ip = 0; ip < da; ++ip) row += h(i * db + j, ip * db + jp) * a[ip];
        s += std::conj(a[i]) * row;
      }
      m(j, jp) = s;
    }
  return m;
}

struct ProductCandidate {
  Vector a;
  Vector b;
  double value = -std::numeric_limits<double>::infinity();
};

// Alternating top-eigenvector updates for max <a b| H |a b>.
ProductCandidate seesaw(const ComplexMatrix& h, Vector b, std::size_t da, std::size_t db,
                        std::size_t sweeps) {
  ProductCandidate c;
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < sweeps; ++s) {
    c.a = top_eigenvector(reduce_over_b(h, b, da, db), nullptr);
    b = top_eigenvector(reduce_over_a(h, c.a, da, db), &c.value);
    if (c.value - previous <= 1e-15 * std::max(1.0, std::abs(c.value))) break;
    previous = c.value;
  }
  c.b = std::move(b);
  return c;
}

ComplexMatrix product_projector(const Vector& a, const Vector& b) {
  return ComplexMatrix::projector(tensor(a, b));
}

// Minimizes a convex 1-D function on [0, upper].
std::pair<double, double> line_search(const std::function<double(double)>& phi, double upper) {
  std::uintmax_t evals = kLineSearchMaxEvals;
  auto guarded = [&](double t) {
    const double v = phi(t);
    return std::isfinite(v) ? v : kHuge;
  };
  return boost::math::tools::brent_find_minima(guarded, 0.0, upper, kLineSearchBits, evals);
}

void normalize_weights(std::vector<ProductTerm>& atoms) {
  std::erase_if(atoms, [](const ProductTerm& a) { return a.weight <= 1e-15; });
  double total = 0.0;
  for (const auto& atom : atoms) total += atom.weight;
  for (auto& atom : atoms) atom.weight /= total;
}

// Local refinement: all product vectors and weights move jointly under L-BFGS,
// sigma = sum_k |u_k v_k><u_k v_k| / Tr(.). Returns true and updates `atoms`
// when the objective decreases.
bool polish(const Objective& objective, std::vector<ProductTerm>& atoms, std::size_t da,
            std::size_t db, double& value) {
  const std::size_t n = da * db;
  const std::size_t per_atom = 2 * (da + db);
  const std::size_t k_atoms = atoms.size();

  std::vector<double> x(per_atom * k_atoms);
  for (std::size_t k = 0; k < k_atoms; ++k) {
    const double scale = std::sqrt(atoms[k].weight);
    double* p = &x[k * per_atom];
    for (std::size_t i = 0; i < da; ++i) {
      p[i] = scale * atoms[k].a[i].real();
      p[da + i] = scale * atoms[k].a[i].imag();
    }
    for (std::size_t j = 0; j < db; ++j) {
      p[2 * da + j] = atoms[k].b[j].real();
      p[2 * da + db + j] = atoms[k].b[j].imag();
    }
  }

  auto unpack = [&](std::span<const double> p, std::size_t k, Vector& u, Vector& v) {
    const double* q = p.data() + k * per_atom;
    u.resize(da);
    v.resize(db);
    for (std::size_t i = 0; i < da; ++i) u[i] = {q[i], q[da + i]};
    for (std::size_t j = 0; j < db; ++j) v[j] = {q[2 * da + j], q[2 * da + db + j]};
  };

  const detail::SmoothObjective f = [&](std::span<const double> p, double& out,
                                        std::span<double> grad) {
    std::vector<Vector> xs(k_atoms);
    std::vector<Vector> us(k_atoms), vs(k_atoms);
    ComplexMatrix unnormalized(n, n);
    for (std::size_t k = 0; k < k_atoms; ++k) {
      unpack(p, k, us[k], vs[k]);
      xs[k] = tensor(us[k], vs[k]);
      unnormalized += ComplexMatrix::projector(xs[k]);
    }
    const double t = unnormalized.trace().real();
    if (!(t > 0.0)) return false;
    const auto spec = scaled(detail::fast_eigensystem(unnormalized), 1.0 / t);
    out = objective(spec);
    if (!std::isfinite(out)) return false;
    // d/d(unnormalized) of S(rho | unnormalized / t) = (G(sigma) + I) / t.
    ComplexMatrix g = gradient(objective.rho, spec);
    for (std::size_t i = 0; i < n; ++i) g(i, i) += 1.0;
    g *= Complex(1.0 / t, 0.0);
    for (std::size_t k = 0; k < k_atoms; ++k) {
      const Vector gx = g * std::span<const Complex>(xs[k]);
      double* q = grad.data() + k * per_atom;
      for (std::size_t i = 0; i < da; ++i) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < db; ++j) s += std::conj(vs[k][j]) * gx[i * db + j];
        q[i] = 2.0 * s.real();
        q[da + i] = 2.0 * s.imag();
      }
      for (std::size_t j = 0; j < db; ++j) {
        Complex s = 0.0;
        for (std::size_t i = 0; i < da; ++i) s += std::conj(us[k][i]) * gx[i * db + j];
        q[2 * da + j] = 2.0 * s.real();
        q[2 * da + db + j] = 2.0 * s.imag();
      }
    }
    return true;
  };

  detail::LbfgsOptions opts;
  opts.max_iterations = 500;
  const auto outcome = detail::minimize_lbfgs(f, x, opts);
  if (!(outcome.value < value)) return false;

  std::vector<ProductTerm> refined;
  double total = 0.0;
  for (std::size_t k = 0; k < k_atoms; ++k) {
    Vector u, v;
    unpack(x, k, u, v);
    const double nu = norm(u), nv = norm(v);
    if (nu == 0.0 || nv == 0.0) continue;
    for (auto& z : u) z /= nu;
    for (auto& z : v) z /= nv;
    const double w = nu * nu * nv * nv;
    total += w;
    refined.push_back({w, std::move(u), std::move(v)});
  }
  for (auto& r : refined) r.weight /= total;
  normalize_weights(refined);
  // Re-evaluate on the assembled witness so the reported value is exactly its objective.
  const double assembled = objective(SeparableApprox::assemble(refined));
  if (!(assembled < value)) return false;
  atoms = std::move(refined);
  value = assembled;
  return true;
}

enum class StepOutcome { progress, converged, stalled };

}  // namespace

void ReeConfig::validate() const {
  if (max_iterations < 1 || restarts < 1 || inner_seesaw_sweeps < 1)
    throw StructuralError("ReeConfig: counts must be at least 1");
  if (!(convergence_tol > 0.0)) throw StructuralError("ReeConfig: convergence_tol must be positive");
}

ComplexMatrix SeparableApprox::assemble(const std::vector<ProductTerm>& terms) {
  if (terms.empty()) throw StructuralError("separable approximation without terms");
  const std::size_t n = terms.front().a.size() * terms.front().b.size();
  ComplexMatrix sigma(n, n);
  for (const auto& t : terms) sigma += t.weight * product_projector(t.a, t.b);
  return sigma;
}

ReeResult ree(const DensityOperator& rho_in, const ReeConfig& cfg) {
  return ree(rho_in, cfg, default_cut(rho_in));
}

namespace {

ReeResult frank_wolfe(const ComplexMatrix& rho, std::size_t da, std::size_t db, const ReeConfig& cfg) {
  struct {
    const ComplexMatrix& matrix;
  } view{rho};
  const std::size_t n = da * db;
  const Objective objective(view.matrix);
  Rng rng = derive_rng(cfg.seed, "ree-seesaw", n, 0);

  // Start from I/n written as a uniform mixture of computational product states.
  std::vector<ProductTerm> atoms;
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j)
      atoms.push_back({1.0 / static_cast<double>(n), basis_vector(da, i), basis_vector(db, j)});
  ComplexMatrix sigma = SeparableApprox::assemble(atoms);

  ReeResult result;
  double value = objective(sigma);
  result.history.push_back(value);

  // One away-step Frank-Wolfe iteration.
  auto fw_step = [&]() -> StepOutcome {
    const auto spec = detail::fast_eigensystem(sigma);
    const auto g = gradient(view.matrix, spec);
    const ComplexMatrix h = -1.0 * g;
    const double tr_g_sigma = std::real(trace_of_product(g, sigma));

    // Linear subproblem: the product vector maximizing <ab|(-G)|ab>.
    ProductCandidate best;
    std::size_t warm = 0;
    std::vector<double> atom_h(atoms.size());
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      atom_h[k] = expectation(h, tensor(atoms[k].a, atoms[k].b));
      if (atom_h[k] > atom_h[warm]) warm = k;
    }
    std::vector<Vector> starts{atoms[warm].b};
    for (std::size_t r = 0; r < cfg.restarts; ++r) starts.push_back(haar_vector(db, rng));
    for (auto& b0 : starts) {
      auto c = seesaw(h, std::move(b0), da, db, cfg.inner_seesaw_sweeps);
      if (c.value > best.value) best = std::move(c);
    }
    const double fw_gap = tr_g_sigma + best.value;
    result.gap = fw_gap;
    if (fw_gap < cfg.convergence_tol) return StepOutcome::converged;

    // Away vertex: the active atom with the largest <v|G|v>.
    const std::size_t away = static_cast<std::size_t>(
        std::min_element(atom_h.begin(), atom_h.end()) - atom_h.begin());
    const double away_gap = -atom_h[away] - tr_g_sigma;
    const bool away_possible = atoms.size() > 1 && atoms[away].weight < 1.0;

    // Atoms after a step of length t.
    auto stepped = [&](bool toward, double t) {
      auto next = atoms;
      if (toward) {
        for (auto& atom : next) atom.weight *= (1.0 - t);
        const auto s_vec = tensor(best.a, best.b);
        bool merged = false;
        for (auto& atom : next) {
          if (std::norm(inner(tensor(atom.a, atom.b), s_vec)) > 1.0 - 1e-12) {
            atom.weight += t;
            merged = true;
            break;
          }
        }
        if (!merged) next.push_back({t, best.a, best.b});
      } else {
        for (auto& atom : next) atom.weight *= (1.0 + t);
        next[away].weight -= t;
      }
      normalize_weights(next);
      return next;
    };

    auto attempt = [&](bool toward) {
      ComplexMatrix direction = toward ? product_projector(best.a, best.b) - sigma
                                       : sigma - product_projector(atoms[away].a, atoms[away].b);
      const double upper = toward ? 1.0 : atoms[away].weight / (1.0 - atoms[away].weight);
      auto phi = [&](double t) {
        ComplexMatrix s = sigma;
        s += t * direction;
        return objective(s);
      };
      const auto [t, candidate] = line_search(phi, upper);
      if (!(candidate < value) || t <= 0.0) return false;
      auto next = stepped(toward, t);
      ComplexMatrix next_sigma = SeparableApprox::assemble(next);
      const double next_value = objective(next_sigma);
      if (!(next_value < value)) return false;
      atoms = std::move(next);
      sigma = std::move(next_sigma);
      value = next_value;
      return true;
    };

    const bool prefer_away = away_possible && away_gap > fw_gap;
    if (prefer_away && attempt(false)) return StepOutcome::progress;
    if (attempt(true)) return StepOutcome::progress;
    if (!prefer_away && away_possible && attempt(false)) return StepOutcome::progress;
    return StepOutcome::stalled;
  };

  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    result.iterations = it + 1;
    const auto outcome = fw_step();
    if (outcome == StepOutcome::converged) {
      result.status = SolverStatus::converged;
      break;
    }
    if (outcome == StepOutcome::progress) result.history.push_back(value);
    if (outcome == StepOutcome::stalled || (it + 1) % kPolishEvery == 0) {
      const bool improved = polish(objective, atoms, da, db, value);
      if (improved) {
        sigma = SeparableApprox::assemble(atoms);
        result.history.push_back(value);
      } else if (outcome == StepOutcome::stalled) {
        result.status = result.gap < 10.0 * cfg.convergence_tol ? SolverStatus::converged
                                                                  : SolverStatus::unconverged;
        break;
      }
    }
  }

  result.witness.terms = std::move(atoms);
  result.witness.sigma = std::move(sigma);
  result.value = value;
  return result;
}

// Columns spanning the eigenvectors of `marginal` above the support cutoff.
ComplexMatrix support_isometry(const ComplexMatrix& marginal) {
  const auto spec = hermitian_eigensystem(marginal, INFINITY);
  std::size_t rank = 0;
  while (rank < spec.eigenvalues.size() && spec.eigenvalues[rank] > kSupportCutoff) ++rank;
  ComplexMatrix v(marginal.rows(), std::max<std::size_t>(rank, 1));
  for (std::size_t k = 0; k < v.cols(); ++k) v.set_column(k, spec.eigenvectors.column(k));
  return v;
}

}  // namespace

ReeResult ree(const DensityOperator& rho_in, const ReeConfig& cfg, const Bipartition& cut) {
  cfg.validate();
  const auto view = to_bipartite(rho_in, cut);
  const std::size_t da = view.dim_a;
  const std::size_t db = view.dim_b;
  const Dims dims{da, db};

  // The optimum can be taken inside supp(rho_A) (x) supp(rho_B): pinching onto it
  // is a local operation that fixes rho. Compressing there removes pure local
  // factors, which would otherwise force sigma onto the boundary.
  const auto va = support_isometry(partial_trace(view.matrix, dims, 1));
  const auto vb = support_isometry(partial_trace(view.matrix, dims, 0));
  const auto v = tensor(va, vb);
  ComplexMatrix compressed = v.adjoint() * view.matrix * v;
  compressed *= Complex(1.0 / compressed.trace().real(), 0.0);

  ReeResult result = frank_wolfe(compressed, va.cols(), vb.cols(), cfg);
  for (auto& term : result.witness.terms) {
    term.a = va * std::span<const Complex>(term.a);
    term.b = vb * std::span<const Complex>(term.b);
  }
  result.witness.sigma = SeparableApprox::assemble(result.witness.terms);
  result.witness.dim_a = da;
  result.witness.dim_b = db;
  return result;
}

ComplexMatrix project_to_density(const ComplexMatrix& x) {
  const auto spec = hermitian_eigensystem(x, INFINITY);
  // Euclidean projection of the spectrum onto the probability simplex.
  const auto& u = spec.eigenvalues;  // descending
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) theta = candidate;
  }
  return apply_spectral_function(spec, [theta](double l) { return std::max(l - theta, 0.0); });
}

ComplexMatrix project_to_ppt_cone(const ComplexMatrix& x, std::size_t dim_a, std::size_t dim_b) {
  const Dims dims{dim_a, dim_b};
  const auto spec = hermitian_eigensystem(partial_transpose(x, dims, 1), INFINITY);
  return partial_transpose(
      apply_spectral_function(spec, [](double l) { return std::max(l, 0.0); }), dims, 1);
}

}  // namespace entmon
