#include "entmon/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace entmon {

namespace {

// Digits of a flat index in the mixed radix given by dims, slowest first.
std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> strides(dims.size());
  std::size_t s = 1;
  for (std::size_t k = dims.size(); k-- > 0;) {
    strides[k] = s;
    s *= dims[k];
  }
  return strides;
}

void check_structure(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                     const char* what) {
  if (!rho.square())
    throw StructuralError(std::string(what) + ": matrix is not square (" + shape_string(rho) + ")");
  if (dims.empty()) throw StructuralError(std::string(what) + ": empty dimension list");
  for (auto d : dims)
    if (d == 0) throw StructuralError(std::string(what) + ": zero register dimension");
  if (total_dimension(dims) != rho.rows())
    throw StructuralError(std::string(what) + ": product of dims " +
                          std::to_string(total_dimension(dims)) + " != matrix dimension " +
                          std::to_string(rho.rows()));
}

void check_index(std::size_t idx, std::span<const std::size_t> dims, const char* what) {
  if (idx >= dims.size())
    throw StructuralError(std::string(what) + ": subsystem index " + std::to_string(idx) +
                          " out of range");
}

// Splits each flat index into (index over `inside` registers, index over the rest).
struct IndexSplit {
  std::vector<std::size_t> inside;
  std::vector<std::size_t> outside;
  std::size_t inside_dim = 1;
  std::size_t outside_dim = 1;
};

IndexSplit split_indices(std::span<const std::size_t> dims, std::span<const std::size_t> chosen) {
  const std::size_t total = total_dimension(dims);
  const auto strides = strides_of(dims);
  std::vector<bool> is_chosen(dims.size(), false);
  for (auto c : chosen) is_chosen[c] = true;

  IndexSplit split;
  split.inside.resize(total);
  split.outside.resize(total);
  for (auto c : chosen) split.inside_dim *= dims[c];
  split.outside_dim = total / split.inside_dim;

  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t in = 0;
    for (auto c : chosen) in = in * dims[c] + (flat / strides[c]) % dims[c];
    std::size_t out = 0;
    for (std::size_t k = 0; k < dims.size(); ++k)
      if (!is_chosen[k]) out = out * dims[k] + (flat / strides[k]) % dims[k];
    split.inside[flat] = in;
    split.outside[flat] = out;
  }
  return split;
}

struct Rotation {
  double c;
  double s;
  Complex phase;  // e^{-i phi}
};

// Unitary W = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] with W^dagger M W diagonal
// for the 2x2 Hermitian block [[app, apq], [conj(apq), aqq]].
Rotation jacobi_rotation(double app, double aqq, Complex apq) {
  const double r = std::abs(apq);
  const Complex phase = std::conj(apq) / r;
  const double theta = (aqq - app) / (2.0 * r);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, t * c, phase};
}

std::vector<double> jacobi(ComplexMatrix& a, ComplexMatrix* v) {
  const std::size_t n = a.rows();
  const double scale = a.frobenius_norm();
  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && scale > 0.0; ++sweep) {
    if (off_norm() <= kJacobiTol * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        if (std::abs(apq) <= std::numeric_limits<double>::min()) continue;
        const auto rot = jacobi_rotation(a(p, p).real(), a(q, q).real(), apq);
        const Complex sp = -rot.s * rot.phase;
        const Complex cp = rot.c * rot.phase;
        // A <- A W
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = rot.c * akp + sp * akq;
          a(k, q) = rot.s * akp + cp * akq;
        }
        // A <- W^dagger A
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = rot.c * apk + std::conj(sp) * aqk;
          a(q, k) = rot.s * apk + std::conj(cp) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        if (v != nullptr) {
          for (std::size_t k = 0; k < n; ++k) {
            const Complex vkp = (*v)(k, p);
            const Complex vkq = (*v)(k, q);
            (*v)(k, p) = rot.c * vkp + sp * vkq;
            (*v)(k, q) = rot.s * vkp + cp * vkq;
          }
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i).real();
  return eig;
}

ComplexMatrix symmetrized(const ComplexMatrix& a, double herm_tol) {
  if (!a.square())
    throw StructuralError("eigendecomposition of non-square matrix " + shape_string(a));
  const double defect = hermiticity_defect(a);
  if (defect > herm_tol)
    throw ContractError("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  ComplexMatrix h = a;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    h(i, i) = h(i, i).real();
    for (std::size_t j = i + 1; j < h.cols(); ++j) {
      const Complex m = 0.5 * (a(i, j) + std::conj(a(j, i)));
      h(i, j) = m;
      h(j, i) = std::conj(m);
    }
  }
  return h;
}

}  // namespace

std::size_t total_dimension(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ia = 0; ia < a.rows(); ++ia)
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      const Complex x = a(ia, ja);
      if (x == Complex(0.0, 0.0)) continue;
      for (std::size_t ib = 0; ib < b.rows(); ++ib)
        for (std::size_t jb = 0; jb < b.cols(); ++jb)
          out(ia * b.rows() + ib, ja * b.cols() + jb) = x * b(ib, jb);
    }
  return out;
}

Vector tensor(std::span<const Complex> a, std::span<const Complex> b) {
  Vector out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                            std::size_t drop) {
  const std::size_t d[] = {drop};
  return partial_trace(rho, dims, std::span<const std::size_t>(d));
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                            std::span<const std::size_t> drop) {
  check_structure(rho, dims, "partial_trace");
  for (auto k : drop) check_index(k, dims, "partial_trace");
  if (drop.size() >= dims.size()) {
    // Tracing everything leaves a 1x1 scalar.
    return ComplexMatrix(1, 1, {rho.trace()});
  }
  const auto split = split_indices(dims, drop);
  ComplexMatrix out(split.outside_dim, split.outside_dim);
  const std::size_t n = rho.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (split.inside[i] == split.inside[j])
        out(split.outside[i], split.outside[j]) += rho(i, j);
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                                std::size_t party) {
  const std::size_t p[] = {party};
  return partial_transpose(rho, dims, std::span<const std::size_t>(p));
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                                std::span<const std::size_t> parties) {
  check_structure(rho, dims, "partial_transpose");
  for (auto k : parties) check_index(k, dims, "partial_transpose");
  const auto strides = strides_of(dims);
  const std::size_t n = rho.rows();
  // Component of each flat index that lives on the transposed registers.
  std::vector<std::size_t> part(n, 0);
  for (std::size_t flat = 0; flat < n; ++flat)
    for (auto k : parties) part[flat] += ((flat / strides[k]) % dims[k]) * strides[k];

  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t ti = i - part[i] + part[j];
      const std::size_t tj = j - part[j] + part[i];
      out(ti, tj) = rho(i, j);
    }
  return out;
}

ComplexMatrix permute_registers(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                                std::span<const std::size_t> order) {
  check_structure(rho, dims, "permute_registers");
  if (order.size() != dims.size()) throw StructuralError("permute_registers: order length mismatch");
  std::vector<bool> seen(dims.size(), false);
  for (auto k : order) {
    check_index(k, dims, "permute_registers");
    if (seen[k]) throw StructuralError("permute_registers: repeated register in order");
    seen[k] = true;
  }
  const auto split = split_indices(dims, order);
  const std::size_t n = rho.rows();
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(split.inside[i], split.inside[j]) = rho(i, j);
  return out;
}

ComplexMatrix embed_operator(const ComplexMatrix& op, std::span<const std::size_t> dims,
                             std::span<const std::size_t> targets) {
  for (auto t : targets) check_index(t, dims, "embed_operator");
  std::size_t target_dim = 1;
  for (auto t : targets) target_dim *= dims[t];
  if (!op.square() || op.rows() != target_dim)
    throw StructuralError("embed_operator: operator " + shape_string(op) +
                          " does not act on target dimension " + std::to_string(target_dim));
  const auto split = split_indices(dims, targets);
  const std::size_t n = total_dimension(dims);
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (split.outside[i] == split.outside[j]) out(i, j) = op(split.inside[i], split.inside[j]);
  return out;
}

HermitianSpectrum hermitian_eigensystem(const ComplexMatrix& a, double herm_tol) {
  ComplexMatrix h = symmetrized(a, herm_tol);
  ComplexMatrix v = ComplexMatrix::identity(h.rows());
  auto eig = jacobi(h, &v);

  std::vector<std::size_t> order(eig.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return eig[x] > eig[y]; });
  HermitianSpectrum spec{std::vector<double>(eig.size()), ComplexMatrix(h.rows(), h.rows())};
  for (std::size_t k = 0; k < order.size(); ++k) {
    spec.eigenvalues[k] = eig[order[k]];
    for (std::size_t i = 0; i < h.rows(); ++i) spec.eigenvectors(i, k) = v(i, order[k]);
  }
  return spec;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a, double herm_tol) {
  ComplexMatrix h = symmetrized(a, herm_tol);
  auto eig = jacobi(h, nullptr);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

std::vector<double> singular_values(const ComplexMatrix& input) {
  ComplexMatrix a = input;
  const std::size_t n = a.cols();
  const double scale = a.frobenius_norm();
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && scale > 0.0; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t k = 0; k < a.rows(); ++k) {
          alpha += std::norm(a(k, p));
          beta += std::norm(a(k, q));
          gamma += std::conj(a(k, p)) * a(k, q);
        }
        if (std::abs(gamma) <= kJacobiTol * std::sqrt(alpha * beta) ||
            std::abs(gamma) <= std::numeric_limits<double>::min())
          continue;
        rotated = true;
        const auto rot = jacobi_rotation(alpha, beta, gamma);
        const Complex sp = -rot.s * rot.phase;
        const Complex cp = rot.c * rot.phase;
        for (std::size_t k = 0; k < a.rows(); ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = rot.c * akp + sp * akq;
          a(k, q) = rot.s * akp + cp * akq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.rows(); ++k) s += std::norm(a(k, j));
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

ComplexMatrix apply_spectral_function(const HermitianSpectrum& spec,
                                      const std::function<double(double)>& f) {
  const std::size_t n = spec.eigenvalues.size();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(spec.eigenvalues[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = fk * spec.eigenvectors(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(spec.eigenvectors(j, k));
    }
  }
  return out;
}

double trace_norm(const ComplexMatrix& a) {
  if (!a.square()) throw StructuralError("trace_norm of non-square matrix");
  double total = 0.0;
  if (is_hermitian(a, kHermitianTol * std::max(1.0, a.max_abs()))) {
    for (double x : hermitian_eigenvalues(a, INFINITY)) total += std::abs(x);
  } else {
    for (double s : singular_values(a)) total += s;
  }
  return total;
}

double purity(const ComplexMatrix& rho) { return std::real(trace_of_product(rho, rho)); }

double entropy_of_spectrum(std::span<const double> eigenvalues) {
  double s = 0.0;
  for (double x : eigenvalues)
    if (x >= kEntropyCutoff) s -= x * std::log(x);
  return s;
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  return entropy_of_spectrum(hermitian_eigenvalues(rho));
}

double relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.rows() != sigma.rows() || !rho.square() || !sigma.square())
    throw StructuralError("relative_entropy: dimension mismatch " + shape_string(rho) + " vs " +
                          shape_string(sigma));
  return relative_entropy(rho, -von_neumann_entropy(rho), hermitian_eigensystem(sigma));
}

double relative_entropy(const ComplexMatrix& rho, double neg_entropy_rho,
                        const HermitianSpectrum& sigma_spec) {
  const std::size_t n = rho.rows();
  double cross = 0.0;     // Tr rho log sigma over the support of sigma
  double outside = 0.0;   // weight of rho on the kernel of sigma
  for (std::size_t k = 0; k < n; ++k) {
    const auto v = sigma_spec.eigenvectors.column(k);
    const double w = std::real(inner(v, rho * std::span<const Complex>(v)));
    const double lambda = sigma_spec.eigenvalues[k];
    if (lambda <= kSupportCutoff) {
      outside += w;
    } else {
      cross += w * std::log(lambda);
    }
  }
  if (outside > kSupportCutoff) return std::numeric_limits<double>::infinity();
  return std::max(0.0, neg_entropy_rho - cross);
}

}  // namespace entmon
