#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/Dense>

#include "entmon/measures.hpp"

namespace entmon {

namespace {

constexpr double kInitialBarrier = 1.0;
constexpr double kBarrierDecay = 0.1;
constexpr int kMaxNewtonSteps = 100;
constexpr double kDecrementTol = 1e-13;
constexpr double kArmijo = 0.25;

// Divided differences of log.
double log_dd1(double a, double b) {
  if (a == b) return 1.0 / a;
  return std::log1p((a - b) / b) / (a - b);
}

double log_dd2(double a, double b, double c) {
  // Put the most separated pair in (a, c).
  if (std::abs(a - b) > std::abs(a - c) && std::abs(a - b) >= std::abs(b - c)) std::swap(b, c);
  else if (std::abs(b - c) > std::abs(a - c)) std::swap(a, b);
  if (std::abs(a - c) <= 1e-6 * std::max(a, c)) {
    const double m = (a + b + c) / 3.0;
    return -0.5 / (m * m);
  }
  return (log_dd1(a, b) - log_dd1(b, c)) / (a - c);
}

// Orthonormal real coordinates on Hermitian n x n matrices: diagonal entries, then
// sqrt(2) Re and sqrt(2) Im of each upper off-diagonal entry.
class HermitianCoordinates {
 public:
  explicit HermitianCoordinates(std::size_t n) : n_(n) {}

  std::size_t size() const { return n_ * n_; }

  Eigen::VectorXd to_coords(const ComplexMatrix& m) const {
    Eigen::VectorXd x(static_cast<Eigen::Index>(size()));
    Eigen::Index k = 0;
    for (std::size_t i = 0; i < n_; ++i) x(k++) = m(i, i).real();
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) {
        x(k++) = std::sqrt(2.0) * m(i, j).real();
        x(k++) = std::sqrt(2.0) * m(i, j).imag();
      }
    return x;
  }

  ComplexMatrix to_matrix(const Eigen::VectorXd& x) const {
    ComplexMatrix m(n_, n_);
    Eigen::Index k = 0;
    for (std::size_t i = 0; i < n_; ++i) m(i, i) = x(k++);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) {
        const Complex z(x(k) / std::sqrt(2.0), x(k + 1) / std::sqrt(2.0));
        k += 2;
        m(i, j) = z;
        m(j, i) = std::conj(z);
      }
    return m;
  }

  ComplexMatrix basis(std::size_t index) const {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size()));
    e(static_cast<Eigen::Index>(index)) = 1.0;
    return to_matrix(e);
  }

  // Gradient of sigma -> Tr sigma along the coordinates.
  Eigen::VectorXd trace_direction() const {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size()));
    a.head(static_cast<Eigen::Index>(n_)).setOnes();
    return a;
  }

 private:
  std::size_t n_;
};

// Phi(sigma) = -Tr rho log sigma - mu log det sigma - mu log det sigma^{T_B}
class BarrierProblem {
 public:
  BarrierProblem(const ComplexMatrix& rho, std::size_t dim_a, std::size_t dim_b)
      : rho_(rho), dims_{dim_a, dim_b}, n_(rho.rows()) {}

  struct Point {
    ComplexMatrix sigma;
    HermitianSpectrum spec;
    HermitianSpectrum pt_spec;
    double cross = 0.0;  // -Tr rho log sigma
    double log_det = 0.0;
    double pt_log_det = 0.0;
  };

  std::optional<Point> evaluate(ComplexMatrix sigma) const {
    Point p;
    p.spec = hermitian_eigensystem(sigma, INFINITY);
    p.pt_spec = hermitian_eigensystem(partial_transpose(sigma, dims_, 1), INFINITY);
    if (!(p.spec.eigenvalues.back() > 0.0) || !(p.pt_spec.eigenvalues.back() > 0.0)) return std::nullopt;
    for (std::size_t k = 0; k < n_; ++k) {
      const Vector v = p.spec.eigenvectors.column(k);
      const double weight = expectation(v);
      p.cross -= weight * std::log(p.spec.eigenvalues[k]);
      p.log_det += std::log(p.spec.eigenvalues[k]);
      p.pt_log_det += std::log(p.pt_spec.eigenvalues[k]);
    }
    p.sigma = std::move(sigma);
    return p;
  }

  static double value(const Point& p, double mu) { return p.cross - mu * (p.log_det + p.pt_log_det); }

  ComplexMatrix gradient(const Point& p, double mu) const {
    const auto& v = p.spec.eigenvectors;
    const auto& lam = p.spec.eigenvalues;
    ComplexMatrix r = v.adjoint() * rho_ * v;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) r(i, j) *= -log_dd1(lam[i], lam[j]);
      r(i, i) -= mu / lam[i];
    }
    ComplexMatrix g = v * r * v.adjoint();
    g -= mu * partial_transpose(inverse(p.pt_spec), dims_, 1);
    return g;
  }

  // Hessian of Phi in the Hermitian coordinates.
  Eigen::MatrixXd hessian(const Point& p, double mu, const HermitianCoordinates& coords) const {
    const auto& v = p.spec.eigenvectors;
    const auto& lam = p.spec.eigenvalues;
    const ComplexMatrix r = v.adjoint() * rho_ * v;
    std::vector<double> dd2(n_ * n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t j = 0; j < n_; ++j) dd2[(i * n_ + k) * n_ + j] = log_dd2(lam[i], lam[k], lam[j]);
    const ComplexMatrix pt_inv = inverse(p.pt_spec);

    const auto m = static_cast<Eigen::Index>(coords.size());
    Eigen::MatrixXd h(m, m);
    for (Eigen::Index b = 0; b < m; ++b) {
      const ComplexMatrix e = coords.basis(static_cast<std::size_t>(b));
      const ComplexMatrix et = v.adjoint() * e * v;
      ComplexMatrix act(n_, n_);
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
          Complex s = 0.0;
          for (std::size_t k = 0; k < n_; ++k)
            s += dd2[(i * n_ + k) * n_ + j] * (r(i, k) * et(k, j) + et(i, k) * r(k, j));
          act(i, j) = -s + mu * et(i, j) / (lam[i] * lam[j]);
        }
      ComplexMatrix full = v * act * v.adjoint();
      full += mu * partial_transpose(pt_inv * partial_transpose(e, dims_, 1) * pt_inv, dims_, 1);
      h.col(b) = coords.to_coords(full);
    }
    return 0.5 * (h + h.transpose());
  }

 private:
  double expectation(const Vector& v) const {
    return std::real(inner(v, rho_ * std::span<const Complex>(v)));
  }

  static ComplexMatrix inverse(const HermitianSpectrum& spec) {
    return apply_spectral_function(spec, [](double l) { return 1.0 / l; });
  }

  const ComplexMatrix& rho_;
  Dims dims_;
  std::size_t n_;
};

}  // namespace

PptResult ppt_relative_entropy(const DensityOperator& rho_in, double tol) {
  return ppt_relative_entropy(rho_in, tol, default_cut(rho_in));
}

PptResult ppt_relative_entropy(const DensityOperator& rho_in, double tol, const Bipartition& cut) {
  if (!(tol > 0.0)) throw StructuralError("ppt_relative_entropy: tol must be positive");
  const auto view = to_bipartite(rho_in, cut);
  const std::size_t n = view.dim_a * view.dim_b;
  const HermitianCoordinates coords(n);
  const BarrierProblem problem(view.matrix, view.dim_a, view.dim_b);
  const Eigen::VectorXd trace_dir = coords.trace_direction();
  const auto m = static_cast<Eigen::Index>(coords.size());

  auto point = *problem.evaluate((1.0 / static_cast<double>(n)) * ComplexMatrix::identity(n));
  PptResult result;
  result.status = SolverStatus::converged;

  for (double mu = kInitialBarrier;; mu *= kBarrierDecay) {
    bool centered = false;
    for (int step = 0; step < kMaxNewtonSteps; ++step) {
      const Eigen::VectorXd g = coords.to_coords(problem.gradient(point, mu));
      // Equality-constrained Newton step keeping Tr sigma = 1.
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
      kkt.topLeftCorner(m, m) = problem.hessian(point, mu, coords);
      kkt.block(0, m, m, 1) = trace_dir;
      kkt.block(m, 0, 1, m) = trace_dir.transpose();
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
      rhs.head(m) = -g;
      const Eigen::VectorXd dx = kkt.fullPivLu().solve(rhs).head(m);
      const double decrement = -g.dot(dx);
      ++result.iterations;
      if (!(decrement > 2.0 * kDecrementTol)) {
        centered = true;
        break;
      }
      const double phi = BarrierProblem::value(point, mu);
      const ComplexMatrix direction = coords.to_matrix(dx);
      bool moved = false;
      for (double t = 1.0; t > 1e-12; t *= 0.5) {
        ComplexMatrix trial = point.sigma;
        trial += t * direction;
        auto next = problem.evaluate(std::move(trial));
        if (next && BarrierProblem::value(*next, mu) <= phi - kArmijo * t * decrement) {
          point = std::move(*next);
          moved = true;
          break;
        }
      }
      if (!moved) {
        // Roundoff floor: the step is below what the objective can resolve.
        centered = decrement < 1e-8;
        break;
      }
    }
    if (!centered) result.status = SolverStatus::unconverged;
    if (2.0 * static_cast<double>(n) * mu < tol) break;
  }

  ComplexMatrix sigma = point.sigma;
  sigma *= Complex(1.0 / sigma.trace().real(), 0.0);
  result.value = relative_entropy(view.matrix, sigma);
  result.sigma = std::move(sigma);
  return result;
}

}  // namespace entmon
