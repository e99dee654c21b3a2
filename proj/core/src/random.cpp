#include "entmon/random.hpp"

#include <cmath>

namespace entmon {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng derive_rng(std::uint64_t seed, std::string_view stream, std::uint64_t profile,
               std::int64_t trial) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ stable_hash(stream));
  s = splitmix64(s ^ profile);
  s = splitmix64(s ^ static_cast<std::uint64_t>(trial));
  return Rng(s);
}

Complex complex_normal(Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

std::vector<double> dirichlet_uniform(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) {
    x = expo(rng);
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

Vector haar_vector(std::size_t d, Rng& rng) {
  Vector v(d);
  for (auto& z : v) z = complex_normal(rng);
  const double n = norm(v);
  for (auto& z : v) z /= n;
  return v;
}

ComplexMatrix haar_unitary(std::size_t d, Rng& rng) {
  if (d == 0) throw StructuralError("haar_unitary: dimension must be positive");
  ComplexMatrix g(d, d);
  for (auto& z : g.data()) z = complex_normal(rng);

  ComplexMatrix q(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    Vector col = g.column(j);
    // Two passes of modified Gram-Schmidt keep orthogonality at roundoff level.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        const Vector qk = q.column(k);
        const Complex proj = inner(qk, col);
        for (std::size_t i = 0; i < d; ++i) col[i] -= proj * qk[i];
      }
    }
    const double n = norm(col);
    for (auto& z : col) z /= n;
    q.set_column(j, col);
  }
  return q;
}

ComplexMatrix random_density(std::size_t d, std::size_t rank, Rng& rng) {
  if (d == 0) throw StructuralError("random_density: dimension must be positive");
  if (rank < 1 || rank > d)
    throw StructuralError("random_density: rank " + std::to_string(rank) +
                          " outside [1, " + std::to_string(d) + "]");
  ComplexMatrix g(d, rank);
  for (auto& z : g.data()) z = complex_normal(rng);
  ComplexMatrix rho = g * g.adjoint();
  const double tr = rho.trace().real();
  rho *= Complex(1.0 / tr, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    rho(i, i) = rho(i, i).real();
    for (std::size_t j = i + 1; j < d; ++j) rho(j, i) = std::conj(rho(i, j));
  }
  return rho;
}

std::size_t uniform_index(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(rng);
}

}  // namespace entmon
