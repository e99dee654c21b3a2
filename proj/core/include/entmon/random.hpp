#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "entmon/matrix.hpp"

namespace entmon {

using Rng = std::mt19937_64;

/// Stable 64-bit FNV-1a hash, used to derive per-stream seeds from names.
std::uint64_t stable_hash(std::string_view text);

/// Seeds an independent generator for one (seed, stream, profile, trial) tuple.
/// The same tuple always yields the same generator state.
Rng derive_rng(std::uint64_t seed, std::string_view stream, std::uint64_t profile,
               std::int64_t trial);

/// Standard complex normal: real and imaginary parts N(0, 1/2).
Complex complex_normal(Rng& rng);

/// Uniform point on the probability simplex (Dirichlet(1, ..., 1)).
std::vector<double> dirichlet_uniform(std::size_t n, Rng& rng);

/// Haar-random unit vector.
Vector haar_vector(std::size_t d, Rng& rng);

/// Haar-random unitary: Ginibre matrix orthonormalized column by column.
/// Gram-Schmidt leaves a positive real diagonal in the implicit R factor,
/// which is the phase normalization Haar sampling requires.
ComplexMatrix haar_unitary(std::size_t d, Rng& rng);

/// Wishart-type density operator G G^dagger / Tr with G of shape d x rank.
ComplexMatrix random_density(std::size_t d, std::size_t rank, Rng& rng);

std::size_t uniform_index(std::size_t n, Rng& rng);

}  // namespace entmon
