#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace pcs {

/// Deterministic child-seed derivation from a master seed.
///
/// A child seed is a 64-bit mix over master_seed ‖ label ‖ index tuple, so
/// every (replicate, half, ...) task can derive its own independent stream
/// without any ordering dependency between tasks. Identical inputs always
/// yield identical child seeds, across processes and platforms.
struct SeedSpec {
  std::uint64_t master_seed = 0;

  std::uint64_t child(std::string_view label,
                      std::span<const std::uint64_t> indices) const;
  std::uint64_t child(std::string_view label) const;
  std::uint64_t child(std::string_view label, std::uint64_t i) const;
  std::uint64_t child(std::string_view label, std::uint64_t i,
                      std::uint64_t j) const;
};

/// Random stream with code-pinned distributions.
///
/// All sampling algorithms (uniform, Box-Muller normal, rejection-based
/// bounded integers, Fisher-Yates shuffles) live here rather than in
/// std::*_distribution so that generated sequences are reproducible
/// bit-for-bit regardless of standard library version.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Unbiased integer in [0, bound); bound must be >= 1.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform double in [0, 1).
  double uniform();

  /// Standard normal draw (Box-Muller, two uniforms per call).
  double normal();

  /// Student t draw with integer df >= 1 (normal over sqrt(chi2/df)).
  double student_t(int df);

  /// Uniform random permutation of {0, ..., n-1}.
  std::vector<std::size_t> permutation(std::size_t n);

  /// `count` indices drawn uniformly with replacement from {0, ..., n-1}.
  std::vector<std::size_t> sample_with_replacement(std::size_t n,
                                                   std::size_t count);

  /// Uniform k-subset of {0, ..., n-1}, returned sorted ascending.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k);

 private:
  std::mt19937_64 gen_;
};

}  // namespace pcs
