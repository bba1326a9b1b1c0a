#include "pcs/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "pcs/errors.hpp"

namespace pcs {

namespace {

// splitmix64 finalizer; the standard 64-bit mixing function.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t kDomainTag = 0x7063732d76647331ULL;

}  // namespace

std::uint64_t SeedSpec::child(std::string_view label,
                              std::span<const std::uint64_t> indices) const {
  std::uint64_t h = mix64(master_seed ^ kDomainTag);
  h = mix64(h ^ fnv1a64(label));
  for (std::uint64_t ix : indices) h = mix64(h ^ ix);
  return h;
}

std::uint64_t SeedSpec::child(std::string_view label) const {
  return child(label, std::span<const std::uint64_t>{});
}

std::uint64_t SeedSpec::child(std::string_view label, std::uint64_t i) const {
  const std::uint64_t ix[] = {i};
  return child(label, ix);
}

std::uint64_t SeedSpec::child(std::string_view label, std::uint64_t i,
                              std::uint64_t j) const {
  const std::uint64_t ix[] = {i, j};
  return child(label, ix);
}

std::uint64_t RngStream::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw BadConfig("uniform_below: bound must be >= 1");
  if (bound == 1) return 0;
  // Rejection below 2^64 mod bound keeps the draw unbiased.
  const std::uint64_t threshold = (-bound) % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  // u1 in (0,1] so the log is finite.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::student_t(int df) {
  if (df < 1) throw BadConfig("student_t: df must be a positive integer");
  const double z = normal();
  double chi2 = 0.0;
  for (int i = 0; i < df; ++i) {
    const double g = normal();
    chi2 += g * g;
  }
  return z / std::sqrt(chi2 / static_cast<double>(df));
}

std::vector<std::size_t> RngStream::permutation(std::size_t n) {
  std::vector<std::size_t> out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = uniform_below(i);
    std::swap(out[i - 1], out[j]);
  }
  return out;
}

std::vector<std::size_t> RngStream::sample_with_replacement(
    std::size_t n, std::size_t count) {
  std::vector<std::size_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = uniform_below(n);
  return out;
}

std::vector<std::size_t> RngStream::sample_without_replacement(std::size_t n,
                                                               std::size_t k) {
  if (k > n) throw BadConfig("sample_without_replacement: k > n");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + uniform_below(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace pcs
