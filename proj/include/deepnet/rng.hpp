#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "deepnet/matrix.hpp"

namespace deepnet {

// xoshiro256** seeded through splitmix64.
//
// The state is four 64-bit words produced by running splitmix64 from `seed`.
// Each call to next_u64() is the reference xoshiro256** step:
//   result = rotl(s1 * 5, 7) * 9
//   t = s1 << 17; s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t; s3 = rotl(s3, 45)
// Doubles take the top 53 bits: (x >> 11) * 2^-53, so uniform() is in [0, 1).
// Normals use Box-Muller without caching the second variate. Nothing here
// depends on the standard library's distributions, so sequences are
// identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() noexcept;
  double uniform() noexcept;
  // [lo, hi); throws ArgumentError unless lo < hi.
  double uniform(double lo, double hi);
  double normal() noexcept;
  // Unbiased integer in [0, n) by rejection; n must be > 0.
  std::uint64_t below(std::uint64_t n);

  // Independent child stream: Rng(splitmix64(seed ^ golden * (stream + 1))).
  // Does not advance this generator.
  Rng fork(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// Matrix of uniform draws in [lo, hi), filled row-major.
Matrix rng_uniform(Rng& rng, double lo, double hi, std::size_t rows, std::size_t cols);

// Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> shuffled_indices(Rng& rng, std::size_t n);

}  // namespace deepnet
