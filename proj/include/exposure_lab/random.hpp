// random.hpp
// Reproducible random states and operators for the property checks.
//
// The generator is SplitMix64 (Steele, Lea & Flood): a 64-bit counter advanced by
// 0x9E3779B97F4A7C15 and passed through a fixed mixing function. Stream k of seed s
// starts from the state mix(s) ^ mix(k + 1), so every trial owns an independent,
// addressable sequence and trials can run in any order.

#pragma once

#include <cstddef>
#include <cstdint>

#include "exposure_lab/qmat.hpp"

namespace exposure_lab::random {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  /// Generator for trial `stream` of a run seeded with `seed`.
  static SplitMix64 for_stream(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform integer in [lo, hi].
  std::size_t uniform_int(std::size_t lo, std::size_t hi) noexcept;
  /// Standard normal by Box–Muller (one draw per call; the partner value is discarded).
  double normal() noexcept;

 private:
  std::uint64_t state_;
};

/// Ginibre state G G†/Tr(G G†) with G of size dim × rank (rank = 0 means full).
qmat::DensityMatrix random_state(SplitMix64& rng, std::size_t dim, std::size_t rank = 0);

/// Ginibre state mixed with I/d at weight `floor_weight`, so λ_min ≥ floor_weight/d.
qmat::DensityMatrix random_full_rank_state(SplitMix64& rng, std::size_t dim,
                                           double floor_weight = 0.05);

/// Normalized complex Gaussian vector as a projector.
qmat::DensityMatrix random_pure_state(SplitMix64& rng, std::size_t dim);

/// (G + G†)/2 with standard complex Gaussian G, rescaled to unit spectral norm.
qmat::HermitianOperator random_hermitian(SplitMix64& rng, std::size_t dim);

}  // namespace exposure_lab::random
