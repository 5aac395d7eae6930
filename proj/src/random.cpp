#include "exposure_lab/random.hpp"

#include <algorithm>
#include <cmath>

namespace exposure_lab::random {

using qmat::Complex;
using qmat::ComplexMatrix;

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ComplexMatrix ginibre(SplitMix64& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  // Fill in a fixed (row-major) order so the draw sequence is easy to reproduce elsewhere.
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

}  // namespace

SplitMix64 SplitMix64::for_stream(std::uint64_t seed, std::uint64_t stream) noexcept {
  return SplitMix64(mix(seed) ^ mix(stream + 1));
}

std::uint64_t SplitMix64::next() noexcept {
  state_ += kGolden;
  return mix(state_);
}

double SplitMix64::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::size_t SplitMix64::uniform_int(std::size_t lo, std::size_t hi) noexcept {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::size_t>(next() % span);
}

double SplitMix64::normal() noexcept {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

qmat::DensityMatrix random_state(SplitMix64& rng, std::size_t dim, std::size_t rank) {
  const ComplexMatrix g = ginibre(rng, dim, rank == 0 ? dim : rank);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return qmat::DensityMatrix(rho);
}

qmat::DensityMatrix random_full_rank_state(SplitMix64& rng, std::size_t dim,
                                           double floor_weight) {
  const auto d = static_cast<Eigen::Index>(dim);
  const ComplexMatrix mixed = (1.0 - floor_weight) * random_state(rng, dim).matrix() +
                              (floor_weight / static_cast<double>(dim)) *
                                  ComplexMatrix::Identity(d, d);
  return qmat::DensityMatrix(mixed);
}

qmat::DensityMatrix random_pure_state(SplitMix64& rng, std::size_t dim) {
  const ComplexMatrix g = ginibre(rng, dim, 1);
  return qmat::DensityMatrix::from_pure(g.col(0));
}

qmat::HermitianOperator random_hermitian(SplitMix64& rng, std::size_t dim) {
  const ComplexMatrix g = ginibre(rng, dim, dim);
  const ComplexMatrix h = 0.5 * (g + g.adjoint());
  const auto ev = qmat::hermitian_eig(h).eigenvalues;
  const double norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return qmat::HermitianOperator(h / norm);
}

}  // namespace exposure_lab::random
