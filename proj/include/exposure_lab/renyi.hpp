// renyi.hpp
// n-Rényi entropies, n-purities, the von Neumann limit and spectrum reconstruction
// from integer purities. Natural logarithms throughout.

#pragma once

#include <cstddef>
#include <vector>

#include "exposure_lab/qmat.hpp"

namespace exposure_lab::renyi {

/// Either a real Rényi order n (n > 0, |n − 1| > 1e−9) or the von Neumann limit.
/// The limit is its own kind rather than n = 1 + tiny.
class RenyiIndex {
 public:
  static RenyiIndex order(double n);
  static RenyiIndex von_neumann() noexcept { return RenyiIndex(); }

  bool is_von_neumann() const noexcept { return von_neumann_; }
  /// The real order; 1 for the von Neumann limit.
  double n() const noexcept { return n_; }

 private:
  RenyiIndex() = default;
  double n_ = 1.0;
  bool von_neumann_ = true;
};

/// Eigenvalue list in descending order, non-negative, summing to one within 1e−9.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> values);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double min() const { return values_.back(); }

 private:
  std::vector<double> values_;
};

/// gammas[k − 1] holds γ_k = Tr ρᵏ for k = 1..d.
class PuritySequence {
 public:
  explicit PuritySequence(std::vector<double> gammas);

  const std::vector<double>& gammas() const noexcept { return gammas_; }
  std::size_t size() const noexcept { return gammas_.size(); }

 private:
  std::vector<double> gammas_;
};

/// Σ λᵢⁿ with 0ⁿ := 0 for n > 0.
double power_sum(const qmat::RealVector& eigenvalues, double n);

double n_purity(const qmat::DensityMatrix& rho, double n);

double renyi_entropy(const qmat::DensityMatrix& rho, const RenyiIndex& idx);
double renyi_entropy(const qmat::RealVector& eigenvalues, const RenyiIndex& idx);

double von_neumann(const qmat::DensityMatrix& rho);
double von_neumann(const qmat::RealVector& eigenvalues);

Spectrum spectrum_of(const qmat::DensityMatrix& rho);
PuritySequence purities_of(const Spectrum& spectrum);

/// Newton's identities turn γ₁..γ_d into elementary symmetric polynomials; the roots of
/// the characteristic polynomial (companion-matrix eigenvalues) form the spectrum.
/// Throws inconsistent-purities when a root is complex or outside [0, 1] beyond 1e−6.
Spectrum spectrum_from_purities(const PuritySequence& p, std::size_t d);

struct RenyiBoundsReport {
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
  bool bound1_ok = false;  // H₁ ≥ H₂
  bool bound2_ok = false;  // H₁ ≥ 2H₂ − H₃
};

RenyiBoundsReport renyi_bounds_check(const qmat::DensityMatrix& rho);

}  // namespace exposure_lab::renyi
