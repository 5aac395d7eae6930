// onset.hpp
// Leading-order (t²) behaviour of n-purities and n-Rényi entropies when two systems
// A and B, initially in a product state, start to interact.
//
// For an interaction Â⊗B̂ everything reduces to properties of one side:
//   variance   (ΔA)² = Tr[ρÂ²] − Tr[ρÂ]²
//   durability D_n  = −Tr[ρⁿ⁻¹[Â,ρ]Â] / γ_n   (= (ΔA)² for pure ρ, ≥ 0 for integer n)
//   exposure   E_n  = (ΔA)² − D_n
// and Ḧ_n(A)|₀ = 2n(ΔB)² D_n/(n − 1). With B pure, the n-coherent information of the
// direct channel moves by −n t²(ΔB)² E_n/(n − 1).
//
// Every eigenbasis sum uses 0ᵖ := 0 for p > 0.

#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "exposure_lab/qmat.hpp"
#include "exposure_lab/renyi.hpp"

namespace exposure_lab::onset {

/// Smallest eigenvalue a state may have and still count as full rank.
inline constexpr double kRankTol = 1e-8;
/// Largest eigenvalue of a "pure" B must be at least 1 − kPureTol.
inline constexpr double kPureTol = 1e-10;

struct ProductHamiltonian {
  qmat::HermitianOperator op_a;
  qmat::HermitianOperator op_b;
};

/// Σⱼ Âⱼ⊗B̂ⱼ. Free terms are written as Â⊗I or I⊗B̂.
class GeneralHamiltonian {
 public:
  using Term = std::pair<qmat::HermitianOperator, qmat::HermitianOperator>;

  /// Throws invalid-dimensions for an empty term list or mismatched factor dimensions.
  explicit GeneralHamiltonian(std::vector<Term> terms);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t dim_a() const { return terms_.front().first.dim(); }
  std::size_t dim_b() const { return terms_.front().second.dim(); }

  /// The full operator on H_A ⊗ H_B.
  qmat::HermitianOperator assemble() const;

 private:
  std::vector<Term> terms_;
};

struct OnsetReport {
  renyi::RenyiIndex n = renyi::RenyiIndex::von_neumann();
  double variance_a = 0.0;
  double variance_b = 0.0;
  double durability_a = 0.0;
  double exposure_a = 0.0;
  /// Ḧ_n(A) at t = 0.
  double hdd_a = 0.0;
  /// δI_n^d / t². Empty when B is not pure or in the von Neumann limit (divergent).
  std::optional<double> delta_coefficient;
  /// a_ij = ⟨λᵢ|Â|λⱼ⟩ in the eigenbasis of ρ_A (eigenvalues ascending).
  qmat::ComplexMatrix op_in_eigenbasis;
};

double variance(const qmat::DensityMatrix& rho, const qmat::HermitianOperator& a);

/// ⟨λᵢ|Â|λⱼ⟩ for the eigenbasis of ρ.
qmat::ComplexMatrix op_in_eigenbasis(const qmat::DensityMatrix& rho,
                                     const qmat::HermitianOperator& a);

/// Σᵢⱼ λⱼᵖ (λᵢ − λⱼ)|a_ij|², i.e. Tr[ρᵖ[Â,ρ]Â] written in the eigenbasis of ρ.
double commutator_trace_term(const qmat::RealVector& eigenvalues,
                             const qmat::ComplexMatrix& a_eig, double power);

/// n must be > 1 or an integer ≥ 1. Throws numerical-failure when γ_n < 1e−300.
double durability(const qmat::DensityMatrix& rho, const qmat::HermitianOperator& a, double n);

double exposure(const qmat::DensityMatrix& rho, const qmat::HermitianOperator& a, double n);

/// Ḧ_n(A)|₀ = 2n(ΔB)² D_{n,A}/(n − 1); requires n > 1 + 1e−9.
double renyi_second_derivative(const qmat::DensityMatrix& rho_a,
                               const qmat::DensityMatrix& rho_b, const ProductHamiltonian& h,
                               double n);

/// δI_n^d = −(n t²/(n − 1)) (ΔB)² E_{n,A}. ρ_B must be pure.
double delta_coherent_info(const qmat::DensityMatrix& rho_a, const qmat::DensityMatrix& rho_b,
                           const ProductHamiltonian& h, double n, double t);

/// Everything above for one configuration. Real orders need n > 1. In the von Neumann
/// limit durability is its n = 1 value (0), hdd_a is the full-rank formula and
/// delta_coefficient stays empty.
OnsetReport onset_report(const qmat::DensityMatrix& rho_a, const qmat::DensityMatrix& rho_b,
                         const ProductHamiltonian& h, const renyi::RenyiIndex& n);

struct PurityDerivatives {
  double gamma_dot0 = 0.0;
  double gamma_ddot0 = 0.0;
};

/// γ̇_n(0) and γ̈_n(0) of the chosen subsystem for a product initial state under a general
/// Σⱼ Âⱼ⊗B̂ⱼ, from the closed double sum over term pairs. n is an integer ≥ 2.
PurityDerivatives purity_derivatives_general(const qmat::DensityMatrix& rho_a,
                                             const qmat::DensityMatrix& rho_b,
                                             const GeneralHamiltonian& h, int n,
                                             qmat::Subsystem which);

/// Ḧ_{1+ε} = −2(1+ε)(ΔB)² Tr[ρ^ε[Â,ρ]Â] / (ε γ_{1+ε}), ε ∈ (0, 1).
double epsilon_second_derivative(const qmat::DensityMatrix& rho_a, double variance_b,
                                 const qmat::HermitianOperator& a, double eps);

/// −2(ΔB)² Σᵢⱼ ln(λⱼ)(λᵢ − λⱼ)|a_ij|². Throws rank-deficient-state when λ_min < 1e−8.
double vn_second_derivative_fullrank(const qmat::DensityMatrix& rho,
                                     const qmat::HermitianOperator& a, double variance_b);

struct TraceTermRow {
  double lambda1 = 0.0;
  double lambda_min = 0.0;
  double eps = 0.0;
  double raw = 0.0;
  double regularized = 0.0;
};

/// Default qutrit family: λ = (0.5, λ₁, 0.5 − λ₁) with λ₁ on a uniform grid over [0, 0.5].
/// Entries stay in this order; it fixes which basis state carries which eigenvalue.
std::vector<std::vector<double>> qutrit_half_family(std::size_t points);

/// For each spectrum (taken as ρ = diag(λ)) and ε: raw = Σᵢⱼ λⱼ^ε(λᵢ − λⱼ)|a_ij|² and
/// regularized = (1 + ε)/ε · raw. Without an operator every |a_ij| is 1. Rows are ordered
/// spectrum-major. lambda1 records the second listed entry, the slice coordinate of the
/// default family. Each entry list must be a valid spectrum.
std::vector<TraceTermRow> trace_term_scan(const std::vector<std::vector<double>>& spectra,
                                          const std::vector<double>& eps_grid,
                                          const std::optional<qmat::ComplexMatrix>& a = {});

/// The fixed Hermitian test operator used for the asymmetric divergence map.
qmat::ComplexMatrix test_operator();

}  // namespace exposure_lab::onset
