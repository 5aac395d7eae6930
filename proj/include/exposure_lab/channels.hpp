// channels.hpp
// Exact evolution of the A-B channel: the phase-filter closed form for a product
// coupling, the purified tripartite simulation Ã⊗A⊗B, the qubit/field-mode (UDW)
// closed forms and a truncated-Fock oracle for the same model.
//
// The field coupling constant is absorbed into t throughout.

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "exposure_lab/onset.hpp"
#include "exposure_lab/qmat.hpp"
#include "exposure_lab/renyi.hpp"

namespace exposure_lab::channels {

/// ρ_A(t) for the coupling Â⊗B̂. Both states are rotated into the eigenbases of Â and B̂,
/// element (i, j) is multiplied by Σ_k p_k e^{itb_k(a_i − a_j)} and the result is rotated back.
qmat::DensityMatrix product_channel_state(const qmat::DensityMatrix& rho_a,
                                          const qmat::DensityMatrix& rho_b,
                                          const onset::ProductHamiltonian& h, double t);

/// Pure state on H_Ã ⊗ H_A ⊗ H_B, stored as one amplitude vector with Ã outermost.
class TripartiteState {
 public:
  /// Throws invalid-dimensions when the sizes disagree, invalid-state when the norm is
  /// off by more than 1e−10.
  TripartiteState(std::size_t dim_anc, std::size_t dim_a, std::size_t dim_b,
                  qmat::ComplexVector amplitudes);

  std::size_t dim_anc() const noexcept { return dims_[0]; }
  std::size_t dim_a() const noexcept { return dims_[1]; }
  std::size_t dim_b() const noexcept { return dims_[2]; }
  const qmat::ComplexVector& amplitudes() const noexcept { return psi_; }

  /// Reduced state on the listed factors (any non-empty subset of {Ã, A, B}), kept in
  /// Ã, A, B order.
  qmat::DensityMatrix reduced(bool keep_anc, bool keep_a, bool keep_b) const;

 private:
  std::size_t dims_[3];
  qmat::ComplexVector psi_;
};

/// Σᵢ √λᵢ |i⟩_Ã |λᵢ⟩_A with λ descending; vector on H_Ã ⊗ H_A, d_Ã = d_A.
qmat::ComplexVector purify(const qmat::DensityMatrix& rho_a);

struct TimeSeriesRecord {
  double t = 0.0;
  double h_a = 0.0;   // H_n(A')
  double h_b = 0.0;   // H_n(B')
  double h_ba = 0.0;  // H_n((BÃ)')
  double h_aa = 0.0;  // H_n((AÃ)')
  /// H_n(A') − H_n((AÃ)')
  double i_direct = 0.0;
  /// H_n(B') − H_n((BÃ)')
  double i_complementary = 0.0;
  /// Spectrum of ρ_A(t), descending.
  std::vector<double> spectrum_a;
};

struct TimeSeries {
  renyi::RenyiIndex n = renyi::RenyiIndex::von_neumann();
  std::vector<TimeSeriesRecord> records;
};

/// Purifies ρ_A, appends the pure B and evolves with I_Ã ⊗ e^{itH}. Both coherent
/// informations are built from their own entropies, so their sum is a real check.
/// Throws invalid-argument when ψ_B is not pure.
TimeSeries coherent_info_timeseries(const qmat::DensityMatrix& rho_a,
                                    const qmat::DensityMatrix& psi_b,
                                    const onset::GeneralHamiltonian& h,
                                    const renyi::RenyiIndex& n, const std::vector<double>& t_grid);

/// Qubit in the σ_z basis, [[δ, α], [α*, 1 − δ]].
struct UdwQubitParams {
  double delta = 0.5;
  qmat::Complex alpha = 0.0;

  /// Throws invalid-state unless δ ∈ [0, 1] and |α|² ≤ δ − δ² + 1e−12.
  void validate() const;
};

/// ρ_q(t): diagonal unchanged, coherences damped by e^{−2t²}.
qmat::DensityMatrix udw_qubit_state(const UdwQubitParams& p, double t);

struct UdwEigenRecord {
  double t = 0.0;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  /// (λ̇₊, λ̇₋)
  std::pair<double, double> d_lambda{0.0, 0.0};
  /// (λ̈₊, λ̈₋)
  std::pair<double, double> dd_lambda{0.0, 0.0};
};

/// Closed-form eigenvalues of ρ_q(t) and their first two time derivatives. A degenerate
/// spectrum (gap < 1e−12) reports zero derivatives.
UdwEigenRecord udw_eigen(const UdwQubitParams& p, double t);

struct UdwClosedForms {
  double hdd = 0.0;
  double exposure = 0.0;
};

/// Ḧ_n and E_n at t = 0 for the σ_z ⊗ (a + a†) coupling to the vacuum ((ΔB)² = 1).
/// Requires n > 1.
UdwClosedForms udw_closed_forms(const UdwQubitParams& p, double n);

/// N-level truncation of a bosonic mode.
class FockTruncation {
 public:
  /// Throws invalid-argument for fewer than two levels.
  explicit FockTruncation(std::size_t levels = 40);

  std::size_t levels() const noexcept { return levels_; }
  /// a|k⟩ = √k|k − 1⟩, so the √k sit one step off the diagonal at (k − 1, k).
  const qmat::ComplexMatrix& annihilation() const noexcept { return a_; }
  /// a + a†
  qmat::ComplexMatrix quadrature() const { return a_ + a_.adjoint(); }

 private:
  std::size_t levels_;
  qmat::ComplexMatrix a_;
};

/// Largest entrywise disagreement tolerated between N and N + 10 levels.
inline constexpr double kFockConvergenceTol = 1e-6;

/// Qubit reduction of e^{itH}(ρ_q ⊗ |0⟩⟨0|)e^{−itH} with H = σ_z ⊗ (a + a†), computed
/// densely on 2N dimensions. The same evolution with N + 10 levels must agree within
/// 1e−6, otherwise truncation-error.
qmat::DensityMatrix fock_udw_oracle(const UdwQubitParams& p, const FockTruncation& trunc,
                                    double t);

/// fock_udw_oracle over a time grid, diagonalizing each Hamiltonian once.
std::vector<qmat::DensityMatrix> fock_udw_series(const UdwQubitParams& p,
                                                 const FockTruncation& trunc,
                                                 const std::vector<double>& t_grid);

}  // namespace exposure_lab::channels
