// verify.hpp
// Seeded property checks over random states and operators. Each check returns one row
// per comparison; trial k always draws from stream k of the seed, so verdicts do not
// depend on thread count or trial order.
//
// Random operators have unit spectral norm; random states are Ginibre.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace exposure_lab::verify {

struct CheckRow {
  std::string check;
  std::size_t trial = 0;
  double value = 0.0;
  double reference = 0.0;
  double abs_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CheckReport {
  std::string name;
  std::vector<CheckRow> rows;

  bool passed() const;
  std::size_t failures() const;
  double max_abs_error() const;
};

/// γ̇_n(0) for Σⱼ Âⱼ⊗B̂ⱼ (≤ 3 terms, dims 2–4, n ∈ {2, 3}): analytic |·| ≤ 1e−12 and
/// central difference (step 1e−4) |·| ≤ 1e−6.
CheckReport first_derivative(std::size_t trials, std::uint64_t seed);

/// γ̈_n(0) unchanged within 1e−10 when random Â⊗I and I⊗B̂ terms are added.
CheckReport free_hamiltonian(std::size_t trials, std::uint64_t seed);

/// Second central difference (step 1e−3) of H_n(ρ_A(t)) under exact evolution against
/// the analytic Ḧ_n, 1e−5 relative; full-rank ρ_A, n ∈ {2, 3, 4}.
CheckReport perturbative_exact(std::size_t trials, std::uint64_t seed);

/// D_n ≥ −1e−10 for n = 1..6, dims 2–5; every third state is rank deficient.
CheckReport durability_positivity(std::size_t trials, std::uint64_t seed);

/// |E_n| ≤ 1e−12 for pure states, n ∈ {2, 3}.
CheckReport pure_exposure(std::size_t trials, std::uint64_t seed);

/// |D_n(ρ₁⊗ρ₂, Â₁⊗I) − D_n(ρ₁, Â₁)| ≤ 1e−10, n ∈ {2, 3, 4}.
CheckReport tensor_extension(std::size_t trials, std::uint64_t seed);

/// Tripartite simulation: H_n(A') = H_n((BÃ)') and I^d + I^c = 0 at every sample (1e−9),
/// and I^d(0.01) − I^d(0) against the leading-order formula within 1% relative. Inputs are
/// redrawn until |n(ΔB)²E_n/(n − 1)| ≥ 0.05 so the t² term is resolvable at t = 0.01.
CheckReport complementary_symmetry(std::size_t trials, std::uint64_t seed);

/// H₁ ≥ H₂ and H₁ ≥ 2H₂ − H₃ with slack −1e−10, dims 2–5.
CheckReport renyi_bounds(std::size_t trials, std::uint64_t seed);

/// Spectrum → integer purities → spectrum, max entry error ≤ 1e−8, dims 2–5.
CheckReport spectrum_roundtrip(std::size_t trials, std::uint64_t seed);

/// Names accepted by run_check, in a fixed order.
const std::vector<std::string>& check_names();

/// Dispatches by name; throws invalid-argument for an unknown check.
CheckReport run_check(std::string_view name, std::size_t trials, std::uint64_t seed);

/// Default trial count for a named check.
std::size_t default_trials(std::string_view name);

}  // namespace exposure_lab::verify
