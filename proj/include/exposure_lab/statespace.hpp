// statespace.hpp
// Qubit and qutrit state families, spin-1 operators, exposure/entropy grid scans,
// fixed-entropy curves of the qubit family and exposure extremization along them.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exposure_lab/qmat.hpp"

namespace exposure_lab::statespace {

/// Qubit [[δ, α], [α*, 1 − δ]] in the σ_z basis, or equivalently a Bloch vector.
struct QubitParams {
  double delta = 0.5;
  qmat::Complex alpha = 0.0;

  /// δ = (1 + a_z)/2, α = (a_x − i a_y)/2. Throws invalid-state for |a| > 1 + 1e−12.
  static QubitParams from_bloch(double a_x, double a_y, double a_z);
  /// (a_x, a_y, a_z)
  std::vector<double> to_bloch() const;
  double alpha2() const { return std::norm(alpha); }
};

/// Throws invalid-state unless δ ∈ [0, 1] and |α|² ≤ δ − δ² + 1e−12.
qmat::DensityMatrix qubit_state(const QubitParams& p);

/// The qutrit family with all populations 1/3: off-diagonals ∓i a_j/2, eigenvalues
/// 1/3 and 1/3 ± |a|/2. Valid inside the sphere |a|² ≤ 4/9.
struct QutritParams {
  double a_x = 0.0;
  double a_y = 0.0;
  double a_z = 0.0;

  double norm2() const { return a_x * a_x + a_y * a_y + a_z * a_z; }
};

inline constexpr double kQutritRadius2 = 4.0 / 9.0;

/// Throws invalid-state when |a|² > 4/9 + 1e−12.
qmat::DensityMatrix qutrit_state(const QutritParams& p);

qmat::HermitianOperator spin_x();
qmat::HermitianOperator spin_y();
qmat::HermitianOperator spin_z();

/// Evaluates a polynomial in the spin-1 matrices, e.g. "SySz + SzSy", "Sx^2",
/// "0.5*(Sx Sy + Sy Sx) - I". Names: Sx/S_x, Sy/S_y, Sz/S_z, I (identity), i (imaginary
/// unit). Juxtaposition multiplies. Throws invalid-argument for a malformed expression
/// and invalid-operator when the result is not Hermitian.
qmat::HermitianOperator spin1_operator(std::string_view expression);

/// Qubit counterpart for scans: "sx", "sy" or "sz" (σ matrices). Throws invalid-argument
/// otherwise.
qmat::HermitianOperator qubit_operator(std::string_view name);

enum class Family { Qubit, Qutrit };

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t points = 101;

  /// k-th of `points` evenly spaced values; the last one is exactly hi.
  double at(std::size_t k) const;
};

/// Qubit: x = δ, y = |α|² (α taken real; exposure does not depend on its phase).
/// Qutrit: x = a_x, y = a_y at the fixed slice a_z = `slice`.
struct ScanGrid {
  Family family = Family::Qubit;
  Axis x;
  Axis y;
  double slice = 0.0;

  static ScanGrid qubit_default(std::size_t points = 101);
  static ScanGrid qutrit_default(double a_z = 0.0, std::size_t points = 61);
};

/// coords are (δ, |α|²) for the qubit family and (a_x, a_y, a_z) for the qutrit family.
/// Points outside the family's domain have valid = false and no values.
struct ScanRecord {
  std::vector<double> coords;
  std::optional<double> exposure;
  std::optional<double> renyi;
  bool valid = false;
};

/// Rows ordered x-major (x outer, y inner) whatever the thread count. Throws
/// invalid-argument for n ≤ 1 and invalid-dimensions when `op` does not act on the family.
std::vector<ScanRecord> scan_exposure(const ScanGrid& grid, const qmat::HermitianOperator& op,
                                      double n);

struct IsocurvePoint {
  double delta = 0.0;
  double alpha2 = 0.0;
  double exposure = 0.0;  // E_n with σ_z
  double renyi = 0.0;     // H_n at the solved point
};

struct Isocurve {
  std::vector<IsocurvePoint> points;
  /// One line per δ that was skipped.
  std::vector<std::string> diagnostics;
};

/// Bisection tolerance on |α|² and its iteration cap.
inline constexpr double kBisectionTol = 1e-12;
inline constexpr int kBisectionMaxIter = 200;

/// For each δ, solves H_n(δ, |α|²) = target for |α|² ∈ [0, δ − δ²] by bisection (H_n falls
/// strictly as |α|² grows). δ values without a bracket are omitted and listed in
/// diagnostics. Throws invalid-argument for a target outside [0, ln 2] or n ≤ 1.
Isocurve entropy_isocurve_qubit(double h_target, const std::vector<double>& delta_grid,
                                double n = 2.0);

struct ExtremizeResult {
  IsocurvePoint argmin;
  IsocurvePoint argmax;
  std::size_t curve_points = 0;
};

/// Grid scan of the isocurve over 1001 δ values in [0, 1]. Exposures within 1e−12
/// (relative) count as ties and resolve to the smaller δ. Throws no-solution when the
/// curve is empty.
ExtremizeResult extremize_exposure_on_isocurve(double h_target, double n = 2.0,
                                               std::size_t delta_points = 1001);

}  // namespace exposure_lab::statespace
