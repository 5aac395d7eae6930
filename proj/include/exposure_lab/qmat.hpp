// qmat.hpp
// Dense complex matrix core: Hermitian/density-matrix value types, eigendecomposition,
// Kronecker products, bipartite partial traces and exact unitary evolution.
//
// All matrices are dense. Dimensions in this project stay below ~100, so there is no
// sparse path.

#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace exposure_lab::qmat {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Relative Hermiticity tolerance: ‖M − M†‖_max ≤ kHermitianTol · ‖M‖_max.
inline constexpr double kHermitianTol = 1e-12;
/// |Tr ρ − 1| allowed for a density matrix.
inline constexpr double kTraceTol = 1e-10;
/// Eigenvalues in [−kNegativeEigTol, kZeroEigClamp] are treated as exact zeros;
/// anything more negative rejects the state.
inline constexpr double kNegativeEigTol = 1e-10;
inline constexpr double kZeroEigClamp = 1e-12;

enum class Subsystem { A, B };

/// Eigenvalues ascending, eigenvectors as the columns of a unitary matrix.
/// Each eigenvector's largest-magnitude component is made real and positive.
struct EigenDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

class HermitianOperator {
 public:
  /// Throws invalid-operator when the matrix is not square, not finite or not Hermitian.
  explicit HermitianOperator(ComplexMatrix m);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

  static HermitianOperator identity(std::size_t dim);

 private:
  ComplexMatrix m_;
};

/// Positive-semidefinite, unit-trace Hermitian matrix. The (clamped) eigendecomposition is
/// computed once at construction and cached.
class DensityMatrix {
 public:
  /// Throws invalid-state for non-Hermitian input, |Tr − 1| > 1e−10 or an eigenvalue
  /// below −1e−10.
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix from_pure(const ComplexVector& psi);
  static DensityMatrix diagonal(const RealVector& probabilities);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

  /// Clamped eigenvalues (ascending) and eigenvectors of the state.
  const EigenDecomposition& eigen() const noexcept { return eig_; }
  const RealVector& eigenvalues() const noexcept { return eig_.eigenvalues; }

  double min_eigenvalue() const { return eig_.eigenvalues(0); }
  double max_eigenvalue() const { return eig_.eigenvalues(eig_.eigenvalues.size() - 1); }

  /// True when the largest eigenvalue is within `tol` of one.
  bool is_pure(double tol = 1e-10) const { return max_eigenvalue() >= 1.0 - tol; }

 private:
  ComplexMatrix m_;
  EigenDecomposition eig_;
};

ComplexMatrix tensor_product(const ComplexMatrix& m1, const ComplexMatrix& m2);

/// Trace over the discarded factor of a (dim_a·dim_b)-square matrix on H_A ⊗ H_B.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Subsystem keep);

EigenDecomposition hermitian_eig(const HermitianOperator& h);
EigenDecomposition hermitian_eig(const ComplexMatrix& hermitian);

/// U diag(λᵖ) U† with the clamp rule 0ᵖ = 0 for p > 0 and 0⁰ = 1.
ComplexMatrix matrix_power(const DensityMatrix& rho, double p);

ComplexMatrix commutator(const ComplexMatrix& x, const ComplexMatrix& y);

/// e^{itH}
ComplexMatrix unitary(const HermitianOperator& h, double t);
ComplexMatrix unitary(const EigenDecomposition& h_eig, double t);

/// e^{itH} ρ₀ e^{−itH}
DensityMatrix evolve(const DensityMatrix& rho0, const HermitianOperator& h, double t);
DensityMatrix evolve(const DensityMatrix& rho0, const EigenDecomposition& h_eig, double t);

/// Re Tr[ρ X]
double expectation(const DensityMatrix& rho, const ComplexMatrix& x);

double max_abs(const ComplexMatrix& m);

/// Pauli matrices in the σ_z eigenbasis (|z+⟩ first).
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

}  // namespace exposure_lab::qmat
