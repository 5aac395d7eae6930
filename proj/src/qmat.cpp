#include "exposure_lab/qmat.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "exposure_lab/error.hpp"

namespace exposure_lab::qmat {

namespace {

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

bool is_hermitian(const ComplexMatrix& m) {
  const double scale = max_abs(m);
  const double asym = max_abs(m - m.adjoint());
  return asym <= kHermitianTol * scale;
}

ComplexMatrix symmetrized(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

void fix_phases(ComplexMatrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      // Near-ties resolve to the lowest index so the choice is reproducible.
      const double mag = std::abs(vectors(r, c));
      if (mag > best * (1.0 + 1e-12)) {
        best = mag;
        pivot = r;
      }
    }
    if (best > 0.0) {
      const Complex phase = std::conj(vectors(pivot, c)) / best;
      vectors.col(c) *= phase;
    }
  }
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::InvalidDimensions,
                std::string(what) + ": matrix must be square, got " + std::to_string(m.rows()) +
                    "x" + std::to_string(m.cols()));
  }
}

}  // namespace

HermitianOperator::HermitianOperator(ComplexMatrix m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::InvalidOperator, "operator must be a non-empty square matrix");
  }
  if (!all_finite(m)) throw Error(ErrorKind::InvalidOperator, "operator has non-finite entries");
  if (!is_hermitian(m)) throw Error(ErrorKind::InvalidOperator, "operator is not Hermitian");
  m_ = symmetrized(m);
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return HermitianOperator(ComplexMatrix::Identity(d, d));
}

DensityMatrix::DensityMatrix(ComplexMatrix m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::InvalidState, "density matrix must be a non-empty square matrix");
  }
  if (!all_finite(m)) throw Error(ErrorKind::InvalidState, "density matrix has non-finite entries");
  if (!is_hermitian(m)) throw Error(ErrorKind::InvalidState, "density matrix is not Hermitian");
  m_ = symmetrized(m);
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw Error(ErrorKind::InvalidState, "density matrix trace " + std::to_string(tr) + " != 1");
  }
  eig_ = hermitian_eig(m_);
  for (Eigen::Index i = 0; i < eig_.eigenvalues.size(); ++i) {
    double& lambda = eig_.eigenvalues(i);
    if (lambda < -kNegativeEigTol) {
      throw Error(ErrorKind::InvalidState,
                  "density matrix has negative eigenvalue " + std::to_string(lambda));
    }
    if (lambda < kZeroEigClamp) lambda = 0.0;
  }
}

DensityMatrix DensityMatrix::from_pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::InvalidState, "zero state vector");
  const ComplexVector unit = psi / norm;
  return DensityMatrix(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::diagonal(const RealVector& probabilities) {
  return DensityMatrix(probabilities.cast<Complex>().asDiagonal());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return DensityMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(dim));
}

ComplexMatrix tensor_product(const ComplexMatrix& m1, const ComplexMatrix& m2) {
  ComplexMatrix out(m1.rows() * m2.rows(), m1.cols() * m2.cols());
  for (Eigen::Index i = 0; i < m1.rows(); ++i) {
    for (Eigen::Index j = 0; j < m1.cols(); ++j) {
      out.block(i * m2.rows(), j * m2.cols(), m2.rows(), m2.cols()) = m1(i, j) * m2;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Subsystem keep) {
  const auto da = static_cast<Eigen::Index>(dim_a);
  const auto db = static_cast<Eigen::Index>(dim_b);
  if (da == 0 || db == 0 || m.rows() != da * db || m.cols() != da * db) {
    throw Error(ErrorKind::InvalidDimensions,
                "partial_trace: matrix is " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + ", expected " + std::to_string(da * db) + "-square");
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index j = 0; j < da; ++j)
        for (Eigen::Index k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (Eigen::Index k = 0; k < db; ++k)
    for (Eigen::Index l = 0; l < db; ++l)
      for (Eigen::Index i = 0; i < da; ++i) out(k, l) += m(i * db + k, i * db + l);
  return out;
}

EigenDecomposition hermitian_eig(const HermitianOperator& h) { return hermitian_eig(h.matrix()); }

EigenDecomposition hermitian_eig(const ComplexMatrix& hermitian) {
  require_square(hermitian, "hermitian_eig");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalFailure, "Hermitian eigensolver did not converge");
  }
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  fix_phases(out.eigenvectors);
  return out;
}

ComplexMatrix matrix_power(const DensityMatrix& rho, double p) {
  if (!(p >= 0.0)) throw Error(ErrorKind::InvalidArgument, "matrix_power: exponent must be >= 0");
  const auto& eig = rho.eigen();
  RealVector powered(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < powered.size(); ++i) {
    const double lambda = eig.eigenvalues(i);
    powered(i) = lambda == 0.0 ? (p == 0.0 ? 1.0 : 0.0) : std::pow(lambda, p);
  }
  return eig.eigenvectors * powered.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
}

ComplexMatrix commutator(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.rows() != x.cols() || y.rows() != y.cols() || x.rows() != y.rows()) {
    throw Error(ErrorKind::InvalidDimensions, "commutator: operands must be equal square matrices");
  }
  return x * y - y * x;
}

ComplexMatrix unitary(const HermitianOperator& h, double t) { return unitary(hermitian_eig(h), t); }

ComplexMatrix unitary(const EigenDecomposition& h_eig, double t) {
  ComplexVector phases(h_eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, t * h_eig.eigenvalues(i));
  }
  return h_eig.eigenvectors * phases.asDiagonal() * h_eig.eigenvectors.adjoint();
}

DensityMatrix evolve(const DensityMatrix& rho0, const HermitianOperator& h, double t) {
  if (rho0.dim() != h.dim()) {
    throw Error(ErrorKind::InvalidDimensions, "evolve: state and Hamiltonian dimensions differ");
  }
  return evolve(rho0, hermitian_eig(h), t);
}

DensityMatrix evolve(const DensityMatrix& rho0, const EigenDecomposition& h_eig, double t) {
  if (static_cast<Eigen::Index>(rho0.dim()) != h_eig.eigenvalues.size()) {
    throw Error(ErrorKind::InvalidDimensions, "evolve: state and Hamiltonian dimensions differ");
  }
  const ComplexMatrix u = unitary(h_eig, t);
  return DensityMatrix(u * rho0.matrix() * u.adjoint());
}

double expectation(const DensityMatrix& rho, const ComplexMatrix& x) {
  if (x.rows() != static_cast<Eigen::Index>(rho.dim()) || x.cols() != x.rows()) {
    throw Error(ErrorKind::InvalidDimensions, "expectation: operator and state dimensions differ");
  }
  return (rho.matrix() * x).trace().real();
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

}  // namespace exposure_lab::qmat
