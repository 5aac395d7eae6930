// oracles.hpp
// Independent reference computations for the unit tests. Nothing here calls the
// library's own eigen-based kernels.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "exposure_lab/qmat.hpp"

namespace oracle {

using exposure_lab::qmat::Complex;
using exposure_lab::qmat::ComplexMatrix;

/// Tr_B or Tr_A by explicit basis-vector sandwiches ⟨e_k|M|e_l⟩.
inline ComplexMatrix partial_trace_keep_a(const ComplexMatrix& m, std::size_t da, std::size_t db) {
  const auto a = static_cast<Eigen::Index>(da);
  const auto b = static_cast<Eigen::Index>(db);
  ComplexMatrix out = ComplexMatrix::Zero(a, a);
  for (Eigen::Index k = 0; k < b; ++k) {
    ComplexMatrix ek = ComplexMatrix::Zero(a * b, a);
    for (Eigen::Index i = 0; i < a; ++i) ek(i * b + k, i) = 1.0;
    out += ek.adjoint() * m * ek;
  }
  return out;
}

inline ComplexMatrix partial_trace_keep_b(const ComplexMatrix& m, std::size_t da, std::size_t db) {
  const auto a = static_cast<Eigen::Index>(da);
  const auto b = static_cast<Eigen::Index>(db);
  ComplexMatrix out = ComplexMatrix::Zero(b, b);
  for (Eigen::Index i = 0; i < a; ++i) {
    ComplexMatrix ei = ComplexMatrix::Zero(a * b, b);
    for (Eigen::Index k = 0; k < b; ++k) ei(i * b + k, k) = 1.0;
    out += ei.adjoint() * m * ei;
  }
  return out;
}

inline ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
  return Eigen::kroneckerProduct(x, y).eval();
}

/// e^{itH} by Padé scaling-and-squaring (Eigen's MatrixFunctions), not by eigendecomposition.
inline ComplexMatrix expm_unitary(const ComplexMatrix& h, double t) {
  const ComplexMatrix arg = Complex(0.0, t) * h;
  return arg.exp();
}

inline ComplexMatrix evolve(const ComplexMatrix& rho, const ComplexMatrix& h, double t) {
  const ComplexMatrix u = expm_unitary(h, t);
  return u * rho * u.adjoint();
}

}  // namespace oracle
