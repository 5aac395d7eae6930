#include "exposure_lab/onset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "exposure_lab/error.hpp"

namespace exposure_lab::onset {

using qmat::Complex;
using qmat::ComplexMatrix;
using qmat::DensityMatrix;
using qmat::HermitianOperator;
using qmat::RealVector;

namespace {

constexpr double kGammaUnderflow = 1e-300;

void require_same_dim(const DensityMatrix& rho, const HermitianOperator& a, const char* what) {
  if (rho.dim() != a.dim()) {
    throw Error(ErrorKind::InvalidDimensions,
                std::string(what) + ": state is " + std::to_string(rho.dim()) +
                    "-dimensional but operator is " + std::to_string(a.dim()) + "-dimensional");
  }
}

bool is_integer(double n) { return std::abs(n - std::round(n)) <= 1e-12; }

void require_durability_order(double n) {
  if (!std::isfinite(n) || !(n > 1.0 || (is_integer(n) && n >= 1.0 - 1e-12))) {
    throw Error(ErrorKind::InvalidArgument, "durability needs n > 1 or an integer n >= 1");
  }
}

void require_onset_order(double n) {
  if (!(n > 1.0 + 1e-9) || !std::isfinite(n)) {
    throw Error(ErrorKind::InvalidArgument, "second derivative needs a finite n > 1");
  }
}

double clamped_pow(double lambda, double p) {
  if (lambda == 0.0) return p == 0.0 ? 1.0 : 0.0;
  return std::pow(lambda, p);
}

double checked_power_sum(const RealVector& eigenvalues, double n) {
  const double gamma = renyi::power_sum(eigenvalues, n);
  if (!(gamma >= kGammaUnderflow)) {
    throw Error(ErrorKind::NumericalFailure, "n-purity underflow");
  }
  return gamma;
}

}  // namespace

GeneralHamiltonian::GeneralHamiltonian(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw Error(ErrorKind::InvalidDimensions, "Hamiltonian has no terms");
  for (const auto& [a, b] : terms_) {
    if (a.dim() != dim_a() || b.dim() != dim_b()) {
      throw Error(ErrorKind::InvalidDimensions, "Hamiltonian terms act on different dimensions");
    }
  }
}

HermitianOperator GeneralHamiltonian::assemble() const {
  const auto n = static_cast<Eigen::Index>(dim_a() * dim_b());
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (const auto& [a, b] : terms_) h += qmat::tensor_product(a.matrix(), b.matrix());
  return HermitianOperator(h);
}

double variance(const DensityMatrix& rho, const HermitianOperator& a) {
  require_same_dim(rho, a, "variance");
  const double mean = qmat::expectation(rho, a.matrix());
  const double second = qmat::expectation(rho, a.matrix() * a.matrix());
  return std::max(0.0, second - mean * mean);
}

ComplexMatrix op_in_eigenbasis(const DensityMatrix& rho, const HermitianOperator& a) {
  require_same_dim(rho, a, "op_in_eigenbasis");
  const auto& u = rho.eigen().eigenvectors;
  return u.adjoint() * a.matrix() * u;
}

double commutator_trace_term(const RealVector& eigenvalues, const ComplexMatrix& a_eig,
                             double power) {
  const Eigen::Index d = eigenvalues.size();
  if (a_eig.rows() != d || a_eig.cols() != d) {
    throw Error(ErrorKind::InvalidDimensions, "commutator_trace_term: dimension mismatch");
  }
  double sum = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double weight = clamped_pow(eigenvalues(j), power);
    if (weight == 0.0) continue;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (i == j) continue;
      sum += weight * (eigenvalues(i) - eigenvalues(j)) * std::norm(a_eig(i, j));
    }
  }
  return sum;
}

double durability(const DensityMatrix& rho, const HermitianOperator& a, double n) {
  require_durability_order(n);
  const double gamma = checked_power_sum(rho.eigenvalues(), n);
  const double term = commutator_trace_term(rho.eigenvalues(), op_in_eigenbasis(rho, a), n - 1.0);
  return -term / gamma;
}

double exposure(const DensityMatrix& rho, const HermitianOperator& a, double n) {
  return variance(rho, a) - durability(rho, a, n);
}

double renyi_second_derivative(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                               const ProductHamiltonian& h, double n) {
  require_onset_order(n);
  const double var_b = variance(rho_b, h.op_b);
  return 2.0 * n * var_b * durability(rho_a, h.op_a, n) / (n - 1.0);
}

double delta_coherent_info(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                           const ProductHamiltonian& h, double n, double t) {
  require_onset_order(n);
  if (!rho_b.is_pure(kPureTol)) {
    throw Error(ErrorKind::InvalidArgument, "delta_coherent_info requires a pure rho_B");
  }
  const double var_b = variance(rho_b, h.op_b);
  return -(n * t * t / (n - 1.0)) * var_b * exposure(rho_a, h.op_a, n);
}

OnsetReport onset_report(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                         const ProductHamiltonian& h, const renyi::RenyiIndex& n) {
  OnsetReport r;
  r.n = n;
  r.variance_a = variance(rho_a, h.op_a);
  r.variance_b = variance(rho_b, h.op_b);
  r.op_in_eigenbasis = op_in_eigenbasis(rho_a, h.op_a);
  if (n.is_von_neumann()) {
    r.durability_a = durability(rho_a, h.op_a, 1.0);
    r.exposure_a = r.variance_a - r.durability_a;
    r.hdd_a = vn_second_derivative_fullrank(rho_a, h.op_a, r.variance_b);
    return r;
  }
  const double order = n.n();
  require_onset_order(order);
  r.durability_a = durability(rho_a, h.op_a, order);
  r.exposure_a = r.variance_a - r.durability_a;
  r.hdd_a = 2.0 * order * r.variance_b * r.durability_a / (order - 1.0);
  if (rho_b.is_pure(kPureTol)) {
    r.delta_coefficient = -(order / (order - 1.0)) * r.variance_b * r.exposure_a;
  }
  return r;
}

PurityDerivatives purity_derivatives_general(const DensityMatrix& rho_a,
                                             const DensityMatrix& rho_b,
                                             const GeneralHamiltonian& h, int n,
                                             qmat::Subsystem which) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "purity derivatives need integer n >= 2");
  if (rho_a.dim() != h.dim_a() || rho_b.dim() != h.dim_b()) {
    throw Error(ErrorKind::InvalidDimensions, "state dimensions do not match the Hamiltonian");
  }

  // `kept` is the subsystem whose purity is differentiated; `partner` is traced out.
  const bool keep_b = which == qmat::Subsystem::B;
  const DensityMatrix& kept = keep_b ? rho_b : rho_a;
  const DensityMatrix& partner = keep_b ? rho_a : rho_b;
  std::vector<ComplexMatrix> kept_ops;
  std::vector<ComplexMatrix> partner_ops;
  for (const auto& [a, b] : h.terms()) {
    kept_ops.push_back(keep_b ? b.matrix() : a.matrix());
    partner_ops.push_back(keep_b ? a.matrix() : b.matrix());
  }
  const std::size_t terms = kept_ops.size();

  const ComplexMatrix& sigma = kept.matrix();
  const ComplexMatrix sigma_pow = qmat::matrix_power(kept, static_cast<double>(n - 1));

  std::vector<Complex> means(terms);
  for (std::size_t j = 0; j < terms; ++j) {
    means[j] = (partner_ops[j] * partner.matrix()).trace();
  }

  Complex first = 0.0;
  for (std::size_t j = 0; j < terms; ++j) {
    first += means[j] * (sigma_pow * qmat::commutator(kept_ops[j], sigma)).trace();
  }

  // −2n Σ_jk (a_j a_k Tr[σⁿ⁻¹[Xⱼ,σ]X_k] + c_jk Tr[σⁿ⁻¹[σXⱼ,X_k]]) with the partner's
  // moments a_j = Tr[Yⱼτ], c_jk = Tr[YⱼY_kτ].
  Complex second = 0.0;
  for (std::size_t j = 0; j < terms; ++j) {
    const ComplexMatrix comm_j = qmat::commutator(kept_ops[j], sigma);
    const ComplexMatrix sigma_xj = sigma * kept_ops[j];
    for (std::size_t k = 0; k < terms; ++k) {
      const Complex cross = (partner_ops[j] * partner_ops[k] * partner.matrix()).trace();
      second += means[j] * means[k] * (sigma_pow * comm_j * kept_ops[k]).trace();
      second += cross * (sigma_pow * qmat::commutator(sigma_xj, kept_ops[k])).trace();
    }
  }

  const double dn = static_cast<double>(n);
  PurityDerivatives out;
  out.gamma_dot0 = (Complex(0.0, dn) * first).real();
  out.gamma_ddot0 = (-2.0 * dn * second).real();
  return out;
}

double epsilon_second_derivative(const DensityMatrix& rho_a, double variance_b,
                                 const HermitianOperator& a, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
  }
  const double gamma = checked_power_sum(rho_a.eigenvalues(), 1.0 + eps);
  const double term = commutator_trace_term(rho_a.eigenvalues(), op_in_eigenbasis(rho_a, a), eps);
  return -2.0 * (1.0 + eps) * variance_b * term / (eps * gamma);
}

double vn_second_derivative_fullrank(const DensityMatrix& rho, const HermitianOperator& a,
                                     double variance_b) {
  if (rho.min_eigenvalue() < kRankTol) {
    throw Error(ErrorKind::RankDeficientState,
                "von Neumann second derivative diverges for rank-deficient states; "
                "use a Renyi order n > 1 or the epsilon-regularized form");
  }
  const RealVector& lambda = rho.eigenvalues();
  const ComplexMatrix a_eig = op_in_eigenbasis(rho, a);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
      sum += std::log(lambda(j)) * (lambda(i) - lambda(j)) * std::norm(a_eig(i, j));
    }
  }
  return -2.0 * variance_b * sum;
}

std::vector<std::vector<double>> qutrit_half_family(std::size_t points) {
  if (points < 2) throw Error(ErrorKind::InvalidArgument, "family needs at least 2 points");
  std::vector<std::vector<double>> family;
  family.reserve(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double l1 = 0.5 * static_cast<double>(k) / static_cast<double>(points - 1);
    family.push_back({0.5, l1, 0.5 - l1});
  }
  return family;
}

std::vector<TraceTermRow> trace_term_scan(const std::vector<std::vector<double>>& spectra,
                                          const std::vector<double>& eps_grid,
                                          const std::optional<ComplexMatrix>& a) {
  std::vector<TraceTermRow> rows;
  rows.reserve(spectra.size() * eps_grid.size());
  for (const auto& entries : spectra) {
    renyi::Spectrum checked(entries);
    const auto d = static_cast<Eigen::Index>(entries.size());
    ComplexMatrix a_eig = ComplexMatrix::Ones(d, d);
    if (a) {
      if (a->rows() != d || a->cols() != d) {
        throw Error(ErrorKind::InvalidDimensions, "trace_term_scan: operator dimension mismatch");
      }
      a_eig = HermitianOperator(*a).matrix();
    }
    RealVector lambda = Eigen::Map<const RealVector>(entries.data(), d);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (lambda(i) < qmat::kZeroEigClamp) lambda(i) = 0.0;
    }
    for (double eps : eps_grid) {
      if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be > 0");
      TraceTermRow row;
      row.lambda1 = d > 1 ? entries[1] : entries[0];
      row.lambda_min = checked.min();
      row.eps = eps;
      row.raw = commutator_trace_term(lambda, a_eig, eps);
      row.regularized = (1.0 + eps) / eps * row.raw;
      rows.push_back(row);
    }
  }
  return rows;
}

ComplexMatrix test_operator() {
  ComplexMatrix m(3, 3);
  m << 0.2, 0.1, 0.5,
       0.1, 0.3, 0.5,
       0.5, 0.5, 0.5;
  return m;
}

}  // namespace exposure_lab::onset
