#include "exposure_lab/channels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "exposure_lab/error.hpp"
#include "parallel.hpp"

namespace exposure_lab::channels {

using qmat::Complex;
using qmat::ComplexMatrix;
using qmat::ComplexVector;
using qmat::DensityMatrix;
using qmat::HermitianOperator;

namespace {

double clamped_pow(double lambda, double p) {
  if (lambda < qmat::kZeroEigClamp) return p == 0.0 ? 1.0 : 0.0;
  return std::pow(lambda, p);
}

std::vector<double> descending(const qmat::RealVector& ev) {
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::reverse(out.begin(), out.end());
  return out;
}

ComplexVector pure_vector(const DensityMatrix& psi) {
  const auto& eig = psi.eigen();
  return eig.eigenvectors.col(eig.eigenvectors.cols() - 1);
}

}  // namespace

DensityMatrix product_channel_state(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                                    const onset::ProductHamiltonian& h, double t) {
  if (rho_a.dim() != h.op_a.dim() || rho_b.dim() != h.op_b.dim()) {
    throw Error(ErrorKind::InvalidDimensions, "product_channel_state: dimension mismatch");
  }
  const auto eig_a = qmat::hermitian_eig(h.op_a);
  const auto eig_b = qmat::hermitian_eig(h.op_b);
  const ComplexMatrix& va = eig_a.eigenvectors;
  const ComplexMatrix& vb = eig_b.eigenvectors;

  ComplexMatrix r = va.adjoint() * rho_a.matrix() * va;
  const ComplexMatrix pb = vb.adjoint() * rho_b.matrix() * vb;

  const Eigen::Index da = r.rows();
  const Eigen::Index db = pb.rows();
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      const double gap = eig_a.eigenvalues(i) - eig_a.eigenvalues(j);
      Complex filter = 0.0;
      for (Eigen::Index k = 0; k < db; ++k) {
        filter += pb(k, k).real() * std::polar(1.0, t * eig_b.eigenvalues(k) * gap);
      }
      r(i, j) *= filter;
    }
  }
  return DensityMatrix(va * r * va.adjoint());
}

TripartiteState::TripartiteState(std::size_t dim_anc, std::size_t dim_a, std::size_t dim_b,
                                 ComplexVector amplitudes)
    : dims_{dim_anc, dim_a, dim_b}, psi_(std::move(amplitudes)) {
  if (dim_anc == 0 || dim_a == 0 || dim_b == 0 ||
      static_cast<std::size_t>(psi_.size()) != dim_anc * dim_a * dim_b) {
    throw Error(ErrorKind::InvalidDimensions, "tripartite amplitude vector has the wrong length");
  }
  if (std::abs(psi_.norm() - 1.0) > 1e-10) {
    throw Error(ErrorKind::InvalidState, "tripartite state is not normalized");
  }
}

DensityMatrix TripartiteState::reduced(bool keep_anc, bool keep_a, bool keep_b) const {
  const bool keep[3] = {keep_anc, keep_a, keep_b};
  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
  for (int s = 0; s < 3; ++s) (keep[s] ? kept_dim : traced_dim) *= dims_[s];
  if (!keep_anc && !keep_a && !keep_b) {
    throw Error(ErrorKind::InvalidArgument, "reduced: keep at least one factor");
  }

  // Split each basis index into (kept, traced) multi-indices; ρ = M M†.
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(kept_dim),
                                        static_cast<Eigen::Index>(traced_dim));
  std::size_t idx[3];
  for (idx[0] = 0; idx[0] < dims_[0]; ++idx[0]) {
    for (idx[1] = 0; idx[1] < dims_[1]; ++idx[1]) {
      for (idx[2] = 0; idx[2] < dims_[2]; ++idx[2]) {
        std::size_t row = 0;
        std::size_t col = 0;
        for (int s = 0; s < 3; ++s) {
          if (keep[s]) {
            row = row * dims_[s] + idx[s];
          } else {
            col = col * dims_[s] + idx[s];
          }
        }
        const std::size_t flat = (idx[0] * dims_[1] + idx[1]) * dims_[2] + idx[2];
        m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
            psi_(static_cast<Eigen::Index>(flat));
      }
    }
  }
  return DensityMatrix(m * m.adjoint());
}

ComplexVector purify(const DensityMatrix& rho_a) {
  const auto& eig = rho_a.eigen();
  const Eigen::Index d = eig.eigenvalues.size();
  ComplexVector psi = ComplexVector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::Index col = d - 1 - i;  // ancilla |0⟩ pairs with the largest eigenvalue
    const double weight = std::sqrt(eig.eigenvalues(col));
    psi.segment(i * d, d) = weight * eig.eigenvectors.col(col);
  }
  return psi / psi.norm();
}

TimeSeries coherent_info_timeseries(const DensityMatrix& rho_a, const DensityMatrix& psi_b,
                                    const onset::GeneralHamiltonian& h,
                                    const renyi::RenyiIndex& n, const std::vector<double>& t_grid) {
  if (rho_a.dim() != h.dim_a() || psi_b.dim() != h.dim_b()) {
    throw Error(ErrorKind::InvalidDimensions, "time series: state dimensions do not match H");
  }
  if (!psi_b.is_pure(onset::kPureTol)) {
    throw Error(ErrorKind::InvalidArgument, "time series needs a pure initial B");
  }
  const auto da = static_cast<Eigen::Index>(rho_a.dim());
  const auto db = static_cast<Eigen::Index>(psi_b.dim());
  const ComplexVector anc_a = purify(rho_a);
  const ComplexVector phi_b = pure_vector(psi_b);

  // Column ã of `initial` holds the A⊗B amplitudes paired with ancilla state ã.
  ComplexMatrix initial(da * db, da);
  for (Eigen::Index anc = 0; anc < da; ++anc) {
    for (Eigen::Index a = 0; a < da; ++a) {
      initial.col(anc).segment(a * db, db) = anc_a(anc * da + a) * phi_b;
    }
  }
  const auto h_eig = qmat::hermitian_eig(h.assemble());

  TimeSeries series;
  series.n = n;
  series.records.resize(t_grid.size());
  detail::parallel_for(t_grid.size(), [&](std::size_t k) {
    const double t = t_grid[k];
    const ComplexMatrix evolved = qmat::unitary(h_eig, t) * initial;
    const ComplexVector flat = Eigen::Map<const ComplexVector>(evolved.data(), evolved.size());
    const TripartiteState state(static_cast<std::size_t>(da), static_cast<std::size_t>(da),
                                static_cast<std::size_t>(db), flat / flat.norm());

    const DensityMatrix a = state.reduced(false, true, false);
    TimeSeriesRecord rec;
    rec.t = t;
    rec.h_a = renyi::renyi_entropy(a, n);
    rec.h_b = renyi::renyi_entropy(state.reduced(false, false, true), n);
    rec.h_ba = renyi::renyi_entropy(state.reduced(true, false, true), n);
    rec.h_aa = renyi::renyi_entropy(state.reduced(true, true, false), n);
    rec.i_direct = rec.h_a - rec.h_aa;
    rec.i_complementary = rec.h_b - rec.h_ba;
    rec.spectrum_a = descending(a.eigenvalues());
    series.records[k] = std::move(rec);
  });
  return series;
}

void UdwQubitParams::validate() const {
  if (!std::isfinite(delta) || delta < 0.0 || delta > 1.0) {
    throw Error(ErrorKind::InvalidState, "delta must lie in [0, 1]");
  }
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()) ||
      std::norm(alpha) > delta - delta * delta + 1e-12) {
    throw Error(ErrorKind::InvalidState, "|alpha|^2 exceeds delta - delta^2; state not positive");
  }
}

DensityMatrix udw_qubit_state(const UdwQubitParams& p, double t) {
  p.validate();
  const Complex off = p.alpha * std::exp(-2.0 * t * t);
  ComplexMatrix m(2, 2);
  m << p.delta, off, std::conj(off), 1.0 - p.delta;
  return DensityMatrix(m);
}

UdwEigenRecord udw_eigen(const UdwQubitParams& p, double t) {
  p.validate();
  const double a2 = std::norm(p.alpha);
  const double decay = std::exp(-4.0 * t * t);
  const double disc = std::max(0.0, 1.0 - 4.0 * (p.delta - p.delta * p.delta - a2 * decay));
  const double root = std::sqrt(disc);

  UdwEigenRecord rec;
  rec.t = t;
  rec.lambda_plus = 0.5 * (1.0 + root);
  rec.lambda_minus = 0.5 * (1.0 - root);
  if (root < 1e-12) return rec;

  // λ̇₊ vanishes at t = 0; keep it an exact zero rather than ±0·(…).
  const double first = t == 0.0 ? 0.0 : 8.0 * a2 * t * decay / root;
  rec.d_lambda = {-first, first};
  const double second = 8.0 * a2 * decay * (1.0 - 8.0 * t * t) / root +
                        128.0 * a2 * a2 * t * t * decay * decay / (disc * root);
  rec.dd_lambda = {-second, second};
  return rec;
}

UdwClosedForms udw_closed_forms(const UdwQubitParams& p, double n) {
  if (!(n > 1.0 + 1e-9) || !std::isfinite(n)) {
    throw Error(ErrorKind::InvalidArgument, "closed forms need a finite n > 1");
  }
  const UdwEigenRecord eig = udw_eigen(p, 0.0);
  const double variance = 4.0 * (p.delta - p.delta * p.delta);
  const double gap = eig.lambda_plus - eig.lambda_minus;
  if (gap < 1e-12) return {0.0, variance};

  const double a2 = std::norm(p.alpha);
  const double lp = eig.lambda_plus;
  const double lm = eig.lambda_minus;
  const double diff = clamped_pow(lm, n - 1.0) - clamped_pow(lp, n - 1.0);
  const double gamma = clamped_pow(lm, n) + clamped_pow(lp, n);
  const double ratio = diff / (gap * gamma);
  return {-8.0 * n * a2 * ratio / (n - 1.0), variance + 4.0 * a2 * ratio};
}

FockTruncation::FockTruncation(std::size_t levels) : levels_(levels) {
  if (levels < 2) throw Error(ErrorKind::InvalidArgument, "Fock truncation needs >= 2 levels");
  const auto n = static_cast<Eigen::Index>(levels);
  a_ = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a_(k - 1, k) = std::sqrt(static_cast<double>(k));
}

namespace {

std::vector<ComplexMatrix> fock_reductions(const DensityMatrix& rho_q, std::size_t levels,
                                           const std::vector<double>& t_grid) {
  const FockTruncation trunc(levels);
  const auto n = static_cast<Eigen::Index>(levels);
  const auto h_eig =
      qmat::hermitian_eig(qmat::tensor_product(qmat::pauli_z(), trunc.quadrature()));
  ComplexMatrix vacuum = ComplexMatrix::Zero(n, n);
  vacuum(0, 0) = 1.0;
  const ComplexMatrix rho0 = qmat::tensor_product(rho_q.matrix(), vacuum);

  std::vector<ComplexMatrix> out(t_grid.size());
  detail::parallel_for(t_grid.size(), [&](std::size_t k) {
    const ComplexMatrix u = qmat::unitary(h_eig, t_grid[k]);
    out[k] = qmat::partial_trace(u * rho0 * u.adjoint(), 2, levels, qmat::Subsystem::A);
  });
  return out;
}

}  // namespace

std::vector<DensityMatrix> fock_udw_series(const UdwQubitParams& p, const FockTruncation& trunc,
                                           const std::vector<double>& t_grid) {
  const DensityMatrix rho_q = udw_qubit_state(p, 0.0);
  const auto coarse = fock_reductions(rho_q, trunc.levels(), t_grid);
  const auto fine = fock_reductions(rho_q, trunc.levels() + 10, t_grid);
  std::vector<DensityMatrix> out;
  out.reserve(t_grid.size());
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double gap = qmat::max_abs(coarse[k] - fine[k]);
    if (gap > kFockConvergenceTol) {
      throw Error(ErrorKind::TruncationError,
                  "Fock truncation at " + std::to_string(trunc.levels()) +
                      " levels not converged at t = " + std::to_string(t_grid[k]) +
                      " (change " + std::to_string(gap) + " with 10 more levels)");
    }
    out.emplace_back(coarse[k]);
  }
  return out;
}

DensityMatrix fock_udw_oracle(const UdwQubitParams& p, const FockTruncation& trunc, double t) {
  return fock_udw_series(p, trunc, {t}).front();
}

}  // namespace exposure_lab::channels
