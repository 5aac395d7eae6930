#include "exposure_lab/renyi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "exposure_lab/error.hpp"

namespace exposure_lab::renyi {

namespace {

constexpr double kRootTol = 1e-6;
constexpr double kClusterTol = 1e-2;
constexpr double kMergeScale = 4.0;
constexpr double kMergeUnit = 1e-15;
constexpr int kRefineSteps = 6;

struct RootGroup {
  double value = 0.0;
  std::size_t multiplicity = 1;
};

// Companion roots lose about half their digits when two eigenvalues nearly coincide, while
// the purities still determine them to roughly eps/gap. A few Gauss-Newton steps on
// Σ_g m_g μ_g^k = γ_k (k = 1..d) recover those digits; a step is kept only if the
// residual shrinks.
void refine_against_purities(std::vector<RootGroup>& groups, const std::vector<double>& gamma,
                             std::size_t d) {
  const auto rows = static_cast<Eigen::Index>(d);
  const auto cols = static_cast<Eigen::Index>(groups.size());
  auto residual = [&](const std::vector<RootGroup>& gs) {
    Eigen::VectorXd r(rows);
    for (Eigen::Index k = 0; k < rows; ++k) {
      double acc = 0.0;
      for (const auto& g : gs) {
        acc += static_cast<double>(g.multiplicity) * std::pow(g.value, static_cast<double>(k + 1));
      }
      r(k) = gamma[static_cast<std::size_t>(k)] - acc;
    }
    return r;
  };
  Eigen::VectorXd r = residual(groups);
  for (int step = 0; step < kRefineSteps; ++step) {
    Eigen::MatrixXd jac(rows, cols);
    for (Eigen::Index k = 0; k < rows; ++k) {
      for (Eigen::Index g = 0; g < cols; ++g) {
        const auto& grp = groups[static_cast<std::size_t>(g)];
        jac(k, g) = static_cast<double>(grp.multiplicity) * static_cast<double>(k + 1) *
                    std::pow(grp.value, static_cast<double>(k));
      }
    }
    const Eigen::VectorXd delta = jac.colPivHouseholderQr().solve(r);
    if (!delta.allFinite()) return;
    std::vector<RootGroup> trial = groups;
    for (Eigen::Index g = 0; g < cols; ++g) {
      auto& v = trial[static_cast<std::size_t>(g)].value;
      v = std::clamp(v + delta(g), 0.0, 1.0);
    }
    const Eigen::VectorXd r_trial = residual(trial);
    if (!(r_trial.norm() < r.norm())) return;
    groups = std::move(trial);
    r = r_trial;
  }
}

}  // namespace

RenyiIndex RenyiIndex::order(double n) {
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::InvalidArgument, "Renyi order must be a finite n > 0");
  }
  if (std::abs(n - 1.0) <= 1e-9) {
    throw Error(ErrorKind::InvalidArgument,
                "Renyi order n = 1 is the von Neumann limit; use RenyiIndex::von_neumann()");
  }
  RenyiIndex idx;
  idx.n_ = n;
  idx.von_neumann_ = false;
  return idx;
}

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorKind::InvalidArgument, "empty spectrum");
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw Error(ErrorKind::InvalidArgument, "spectrum values must lie in [0, 1]");
    }
  }
  const double sum = std::accumulate(values_.begin(), values_.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidArgument, "spectrum does not sum to 1 (sum " +
                                                std::to_string(sum) + ")");
  }
  std::sort(values_.begin(), values_.end(), std::greater<>());
}

PuritySequence::PuritySequence(std::vector<double> gammas) : gammas_(std::move(gammas)) {
  if (gammas_.empty()) throw Error(ErrorKind::InvalidArgument, "empty purity sequence");
  if (std::abs(gammas_[0] - 1.0) > 1e-10) {
    throw Error(ErrorKind::InvalidArgument, "gamma_1 must equal 1");
  }
  const double d = static_cast<double>(gammas_.size());
  for (std::size_t k = 1; k <= gammas_.size(); ++k) {
    const double g = gammas_[k - 1];
    const double lower = std::pow(d, -static_cast<double>(k - 1));
    if (!std::isfinite(g) || g < lower - 1e-10 || g > 1.0 + 1e-10) {
      throw Error(ErrorKind::InvalidArgument,
                  "gamma_" + std::to_string(k) + " = " + std::to_string(g) + " out of range");
    }
  }
}

double power_sum(const qmat::RealVector& eigenvalues, double n) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double lambda = eigenvalues(i);
    if (lambda > 0.0) sum += std::pow(lambda, n);
  }
  return sum;
}

double n_purity(const qmat::DensityMatrix& rho, double n) {
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidArgument, "n_purity: n must be > 0");
  return power_sum(rho.eigenvalues(), n);
}

double renyi_entropy(const qmat::RealVector& eigenvalues, const RenyiIndex& idx) {
  if (idx.is_von_neumann()) return von_neumann(eigenvalues);
  // + 0.0 turns the −0 of a pure state into +0.
  return std::log(power_sum(eigenvalues, idx.n())) / (1.0 - idx.n()) + 0.0;
}

double renyi_entropy(const qmat::DensityMatrix& rho, const RenyiIndex& idx) {
  return renyi_entropy(rho.eigenvalues(), idx);
}

double von_neumann(const qmat::RealVector& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double lambda = eigenvalues(i);
    if (lambda > 0.0) s -= lambda * std::log(lambda);
  }
  return s;
}

double von_neumann(const qmat::DensityMatrix& rho) { return von_neumann(rho.eigenvalues()); }

Spectrum spectrum_of(const qmat::DensityMatrix& rho) {
  const auto& ev = rho.eigenvalues();
  std::vector<double> values(ev.data(), ev.data() + ev.size());
  // Rounding can push the clamped sum a hair off one; the state already passed its trace check.
  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  for (double& v : values) v = std::min(1.0, v / sum);
  return Spectrum(std::move(values));
}

PuritySequence purities_of(const Spectrum& spectrum) {
  const auto& values = spectrum.values();
  std::vector<double> gammas(values.size());
  for (std::size_t k = 1; k <= values.size(); ++k) {
    double g = 0.0;
    for (double v : values) g += std::pow(v, static_cast<double>(k));
    gammas[k - 1] = g;
  }
  return PuritySequence(std::move(gammas));
}

Spectrum spectrum_from_purities(const PuritySequence& p, std::size_t d) {
  if (d == 0 || p.size() < d) {
    throw Error(ErrorKind::InvalidArgument,
                "spectrum_from_purities: need gamma_1..gamma_" + std::to_string(d));
  }
  const auto& gamma = p.gammas();

  // Newton's identities: k e_k = Σ_{i=1..k} (−1)^{i−1} e_{k−i} γ_i.
  std::vector<double> e(d + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t k = 1; k <= d; ++k) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
      const double sign = (i % 2 == 1) ? 1.0 : -1.0;
      acc += sign * e[k - i] * gamma[i - 1];
    }
    e[k] = acc / static_cast<double>(k);
  }

  // Monic characteristic polynomial xᵈ + c₁xᵈ⁻¹ + … + c_d with c_k = (−1)ᵏ e_k.
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double c = ((j + 1) % 2 == 0 ? 1.0 : -1.0) * e[static_cast<std::size_t>(j + 1)];
    companion(0, j) = -c;
  }
  for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalFailure, "companion-matrix eigensolver did not converge");
  }
  std::vector<std::complex<double>> roots(solver.eigenvalues().data(),
                                          solver.eigenvalues().data() + n);
  std::sort(roots.begin(), roots.end(),
            [](const auto& a, const auto& b) { return a.real() < b.real(); });

  // A root of multiplicity m comes back split by roughly eps^(1/m), as a complex star or as
  // m nearby real roots. Within each run of roots spaced closer than kClusterTol, the
  // longest leading group whose spread fits that scale is replaced by its mean. Distinct
  // eigenvalues would have to sit within ~1e-7 of each other to be merged.
  auto merge_radius = [](std::size_t m) {
    return kMergeScale * std::pow(kMergeUnit, 1.0 / static_cast<double>(m));
  };
  std::vector<double> values;
  values.reserve(d);
  std::vector<RootGroup> groups;
  for (std::size_t i = 0; i < roots.size();) {
    std::size_t run = i + 1;
    while (run < roots.size() && std::abs(roots[run] - roots[run - 1]) < kClusterTol) ++run;
    std::size_t j = i + 1;
    std::complex<double> mean = roots[i];
    for (std::size_t end = run; end > i + 1; --end) {
      std::complex<double> m = 0.0;
      for (std::size_t k = i; k < end; ++k) m += roots[k];
      m /= static_cast<double>(end - i);
      double spread = 0.0;
      for (std::size_t k = i; k < end; ++k) spread = std::max(spread, std::abs(roots[k] - m));
      if (spread <= merge_radius(end - i)) {
        j = end;
        mean = m;
        break;
      }
    }
    if (std::abs(mean.imag()) > kRootTol) {
      throw Error(ErrorKind::InconsistentPurities, "characteristic polynomial has complex roots");
    }
    if (mean.real() < -kRootTol || mean.real() > 1.0 + kRootTol) {
      throw Error(ErrorKind::InconsistentPurities,
                  "eigenvalue " + std::to_string(mean.real()) + " outside [0, 1]");
    }
    groups.push_back({std::clamp(mean.real(), 0.0, 1.0), j - i});
    i = j;
  }

  refine_against_purities(groups, gamma, d);
  for (const auto& g : groups) values.insert(values.end(), g.multiplicity, g.value);

  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  if (std::abs(sum - 1.0) > kRootTol) {
    throw Error(ErrorKind::InconsistentPurities, "reconstructed eigenvalues do not sum to 1");
  }
  for (double& v : values) v = std::min(1.0, v / sum);
  return Spectrum(std::move(values));
}

RenyiBoundsReport renyi_bounds_check(const qmat::DensityMatrix& rho) {
  RenyiBoundsReport r;
  r.h1 = von_neumann(rho);
  r.h2 = renyi_entropy(rho, RenyiIndex::order(2.0));
  r.h3 = renyi_entropy(rho, RenyiIndex::order(3.0));
  r.bound1_ok = r.h1 - r.h2 >= -1e-10;
  r.bound2_ok = r.h1 - (2.0 * r.h2 - r.h3) >= -1e-10;
  return r;
}

}  // namespace exposure_lab::renyi
