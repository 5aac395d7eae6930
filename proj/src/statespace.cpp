#include "exposure_lab/statespace.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "exposure_lab/error.hpp"
#include "exposure_lab/onset.hpp"
#include "exposure_lab/renyi.hpp"
#include "parallel.hpp"

namespace exposure_lab::statespace {

using qmat::Complex;
using qmat::ComplexMatrix;
using qmat::DensityMatrix;

namespace {

constexpr double kDomainSlack = 1e-12;
constexpr double kLn2 = 0.69314718055994530942;

void require_scan_order(double n) {
  if (!(n > 1.0 + 1e-9) || !std::isfinite(n)) {
    throw Error(ErrorKind::InvalidArgument, "n must exceed 1 for scans");
  }
}

double qubit_entropy(double delta, double alpha2, double n) {
  const double s = delta - delta * delta - alpha2;
  const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * s));
  qmat::RealVector lambda(2);
  lambda << 0.5 * (1.0 - root), 0.5 * (1.0 + root);
  for (Eigen::Index i = 0; i < 2; ++i) {
    if (lambda(i) < qmat::kZeroEigClamp) lambda(i) = 0.0;
  }
  return renyi::renyi_entropy(lambda, renyi::RenyiIndex::order(n));
}

IsocurvePoint make_point(double delta, double alpha2, double n) {
  QubitParams p;
  p.delta = delta;
  p.alpha = std::sqrt(alpha2);
  const DensityMatrix rho = qubit_state(p);
  IsocurvePoint pt;
  pt.delta = delta;
  pt.alpha2 = alpha2;
  pt.exposure = onset::exposure(rho, qubit_operator("sz"), n);
  pt.renyi = renyi::renyi_entropy(rho, renyi::RenyiIndex::order(n));
  return pt;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

QubitParams QubitParams::from_bloch(double a_x, double a_y, double a_z) {
  if (a_x * a_x + a_y * a_y + a_z * a_z > 1.0 + kDomainSlack) {
    throw Error(ErrorKind::InvalidState, "Bloch vector longer than 1");
  }
  QubitParams p;
  p.delta = 0.5 * (1.0 + a_z);
  p.alpha = Complex(0.5 * a_x, -0.5 * a_y);
  return p;
}

std::vector<double> QubitParams::to_bloch() const {
  return {2.0 * alpha.real(), -2.0 * alpha.imag(), 2.0 * delta - 1.0};
}

DensityMatrix qubit_state(const QubitParams& p) {
  if (!std::isfinite(p.delta) || p.delta < 0.0 || p.delta > 1.0) {
    throw Error(ErrorKind::InvalidState, "delta must lie in [0, 1]");
  }
  if (!(p.alpha2() <= p.delta - p.delta * p.delta + kDomainSlack)) {
    throw Error(ErrorKind::InvalidState, "|alpha|^2 exceeds delta - delta^2");
  }
  ComplexMatrix m(2, 2);
  m << p.delta, p.alpha, std::conj(p.alpha), 1.0 - p.delta;
  return DensityMatrix(m);
}

DensityMatrix qutrit_state(const QutritParams& p) {
  if (!(p.norm2() <= kQutritRadius2 + kDomainSlack)) {
    throw Error(ErrorKind::InvalidState, "qutrit vector outside the sphere |a|^2 <= 4/9");
  }
  const Complex i(0.0, 1.0);
  const double third = 1.0 / 3.0;
  ComplexMatrix m(3, 3);
  m << third, -i * p.a_z / 2.0, -i * p.a_y / 2.0,
       i * p.a_z / 2.0, third, -i * p.a_x / 2.0,
       i * p.a_y / 2.0, i * p.a_x / 2.0, third;
  return DensityMatrix(m);
}

qmat::HermitianOperator qubit_operator(std::string_view name) {
  if (name == "sx") return qmat::HermitianOperator(qmat::pauli_x());
  if (name == "sy") return qmat::HermitianOperator(qmat::pauli_y());
  if (name == "sz") return qmat::HermitianOperator(qmat::pauli_z());
  throw Error(ErrorKind::InvalidArgument,
              "qubit operator must be sx, sy or sz, got '" + std::string(name) + "'");
}

double Axis::at(std::size_t k) const {
  if (points <= 1 || k == 0) return lo;
  if (k + 1 == points) return hi;
  return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
}

ScanGrid ScanGrid::qubit_default(std::size_t points) {
  ScanGrid g;
  g.family = Family::Qubit;
  g.x = {0.0, 1.0, points};
  g.y = {0.0, 0.25, points};
  return g;
}

ScanGrid ScanGrid::qutrit_default(double a_z, std::size_t points) {
  ScanGrid g;
  g.family = Family::Qutrit;
  g.x = {0.0, 2.0 / 3.0, points};
  g.y = {0.0, 2.0 / 3.0, points};
  g.slice = a_z;
  return g;
}

std::vector<ScanRecord> scan_exposure(const ScanGrid& grid, const qmat::HermitianOperator& op,
                                      double n) {
  require_scan_order(n);
  const bool qubit = grid.family == Family::Qubit;
  if (op.dim() != (qubit ? 2u : 3u)) {
    throw Error(ErrorKind::InvalidDimensions, std::string("scan operator must be ") +
                                                  (qubit ? "2x2" : "3x3") + " for this family");
  }
  if (grid.x.points == 0 || grid.y.points == 0) {
    throw Error(ErrorKind::InvalidArgument, "scan axes need at least one point");
  }
  const auto idx = renyi::RenyiIndex::order(n);
  std::vector<ScanRecord> rows(grid.x.points * grid.y.points);

  detail::parallel_for(rows.size(), [&](std::size_t k) {
    const double x = grid.x.at(k / grid.y.points);
    const double y = grid.y.at(k % grid.y.points);
    ScanRecord& rec = rows[k];
    std::optional<DensityMatrix> rho;
    if (qubit) {
      rec.coords = {x, y};
      if (x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= x - x * x + kDomainSlack) {
        QubitParams p;
        p.delta = x;
        p.alpha = std::sqrt(y);
        rho.emplace(qubit_state(p));
      }
    } else {
      const QutritParams p{x, y, grid.slice};
      rec.coords = {x, y, grid.slice};
      if (p.norm2() <= kQutritRadius2 + kDomainSlack) rho.emplace(qutrit_state(p));
    }
    if (!rho) return;
    rec.valid = true;
    rec.exposure = onset::exposure(*rho, op, n);
    rec.renyi = renyi::renyi_entropy(*rho, idx);
  });
  return rows;
}

Isocurve entropy_isocurve_qubit(double h_target, const std::vector<double>& delta_grid,
                                double n) {
  require_scan_order(n);
  if (!std::isfinite(h_target) || h_target < -kDomainSlack || h_target > kLn2 + kDomainSlack) {
    throw Error(ErrorKind::InvalidArgument, "entropy target must lie in [0, ln 2]");
  }
  Isocurve curve;
  for (double delta : delta_grid) {
    if (!(delta >= 0.0 && delta <= 1.0)) {
      curve.diagnostics.push_back("delta=" + fmt(delta) + ": outside [0, 1]");
      continue;
    }
    // H_n falls from its diagonal-state value at |α|² = 0 to 0 at the pure boundary.
    const double top = delta - delta * delta;
    const double f_lo = qubit_entropy(delta, 0.0, n) - h_target;
    const double f_hi = qubit_entropy(delta, top, n) - h_target;
    double alpha2 = 0.0;
    if (std::abs(f_lo) <= kDomainSlack) {
      alpha2 = 0.0;
    } else if (std::abs(f_hi) <= kDomainSlack) {
      alpha2 = top;
    } else if (f_lo < 0.0 || f_hi > 0.0) {
      curve.diagnostics.push_back("delta=" + fmt(delta) + ": target not bracketed (H_n range [" +
                                  fmt(f_hi + h_target) + ", " + fmt(f_lo + h_target) + "])");
      continue;
    } else {
      double lo = 0.0;
      double hi = top;
      for (int it = 0; it < kBisectionMaxIter && hi - lo > kBisectionTol; ++it) {
        const double mid = 0.5 * (lo + hi);
        (qubit_entropy(delta, mid, n) > h_target ? lo : hi) = mid;
      }
      alpha2 = 0.5 * (lo + hi);
    }
    curve.points.push_back(make_point(delta, alpha2, n));
  }
  return curve;
}

ExtremizeResult extremize_exposure_on_isocurve(double h_target, double n,
                                               std::size_t delta_points) {
  const Axis axis{0.0, 1.0, delta_points};
  std::vector<double> grid(delta_points);
  for (std::size_t k = 0; k < delta_points; ++k) grid[k] = axis.at(k);
  const Isocurve curve = entropy_isocurve_qubit(h_target, grid, n);
  if (curve.points.empty()) {
    throw Error(ErrorKind::NoSolution, "no qubit state on the requested entropy curve");
  }
  auto beats = [](double candidate, double incumbent, bool want_min) {
    const double tie = 1e-12 * std::max(std::abs(candidate), std::abs(incumbent));
    return want_min ? candidate < incumbent - tie : candidate > incumbent + tie;
  };
  ExtremizeResult out;
  out.curve_points = curve.points.size();
  out.argmin = curve.points.front();
  out.argmax = curve.points.front();
  // δ ascends along the curve, so keeping the incumbent on ties prefers the smaller δ.
  for (const auto& pt : curve.points) {
    if (beats(pt.exposure, out.argmin.exposure, true)) out.argmin = pt;
    if (beats(pt.exposure, out.argmax.exposure, false)) out.argmax = pt;
  }
  return out;
}

}  // namespace exposure_lab::statespace
