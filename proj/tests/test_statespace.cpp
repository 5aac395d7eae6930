#include <doctest.h>

#include <cmath>
#include <numbers>

#include "exposure_lab/error.hpp"
#include "exposure_lab/onset.hpp"
#include "exposure_lab/random.hpp"
#include "exposure_lab/renyi.hpp"
#include "exposure_lab/statespace.hpp"

using namespace exposure_lab;
using namespace exposure_lab::statespace;
using qmat::Complex;
using qmat::ComplexMatrix;

namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::IoError;
}

double h2_of(double delta, double alpha2) {
  QubitParams p;
  p.delta = delta;
  p.alpha = std::sqrt(alpha2);
  return renyi::renyi_entropy(qubit_state(p), renyi::RenyiIndex::order(2.0));
}

}  // namespace

TEST_SUITE("statespace") {

TEST_CASE("qubit states and Bloch coordinates") {
  QubitParams top;
  top.delta = 1.0;
  const auto z = qubit_state(top);
  CHECK(z.is_pure());
  CHECK(z.matrix()(0, 0).real() == 1.0);

  const auto centre = qubit_state(QubitParams::from_bloch(0, 0, 0));
  CHECK(qmat::max_abs(centre.matrix() - ComplexMatrix::Identity(2, 2) / 2.0) == 0.0);

  auto rng = random::SplitMix64::for_stream(61, 0);
  for (int k = 0; k < 100; ++k) {
    const double r = std::cbrt(rng.uniform());
    const double th = std::acos(2 * rng.uniform() - 1);
    const double ph = 2 * std::numbers::pi * rng.uniform();
    const double ax = r * std::sin(th) * std::cos(ph);
    const double ay = r * std::sin(th) * std::sin(ph);
    const double az = r * std::cos(th);
    const auto p = QubitParams::from_bloch(ax, ay, az);
    const auto back = p.to_bloch();
    CHECK(std::abs(back[0] - ax) <= 1e-12);
    CHECK(std::abs(back[1] - ay) <= 1e-12);
    CHECK(std::abs(back[2] - az) <= 1e-12);
    // Compare with (I + a·σ)/2.
    const ComplexMatrix ref = (ComplexMatrix::Identity(2, 2) + ax * qmat::pauli_x() +
                               ay * qmat::pauli_y() + az * qmat::pauli_z()) /
                              2.0;
    CHECK(qmat::max_abs(qubit_state(p).matrix() - ref) <= 1e-12);
  }

  QubitParams bad;
  bad.delta = 0.5;
  bad.alpha = 0.6;
  CHECK(kind_of([&] { qubit_state(bad); }) == ErrorKind::InvalidState);
  bad.delta = 1.2;
  bad.alpha = 0.0;
  CHECK(kind_of([&] { qubit_state(bad); }) == ErrorKind::InvalidState);
  CHECK(kind_of([] { QubitParams::from_bloch(1, 1, 0); }) == ErrorKind::InvalidState);
}

TEST_CASE("qutrit states") {
  CHECK(qmat::max_abs(qutrit_state({0, 0, 0}).matrix() - ComplexMatrix::Identity(3, 3) / 3.0) == 0.0);
  const double c = 2.0 / 3.0 / std::sqrt(3.0);
  const auto edge = qutrit_state({c, c, c});
  CHECK(std::abs(edge.min_eigenvalue()) <= 1e-10);
  CHECK(kind_of([] { qutrit_state({0.5, 0.5, 0.5}); }) == ErrorKind::InvalidState);

  // Admissible 61^3 grid over the octant: every state is valid.
  const Axis ax{0.0, 2.0 / 3.0, 61};
  std::size_t count = 0;
  for (std::size_t i = 0; i < 61; ++i) {
    for (std::size_t j = 0; j < 61; ++j) {
      for (std::size_t k = 0; k < 61; ++k) {
        const QutritParams p{ax.at(i), ax.at(j), ax.at(k)};
        if (p.norm2() > kQutritRadius2) continue;
        const auto rho = qutrit_state(p);
        CHECK(rho.min_eigenvalue() >= -1e-10);
        CHECK(rho.max_eigenvalue() <= 1.0);
        ++count;
      }
    }
  }
  CHECK(count > 50000);
}

TEST_CASE("spin-1 operators and expressions") {
  ComplexMatrix expect_z = ComplexMatrix::Zero(3, 3);
  expect_z(0, 1) = Complex(0, -1);
  expect_z(1, 0) = Complex(0, 1);
  CHECK(qmat::max_abs(spin_z().matrix() - expect_z) == 0.0);
  CHECK(qmat::max_abs(spin1_operator("S_z").matrix() - expect_z) == 0.0);

  ComplexMatrix d011 = ComplexMatrix::Zero(3, 3);
  d011(1, 1) = d011(2, 2) = 1.0;
  CHECK(qmat::max_abs(spin1_operator("Sx^2").matrix() - d011) < 1e-15);
  CHECK(qmat::max_abs(spin1_operator("Sx*Sx").matrix() - d011) < 1e-15);

  const ComplexMatrix sysz = spin_y().matrix() * spin_z().matrix();
  const auto twist = spin1_operator("SySz+SzSy");
  CHECK(qmat::max_abs(twist.matrix() - (sysz + sysz.adjoint())) < 1e-15);
  CHECK(qmat::max_abs(spin1_operator("S_y S_z + S_z S_y").matrix() - twist.matrix()) < 1e-15);
  CHECK(qmat::max_abs(spin1_operator("2*(Sx - 0.5*I)").matrix() -
                      (2.0 * spin_x().matrix() - ComplexMatrix::Identity(3, 3))) < 1e-15);

  // Casimir: Sx² + Sy² + Sz² = 2I.
  CHECK(qmat::max_abs(spin1_operator("Sx^2 + Sy^2 + Sz^2").matrix() -
                      2.0 * ComplexMatrix::Identity(3, 3)) < 1e-15);
  // [Sx, Sy] = i Sz.
  CHECK(qmat::max_abs(spin_x().matrix() * spin_y().matrix() - spin_y().matrix() * spin_x().matrix() -
                      Complex(0, 1) * spin_z().matrix()) < 1e-15);

  CHECK(kind_of([] { spin1_operator("SySz"); }) == ErrorKind::InvalidOperator);
  CHECK(kind_of([] { spin1_operator("Sq"); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { spin1_operator("(Sx"); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { qubit_operator("sw"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("qubit scan is nonnegative") {
  const auto rows = scan_exposure(ScanGrid::qubit_default(), qubit_operator("sz"), 2.0);
  REQUIRE(rows.size() == 101 * 101);
  double lowest = 1.0;
  std::size_t valid = 0;
  for (const auto& r : rows) {
    if (!r.valid) {
      CHECK_FALSE(r.exposure.has_value());
      continue;
    }
    ++valid;
    lowest = std::min(lowest, *r.exposure);
  }
  CHECK(valid > 0);
  CHECK(lowest >= -1e-10);
  CHECK(rows[1].coords[0] == 0.0);
  CHECK(rows[1].coords[1] == doctest::Approx(0.0025));
}

TEST_CASE("qutrit scan has a negative region") {
  const auto rows = scan_exposure(ScanGrid::qutrit_default(0.0), spin1_operator("SySz+SzSy"), 2.0);
  REQUIRE(rows.size() == 61 * 61);
  std::size_t negative = 0;
  for (const auto& r : rows) {
    const double n2 = r.coords[0] * r.coords[0] + r.coords[1] * r.coords[1];
    CHECK(r.valid == (n2 <= kQutritRadius2 + 1e-12));
    if (r.valid && *r.exposure < -1e-6) ++negative;
  }
  CHECK(negative >= 1);
}

TEST_CASE("scan guards") {
  CHECK(kind_of([] { scan_exposure(ScanGrid::qubit_default(5), qubit_operator("sz"), 1.0); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([] { scan_exposure(ScanGrid::qubit_default(5), spin_x(), 2.0); }) ==
        ErrorKind::InvalidDimensions);
}

TEST_CASE("entropy isocurves") {
  const auto top = entropy_isocurve_qubit(std::log(2.0), {0.0, 0.25, 0.5, 0.75, 1.0});
  REQUIRE(top.points.size() == 1);
  CHECK(top.points[0].delta == 0.5);
  CHECK(top.points[0].alpha2 == 0.0);
  CHECK(top.diagnostics.size() == 4);

  for (double delta : {0.2, 0.4, 0.5, 0.65}) {
    const double alpha2 = 0.37 * (delta - delta * delta);
    const double target = h2_of(delta, alpha2);
    const auto c = entropy_isocurve_qubit(target, {delta});
    REQUIRE(c.points.size() == 1);
    CHECK(std::abs(c.points[0].alpha2 - alpha2) <= 1e-10);
    CHECK(std::abs(c.points[0].renyi - target) <= 1e-10);
  }

  std::vector<double> grid;
  for (int k = 0; k <= 100; ++k) grid.push_back(0.01 * k);
  const auto curve = entropy_isocurve_qubit(0.4, grid);
  REQUIRE(curve.points.size() > 10);
  double lo = 1e9;
  double hi = -1e9;
  for (const auto& p : curve.points) {
    CHECK(std::abs(p.renyi - 0.4) <= 1e-10);
    lo = std::min(lo, p.exposure);
    hi = std::max(hi, p.exposure);
  }
  CHECK(hi - lo > 1e-3);

  CHECK(kind_of([] { entropy_isocurve_qubit(0.8, {0.5}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("extremizing exposure along an isocurve") {
  for (double target : {0.1, 0.3, 0.5, 0.65}) {
    const auto r = extremize_exposure_on_isocurve(target);
    CHECK(r.curve_points > 2);
    CHECK(r.argmin.delta == doctest::Approx(0.5));
    // The maximum sits at the end of the curve where the coherence vanishes.
    CHECK(r.argmax.alpha2 <= 1e-3);
    CHECK(r.argmax.exposure >= r.argmin.exposure);
  }
  const auto single = extremize_exposure_on_isocurve(std::log(2.0));
  CHECK(single.curve_points == 1);
  CHECK(single.argmin.delta == single.argmax.delta);
  CHECK(single.argmin.alpha2 == single.argmax.alpha2);
}

}  // TEST_SUITE
