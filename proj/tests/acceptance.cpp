// acceptance.cpp
// One line per acceptance criterion. `--only=ID` runs a single criterion; ctest registers
// one entry per ID. Exit status is nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "exposure_lab/channels.hpp"
#include "exposure_lab/onset.hpp"
#include "exposure_lab/renyi.hpp"
#include "exposure_lab/statespace.hpp"
#include "exposure_lab/verify.hpp"

using namespace exposure_lab;

namespace {

constexpr std::uint64_t kSeed = 7;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::function<Outcome()> run;
};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double worst(const verify::CheckReport& r, std::string_view check) {
  double w = 0.0;
  for (const auto& row : r.rows) {
    if (row.check == check) w = std::max(w, row.abs_error);
  }
  return w;
}

Outcome from_report(const verify::CheckReport& r) {
  return {r.passed(), std::to_string(r.rows.size()) + " comparisons, " +
                          std::to_string(r.failures()) + " failed, max |err| " +
                          num(r.max_abs_error())};
}

Outcome first_derivative() {
  const auto start = std::chrono::steady_clock::now();
  const auto r = verify::first_derivative(200, kSeed);
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = r.passed() && elapsed < 10.0;
  o.detail = "analytic max " + num(worst(r, "first-derivative/analytic")) + " (<= 1e-12), fd max " +
             num(worst(r, "first-derivative/finite-difference")) + " (<= 1e-6), " + num(elapsed) +
             " s (< 10 s)";
  return o;
}

Outcome udw_triple() {
  const auto start = std::chrono::steady_clock::now();
  const channels::FockTruncation trunc(40);
  // Vacuum of the truncated mode, coupled through the quadrature a + a†.
  qmat::ComplexVector vac = qmat::ComplexVector::Zero(40);
  vac(0) = 1.0;
  const auto field = qmat::DensityMatrix::from_pure(vac);
  const qmat::HermitianOperator quad(trunc.quadrature());
  const qmat::HermitianOperator sz(qmat::pauli_z());
  const onset::ProductHamiltonian h{sz, quad};

  double closed_err = 0.0;
  std::size_t grid_points = 0;
  const statespace::Axis deltas{0.0, 1.0, 50};
  const statespace::Axis fracs{0.0, 1.0, 50};
  for (std::size_t i = 0; i < deltas.points; ++i) {
    for (std::size_t j = 0; j < fracs.points; ++j) {
      const double delta = deltas.at(i);
      channels::UdwQubitParams p;
      p.delta = delta;
      p.alpha = std::sqrt(fracs.at(j) * (delta - delta * delta));
      const auto rho = channels::udw_qubit_state(p, 0.0);
      for (double n : {2.0, 3.0}) {
        const auto cf = channels::udw_closed_forms(p, n);
        closed_err = std::max(closed_err, std::abs(cf.exposure - onset::exposure(rho, sz, n)));
        closed_err = std::max(closed_err,
                              std::abs(cf.hdd - onset::renyi_second_derivative(rho, field, h, n)));
      }
      ++grid_points;
    }
  }

  std::vector<double> t_grid;
  for (int k = 0; k <= 20; ++k) t_grid.push_back(k / 20.0);
  double fock_err = 0.0;
  const statespace::Axis fock_deltas{0.05, 0.95, 20};
  for (std::size_t k = 0; k < fock_deltas.points; ++k) {
    channels::UdwQubitParams p;
    p.delta = fock_deltas.at(k);
    const double top = p.delta - p.delta * p.delta;
    p.alpha = std::polar(std::sqrt(top * (0.1 + 0.85 * static_cast<double>(k % 7) / 6.0)),
                         0.3 * static_cast<double>(k));
    const auto series = channels::fock_udw_series(p, trunc, t_grid);
    for (std::size_t s = 0; s < t_grid.size(); ++s) {
      const double t = t_grid[s];
      fock_err = std::max(fock_err, std::abs(std::abs(series[s].matrix()(0, 1)) -
                                             std::abs(p.alpha) * std::exp(-2.0 * t * t)));
    }
  }
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = closed_err <= 1e-10 && fock_err <= 1e-6 && elapsed < 60.0;
  o.detail = "closed vs generic max " + num(closed_err) + " over " + std::to_string(grid_points) +
             " points (<= 1e-10), Fock N=40 max " + num(fock_err) + " (<= 1e-6), " + num(elapsed) +
             " s (< 60 s)";
  return o;
}

Outcome qubit_positivity() {
  const auto rows = statespace::scan_exposure(statespace::ScanGrid::qubit_default(101),
                                              statespace::qubit_operator("sz"), 2.0);
  double lowest = INFINITY;
  std::size_t valid = 0;
  for (const auto& r : rows) {
    if (!r.valid) continue;
    ++valid;
    lowest = std::min(lowest, *r.exposure);
  }
  return {valid > 0 && lowest >= -1e-10,
          "min E_2 " + num(lowest) + " over " + std::to_string(valid) + " admissible points (>= -1e-10)"};
}

Outcome qutrit_negative() {
  const auto rows = statespace::scan_exposure(statespace::ScanGrid::qutrit_default(0.0, 61),
                                              statespace::spin1_operator("SySz+SzSy"), 2.0);
  std::size_t negative = 0;
  double lowest = INFINITY;
  for (const auto& r : rows) {
    if (!r.valid) continue;
    lowest = std::min(lowest, *r.exposure);
    if (*r.exposure < -1e-6) ++negative;
  }
  return {negative >= 1, std::to_string(negative) + " points with E_2 < -1e-6, min " + num(lowest)};
}

Outcome spectrum_reconstruction() {
  const auto r = verify::spectrum_roundtrip(100, kSeed);
  const auto s = renyi::spectrum_from_purities(renyi::PuritySequence({1.0, 0.38, 0.16}), 3);
  const std::vector<double> expect{0.5, 0.3, 0.2};
  double worked = 0.0;
  for (std::size_t k = 0; k < 3; ++k) worked = std::max(worked, std::abs(s.values()[k] - expect[k]));
  return {r.passed() && worked <= 1e-8, "roundtrip max " + num(r.max_abs_error()) +
                                            " (<= 1e-8), (1, 0.38, 0.16) -> (0.5, 0.3, 0.2) err " +
                                            num(worked)};
}

Outcome divergence_demo() {
  constexpr double eps = 1e-3;
  const auto family = onset::qutrit_half_family(101);
  const auto rows = onset::trace_term_scan(family, {eps});
  double raw_max = 0.0;
  for (const auto& r : rows) {
    if (r.lambda_min >= 0.05) raw_max = std::max(raw_max, std::abs(r.raw));
  }
  // Two points on the slice λ = (0.5, λ₁, 0.5 − λ₁).
  const std::vector<std::vector<double>> pair{{0.5, 1e-4, 0.5 - 1e-4}, {0.5, 0.05, 0.45}};
  const auto ones = onset::trace_term_scan(pair, {eps});
  const auto test = onset::trace_term_scan(pair, {eps}, onset::test_operator());
  const double ratio_ones = std::abs(ones[0].regularized) / std::abs(ones[1].regularized);
  const double ratio_test = std::abs(test[0].regularized) / std::abs(test[1].regularized);
  Outcome o;
  o.pass = raw_max < 1e-3 && ratio_ones >= 10.0;
  o.detail = "eps=1e-3: max |raw| for lambda_min >= 0.05 is " + num(raw_max) +
             " (< 1e-3); |reg(1e-4)|/|reg(0.05)| = " + num(ratio_ones) +
             " (>= 10), with the test operator " + num(ratio_test) + "; reg at lambda_min=0 is " +
             num(rows.front().regularized);
  return o;
}

std::vector<Criterion> criteria() {
  return {
      {"first-derivative", first_derivative},
      {"free-hamiltonian", [] { return from_report(verify::free_hamiltonian(200, kSeed)); }},
      {"perturbative-exact", [] { return from_report(verify::perturbative_exact(100, kSeed)); }},
      {"udw-triple", udw_triple},
      {"durability-positivity", [] { return from_report(verify::durability_positivity(500, kSeed)); }},
      {"pure-exposure", [] { return from_report(verify::pure_exposure(100, kSeed)); }},
      {"tensor-extension", [] { return from_report(verify::tensor_extension(100, kSeed)); }},
      {"qubit-positivity", qubit_positivity},
      {"qutrit-negative", qutrit_negative},
      {"complementary-symmetry",
       [] { return from_report(verify::complementary_symmetry(50, kSeed)); }},
      {"spectrum-reconstruction", spectrum_reconstruction},
      {"divergence-demo", divergence_demo},
      {"entropy-bounds", [] { return from_report(verify::renyi_bounds(500, kSeed)); }},
  };
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg(argv[i]);
    if (arg.rfind("--only=", 0) == 0) {
      only = std::string(arg.substr(7));
    } else {
      std::fprintf(stderr, "usage: acceptance [--only=ID]\n");
      return 2;
    }
  }

  const auto all = criteria();
  if (!only.empty() &&
      std::none_of(all.begin(), all.end(), [&](const Criterion& c) { return c.id == only; })) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && c.id != only) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", c.id.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
