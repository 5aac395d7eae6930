#include "exposure_lab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "exposure_lab/channels.hpp"
#include "exposure_lab/error.hpp"
#include "exposure_lab/onset.hpp"
#include "exposure_lab/records.hpp"
#include "exposure_lab/renyi.hpp"
#include "exposure_lab/statespace.hpp"
#include "exposure_lab/verify.hpp"

namespace exposure_lab::cli {

using nlohmann::json;
using qmat::Complex;
using qmat::ComplexMatrix;
using qmat::DensityMatrix;
using qmat::HermitianOperator;
using records::Cell;
using records::Envelope;
using records::Table;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Outcome {
  Envelope envelope;
  std::string summary;
  int status = kExitOk;
};

struct OutputOptions {
  std::string path;
  std::string format;
};

Cell opt_cell(const std::optional<double>& v) {
  return v ? Cell(*v) : Cell(std::monostate{});
}

Cell int_cell(std::size_t v) { return Cell(static_cast<std::int64_t>(v)); }

std::string num(double v) { return records::format_double(v); }

void require_scan_n(double n) {
  if (!(n > 1.0) || !std::isfinite(n)) {
    throw UsageError("n must exceed 1 for scans (got " + num(n) + ")");
  }
}

renyi::RenyiIndex parse_index(const std::string& text) {
  if (text == "vn" || text == "1") return renyi::RenyiIndex::von_neumann();
  std::size_t used = 0;
  double n = 0.0;
  try {
    n = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("--n must be a number or 'vn', got '" + text + "'");
  }
  if (used != text.size()) throw UsageError("--n must be a number or 'vn', got '" + text + "'");
  return renyi::RenyiIndex::order(n);
}

json index_json(const renyi::RenyiIndex& idx) {
  return idx.is_von_neumann() ? json("vn") : json(idx.n());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// {"dim": d, "entries": [[re, im], ...]} row-major; a bare number is a real entry.
ComplexMatrix read_matrix(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidArgument, path + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("entries") ||
      !doc["dim"].is_number_integer() || !doc["entries"].is_array()) {
    throw Error(ErrorKind::InvalidArgument, path + ": expected {\"dim\": d, \"entries\": [...]}");
  }
  const long d = doc["dim"].get<long>();
  const auto& entries = doc["entries"];
  if (d <= 0 || entries.size() != static_cast<std::size_t>(d * d)) {
    throw Error(ErrorKind::InvalidDimensions,
                path + ": need dim*dim entries for dim " + std::to_string(d));
  }
  ComplexMatrix m(d, d);
  for (long k = 0; k < d * d; ++k) {
    const auto& e = entries[static_cast<std::size_t>(k)];
    Complex z;
    if (e.is_number()) {
      z = e.get<double>();
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      z = Complex(e[0].get<double>(), e[1].get<double>());
    } else {
      throw Error(ErrorKind::InvalidArgument,
                  path + ": entry " + std::to_string(k) + " is not [re, im]");
    }
    m(k / d, k % d) = z;
  }
  return m;
}

json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  const statespace::Axis axis{lo, hi, points};
  std::vector<double> out(points);
  for (std::size_t k = 0; k < points; ++k) out[k] = axis.at(k);
  return out;
}

// ---------------------------------------------------------------------------------------
// subcommands

struct ScanQubitArgs {
  double n = 2.0;
  std::size_t grid = 101;
  std::string op = "sz";
};

Outcome scan_qubit(const ScanQubitArgs& a) {
  require_scan_n(a.n);
  const auto rows = statespace::scan_exposure(statespace::ScanGrid::qubit_default(a.grid),
                                              statespace::qubit_operator(a.op), a.n);
  Outcome o;
  o.envelope.command = "scan-qubit";
  o.envelope.config = {{"n", a.n}, {"grid", a.grid}, {"op", a.op}};
  o.envelope.table = Table({"delta", "alpha2", "exposure", "renyi", "valid"});
  double min_e = std::numeric_limits<double>::infinity();
  std::size_t valid = 0;
  for (const auto& r : rows) {
    o.envelope.table.add_row(
        {r.coords[0], r.coords[1], opt_cell(r.exposure), opt_cell(r.renyi), r.valid});
    if (r.valid) {
      ++valid;
      min_e = std::min(min_e, *r.exposure);
    }
  }
  o.envelope.extras = {{"valid_points", valid}, {"min_exposure", valid ? json(min_e) : json()}};
  o.summary = "scan-qubit: " + std::to_string(rows.size()) + " points, " +
              std::to_string(valid) + " valid, min exposure " + num(min_e);
  return o;
}

struct ScanQutritArgs {
  double n = 2.0;
  std::size_t grid = 61;
  std::string op = "SySz+SzSy";
  double az = 0.0;
};

Outcome scan_qutrit(const ScanQutritArgs& a) {
  require_scan_n(a.n);
  const auto rows = statespace::scan_exposure(statespace::ScanGrid::qutrit_default(a.az, a.grid),
                                              statespace::spin1_operator(a.op), a.n);
  Outcome o;
  o.envelope.command = "scan-qutrit";
  o.envelope.config = {{"n", a.n}, {"grid", a.grid}, {"op", a.op}, {"az", a.az}};
  o.envelope.table = Table({"a_x", "a_y", "a_z", "exposure", "renyi", "valid"});
  double min_e = std::numeric_limits<double>::infinity();
  std::size_t valid = 0;
  std::size_t negative = 0;
  for (const auto& r : rows) {
    o.envelope.table.add_row({r.coords[0], r.coords[1], r.coords[2], opt_cell(r.exposure),
                              opt_cell(r.renyi), r.valid});
    if (r.valid) {
      ++valid;
      min_e = std::min(min_e, *r.exposure);
      if (*r.exposure < -1e-6) ++negative;
    }
  }
  o.envelope.extras = {{"valid_points", valid},
                       {"negative_points", negative},
                       {"min_exposure", valid ? json(min_e) : json()}};
  o.summary = "scan-qutrit: " + std::to_string(rows.size()) + " points, " +
              std::to_string(valid) + " valid, " + std::to_string(negative) +
              " with exposure < -1e-6, min " + num(min_e);
  return o;
}

struct UdwEvolveArgs {
  double delta = 0.5;
  double alpha2 = 0.125;
  double phase = 0.0;
  double tmax = 1.0;
  std::size_t steps = 101;
  std::string n = "vn";
  std::size_t fock = 40;
};

channels::UdwQubitParams udw_params(double delta, double alpha2, double phase) {
  if (!(alpha2 >= 0.0)) throw Error(ErrorKind::InvalidState, "alpha2 must be >= 0");
  channels::UdwQubitParams p;
  p.delta = delta;
  p.alpha = std::polar(std::sqrt(alpha2), phase);
  p.validate();
  return p;
}

Outcome udw_evolve(const UdwEvolveArgs& a) {
  const auto idx = parse_index(a.n);
  const auto p = udw_params(a.delta, a.alpha2, a.phase);
  if (a.steps < 2) throw UsageError("--steps must be at least 2");
  if (!(a.tmax > 0.0)) throw UsageError("--tmax must be positive");
  const auto t_grid = uniform_grid(0.0, a.tmax, a.steps);

  const channels::FockTruncation trunc(a.fock);
  // Convergence of the truncation over the whole grid; throws truncation-error otherwise.
  (void)channels::fock_udw_series(p, trunc, t_grid);

  ComplexMatrix vacuum = ComplexMatrix::Zero(static_cast<Eigen::Index>(a.fock),
                                             static_cast<Eigen::Index>(a.fock));
  vacuum(0, 0) = 1.0;
  const onset::GeneralHamiltonian h(
      {{HermitianOperator(qmat::pauli_z()), HermitianOperator(trunc.quadrature())}});
  const auto series = channels::coherent_info_timeseries(
      channels::udw_qubit_state(p, 0.0), DensityMatrix(vacuum), h, idx, t_grid);

  Outcome o;
  o.envelope.command = "udw-evolve";
  o.envelope.config = {{"delta", a.delta}, {"alpha2", a.alpha2}, {"phase", a.phase},
                       {"tmax", a.tmax},   {"steps", a.steps},   {"n", index_json(idx)},
                       {"fock", a.fock}};
  o.envelope.table = Table({"t", "lambda_plus", "lambda_minus", "s_a", "s_a_ddot", "h_a", "h_b",
                            "h_ba", "h_aa", "i_direct", "i_complementary"});
  std::size_t divergent = 0;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const auto eig = channels::udw_eigen(p, t_grid[k]);
    const double lp = eig.lambda_plus;
    const double lm = eig.lambda_minus;
    double s = 0.0;
    for (double l : {lp, lm}) {
      if (l > 0.0) s -= l * std::log(l);
    }
    // S̈ = −Σ(λ̈ ln λ + λ̇²/λ); the λ̇²/λ term has no limit once λ₋ reaches 0.
    Cell s_ddot = std::monostate{};
    if (lm >= qmat::kZeroEigClamp) {
      s_ddot = -(eig.dd_lambda.first * std::log(lp) + eig.d_lambda.first * eig.d_lambda.first / lp +
                 eig.dd_lambda.second * std::log(lm) +
                 eig.d_lambda.second * eig.d_lambda.second / lm);
    } else {
      ++divergent;
    }
    const auto& r = series.records[k];
    o.envelope.table.add_row({r.t, lp, lm, s, s_ddot, r.h_a, r.h_b, r.h_ba, r.h_aa, r.i_direct,
                              r.i_complementary});
  }
  if (divergent) {
    o.envelope.diagnostics.push_back(std::to_string(divergent) +
                                     " sample(s) with a zero eigenvalue: s_a_ddot left empty");
  }
  o.summary = "udw-evolve: " + std::to_string(t_grid.size()) + " samples over [0, " +
              num(a.tmax) + "], Fock levels " + std::to_string(a.fock);
  return o;
}

struct UdwVerifyArgs {
  std::size_t grid = 50;
  double n = 2.0;
  std::size_t points = 20;
  std::size_t tsteps = 11;
  std::size_t fock = 40;
};

Outcome udw_verify(const UdwVerifyArgs& a) {
  if (!(a.n > 1.0)) throw UsageError("n must exceed 1 for the closed forms");
  if (a.grid < 2 || a.tsteps < 2) throw UsageError("--grid and --tsteps must be at least 2");

  Outcome o;
  o.envelope.command = "udw-verify";
  o.envelope.config = {{"grid", a.grid}, {"n", a.n}, {"points", a.points},
                       {"tsteps", a.tsteps}, {"fock", a.fock}};
  o.envelope.table = Table({"check", "delta", "alpha2", "t", "value", "reference", "abs_error",
                            "tolerance", "pass"});
  std::size_t failures = 0;
  auto add = [&](const char* check, double delta, double alpha2, double t, double value,
                 double reference, double tol) {
    const double err = std::abs(value - reference);
    const bool pass = err <= tol;
    if (!pass) ++failures;
    o.envelope.table.add_row({std::string(check), delta, alpha2, t, value, reference, err, tol, pass});
  };

  // Closed form against the generic onset path on the admissible (δ, |α|²) grid.
  const channels::FockTruncation small(2);
  ComplexMatrix vac = ComplexMatrix::Zero(2, 2);
  vac(0, 0) = 1.0;
  const DensityMatrix vacuum(vac);
  const HermitianOperator field(small.quadrature());
  const HermitianOperator sz(qmat::pauli_z());
  for (std::size_t i = 0; i < a.grid; ++i) {
    const double delta = static_cast<double>(i) / static_cast<double>(a.grid - 1);
    const double top = delta - delta * delta;
    for (std::size_t j = 0; j < a.grid; ++j) {
      const double alpha2 = top * static_cast<double>(j) / static_cast<double>(a.grid - 1);
      const auto p = udw_params(delta, alpha2, 0.7 * static_cast<double>(j));
      const auto closed = channels::udw_closed_forms(p, a.n);
      const DensityMatrix rho = channels::udw_qubit_state(p, 0.0);
      const double hdd = onset::renyi_second_derivative(rho, vacuum, {sz, field}, a.n);
      const double e = onset::exposure(rho, sz, a.n);
      add("closed-vs-generic/hdd", delta, alpha2, 0.0, closed.hdd, hdd, 1e-10);
      add("closed-vs-generic/exposure", delta, alpha2, 0.0, closed.exposure, e, 1e-10);
    }
  }

  // Truncated-Fock oracle against the Gaussian decay of the coherence.
  const auto t_grid = uniform_grid(0.0, 1.0, a.tsteps);
  const channels::FockTruncation trunc(a.fock);
  for (std::size_t k = 0; k < a.points; ++k) {
    const double frac = a.points > 1 ? static_cast<double>(k) / static_cast<double>(a.points - 1) : 0.5;
    const double delta = 0.05 + 0.9 * frac;
    const double alpha2 = (delta - delta * delta) * static_cast<double>((7 * k) % 20 + 1) / 21.0;
    const auto p = udw_params(delta, alpha2, 2.0 * M_PI * frac);
    const auto states = channels::fock_udw_series(p, trunc, t_grid);
    for (std::size_t m = 0; m < t_grid.size(); ++m) {
      const double t = t_grid[m];
      add("fock-vs-closed/offdiag", delta, alpha2, t, std::abs(states[m].matrix()(0, 1)),
          std::sqrt(alpha2) * std::exp(-2.0 * t * t), 1e-6);
    }
  }

  const std::size_t total = o.envelope.table.rows().size();
  o.envelope.extras = {{"failures", failures}, {"comparisons", total}};
  o.summary = "udw-verify: " + std::to_string(total - failures) + "/" + std::to_string(total) +
              " comparisons passed";
  if (failures) o.status = kExitFailure;
  return o;
}

struct OnsetReportArgs {
  std::string state_a;
  std::string op_a;
  std::string state_b;
  std::string op_b;
  std::string n = "2";
};

Outcome onset_report_cmd(const OnsetReportArgs& a) {
  const auto idx = parse_index(a.n);
  const DensityMatrix rho_a(read_matrix(a.state_a));
  const DensityMatrix rho_b(read_matrix(a.state_b));
  const onset::ProductHamiltonian h{HermitianOperator(read_matrix(a.op_a)),
                                    HermitianOperator(read_matrix(a.op_b))};
  const auto r = onset::onset_report(rho_a, rho_b, h, idx);

  Outcome o;
  o.envelope.command = "onset-report";
  o.envelope.config = {{"state", a.state_a}, {"op", a.op_a},        {"state_b", a.state_b},
                       {"op_b", a.op_b},     {"n", index_json(idx)}};
  o.envelope.table = Table({"n", "variance_a", "variance_b", "durability_a", "exposure_a",
                            "hdd_a", "delta_coefficient"});
  o.envelope.table.add_row({idx.is_von_neumann() ? Cell(std::string("vn")) : Cell(idx.n()),
                            r.variance_a, r.variance_b, r.durability_a, r.exposure_a, r.hdd_a,
                            opt_cell(r.delta_coefficient)});
  const auto& ev = rho_a.eigenvalues();
  o.envelope.extras = {{"op_in_eigenbasis", matrix_json(r.op_in_eigenbasis)},
                       {"eigenvalues_a", std::vector<double>(ev.data(), ev.data() + ev.size())}};
  if (!r.delta_coefficient) {
    o.envelope.diagnostics.push_back(
        idx.is_von_neumann()
            ? "delta_coefficient omitted: the von Neumann change is not finite for a pure B"
            : "delta_coefficient omitted: rho_B is not pure");
  }
  o.summary = "onset-report: exposure " + num(r.exposure_a) + ", durability " +
              num(r.durability_a) + ", hdd " + num(r.hdd_a);
  return o;
}

struct VerifyArgs {
  std::string check;
  std::optional<std::size_t> trials;
  std::uint64_t seed = 0;
};

Outcome verify_cmd(const VerifyArgs& a) {
  const auto& names = verify::check_names();
  if (std::find(names.begin(), names.end(), a.check) == names.end()) {
    std::string list;
    for (const auto& nm : names) list += (list.empty() ? "" : ", ") + nm;
    throw UsageError("unknown check '" + a.check + "' (expected one of: " + list + ")");
  }
  const std::size_t trials = a.trials.value_or(verify::default_trials(a.check));
  const auto report = verify::run_check(a.check, trials, a.seed);

  Outcome o;
  o.envelope.command = "verify " + a.check;
  o.envelope.config = {{"check", a.check}, {"trials", trials}, {"seed", a.seed}};
  o.envelope.table =
      Table({"check", "trial", "value", "reference", "abs_error", "tolerance", "pass"});
  for (const auto& r : report.rows) {
    o.envelope.table.add_row(
        {r.check, int_cell(r.trial), r.value, r.reference, r.abs_error, r.tolerance, r.pass});
  }
  o.envelope.extras = {{"failures", report.failures()},
                       {"max_abs_error", report.max_abs_error()},
                       {"passed", report.passed()}};
  o.summary = "verify " + a.check + ": " + (report.passed() ? "PASS" : "FAIL") + " (" +
              std::to_string(report.rows.size() - report.failures()) + "/" +
              std::to_string(report.rows.size()) + " rows, max abs error " +
              num(report.max_abs_error()) + ")";
  if (!report.passed()) o.status = kExitFailure;
  return o;
}

struct SpectrumArgs {
  std::vector<double> gammas;
  std::optional<std::size_t> dim;
};

Outcome spectrum_cmd(const SpectrumArgs& a) {
  const renyi::PuritySequence seq(a.gammas);
  const std::size_t d = a.dim.value_or(a.gammas.size());
  const auto spec = renyi::spectrum_from_purities(seq, d);
  Outcome o;
  o.envelope.command = "spectrum";
  o.envelope.config = {{"gammas", a.gammas}, {"dim", d}};
  o.envelope.table = Table({"index", "lambda"});
  std::string listing;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    o.envelope.table.add_row({int_cell(i), spec.values()[i]});
    listing += (i ? ", " : "") + num(spec.values()[i]);
  }
  o.summary = "spectrum: (" + listing + ")";
  return o;
}

struct DivergenceArgs {
  std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
  std::size_t points = 101;
  std::string op = "ones";
};

Outcome divergence_cmd(const DivergenceArgs& a) {
  std::optional<ComplexMatrix> op;
  if (a.op == "test") {
    op = onset::test_operator();
  } else if (a.op != "ones") {
    throw UsageError("--op must be 'ones' or 'test'");
  }
  const auto rows = onset::trace_term_scan(onset::qutrit_half_family(a.points), a.eps, op);
  Outcome o;
  o.envelope.command = "divergence-demo";
  o.envelope.config = {{"eps", a.eps}, {"points", a.points}, {"op", a.op}};
  o.envelope.table = Table({"lambda1", "lambda_min", "eps", "raw", "regularized"});
  double largest = 0.0;
  for (const auto& r : rows) {
    o.envelope.table.add_row({r.lambda1, r.lambda_min, r.eps, r.raw, r.regularized});
    largest = std::max(largest, std::abs(r.regularized));
  }
  o.summary = "divergence-demo: " + std::to_string(rows.size()) +
              " rows, largest |regularized| " + num(largest);
  return o;
}

struct IsocurveArgs {
  double target = 0.5;
  double n = 2.0;
  std::size_t points = 1001;
};

Outcome isocurve_cmd(const IsocurveArgs& a) {
  require_scan_n(a.n);
  const auto curve =
      statespace::entropy_isocurve_qubit(a.target, uniform_grid(0.0, 1.0, a.points), a.n);
  Outcome o;
  o.envelope.command = "isocurve";
  o.envelope.config = {{"h2", a.target}, {"n", a.n}, {"points", a.points}};
  o.envelope.table = Table({"delta", "alpha2", "exposure", "renyi"});
  for (const auto& p : curve.points) {
    o.envelope.table.add_row({p.delta, p.alpha2, p.exposure, p.renyi});
  }
  o.envelope.diagnostics = curve.diagnostics;
  o.summary = "isocurve: " + std::to_string(curve.points.size()) + " points, " +
              std::to_string(curve.diagnostics.size()) + " delta values without a solution";
  return o;
}

Outcome extremize_cmd(const IsocurveArgs& a) {
  require_scan_n(a.n);
  const auto r = statespace::extremize_exposure_on_isocurve(a.target, a.n, a.points);
  Outcome o;
  o.envelope.command = "extremize";
  o.envelope.config = {{"h2", a.target}, {"n", a.n}, {"points", a.points}};
  o.envelope.table = Table({"kind", "delta", "alpha2", "exposure", "renyi"});
  for (const auto& [kind, p] : {std::pair<std::string, statespace::IsocurvePoint>{"min", r.argmin},
                                {"max", r.argmax}}) {
    o.envelope.table.add_row({kind, p.delta, p.alpha2, p.exposure, p.renyi});
  }
  o.envelope.extras = {{"curve_points", r.curve_points}};
  o.summary = "extremize: min exposure " + num(r.argmin.exposure) + " at delta " +
              num(r.argmin.delta) + ", max " + num(r.argmax.exposure) + " at delta " +
              num(r.argmax.delta);
  return o;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NumericalFailure:
    case ErrorKind::TruncationError:
    case ErrorKind::IoError:
      return kExitFailure;
    default:
      return kExitInvalid;
  }
}

void add_output(CLI::App* sub, OutputOptions& o) {
  sub->add_option("--out", o.path, "Output file (stdout when omitted)");
  sub->add_option("--format", o.format, "csv or json (default: from the --out extension)")
      ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Onset of n-coherent-information transfer: exposure, durability and exact "
               "channel checks"};
  app.name("exposure_lab");
  app.require_subcommand(1);

  OutputOptions output;
  std::function<Outcome()> action;

  ScanQubitArgs sq;
  auto* c = app.add_subcommand("scan-qubit", "Exposure and Renyi entropy over the qubit family");
  c->add_option("--n", sq.n, "Renyi order (> 1)");
  c->add_option("--grid", sq.grid, "Points per axis")->check(CLI::Range(1, 100000));
  c->add_option("--op", sq.op, "Coupling operator: sx, sy or sz");
  add_output(c, output);
  c->callback([&] { action = [&] { return scan_qubit(sq); }; });

  ScanQutritArgs st;
  c = app.add_subcommand("scan-qutrit", "Exposure and Renyi entropy over a qutrit a_z slice");
  c->add_option("--n", st.n, "Renyi order (> 1)");
  c->add_option("--grid", st.grid, "Points per axis")->check(CLI::Range(1, 100000));
  c->add_option("--op", st.op, "Spin-1 operator expression, e.g. 'SySz+SzSy'");
  c->add_option("--az", st.az, "a_z slice");
  add_output(c, output);
  c->callback([&] { action = [&] { return scan_qutrit(st); }; });

  UdwEvolveArgs ue;
  c = app.add_subcommand("udw-evolve", "Exact qubit/field-mode time series");
  c->add_option("--delta", ue.delta, "Excited-state population");
  c->add_option("--alpha2", ue.alpha2, "Coherence magnitude |alpha|^2");
  c->add_option("--phase", ue.phase, "arg(alpha)");
  c->add_option("--tmax", ue.tmax, "Final time");
  c->add_option("--steps", ue.steps, "Number of samples including t = 0");
  c->add_option("--n", ue.n, "Renyi order or 'vn'");
  c->add_option("--fock", ue.fock, "Fock levels")->check(CLI::Range(2, 400));
  add_output(c, output);
  c->callback([&] { action = [&] { return udw_evolve(ue); }; });

  UdwVerifyArgs uv;
  c = app.add_subcommand("udw-verify", "Qubit closed forms vs generic path vs Fock oracle");
  c->add_option("--grid", uv.grid, "Points per axis of the (delta, alpha2) grid");
  c->add_option("--n", uv.n, "Renyi order (> 1)");
  c->add_option("--points", uv.points, "Parameter points for the Fock oracle");
  c->add_option("--tsteps", uv.tsteps, "Time samples in [0, 1]");
  c->add_option("--fock", uv.fock, "Fock levels")->check(CLI::Range(2, 400));
  add_output(c, output);
  c->callback([&] { action = [&] { return udw_verify(uv); }; });

  OnsetReportArgs orp;
  c = app.add_subcommand("onset-report", "Onset quantities for states and operators from files");
  c->add_option("--state", orp.state_a, "rho_A JSON file")->required();
  c->add_option("--op", orp.op_a, "A-side operator JSON file")->required();
  c->add_option("--state-b", orp.state_b, "rho_B JSON file")->required();
  c->add_option("--op-b", orp.op_b, "B-side operator JSON file")->required();
  c->add_option("--n", orp.n, "Renyi order or 'vn'");
  add_output(c, output);
  c->callback([&] { action = [&] { return onset_report_cmd(orp); }; });

  VerifyArgs va;
  c = app.add_subcommand("verify", "Seeded property check");
  c->add_option("check", va.check, "Check name")->required();
  c->add_option("--trials", va.trials, "Number of trials")->check(CLI::Range(1, 10000000));
  c->add_option("--seed", va.seed, "Generator seed")->required();
  add_output(c, output);
  c->callback([&] { action = [&] { return verify_cmd(va); }; });

  SpectrumArgs sp;
  c = app.add_subcommand("spectrum", "Spectrum from the purities gamma_1..gamma_d");
  c->add_option("--gammas", sp.gammas, "Comma-separated gamma_1,...,gamma_d")
      ->required()
      ->delimiter(',');
  c->add_option("--dim", sp.dim, "Dimension d (default: number of gammas)");
  add_output(c, output);
  c->callback([&] { action = [&] { return spectrum_cmd(sp); }; });

  DivergenceArgs dv;
  c = app.add_subcommand("divergence-demo", "Trace-term tables near rank deficiency");
  c->add_option("--eps", dv.eps, "Comma-separated epsilon values")->delimiter(',');
  c->add_option("--points", dv.points, "Points along the lambda_1 slice")
      ->check(CLI::Range(2, 1000000));
  c->add_option("--op", dv.op, "'ones' (all |a_ij| = 1) or 'test'");
  add_output(c, output);
  c->callback([&] { action = [&] { return divergence_cmd(dv); }; });

  IsocurveArgs iso;
  c = app.add_subcommand("isocurve", "Qubit states at fixed Renyi entropy");
  c->add_option("--h2", iso.target, "Entropy target")->required();
  c->add_option("--n", iso.n, "Renyi order (> 1)");
  c->add_option("--points", iso.points, "delta grid size")->check(CLI::Range(1, 10000000));
  add_output(c, output);
  c->callback([&] { action = [&] { return isocurve_cmd(iso); }; });

  IsocurveArgs ex;
  c = app.add_subcommand("extremize", "Exposure extremes along a fixed-entropy curve");
  c->add_option("--h2", ex.target, "Entropy target")->required();
  c->add_option("--n", ex.n, "Renyi order (> 1)");
  c->add_option("--points", ex.points, "delta grid size")->check(CLI::Range(1, 10000000));
  add_output(c, output);
  c->callback([&] { action = [&] { return extremize_cmd(ex); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Outcome result = action();
    const records::Format format =
        output.format.empty()
            ? records::format_for_path(output.path)
            : (output.format == "json" ? records::Format::Json : records::Format::Csv);
    const std::string content = records::render(result.envelope, format);
    if (output.path.empty()) {
      out << content;
      err << result.summary << '\n';
    } else {
      records::write_atomic(output.path, content);
      out << result.summary << " -> " << output.path << '\n';
    }
    return result.status;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace exposure_lab::cli
