#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "exposure_lab/cli.hpp"
#include "exposure_lab/records.hpp"

using namespace exposure_lab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "exposure_lab_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

int shell_exit(const std::string& args) {
  const std::string cmd = std::string(EXPOSURE_LAB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("scan-qubit writes the documented header") {
  const fs::path p = scratch("q.csv");
  const auto r = run({"scan-qubit", "--n", "2", "--grid", "101", "--out", p.string()});
  CHECK(r.code == cli::kExitOk);
  const auto rows = records::parse_csv(slurp(p));
  REQUIRE(rows.size() == 101 * 101 + 1);
  CHECK(rows[0] == std::vector<std::string>{"delta", "alpha2", "exposure", "renyi", "valid"});
  CHECK(r.out.find(p.string()) != std::string::npos);
}

TEST_CASE("scan-qubit rejects n = 1") {
  const auto r = run({"scan-qubit", "--n", "1"});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find("n must exceed 1 for scans") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("seeded verify output is byte identical") {
  const std::vector<std::string> args{"verify", "free-hamiltonian", "--trials", "200", "--seed", "7"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == cli::kExitOk);
  CHECK(a.out == b.out);
  CHECK_FALSE(a.out.empty());

  const fs::path p1 = scratch("v1.json");
  const fs::path p2 = scratch("v2.json");
  auto with_out = [&](const fs::path& p) {
    auto v = args;
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  CHECK(run(with_out(p1)).code == 0);
  CHECK(run(with_out(p2)).code == 0);
  CHECK(slurp(p1) == slurp(p2));
  const auto j = nlohmann::json::parse(slurp(p1));
  CHECK(j["rows"].size() == 200);

  // Thread count does not change a single byte.
  ::setenv("EXPOSURE_LAB_THREADS", "3", 1);
  const auto c = run(args);
  ::unsetenv("EXPOSURE_LAB_THREADS");
  CHECK(c.out == a.out);
}

TEST_CASE("spectrum subcommand") {
  const auto r = run({"spectrum", "--gammas", "1,0.38,0.16", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["rows"].size() == 3);
  CHECK(std::abs(j["rows"][0]["lambda"].get<double>() - 0.5) < 1e-12);
  CHECK(std::abs(j["rows"][2]["lambda"].get<double>() - 0.2) < 1e-12);

  CHECK(run({"spectrum", "--gammas", "1,1.4"}).code == cli::kExitInvalid);
}

TEST_CASE("onset-report reads matrix files") {
  const fs::path ra = scratch("ra.json");
  const fs::path rb = scratch("rb.json");
  const fs::path sx = scratch("sx.json");
  write_text(ra, R"({"dim": 2, "entries": [0.75, 0, 0, 0.25]})");
  write_text(rb, R"({"dim": 2, "entries": [[1, 0], [0, 0], [0, 0], [0, 0]]})");
  write_text(sx, R"({"dim": 2, "entries": [0, 1, 1, 0]})");
  const auto r = run({"onset-report", "--state", ra.string(), "--op", sx.string(), "--state-b",
                      rb.string(), "--op-b", sx.string(), "--n", "2", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto& row = j["rows"][0];
  CHECK(std::abs(row["durability_a"].get<double>() - 0.4) < 1e-12);
  CHECK(std::abs(row["exposure_a"].get<double>() - 0.6) < 1e-12);
  CHECK(std::abs(row["hdd_a"].get<double>() - 1.6) < 1e-12);
  CHECK(std::abs(row["delta_coefficient"].get<double>() + 1.2) < 1e-12);

  const fs::path bad = scratch("bad.json");
  write_text(bad, R"({"dim": 2, "entries": [0.6, 0, 0, 0.6]})");
  CHECK(run({"onset-report", "--state", bad.string(), "--op", sx.string(), "--state-b", rb.string(),
             "--op-b", sx.string()})
            .code == cli::kExitInvalid);
}

TEST_CASE("small runs of every subcommand") {
  CHECK(run({"scan-qutrit", "--grid", "11"}).code == 0);
  CHECK(run({"udw-evolve", "--steps", "5", "--fock", "30"}).code == 0);
  CHECK(run({"udw-evolve", "--steps", "5", "--n", "2"}).code == 0);
  CHECK(run({"udw-verify", "--grid", "5", "--points", "2", "--tsteps", "3"}).code == 0);
  CHECK(run({"divergence-demo", "--points", "11"}).code == 0);
  CHECK(run({"divergence-demo", "--points", "11", "--op", "test"}).code == 0);
  CHECK(run({"isocurve", "--h2", "0.4", "--points", "101"}).code == 0);
  CHECK(run({"extremize", "--h2", "0.4", "--points", "101"}).code == 0);
  CHECK(run({"verify", "pure-exposure", "--trials", "10", "--seed", "1"}).code == 0);
}

TEST_CASE("udw-evolve columns") {
  const auto r = run({"udw-evolve", "--steps", "3", "--tmax", "0.5"});
  REQUIRE(r.code == 0);
  const auto rows = records::parse_csv(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"t", "lambda_plus", "lambda_minus", "s_a", "s_a_ddot",
                                            "h_a", "h_b", "h_ba", "h_aa", "i_direct",
                                            "i_complementary"});
}

TEST_CASE("usage and input errors") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"no-such-command"}).code == cli::kExitUsage);
  CHECK(run({"verify", "free-hamiltonian"}).code == cli::kExitUsage);
  CHECK(run({"verify", "no-such-check", "--seed", "1"}).code != 0);
  CHECK(run({"scan-qubit", "--grid", "abc"}).code == cli::kExitUsage);
  CHECK(run({"scan-qubit", "--op", "sw"}).code != 0);
  CHECK(run({"extremize", "--h2", "0.9"}).code == cli::kExitInvalid);
  CHECK(run({"udw-evolve", "--delta", "0.5", "--alpha2", "0.3"}).code == cli::kExitInvalid);
  CHECK(run({"scan-qutrit", "--op", "SySz"}).code == cli::kExitInvalid);
}

TEST_CASE("unwritable output leaves no partial file") {
  const fs::path target = scratch("nodir") / "deeper" / "out.csv";
  const auto r = run({"scan-qubit", "--grid", "5", "--out", target.string()});
  CHECK(r.code == cli::kExitFailure);
  CHECK_FALSE(fs::exists(target));
  CHECK_FALSE(fs::exists(target.string() + ".tmp"));
}

TEST_CASE("the installed binary reports the same exit codes") {
  CHECK(shell_exit("scan-qubit --grid 5") == 0);
  CHECK(shell_exit("scan-qubit --n 1") == 1);
  CHECK(shell_exit("udw-evolve --alpha2 0.3") == 2);
  CHECK(shell_exit("spectrum --gammas 1,1.4") == 2);
  CHECK(shell_exit("scan-qubit --grid 5 --out /nonexistent-dir/x.csv") == 3);
}

}  // TEST_SUITE
