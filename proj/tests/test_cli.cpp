#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fracground/barrier.hpp"
#include "fracground/cli.hpp"
#include "fracground/field_io.hpp"
#include "fracground/parallel.hpp"
#include "support.hpp"

using namespace fracground;
using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

// Small resolved grid so a full solve takes a few seconds.
std::vector<std::string> small_solve(const std::filesystem::path& out) {
  return {"solve", "--set", "grid.points=64", "--set", "grid.half_width=3", "--out", out.string()};
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).code == kExitOk);
  const auto none = run({});
  CHECK(none.code == kExitConfig);
  CHECK(json::parse(none.err)["error"]["code"] == "usage");
  CHECK(run({"frobnicate"}).code == kExitConfig);
  CHECK(run({"inspect"}).code == kExitConfig);
}

TEST_CASE("config violations are reported together") {
  const auto dir = fgtest::scratch_dir("cli_config");
  const auto r = run({"barrier", "--set", "grid.points=100", "--set", "problem.order=1.5", "--set",
                      "nonsense.key=1", "--out", dir.string()});
  CHECK(r.code == kExitConfig);
  const auto e = json::parse(r.err)["error"];
  CHECK(e["code"] == "config");
  CHECK(e["violations"].size() >= 3);

  spit(dir / "bad.json", "{ \"problem\": ");
  const auto malformed = run({"barrier", "--config", (dir / "bad.json").string()});
  CHECK(malformed.code == kExitConfig);
  CHECK(json::parse(malformed.err)["error"]["code"] == "config");

  CHECK(run({"barrier", "--config", (dir / "missing.json").string()}).code == kExitConfig);
  CHECK(run({"barrier", "--deterministic", "maybe"}).code == kExitConfig);
  CHECK(run({"barrier", "--format", "xml"}).code == kExitConfig);
}

TEST_CASE("config file and overrides merge onto the defaults") {
  const auto dir = fgtest::scratch_dir("cli_merge");
  spit(dir / "c.json", R"({"problem": {"power": 3}, "grid": {"half_width": 8}})");
  const auto rc = resolve_config(json::parse(slurp(dir / "c.json")), {"grid.points=256"}, false);
  CHECK(rc.power == 3.0);
  CHECK(rc.half_width == 8.0);
  CHECK(rc.points == 256);
  CHECK(rc.dim == 2);
  CHECK(default_config_json()["grid"]["points"] == 128);
}

TEST_CASE("supercritical solve is refused as a config error") {
  const auto r = run({"solve", "--set", "problem.power=5", "--out", fgtest::scratch_dir("cli_super").string()});
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("p_crit") != std::string::npos);
}

TEST_CASE("solve, determinism and verify round trip") {
  const auto dir = fgtest::scratch_dir("cli_solve");
  const auto first = run(small_solve(dir));
  REQUIRE(first.code == kExitOk);
  const auto summary = json::parse(first.out);
  CHECK(summary["status"] == "ok");
  const std::string report1 = slurp(dir / "report.json");
  const std::string field1 = slurp(dir / "solution.fsf");

  const auto doc = json::parse(report1);
  CHECK(doc["minimizer"]["converged"] == true);
  CHECK(doc["certificate"]["passed"] == true);
  CHECK(doc["exit_code"] == 0);
  // Keys are written in sorted order, so reports diff cleanly.
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc.items()) keys.push_back(k);
  CHECK(std::is_sorted(keys.begin(), keys.end()));
  CHECK(report1.find("\"certificate\"") < report1.find("\"minimizer\""));

  const auto second = run(small_solve(dir));
  CHECK(second.code == kExitOk);
  CHECK(slurp(dir / "report.json") == report1);
  CHECK(slurp(dir / "solution.fsf") == field1);

  const auto vdir = dir / "verify";
  const auto v = run({"verify", (dir / "solution.fsf").string(), "--out", vdir.string()});
  CHECK(v.code == kExitOk);
  const auto cert = json::parse(slurp(vdir / "verify.json"))["certificate"];
  const auto& solved = doc["certificate"];
  for (const char* key : {"strong_residual", "pohozaev_residual", "positivity_min", "monotonicity_defect"})
    CHECK(cert[key].get<double>() == doctest::Approx(solved[key].get<double>()).epsilon(1e-12));

  const auto ins = run({"inspect", (dir / "solution.fsf").string(), "--out", (dir / "inspect").string()});
  CHECK(ins.code == kExitOk);
  const auto idoc = json::parse(ins.out);
  CHECK(idoc["order"] == 0.5);
  CHECK(idoc["monotonicity_defect"].get<double>() <= 1e-6 * idoc["norms"]["max"].get<double>());
  CHECK(std::filesystem::exists(dir / "inspect" / "profile.csv"));
}

TEST_CASE("an unconverged solve exits with the divergence code and csv reports") {
  const auto dir = fgtest::scratch_dir("cli_short");
  auto args = small_solve(dir);
  args.insert(args.end(), {"--set", "solver.max_iters=5", "--format", "csv"});
  const auto r = run(args);
  CHECK(r.code == kExitDivergence);
  CHECK(json::parse(r.out)["status"] == "not_converged");
  CHECK(slurp(dir / "iterates.csv").rfind("iteration,T,V,step,grad_norm", 0) == 0);
  CHECK(slurp(dir / "report.csv").rfind("key,value\n", 0) == 0);
  CHECK(std::filesystem::exists(dir / "weak_residuals.csv"));
  CHECK_FALSE(std::filesystem::exists(dir / "report.json"));
}

TEST_CASE("verify fails the certificate of a non-solution") {
  const auto dir = fgtest::scratch_dir("cli_verify");
  const auto g = make_grid(2, 64, 8.0);
  write_field(make_barrier({2.0, 2.0, std::nullopt}, g), dir / "w.fsf", 0.5);
  const auto r = run({"verify", (dir / "w.fsf").string(), "--out", dir.string(), "--format", "csv"});
  CHECK(r.code == kExitCertificate);
  CHECK(r.out.rfind("key,value\n", 0) == 0);
  CHECK(std::filesystem::exists(dir / "verify.csv"));
}

TEST_CASE("inspect rejects a corrupt file with its error code") {
  const auto dir = fgtest::scratch_dir("cli_inspect");
  spit(dir / "junk.fsf", std::string(64, 'x'));
  const auto r = run({"inspect", (dir / "junk.fsf").string(), "--out", dir.string()});
  CHECK(r.code == kExitConfig);
  CHECK(json::parse(r.err)["error"]["code"] == "bad_magic");
  const auto missing = run({"inspect", (dir / "none.fsf").string(), "--out", dir.string()});
  CHECK(json::parse(missing.err)["error"]["code"] == "io");
}

TEST_CASE("barrier command writes the scan table") {
  const auto dir = fgtest::scratch_dir("cli_barrier");
  const auto r = run({"barrier", "--set", "grid.points=256", "--set", "grid.half_width=16", "--out", dir.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("R,seminorm2,l2norm2,V,sigma_star\n", 0) == 0);
  CHECK(slurp(dir / "barrier.csv") == r.out);
  const auto doc = json::parse(slurp(dir / "barrier.json"));
  CHECK(doc["rows"].size() == 4);
  CHECK(doc["constraint"]["V_normalized"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  const auto js = run({"barrier", "--format", "json", "--out", dir.string()});
  CHECK(json::parse(js.out)["command"] == "barrier");
}

TEST_CASE("thread cap follows the environment") {
  set_thread_cap(0);
  ::setenv("FRACGROUND_THREADS", "3", 1);
  CHECK(thread_cap() == 3);
  ::setenv("FRACGROUND_THREADS", "junk", 1);
  CHECK(thread_cap() >= 1);
  ::unsetenv("FRACGROUND_THREADS");
  set_thread_cap(2);
  CHECK(thread_cap() == 2);
  set_thread_cap(0);
}
