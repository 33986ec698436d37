#include "fracground/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fracground/barrier.hpp"
#include "fracground/error.hpp"
#include "fracground/field_io.hpp"
#include "fracground/frac_ops.hpp"
#include "fracground/rearrange.hpp"

namespace fracground {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// configuration

json default_config_json() {
  RunConfig d;
  return d.to_json();
}

SolverConfig RunConfig::solver() const {
  SolverConfig cfg(problem(), grid());
  cfg.step_size = step_size;
  cfg.symmetrize_every = symmetrize_every;
  cfg.max_iters = max_iters;
  cfg.tol_grad = tol_grad;
  cfg.sigma_clip_low = sigma_clip_low;
  cfg.sigma_clip_high = sigma_clip_high;
  cfg.seed = seed;
  return cfg;
}

json RunConfig::to_json() const {
  json j;
  j["problem"] = {{"dim", dim}, {"order", order}, {"power", power}};
  j["grid"] = {{"points", points}, {"half_width", half_width}};
  j["solver"] = {{"step_size", step_size},
                 {"symmetrize_every", symmetrize_every},
                 {"max_iters", max_iters},
                 {"tol_grad", tol_grad},
                 {"sigma_clip", {sigma_clip_low, sigma_clip_high}}};
  j["barrier"] = {{"zeta", zeta ? json(*zeta) : json(nullptr)}};
  j["output_dir"] = output_dir;
  j["format"] = format ? json(*format) : json(nullptr);
  j["deterministic"] = deterministic;
  j["seed"] = seed;
  return j;
}

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << violations.size() << " configuration violation" << (violations.size() == 1 ? "" : "s");
        for (const auto& v : violations) msg << "; " << v;
        return msg.str();
      }()),
      violations_(std::move(violations)) {}

namespace {

// Copies `src` onto `dst`, recording keys the schema does not know.
void merge_into(json& dst, const json& src, const std::string& prefix,
                std::vector<std::string>& bad) {
  for (auto it = src.begin(); it != src.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!dst.contains(it.key())) {
      bad.push_back("unknown key '" + key + "'");
      continue;
    }
    auto& slot = dst[it.key()];
    if (slot.is_object()) {
      if (!it.value().is_object()) {
        bad.push_back("'" + key + "' must be an object");
        continue;
      }
      merge_into(slot, it.value(), key, bad);
    } else {
      slot = it.value();
    }
  }
}

json parse_set_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return json(text);
  }
}

void apply_set(json& doc, const std::string& assignment, std::vector<std::string>& bad) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    bad.push_back("--set expects KEY=VALUE, got '" + assignment + "'");
    return;
  }
  const std::string key = assignment.substr(0, eq);
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object() || !node->contains(part)) {
      bad.push_back("unknown key '" + key + "'");
      return;
    }
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (node->is_object()) {
    bad.push_back("'" + key + "' is a section, not a value");
    return;
  }
  *node = parse_set_value(assignment.substr(eq + 1));
}

template <class T>
void read_number(const json& j, const char* key, T& dst, std::vector<std::string>& bad) {
  if constexpr (std::is_integral_v<T>) {
    if (j.is_number_integer() || j.is_number_unsigned()) {
      dst = j.get<T>();
      return;
    }
    if (j.is_number_float() && std::floor(j.get<double>()) == j.get<double>()) {
      dst = static_cast<T>(j.get<double>());
      return;
    }
    bad.push_back(std::string("'") + key + "' must be an integer");
  } else {
    if (j.is_number()) {
      dst = j.get<T>();
      return;
    }
    bad.push_back(std::string("'") + key + "' must be a number");
  }
}

bool parse_bool(const std::string& text, bool& out) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "1" || t == "yes" || t == "on") return out = true, true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return out = false, true;
  return false;
}

bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

RunConfig resolve_config(const json& doc, const std::vector<std::string>& sets,
                         bool require_subcritical) {
  std::vector<std::string> bad;
  json merged = default_config_json();
  if (!doc.is_null()) {
    if (doc.is_object())
      merge_into(merged, doc, "", bad);
    else
      bad.push_back("configuration document must be a JSON object");
  }
  for (const auto& s : sets) apply_set(merged, s, bad);

  RunConfig rc;
  read_number(merged["problem"]["dim"], "problem.dim", rc.dim, bad);
  read_number(merged["problem"]["order"], "problem.order", rc.order, bad);
  read_number(merged["problem"]["power"], "problem.power", rc.power, bad);
  read_number(merged["grid"]["points"], "grid.points", rc.points, bad);
  read_number(merged["grid"]["half_width"], "grid.half_width", rc.half_width, bad);
  const auto& sv = merged["solver"];
  read_number(sv["step_size"], "solver.step_size", rc.step_size, bad);
  read_number(sv["symmetrize_every"], "solver.symmetrize_every", rc.symmetrize_every, bad);
  read_number(sv["max_iters"], "solver.max_iters", rc.max_iters, bad);
  read_number(sv["tol_grad"], "solver.tol_grad", rc.tol_grad, bad);
  if (sv["sigma_clip"].is_array() && sv["sigma_clip"].size() == 2) {
    read_number(sv["sigma_clip"][0], "solver.sigma_clip[0]", rc.sigma_clip_low, bad);
    read_number(sv["sigma_clip"][1], "solver.sigma_clip[1]", rc.sigma_clip_high, bad);
  } else {
    bad.push_back("'solver.sigma_clip' must be a pair [low, high]");
  }
  if (!merged["barrier"]["zeta"].is_null()) {
    double z = 0.0;
    read_number(merged["barrier"]["zeta"], "barrier.zeta", z, bad);
    rc.zeta = z;
  }
  if (merged["output_dir"].is_string())
    rc.output_dir = merged["output_dir"].get<std::string>();
  else
    bad.push_back("'output_dir' must be a string");
  if (merged["format"].is_string()) {
    rc.format = merged["format"].get<std::string>();
    if (*rc.format != "json" && *rc.format != "csv")
      bad.push_back("'format' must be json or csv, got '" + *rc.format + "'");
  } else if (!merged["format"].is_null()) {
    bad.push_back("'format' must be json or csv");
  }
  if (merged["deterministic"].is_boolean())
    rc.deterministic = merged["deterministic"].get<bool>();
  else if (!(merged["deterministic"].is_string() &&
             parse_bool(merged["deterministic"].get<std::string>(), rc.deterministic)))
    bad.push_back("'deterministic' must be a boolean");
  read_number(merged["seed"], "seed", rc.seed, bad);

  if (rc.dim < 1 || rc.dim > 3) bad.push_back("problem.dim must be 1, 2 or 3");
  if (!(rc.order > 0.0 && rc.order < 1.0)) bad.push_back("problem.order must lie in (0, 1)");
  if (!(rc.power > 1.0)) bad.push_back("problem.power must be > 1");
  if (rc.points < 8 || !is_power_of_two(rc.points))
    bad.push_back("grid.points must be a power of two >= 8");
  if (!(rc.half_width > 0.0) || !std::isfinite(rc.half_width))
    bad.push_back("grid.half_width must be > 0");
  if (rc.zeta && !(*rc.zeta > 0.0)) bad.push_back("barrier.zeta must be > 0");
  else if (rc.zeta && rc.power > 1.0 && !(*rc.zeta > zeta_min(rc.power))) {
    std::ostringstream msg;
    msg << "barrier.zeta = " << *rc.zeta << " is not above zeta_min(p) = " << zeta_min(rc.power);
    bad.push_back(msg.str());
  }

  // Solver constraints only make sense once the problem itself is valid.
  if (bad.empty()) {
    auto v = rc.solver().violations();
    for (auto& msg : v) {
      if (!require_subcritical && msg.find("p_crit") != std::string::npos) continue;
      bad.push_back(std::move(msg));
    }
  }
  if (!bad.empty()) throw ConfigError(std::move(bad));
  return rc;
}

// ---------------------------------------------------------------------------
// report serialization

json to_json(const ConstraintScan& scan) {
  json rows = json::array();
  for (const auto& r : scan.rows) rows.push_back({{"R", r.radius}, {"V", r.V}});
  return {{"rows", rows},
          {"radius_star", scan.radius_star},
          {"sigma_scaling", scan.sigma_scaling},
          {"sigma_star", scan.sigma_star},
          {"V_normalized", scan.V_normalized},
          {"fit_c1", scan.fit_c1},
          {"fit_c2", scan.fit_c2},
          {"growth_certified", scan.growth_certified}};
}

json to_json(const MinimizerReport& r, bool with_iterates) {
  json j{{"T", r.T},
         {"V", r.V},
         {"theta", r.theta},
         {"theta_el", r.theta_el},
         {"theta_alt", r.theta_alt},
         {"lambda", r.lambda},
         {"iterations", r.iterations},
         {"grad_norm", r.grad_norm},
         {"converged", r.converged},
         {"stalled", r.stalled},
         {"symmetrizations", r.symmetrizations},
         {"a_priori", {{"constant", r.a_priori_constant}, {"holds", r.a_priori_holds}}},
         {"warnings", r.warnings}};
  if (with_iterates) {
    json its = json::array();
    for (const auto& it : r.iterates)
      its.push_back({{"iteration", it.iteration},
                     {"T", it.T},
                     {"V", it.V},
                     {"step", it.step},
                     {"grad_norm", it.grad_norm},
                     {"symmetrized", it.symmetrized},
                     {"l2_norm", it.l2_norm},
                     {"critical_norm", it.critical_norm},
                     {"l2_bound", it.l2_bound}});
    j["iterates"] = std::move(its);
  }
  return j;
}

json to_json(const SolutionCertificate& c, const CertificateThresholds& th) {
  json weak = json::array();
  for (const auto& w : c.weak_residuals)
    weak.push_back({{"width", w.bump.width},
                    {"center", w.bump.center},
                    {"value", w.value},
                    {"scale", w.scale},
                    {"relative", w.relative()}});
  const auto fails = c.failures(th);
  return {{"strong_residual", c.strong_residual},
          {"weak_residuals", weak},
          {"weak_residual_worst", c.worst_weak()},
          {"pohozaev_residual", c.pohozaev_residual},
          {"positivity_min", c.positivity_min},
          {"monotonicity_defect", c.monotonicity_defect},
          {"max_value", c.max_value},
          {"boundary_ratio", c.boundary_ratio},
          {"thresholds",
           {{"strong", th.strong},
            {"weak", th.weak},
            {"pohozaev", th.pohozaev},
            {"positivity", th.positivity},
            {"monotonicity", th.monotonicity}}},
          {"failures", fails},
          {"passed", fails.empty()}};
}

namespace {

json grid_json(const BoxGrid& g) {
  return {{"dim", g.dim()},
          {"points", g.points()},
          {"half_width", g.half_width()},
          {"spacing", g.spacing()}};
}

// Scalars and scalar arrays flattened to dotted keys; arrays of objects are
// left to dedicated tables.
void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, json>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    if (!j.empty() && j.front().is_object()) return;
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, j);
  }
}

std::string csv_cell(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_null()) return "nan";
  return v.dump();
}

std::string key_value_csv(const json& j) {
  std::vector<std::pair<std::string, json>> rows;
  flatten(j, "", rows);
  std::ostringstream os;
  os << "key,value\n";
  for (const auto& [k, v] : rows) os << k << "," << csv_cell(v) << "\n";
  return os.str();
}

std::string table_csv(const json& rows, const std::vector<std::string>& columns) {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << csv_cell(r.value(columns[i], json()));
    os << "\n";
  }
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::io, "cannot open " + path.string() + " for writing");
  f << text;
  if (!f) fail(ErrorCode::io, "failed writing " + path.string());
}

fs::path prepare_out(const RunConfig& rc) {
  fs::path dir(rc.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::io, "cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::divergence:
    case ErrorCode::constraint_escape:
    case ErrorCode::petviashvili_failed:
      return kExitDivergence;
    default:
      return kExitConfig;
  }
}

void report_error(std::ostream& err, std::string_view code, const std::string& message,
                  const std::vector<std::string>& violations = {}) {
  json e{{"code", code}, {"message", message}};
  if (!violations.empty()) e["violations"] = violations;
  err << json{{"error", e}}.dump() << "\n";
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_solve(const RunConfig& rc, std::ostream& out) {
  const auto cfg = rc.solver();
  const auto prm = cfg.params;
  const double zeta = rc.zeta.value_or(default_zeta(prm.power()));
  const auto dir = prepare_out(rc);

  auto scan = barrier_constraint_scan(prm.power(), zeta, cfg.grid);
  const auto seed = make_barrier(scan.normalized_spec(zeta), cfg.grid);
  auto rep = minimize_constrained(seed, cfg);

  json doc;
  doc["command"] = "solve";
  doc["config"] = rc.to_json();
  doc["barrier"] = to_json(scan);
  doc["barrier"]["zeta"] = zeta;
  doc["minimizer"] = to_json(rep);

  std::optional<Multiplier> mult;
  if (prm.dim() > 2.0 * prm.order()) {
    mult = lagrange_multiplier(rep, prm);
    doc["multiplier"] = {{"theta", mult->theta},
                         {"theta_alt", mult->theta_alt},
                         {"theta_el", rep.theta_el},
                         {"relative_gap", mult->relative_gap},
                         {"consistent", mult->consistent}};
  } else {
    doc["multiplier"] = nullptr;
  }
  if (!(rep.theta_el > 0.0))
    fail(ErrorCode::divergence, "Euler-Lagrange multiplier is not positive; cannot rescale");

  const auto v = rescale_to_solution(rep.solution, rep.theta_el, prm);
  const auto field_path = dir / "solution.fsf";
  write_field(v, field_path, prm.order());
  const auto cert = certify(v, prm);
  doc["solution"] = grid_json(v.grid);
  doc["solution"]["file"] = "solution.fsf";
  doc["certificate"] = to_json(cert);

  int code = kExitOk;
  std::string status = "ok";
  if (!rep.converged) {
    code = kExitDivergence;
    status = "not_converged";
  } else if (!cert.passes() || (mult && !mult->consistent)) {
    code = kExitCertificate;
    status = "certificate_failure";
  }
  doc["status"] = status;
  doc["exit_code"] = code;

  const std::string fmt = rc.format.value_or("json");
  if (fmt == "csv") {
    json flat = doc;
    flat["minimizer"].erase("iterates");
    write_text(dir / "report.csv", key_value_csv(flat));
    write_text(dir / "iterates.csv",
               table_csv(doc["minimizer"]["iterates"],
                         {"iteration", "T", "V", "step", "grad_norm", "symmetrized", "l2_norm",
                          "critical_norm", "l2_bound"}));
    write_text(dir / "weak_residuals.csv",
               table_csv(doc["certificate"]["weak_residuals"],
                         {"width", "center", "value", "scale", "relative"}));
  } else {
    write_text(dir / "report.json", dump(doc));
  }
  out << json{{"status", status},
              {"exit_code", code},
              {"output_dir", rc.output_dir},
              {"T", rep.T},
              {"iterations", rep.iterations},
              {"strong_residual", cert.strong_residual},
              {"pohozaev_residual", cert.pohozaev_residual}}
             .dump()
      << "\n";
  return code;
}

int cmd_verify(const RunConfig& rc, const std::string& field, std::ostream& out) {
  const auto file = read_field_file(field);
  const double order = file.order.value_or(rc.order);
  const ProblemParams prm(file.field.grid.dim(), order, rc.power);
  const auto cert = certify(file.field, prm);

  json doc;
  doc["command"] = "verify";
  doc["field"] = grid_json(file.field.grid);
  doc["field"]["order"] = order;
  doc["power"] = rc.power;
  doc["certificate"] = to_json(cert);
  const int code = cert.passes() ? kExitOk : kExitCertificate;
  doc["exit_code"] = code;

  const auto dir = prepare_out(rc);
  const std::string fmt = rc.format.value_or("json");
  const std::string text = fmt == "csv" ? key_value_csv(doc) : dump(doc);
  write_text(dir / (fmt == "csv" ? "verify.csv" : "verify.json"), text);
  out << text;
  return code;
}

int cmd_barrier(const RunConfig& rc, std::ostream& out) {
  const auto grid = rc.grid();
  const double p = rc.power;
  const double zeta = rc.zeta.value_or(default_zeta(p));
  const auto radii = default_barrier_radii(grid);
  if (radii.empty())
    fail(ErrorCode::support_outside_box, "box too small for the smallest plateau radius R = 1");
  const auto norms = barrier_seminorm_scan(zeta, radii, grid, rc.order);
  const auto scan = barrier_constraint_scan(p, zeta, grid, radii);

  json rows = json::array();
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const double V = i < scan.rows.size() ? scan.rows[i].V : std::nan("");
    rows.push_back({{"R", norms[i].radius},
                    {"seminorm2", norms[i].seminorm2},
                    {"l2norm2", norms[i].l2norm2},
                    {"V", V},
                    {"sigma_star", V > 0.0 ? json(std::pow(V, -1.0 / rc.dim)) : json(nullptr)}});
  }
  const auto dir = prepare_out(rc);
  const std::string csv = table_csv(rows, {"R", "seminorm2", "l2norm2", "V", "sigma_star"});
  write_text(dir / "barrier.csv", csv);
  json doc{{"command", "barrier"},
           {"config", rc.to_json()},
           {"zeta", zeta},
           {"rows", rows},
           {"constraint", to_json(scan)}};
  write_text(dir / "barrier.json", dump(doc));
  out << (rc.format.value_or("csv") == "json" ? dump(doc) : csv);
  return kExitOk;
}

int cmd_inspect(const RunConfig& rc, const std::string& field, std::ostream& out) {
  const auto file = read_field_file(field);
  const auto& f = file.field;
  const auto& g = f.grid;
  const double order = file.order.value_or(rc.order);

  json doc;
  doc["command"] = "inspect";
  doc["grid"] = grid_json(g);
  doc["grid"]["samples"] = g.size();
  doc["order"] = file.order ? json(*file.order) : json(nullptr);
  doc["norms"] = {{"l1", lp_norm(f, 1.0)},
                  {"l2", lp_norm(f, 2.0)},
                  {"max", f.max_value()},
                  {"min", f.min_value()},
                  {"max_abs", f.max_abs()},
                  {"integral", integrate(f)},
                  {"boundary_ratio", boundary_ratio(f)}};
  doc["seminorm2_spectral"] = seminorm_spectral_squared(f, order);
  if (g.size() <= kDirectSeminormMaxPoints) {
    const auto mode = rc.deterministic ? Reduction::deterministic : Reduction::fast;
    doc["seminorm2_direct"] = seminorm_direct_squared(f, order, mode);
    doc["equivalence_ratio"] = equivalence_constant(g.dim(), order).ratio();
  }
  doc["V"] = constraint_V(f, rc.power);
  doc["power"] = rc.power;

  const auto prof = shell_profile(f);
  json rows = json::array();
  for (std::size_t i = 0; i < prof.radii.size(); ++i)
    rows.push_back({{"radius", prof.radii[i]}, {"value", prof.values[i]}, {"count", prof.counts[i]}});
  doc["profile"] = rows;
  doc["monotonicity_defect"] = prof.monotonicity_defect();

  const auto dir = prepare_out(rc);
  const std::string csv = table_csv(rows, {"radius", "value", "count"});
  write_text(dir / "profile.csv", csv);
  if (rc.format.value_or("json") == "csv") {
    json flat = doc;
    flat.erase("profile");
    out << key_value_csv(flat) << "\n" << csv;
  } else {
    out << dump(doc);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ground states of (-Delta)^s u + u = |u|^{p-1} u on a periodic box", "fracground"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, format, deterministic;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--set", sets, "Override a config key, KEY=VALUE (repeatable)")->take_all();
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--format", format, "Report format: json or csv");
  app.add_option("--deterministic", deterministic, "Deterministic reductions (true/false)");
  app.add_option("--seed", seed, "RNG seed recorded with the run");

  auto* solve = app.add_subcommand("solve", "Minimize, rescale and certify a ground state");
  auto* verify = app.add_subcommand("verify", "Recompute the certificate of a stored field");
  auto* barrier = app.add_subcommand("barrier", "Barrier seminorm and constraint scans as CSV");
  auto* inspect = app.add_subcommand("inspect", "Metadata, norms and radial profile of a field");
  std::string field;
  verify->add_option("field", field, "FSF1 file")->required();
  inspect->add_option("field", field, "FSF1 file")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what());
    return kExitConfig;
  }

  try {
    json doc;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) fail(ErrorCode::io, "cannot read config file " + config_path);
      try {
        doc = json::parse(f);
      } catch (const json::parse_error& e) {
        throw ConfigError({std::string("malformed JSON in ") + config_path + ": " + e.what()});
      }
    }
    auto all_sets = sets;
    if (!out_dir.empty()) all_sets.push_back("output_dir=" + json(out_dir).dump());
    if (!format.empty()) all_sets.push_back("format=" + json(format).dump());
    if (!deterministic.empty()) {
      bool b = true;
      if (!parse_bool(deterministic, b))
        throw ConfigError({"--deterministic expects a boolean, got '" + deterministic + "'"});
      all_sets.push_back(std::string("deterministic=") + (b ? "true" : "false"));
    }
    if (seed) all_sets.push_back("seed=" + std::to_string(*seed));

    const bool is_solve = solve->parsed();
    const RunConfig rc = resolve_config(doc, all_sets, is_solve);
    if (is_solve) return cmd_solve(rc, out);
    if (verify->parsed()) return cmd_verify(rc, field, out);
    if (barrier->parsed()) return cmd_barrier(rc, out);
    return cmd_inspect(rc, field, out);
  } catch (const ConfigError& e) {
    report_error(err, code_name(ErrorCode::config), e.what(), e.violations());
    return kExitConfig;
  } catch (const Error& e) {
    report_error(err, code_name(e.code()), e.what());
    return exit_for(e.code());
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return kExitConfig;
  }
}

}  // namespace fracground
