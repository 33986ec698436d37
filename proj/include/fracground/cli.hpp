#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracground/minimize.hpp"

namespace fracground {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitDivergence = 2,
  kExitCertificate = 3,
};

/// Fully resolved run configuration (defaults <- config file <- --set <- flags).
struct RunConfig {
  int dim = 2;
  double order = 0.5;
  double power = 2.0;
  int points = 128;
  double half_width = 4.0;
  double step_size = 0.1;
  int symmetrize_every = 10;
  int max_iters = 5000;
  double tol_grad = 1e-7;
  double sigma_clip_low = 0.9;
  double sigma_clip_high = 1.1;
  std::optional<double> zeta;
  std::string output_dir = "out";
  std::optional<std::string> format;
  bool deterministic = true;
  std::uint64_t seed = 0;

  ProblemParams problem() const { return {dim, order, power}; }
  BoxGrid grid() const { return make_grid(dim, points, half_width); }
  SolverConfig solver() const;
  nlohmann::json to_json() const;
};

/// The default document, also the schema: unknown keys are rejected.
nlohmann::json default_config_json();

/// Thrown with every violation found in one pass.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Merges `doc` and the dotted `key=value` overrides into the defaults and
/// validates the result. `require_subcritical` adds the p < p_crit check.
RunConfig resolve_config(const nlohmann::json& doc, const std::vector<std::string>& sets,
                         bool require_subcritical);

/// Entry point behind the executable; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Report builders, shared with the Python module.
nlohmann::json to_json(const ConstraintScan& scan);
nlohmann::json to_json(const MinimizerReport& report, bool with_iterates = true);
nlohmann::json to_json(const SolutionCertificate& cert,
                       const CertificateThresholds& th = CertificateThresholds{});

}  // namespace fracground
