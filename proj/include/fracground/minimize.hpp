#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracground/barrier.hpp"
#include "fracground/field.hpp"

namespace fracground {

struct SolverConfig {
  ProblemParams params;
  BoxGrid grid;
  double step_size = 0.1;
  int symmetrize_every = 10;
  int max_iters = 5000;
  /// Stop when |d| / |2 (-Delta)^s u| < tol_grad, d the constrained gradient.
  double tol_grad = 1e-7;
  double sigma_clip_low = 0.9;
  double sigma_clip_high = 1.1;
  std::uint64_t seed = 0;

  SolverConfig(ProblemParams p, BoxGrid g) : params(p), grid(g) {}

  /// Human-readable violations; empty when the config is usable.
  std::vector<std::string> violations() const;
  void validate() const;
};

struct IterateRecord {
  int iteration;
  double T;
  double V;
  double step;
  double grad_norm;
  bool symmetrized;
  double l2_norm;
  double critical_norm;   // ||u||_{2N/(N-2s)}, NaN when N <= 2s
  double l2_bound;        // a-priori bound on ||u||_2 from the critical norm
};

struct MinimizerReport {
  ScalarField solution;
  double T = 0.0;
  double V = 0.0;
  /// Dilation-stationarity multiplier (N - 2s) T / N; NaN when N <= 2s.
  double theta = 0.0;
  /// Discrete Euler-Lagrange multiplier <2(-Delta)^s u, g(u)> / <g(u), g(u)>.
  double theta_el = 0.0;
  /// Pairing estimate 2T / int g(u) u.
  double theta_alt = 0.0;
  /// (theta_el / 2)^{1/(2s)}, the factor used by rescale_to_solution.
  double lambda = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
  /// Backtracking could no longer lower T above round-off.
  bool stalled = false;
  int symmetrizations = 0;
  /// sup_z (G1(z) - G2(z)/2) / |z|^{2N/(N-2s)}, the constant in the a-priori bound.
  double a_priori_constant = 0.0;
  bool a_priori_holds = true;
  std::vector<IterateRecord> iterates = {};
  std::vector<std::string> warnings = {};
};

/// Constrained descent of T = [u]^2 on {V(u) = 1}: tangent-projected gradient
/// steps with backtracking, periodic decreasing rearrangement, and dilation
/// back onto the constraint after every step. Throws supercritical,
/// constraint_escape (50 consecutive accepted steps whose projection needed a
/// dilation outside the clip) or divergence (20 consecutive halvings without an
/// acceptable step).
MinimizerReport minimize_constrained(const ScalarField& init, const SolverConfig& cfg);

struct Multiplier {
  double theta;
  double theta_alt;
  double relative_gap;  // |theta - theta_alt| / theta
  bool consistent;      // relative_gap < 5%
};

inline constexpr double kMultiplierAgreement = 0.05;

/// Throws degenerate_multiplier when N <= 2s.
Multiplier lagrange_multiplier(const MinimizerReport& report, const ProblemParams& params);

/// v(x) = u(x / lambda), lambda = (theta/2)^{1/(2s)}. The samples are kept and
/// the box is stretched to lambda L, which is exact on the grid.
ScalarField rescale_to_solution(const ScalarField& u, double theta, const ProblemParams& params);

struct PetviashviliResult {
  ScalarField field;
  int iterations = 0;
  double last_change = 0.0;
  double gamma = 0.0;
};

inline constexpr double kPetviashviliTolerance = 1e-10;

/// Stabilized fixed point u <- gamma^{p/(p-1)} K(|u|^{p-1} u) with
/// K = ((-Delta)^s + 1)^{-1}. Throws petviashvili_failed on gamma <= 0 or no
/// convergence.
PetviashviliResult petviashvili_solve(const ScalarField& init, const ProblemParams& params,
                                      int max_iters = 2000);

/// |(-Delta)^s v + v - |v|^{p-1} v|_2 / |v|_2, or 0 for the zero field.
double strong_residual(const ScalarField& v, const ProblemParams& params);

struct TestBump {
  double width;
  double center;  // offset along the first axis
};

struct WeakResidual {
  TestBump bump;
  double value;  // |B(v, phi) + <v, phi> - <|v|^{p-1} v, phi>|
  double scale;  // ||phi||_{H^s} ||v||_{H^s}
  double relative() const { return scale > 0.0 ? value / scale : value; }
};

/// Gaussians of widths L/16, L/8, L/4 centered at c e_1, c in {0, 1, -1, 2, 3} L/8.
std::vector<TestBump> default_test_bumps(const BoxGrid& grid);
ScalarField bump_field(const TestBump& bump, const BoxGrid& grid);

std::vector<WeakResidual> weak_residual(const ScalarField& v, const ProblemParams& params,
                                        const std::vector<TestBump>& bumps);

inline constexpr double kPohozaevFloor = 1e-300;

/// |(N-2s)/2 T(v) - N V(v)| / max(T(v), |N V(v)|, floor).
double pohozaev_residual(const ScalarField& v, const ProblemParams& params);

struct CertificateThresholds {
  double strong = 1e-2;
  double weak = 1e-6;
  double pohozaev = 1e-2;
  double positivity = 1e-8;    // min v >= -positivity * max v
  double monotonicity = 1e-6;  // profile increase <= monotonicity * max v
};

struct SolutionCertificate {
  double strong_residual = 0.0;
  std::vector<WeakResidual> weak_residuals;
  double pohozaev_residual = 0.0;
  double positivity_min = 0.0;
  double monotonicity_defect = 0.0;
  double max_value = 0.0;
  double boundary_ratio = 0.0;

  double worst_weak() const;
  /// Names of the thresholds that fail; empty when the certificate passes.
  std::vector<std::string> failures(const CertificateThresholds& th = {}) const;
  bool passes(const CertificateThresholds& th = {}) const { return failures(th).empty(); }
};

SolutionCertificate certify(const ScalarField& v, const ProblemParams& params);

/// Circular shift moving the largest sample to the origin index.
ScalarField recenter(const ScalarField& f);

/// |a - b|_2 / |b|_2 after recentering both; grids must match.
double relative_l2_distance(const ScalarField& a, const ScalarField& b);

struct ProbeRow {
  double sigma;
  double amplitude;
  double T;
  double V;
};

/// For each sigma, the amplitude a with V(a f) = sigma^{-N} is found on the
/// increasing branch and a f is dilated by sigma (box stretched to sigma L),
/// so the dilate is back on V = 1. T is measured on the dilate. Allowed for
/// any p > 1. Throws invalid_argument for sigma <= 0.
std::vector<ProbeRow> dilation_probe(const ProblemParams& params, const ScalarField& feasible,
                                     const std::vector<double>& sigmas);

/// 1, 10^{-1/2}, ..., 10^{-6}: deep enough to see the slow supercritical decay.
std::vector<double> default_probe_sigmas_collapse();
/// Geometric from 1e-2 to 1e2.
std::vector<double> default_probe_sigmas_bracket();

/// Barrier seed, constrained minimization, rescale and certificate in one go.
struct GroundStateRun {
  ConstraintScan barrier;
  double zeta = 0.0;
  MinimizerReport minimizer;
  std::optional<Multiplier> multiplier;
  ScalarField solution;
  SolutionCertificate certificate;
};

GroundStateRun solve_ground_state(const SolverConfig& cfg, std::optional<double> zeta = {});

}  // namespace fracground
