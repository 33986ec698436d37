#include "fracground/minimize.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fracground/dilate.hpp"
#include "fracground/error.hpp"
#include "fracground/frac_ops.hpp"
#include "fracground/rearrange.hpp"

namespace fracground {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxHalvings = 20;
constexpr int kMaxClippedRun = 50;
constexpr double kProjectionTolerance = 1e-13;
constexpr double kProjectionAccept = 1e-10;

double dot(const ScalarField& a, const ScalarField& b) {
  double acc = 0.0;
  for (std::size_t n = 0; n < a.values.size(); ++n) acc += a.values[n] * b.values[n];
  return acc * a.grid.cell_volume();
}

double l2(const ScalarField& a) { return std::sqrt(dot(a, a)); }

ScalarField map_values(const ScalarField& f, auto&& fn) {
  std::vector<double> out(f.values.size());
  std::transform(f.values.begin(), f.values.end(), out.begin(), fn);
  return ScalarField(f.grid, std::move(out));
}

ScalarField axpy(double a, const ScalarField& x, const ScalarField& y) {
  std::vector<double> out(y.values);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] += a * x.values[n];
  return ScalarField(y.grid, std::move(out));
}

ScalarField scale(double a, const ScalarField& x) {
  return map_values(x, [a](double t) { return a * t; });
}

// sup_{t>0} (t^{p+1}/(p+1) - t^2/4) / t^q with q the critical Sobolev exponent.
double a_priori_constant(double p, double q) {
  const double a = p + 1.0 - q;
  const double b = 2.0 - q;
  if (!(a < 0.0)) return kNaN;
  const double t = std::pow(b * (p + 1.0) / (4.0 * a), 1.0 / (a - b));
  return std::pow(t, a) / (p + 1.0) - 0.25 * std::pow(t, b);
}

// T(a) - T(u) = <a - u, (-Delta)^s (a + u)>. Unlike the difference of two
// separately summed seminorms, the rounding error here scales with |a - u|,
// so descent stays visible once T itself is flat to machine precision.
struct TrialEnergy {
  double delta;
  ScalarField lap;
};

TrialEnergy energy_change(const ScalarField& a, const ScalarField& u, const ScalarField& lap_u,
                          double s) {
  auto lap_a = frac_laplacian(a, s);
  double acc = 0.0;
  for (std::size_t n = 0; n < a.values.size(); ++n)
    acc += (a.values[n] - u.values[n]) * (lap_a.values[n] + lap_u.values[n]);
  return {acc * a.grid.cell_volume(), std::move(lap_a)};
}

class ConstraintProjector {
 public:
  ConstraintProjector(const SolverConfig& cfg, std::vector<std::string>& warnings)
      : cfg_(cfg), warnings_(warnings) {}

  // Dilates w until V(w) = 1. Returns nullopt when the trial is unusable
  // (V <= 0 or no convergence); the caller then shortens the step.
  std::optional<ScalarField> operator()(ScalarField w) {
    clipped_ = false;
    const double p = cfg_.params.power();
    const int dim = cfg_.params.dim();
    for (int k = 0; k < 60; ++k) {
      const double V = constraint_V(w, p);
      if (std::abs(V - 1.0) < kProjectionTolerance) return w;
      if (!(V > 0.0)) return std::nullopt;
      const double wanted = std::pow(V, -1.0 / dim);
      const double sigma = std::clamp(wanted, cfg_.sigma_clip_low, cfg_.sigma_clip_high);
      if (sigma != wanted) {
        clipped_ = true;
        last_wanted_ = wanted;
      }
      std::vector<std::string> local;
      w = resample_dilate(w, sigma, &local);
      if (!local.empty() && !warned_) {
        warnings_.push_back(local.front());
        warned_ = true;
      }
    }
    if (std::abs(constraint_V(w, p) - 1.0) < kProjectionAccept) return w;
    return std::nullopt;
  }

  // Counts accepted steps whose projection needed a clipped dilation; throws
  // constraint_escape after kMaxClippedRun in a row.
  void note_accepted() {
    clipped_run_ = clipped_ ? clipped_run_ + 1 : 0;
    if (clipped_run_ < kMaxClippedRun) return;
    std::ostringstream msg;
    msg << "constraint projection needed a dilation outside [" << cfg_.sigma_clip_low << ", "
        << cfg_.sigma_clip_high << "] on " << kMaxClippedRun << " consecutive steps (last sigma "
        << last_wanted_ << ")";
    fail(ErrorCode::constraint_escape, msg.str());
  }

 private:
  const SolverConfig& cfg_;
  std::vector<std::string>& warnings_;
  int clipped_run_ = 0;
  bool warned_ = false;
  bool clipped_ = false;
  double last_wanted_ = 1.0;
};

}  // namespace

std::vector<std::string> SolverConfig::violations() const {
  std::vector<std::string> out;
  if (!(step_size > 0.0)) out.push_back("solver.step_size must be > 0");
  if (!(tol_grad > 0.0)) out.push_back("solver.tol_grad must be > 0");
  if (max_iters < 1) out.push_back("solver.max_iters must be >= 1");
  if (symmetrize_every < 0) out.push_back("solver.symmetrize_every must be >= 0");
  if (!(sigma_clip_low > 0.0 && sigma_clip_low < 1.0 && sigma_clip_high > 1.0 &&
        sigma_clip_high <= 2.0 && sigma_clip_low >= 0.5))
    out.push_back("solver.sigma_clip must straddle 1 inside [0.5, 2]");
  if (grid.dim() != params.dim()) out.push_back("grid dimension differs from problem dimension");
  if (!params.subcritical()) {
    std::ostringstream msg;
    msg << "p = " << params.power() << " is not below p_crit = " << params.critical_power()
        << " for N = " << params.dim() << ", s = " << params.order()
        << "; no minimizer exists, use the dilation probe";
    out.push_back(msg.str());
  }
  return out;
}

void SolverConfig::validate() const {
  if (!params.subcritical()) fail(ErrorCode::supercritical, violations().back());
  const auto v = violations();
  if (v.empty()) return;
  std::ostringstream msg;
  for (std::size_t i = 0; i < v.size(); ++i) msg << (i ? "; " : "") << v[i];
  fail(ErrorCode::invalid_argument, msg.str());
}

MinimizerReport minimize_constrained(const ScalarField& init, const SolverConfig& cfg) {
  cfg.validate();
  require(init.grid == cfg.grid, ErrorCode::invalid_argument,
          "initial field grid differs from the solver grid");
  const auto& prm = cfg.params;
  const double s = prm.order();
  const double p = prm.power();
  const int dim = prm.dim();
  const Nonlinearity nl{p};

  const double V0 = constraint_V(init, p);
  if (std::abs(V0 - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "initial field has V = " << V0 << ", expected 1 within 1e-6";
    fail(ErrorCode::invalid_argument, msg.str());
  }

  MinimizerReport rep{init};
  const bool has_critical = dim > 2.0 * s;
  const double q = prm.sobolev_exponent();
  rep.a_priori_constant = has_critical ? a_priori_constant(p, q) : kNaN;

  ConstraintProjector project(cfg, rep.warnings);
  ScalarField u = init;
  double Tu = seminorm_spectral_squared(u, s);
  double tau = cfg.step_size;

  auto record = [&](int it, double step, double gn, bool sym) {
    IterateRecord r{it, Tu, constraint_V(u, p), step, gn, sym, l2(u), kNaN, kNaN};
    if (has_critical && std::isfinite(rep.a_priori_constant)) {
      r.critical_norm = lp_norm(u, q);
      const double b2 = 4.0 * (rep.a_priori_constant * std::pow(r.critical_norm, q) - 1.0);
      r.l2_bound = std::sqrt(std::max(b2, 0.0));
      const double slack = 1e-9 * r.l2_norm * r.l2_norm + 4.0 * std::abs(r.V - 1.0);
      if (r.l2_norm * r.l2_norm > b2 + slack) rep.a_priori_holds = false;
    }
    rep.iterates.push_back(r);
  };

  ScalarField lap_u = frac_laplacian(u, s);
  ScalarField grad_T = scale(2.0, lap_u);
  ScalarField grad_V = map_values(u, [&](double t) { return nl.g(t); });
  double theta_el = 0.0;
  ScalarField dir = u;
  double gn = 0.0;
  auto refresh = [&] {
    grad_T = scale(2.0, lap_u);
    grad_V = map_values(u, [&](double t) { return nl.g(t); });
    const double gv2 = dot(grad_V, grad_V);
    theta_el = dot(grad_T, grad_V) / gv2;
    dir = axpy(-theta_el, grad_V, grad_T);
    // Near the optimum |dir| is ~1e-7 |grad_T|, the size of the rounding left
    // along grad_V by the first pass; a second pass keeps -dir a descent direction.
    const double again = dot(dir, grad_V) / gv2;
    dir = axpy(-again, grad_V, dir);
    theta_el += again;
    gn = l2(dir) / l2(grad_T);
  };
  refresh();
  record(0, 0.0, gn, false);

  for (int it = 1; it <= cfg.max_iters; ++it) {
    if (gn < cfg.tol_grad) break;
    bool symmetrized = false;
    if (cfg.symmetrize_every > 0 && it % cfg.symmetrize_every == 0) {
      auto ur = rearrange_decreasing(u);
      auto change = energy_change(ur, u, lap_u, s);
      if (change.delta <= 0.0) {
        u = std::move(ur);
        lap_u = std::move(change.lap);
        Tu += change.delta;
        symmetrized = true;
        ++rep.symmetrizations;
        refresh();
      }
    }

    int halvings = 0;
    double best_rise = std::numeric_limits<double>::infinity();
    while (true) {
      auto trial = project(axpy(-tau, dir, u));
      if (trial) {
        auto change = energy_change(*trial, u, lap_u, s);
        if (change.delta <= 0.0) {
          project.note_accepted();
          u = std::move(*trial);
          lap_u = std::move(change.lap);
          Tu += change.delta;
          break;
        }
        best_rise = std::min(best_rise, change.delta / Tu);
      }
      tau *= 0.5;
      if (++halvings >= kMaxHalvings) {
        if (best_rise < 1e-13) {
          rep.stalled = true;
          break;
        }
        std::ostringstream msg;
        msg << "no step lowered T after " << kMaxHalvings << " halvings at iteration " << it
            << " (T = " << Tu << ", smallest relative rise " << best_rise << ")";
        fail(ErrorCode::divergence, msg.str());
      }
    }
    if (rep.stalled) break;
    const double step = tau;
    tau *= 1.2;
    refresh();
    record(it, step, gn, symmetrized);
  }
  rep.converged = gn < cfg.tol_grad;

  rep.iterations = static_cast<int>(rep.iterates.size()) - 1;
  rep.grad_norm = gn;
  // The log carries T accumulated from exact differences; report a fresh sum.
  rep.T = Tu = seminorm_spectral_squared(u, s);
  rep.V = constraint_V(u, p);
  rep.theta = has_critical ? (dim - 2.0 * s) * Tu / dim : kNaN;
  rep.theta_el = theta_el;
  const double pairing = dot(grad_V, u);
  rep.theta_alt = 2.0 * Tu / pairing;
  rep.lambda = theta_el > 0.0 ? std::pow(0.5 * theta_el, 1.0 / (2.0 * s)) : kNaN;
  rep.solution = std::move(u);
  return rep;
}

Multiplier lagrange_multiplier(const MinimizerReport& report, const ProblemParams& params) {
  const int dim = params.dim();
  const double s = params.order();
  if (!(dim > 2.0 * s)) {
    std::ostringstream msg;
    msg << "multiplier (N - 2s) T / N degenerates for N = " << dim << ", s = " << s;
    fail(ErrorCode::degenerate_multiplier, msg.str());
  }
  Multiplier m{};
  m.theta = (dim - 2.0 * s) * report.T / dim;
  m.theta_alt = report.theta_alt;
  m.relative_gap = std::abs(m.theta - m.theta_alt) / m.theta;
  m.consistent = m.relative_gap < kMultiplierAgreement;
  return m;
}

ScalarField rescale_to_solution(const ScalarField& u, double theta, const ProblemParams& params) {
  require(theta > 0.0 && std::isfinite(theta), ErrorCode::invalid_argument,
          "rescale needs a positive multiplier");
  const double lambda = std::pow(0.5 * theta, 1.0 / (2.0 * params.order()));
  if (lambda == 1.0) return u;
  return ScalarField(u.grid.scaled(lambda), u.values);
}

PetviashviliResult petviashvili_solve(const ScalarField& init, const ProblemParams& params,
                                      int max_iters) {
  const double s = params.order();
  const double p = params.power();
  const double peak = init.max_abs();
  require(peak > 0.0, ErrorCode::invalid_argument, "Petviashvili needs a nonzero initial field");
  require(init.min_value() >= -1e-8 * peak, ErrorCode::invalid_argument,
          "Petviashvili needs a nonnegative initial field");

  const Nonlinearity nl{p};
  const auto xi2 = init.grid.squared_frequencies();
  auto symbol = [&](double k2) { return std::pow(k2, s); };

  PetviashviliResult res{init};
  ScalarField u = init;
  for (int it = 1; it <= max_iters; ++it) {
    const ScalarField Nu = map_values(u, [&](double t) { return nl.g1(t); });
    const ScalarField Au = axpy(1.0, u, frac_laplacian(u, s));
    const double num = dot(u, Au);
    const double den = dot(u, Nu);
    if (!(den > 0.0) || !(num > 0.0)) {
      std::ostringstream msg;
      msg << "stabilizing factor is not positive at iteration " << it;
      fail(ErrorCode::petviashvili_failed, msg.str());
    }
    const double gamma = num / den;
    auto next = apply_symbol(Nu, [&](double k2) { return 1.0 / (symbol(k2) + 1.0); });
    const double c = std::pow(gamma, p / (p - 1.0));
    for (double& x : next.values) x *= c;
    const double change = l2(axpy(-1.0, u, next)) / l2(next);
    u = std::move(next);
    res.iterations = it;
    res.last_change = change;
    res.gamma = gamma;
    if (change < kPetviashviliTolerance) {
      res.field = std::move(u);
      return res;
    }
  }
  std::ostringstream msg;
  msg << "no convergence after " << max_iters << " iterations (last relative change "
      << res.last_change << ")";
  fail(ErrorCode::petviashvili_failed, msg.str());
}

double strong_residual(const ScalarField& v, const ProblemParams& params) {
  const Nonlinearity nl{params.power()};
  auto r = frac_laplacian(v, params.order());
  for (std::size_t n = 0; n < r.values.size(); ++n) r.values[n] -= nl.g(v.values[n]);
  const double norm = l2(v);
  const double abs = l2(r);
  return norm > 0.0 ? abs / norm : abs;
}

std::vector<TestBump> default_test_bumps(const BoxGrid& grid) {
  const double L = grid.half_width();
  std::vector<TestBump> out;
  for (double w : {L / 16.0, L / 8.0, L / 4.0})
    for (double c : {0.0, 1.0, -1.0, 2.0, 3.0}) out.push_back({w, c * L / 8.0});
  return out;
}

ScalarField bump_field(const TestBump& bump, const BoxGrid& grid) {
  const double inv = 1.0 / (2.0 * bump.width * bump.width);
  return ScalarField::sample(grid, [&](std::span<const double> x) {
    double r2 = (x[0] - bump.center) * (x[0] - bump.center);
    for (std::size_t d = 1; d < x.size(); ++d) r2 += x[d] * x[d];
    return std::exp(-r2 * inv);
  });
}

std::vector<WeakResidual> weak_residual(const ScalarField& v, const ProblemParams& params,
                                        const std::vector<TestBump>& bumps) {
  const double s = params.order();
  const Nonlinearity nl{params.power()};
  // B(v, phi) = <(-Delta)^s v, phi> on the grid by Parseval.
  auto r = frac_laplacian(v, s);
  for (std::size_t n = 0; n < r.values.size(); ++n) r.values[n] -= nl.g(v.values[n]);
  const double v_hs = std::sqrt(seminorm_spectral_squared(v, s) + dot(v, v));

  std::vector<WeakResidual> out;
  out.reserve(bumps.size());
  for (const auto& b : bumps) {
    const auto phi = bump_field(b, v.grid);
    const double phi_hs = std::sqrt(seminorm_spectral_squared(phi, s) + dot(phi, phi));
    out.push_back({b, std::abs(dot(r, phi)), phi_hs * v_hs});
  }
  return out;
}

double pohozaev_residual(const ScalarField& v, const ProblemParams& params) {
  const int dim = params.dim();
  const double s = params.order();
  const double T = seminorm_spectral_squared(v, s);
  const double V = constraint_V(v, params.power());
  const double denom = std::max({T, std::abs(dim * V), kPohozaevFloor});
  return std::abs(0.5 * (dim - 2.0 * s) * T - dim * V) / denom;
}

double SolutionCertificate::worst_weak() const {
  double worst = 0.0;
  for (const auto& w : weak_residuals) worst = std::max(worst, w.relative());
  return worst;
}

std::vector<std::string> SolutionCertificate::failures(const CertificateThresholds& th) const {
  std::vector<std::string> out;
  if (!(strong_residual < th.strong)) out.push_back("strong_residual");
  if (!(worst_weak() < th.weak)) out.push_back("weak_residual");
  if (!(pohozaev_residual < th.pohozaev)) out.push_back("pohozaev_residual");
  if (!(positivity_min >= -th.positivity * max_value)) out.push_back("positivity");
  if (!(monotonicity_defect <= th.monotonicity * max_value)) out.push_back("monotonicity");
  return out;
}

SolutionCertificate certify(const ScalarField& v, const ProblemParams& params) {
  require(v.grid.dim() == params.dim(), ErrorCode::invalid_argument,
          "field dimension differs from problem dimension");
  SolutionCertificate c;
  c.strong_residual = strong_residual(v, params);
  c.weak_residuals = weak_residual(v, params, default_test_bumps(v.grid));
  c.pohozaev_residual = pohozaev_residual(v, params);
  c.positivity_min = v.min_value();
  c.max_value = v.max_value();
  c.monotonicity_defect = shell_profile(v).monotonicity_defect();
  c.boundary_ratio = boundary_ratio(v);
  return c;
}

ScalarField recenter(const ScalarField& f) {
  const auto& g = f.grid;
  const auto peak = static_cast<std::size_t>(
      std::max_element(f.values.begin(), f.values.end()) - f.values.begin());
  const auto at = g.unflatten(peak);
  const int M = g.points();
  std::array<int, 3> shift{};
  for (int d = 0; d < g.dim(); ++d) shift[d] = M / 2 - at[d];

  std::vector<double> out(g.size());
  std::array<int, 3> idx{};
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto src = g.unflatten(n);
    for (int d = 0; d < g.dim(); ++d) idx[d] = src[d] + shift[d];
    out[g.flatten(std::span<const int>(idx.data(), g.dim()))] = f.values[n];
  }
  return ScalarField(g, std::move(out));
}

double relative_l2_distance(const ScalarField& a, const ScalarField& b) {
  require(a.grid.dim() == b.grid.dim() && a.grid.points() == b.grid.points(),
          ErrorCode::invalid_argument, "fields live on different sample layouts");
  require(std::abs(a.grid.half_width() / b.grid.half_width() - 1.0) < 1e-9,
          ErrorCode::invalid_argument, "fields live on boxes of different size");
  const auto ra = recenter(a);
  const auto rb = recenter(b);
  ScalarField diff(rb.grid, ra.values);
  for (std::size_t n = 0; n < diff.values.size(); ++n) diff.values[n] -= rb.values[n];
  return l2(diff) / l2(rb);
}

std::vector<ProbeRow> dilation_probe(const ProblemParams& params, const ScalarField& feasible,
                                     const std::vector<double>& sigmas) {
  const int dim = params.dim();
  const double s = params.order();
  const double p = params.power();
  const double V0 = constraint_V(feasible, p);
  require(std::abs(V0 - 1.0) < 1e-6, ErrorCode::invalid_argument,
          "dilation probe needs a feasible field with V = 1");

  // V(a f) = a^{p+1} P - a^2 Q with P - Q = 1.
  const double P = integrate(map_values(feasible, [&](double t) {
    return std::pow(std::abs(t), p + 1.0) / (p + 1.0);
  }));
  const double Q = P - V0;
  const double a_zero = Q > 0.0 ? std::pow(Q / P, 1.0 / (p - 1.0)) : 0.0;

  std::vector<ProbeRow> rows;
  rows.reserve(sigmas.size());
  for (double sigma : sigmas) {
    require(sigma > 0.0 && std::isfinite(sigma), ErrorCode::invalid_argument,
            "dilation factors must be positive");
    const double target = std::pow(sigma, -dim);
    auto h = [&](double a) { return std::pow(a, p + 1.0) * P - a * a * Q - target; };
    double lo = 1.0, hi = 1.0;
    if (target >= V0) {
      while (h(hi) < 0.0) hi *= 2.0;
      lo = hi == 1.0 ? 1.0 : 0.5 * hi;
    } else {
      lo = a_zero;
    }
    double a = 1.0;
    if (std::abs(h(1.0)) > 0.0 && lo != hi) {
      std::uintmax_t iters = 200;
      const auto br = boost::math::tools::toms748_solve(
          h, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
      a = 0.5 * (br.first + br.second);
    }
    ScalarField dil(feasible.grid.scaled(sigma), feasible.values);
    for (double& x : dil.values) x *= a;
    rows.push_back({sigma, a, seminorm_spectral_squared(dil, s), constraint_V(dil, p)});
  }
  return rows;
}

std::vector<double> default_probe_sigmas_collapse() {
  std::vector<double> out;
  for (int k = 0; k <= 12; ++k) out.push_back(std::pow(10.0, -0.5 * k));
  return out;
}

std::vector<double> default_probe_sigmas_bracket() {
  std::vector<double> out;
  for (int k = -8; k <= 8; ++k) out.push_back(std::pow(10.0, 0.25 * k));
  return out;
}

GroundStateRun solve_ground_state(const SolverConfig& cfg, std::optional<double> zeta) {
  cfg.validate();
  const double z = zeta.value_or(default_zeta(cfg.params.power()));
  auto scan = barrier_constraint_scan(cfg.params.power(), z, cfg.grid);
  const auto seed = make_barrier(scan.normalized_spec(z), cfg.grid);
  auto report = minimize_constrained(seed, cfg);

  std::optional<Multiplier> mult;
  if (cfg.params.dim() > 2.0 * cfg.params.order())
    mult = lagrange_multiplier(report, cfg.params);
  require(report.theta_el > 0.0, ErrorCode::divergence,
          "Euler-Lagrange multiplier is not positive; cannot rescale");
  auto v = rescale_to_solution(report.solution, report.theta_el, cfg.params);
  auto cert = certify(v, cfg.params);
  return GroundStateRun{std::move(scan), z, std::move(report), mult, std::move(v), std::move(cert)};
}

}  // namespace fracground
