#include <doctest.h>

#include <cmath>

#include "fracground/barrier.hpp"
#include "fracground/frac_ops.hpp"
#include "fracground/minimize.hpp"
#include "fracground/rearrange.hpp"
#include "support.hpp"

using namespace fracground;
using fgtest::code_of;

namespace {

// Small resolved problem shared by several cases: N=2, s=1/2, p=2 on [-3,3)^2.
const GroundStateRun& small_run() {
  static const GroundStateRun run = [] {
    SolverConfig cfg(ProblemParams(2, 0.5, 2.0), make_grid(2, 64, 3.0));
    return solve_ground_state(cfg);
  }();
  return run;
}

ScalarField normalized_barrier(const BoxGrid& g, double p, double radius) {
  const double zeta = default_zeta(p);
  const auto scan = barrier_constraint_scan(p, zeta, g, {radius});
  return make_barrier(scan.normalized_spec(zeta), g);
}

}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig cfg(ProblemParams(2, 0.5, 2.0), make_grid(2, 64, 3.0));
  CHECK(cfg.violations().empty());
  cfg.step_size = -1.0;
  cfg.sigma_clip_low = 1.2;
  CHECK(cfg.violations().size() == 2);
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::invalid_argument);
  SolverConfig super(ProblemParams(2, 0.5, 3.5), make_grid(2, 64, 3.0));
  CHECK(code_of([&] { super.validate(); }) == ErrorCode::supercritical);
  const auto g = make_grid(2, 64, 3.0);
  SolverConfig ok(ProblemParams(2, 0.5, 2.0), g);
  CHECK(code_of([&] { minimize_constrained(fgtest::gaussian(g), ok); }) == ErrorCode::invalid_argument);
}

TEST_CASE("multiplier from the dilation identity") {
  MinimizerReport rep{ScalarField::zeros(make_grid(2, 8, 1.0))};
  rep.T = 3.0;
  rep.theta_alt = 1.53;
  const auto m = lagrange_multiplier(rep, ProblemParams(2, 0.5, 2.0));
  CHECK(m.theta == doctest::Approx(1.5));
  CHECK(m.relative_gap == doctest::Approx(0.02));
  CHECK(m.consistent);
  rep.theta_alt = 1.8;
  CHECK_FALSE(lagrange_multiplier(rep, ProblemParams(2, 0.5, 2.0)).consistent);
  CHECK(code_of([&] { lagrange_multiplier(rep, ProblemParams(1, 0.5, 2.0)); }) == ErrorCode::degenerate_multiplier);
  CHECK(code_of([&] { lagrange_multiplier(rep, ProblemParams(1, 0.75, 2.0)); }) == ErrorCode::degenerate_multiplier);
}

TEST_CASE("rescale stretches the box by (theta/2)^{1/(2s)}") {
  const auto g = make_grid(2, 32, 2.0);
  const auto u = fgtest::gaussian(g);
  const ProblemParams prm(2, 0.5, 2.0);
  const auto same = rescale_to_solution(u, 2.0, prm);
  CHECK(same.grid == g);
  CHECK(same.values == u.values);
  const auto v = rescale_to_solution(u, 8.0, prm);
  CHECK(v.grid.half_width() == doctest::Approx(8.0));
  CHECK(v.values == u.values);
  // Both sides of the equation pick up lambda^{-2s} and lambda^0 consistently.
  CHECK(seminorm_spectral_squared(v, 0.5) == doctest::Approx(4.0 * seminorm_spectral_squared(u, 0.5)).epsilon(1e-12));
  CHECK(code_of([&] { rescale_to_solution(u, -1.0, prm); }) == ErrorCode::invalid_argument);
}

TEST_CASE("Petviashvili reproduces the Benjamin-Ono soliton 2/(1+x^2)") {
  const ProblemParams prm(1, 0.5, 2.0);
  const auto g = make_grid(1, 1024, 64.0);
  const auto res = petviashvili_solve(fgtest::gaussian(g, 1.0, 1.5), prm);
  const auto exact = ScalarField::sample(g, [](std::span<const double> x) { return 2.0 / (1.0 + x[0] * x[0]); });
  double worst = 0.0, diff2 = 0.0, ref2 = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double d = res.field.values[n] - exact.values[n];
    worst = std::max(worst, std::abs(d));
    diff2 += d * d;
    ref2 += exact.values[n] * exact.values[n];
  }
  // The algebraic tail is cut by the periodic box, so agreement is O(1/L^2).
  CHECK(worst < 3e-3);
  CHECK(std::sqrt(diff2 / ref2) < 5e-3);
  CHECK(res.last_change < kPetviashviliTolerance);
  CHECK(res.gamma == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(strong_residual(res.field, prm) < 1e-8);
  // N = 2s, so solutions have V = 0.
  CHECK(pohozaev_residual(res.field, prm) < 1e-2);
}

TEST_CASE("Petviashvili input checks") {
  const ProblemParams prm(2, 0.5, 2.0);
  const auto g = make_grid(2, 32, 4.0);
  CHECK(code_of([&] { petviashvili_solve(ScalarField::zeros(g), prm); }) == ErrorCode::invalid_argument);
  auto neg = fgtest::gaussian(g);
  for (double& v : neg.values) v = -v;
  CHECK(code_of([&] { petviashvili_solve(neg, prm); }) == ErrorCode::invalid_argument);
}

TEST_CASE("residuals of trivial and non-solution fields") {
  const ProblemParams prm(2, 0.5, 2.0);
  const auto g = make_grid(2, 64, 8.0);
  const auto zero = ScalarField::zeros(g);
  CHECK(strong_residual(zero, prm) == 0.0);
  for (const auto& w : weak_residual(zero, prm, default_test_bumps(g))) CHECK(w.relative() == 0.0);
  CHECK(pohozaev_residual(zero, prm) == 0.0);

  const auto w = make_barrier({2.0, 2.0, std::nullopt}, g);
  CHECK(pohozaev_residual(w, prm) > 0.1);
  CHECK(strong_residual(w, prm) > 0.1);
  CHECK_FALSE(certify(w, prm).passes());

  const auto bumps = default_test_bumps(g);
  CHECK(bumps.size() == 15);
  CHECK(bumps.front().width == doctest::Approx(0.5));
  const auto phi = bump_field(bumps.back(), g);
  CHECK(phi.max_value() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constrained minimization converges to a certified ground state") {
  const auto& run = small_run();
  const auto& rep = run.minimizer;
  CHECK(rep.converged);
  CHECK(rep.grad_norm < 1e-7);
  CHECK(rep.V == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.a_priori_holds);
  CHECK(rep.symmetrizations > 0);
  REQUIRE(run.multiplier.has_value());
  CHECK(run.multiplier->theta == doctest::Approx(0.5 * rep.T));
  CHECK(run.multiplier->consistent);
  CHECK(rep.theta_el == doctest::Approx(rep.theta_alt).epsilon(1e-3));
  CHECK(run.certificate.passes());
  CHECK(run.certificate.strong_residual < 1e-2);
  CHECK(run.certificate.worst_weak() < 1e-6);
  CHECK(run.certificate.pohozaev_residual < 1e-2);
  CHECK(run.certificate.positivity_min >= -1e-8 * run.certificate.max_value);
  CHECK(run.certificate.monotonicity_defect <= 1e-6 * run.certificate.max_value);
  CHECK(radial_bound_check(run.solution).holds());
}

TEST_CASE("iterate log invariants") {
  const auto& its = small_run().minimizer.iterates;
  REQUIRE(its.size() > 2);
  for (std::size_t i = 0; i < its.size(); ++i) {
    CHECK(its[i].V == doctest::Approx(1.0).epsilon(1e-6));
    if (i == 0) continue;
    const double allowed = its[i].symmetrized ? kPolyaSzegoSlack * its[i - 1].T : 1e-12 * its[i - 1].T;
    CHECK(its[i].T <= its[i - 1].T + allowed);
    CHECK(its[i].iteration > its[i - 1].iteration);
  }
  for (const auto& r : its) CHECK(r.l2_norm <= r.l2_bound * (1 + 1e-9) + 1e-9);
}

TEST_CASE("Petviashvili and the constrained minimizer find the same state") {
  const auto& run = small_run();
  const ProblemParams prm(2, 0.5, 2.0);
  const auto pv = petviashvili_solve(run.solution, prm);
  CHECK(relative_l2_distance(run.solution, pv.field) < 1e-2);
  CHECK(relative_l2_distance(run.solution, run.solution) == 0.0);
}

TEST_CASE("the minimizer does not depend on the barrier seed") {
  const ProblemParams prm(2, 0.5, 2.0);
  const auto g = make_grid(2, 64, 4.0);
  SolverConfig cfg(prm, g);
  const auto a = minimize_constrained(normalized_barrier(g, 2.0, 1.0), cfg);
  const auto b = minimize_constrained(normalized_barrier(g, 2.0, 2.0), cfg);
  CHECK(a.converged);
  CHECK(b.converged);
  CHECK(a.T == doctest::Approx(b.T).epsilon(1e-2));
  CHECK(relative_l2_distance(a.solution, b.solution) < 1e-2);
}

TEST_CASE("recenter moves the peak to the origin index") {
  const auto g = make_grid(2, 32, 4.0);
  const auto off = ScalarField::sample(g, [](std::span<const double> x) {
    return std::exp(-((x[0] - 1.0) * (x[0] - 1.0) + (x[1] + 1.5) * (x[1] + 1.5)));
  });
  const auto c = recenter(off);
  CHECK(c.values[g.flatten(std::array<int, 2>{16, 16})] == off.max_value());
  CHECK(relative_l2_distance(off, recenter(c)) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("dilation probe stays on the constraint and scales T exactly") {
  const auto& run = small_run();
  const ProblemParams prm(2, 0.5, 2.0);
  const auto& u = run.minimizer.solution;
  const auto rows = dilation_probe(prm, u, {0.5, 1.0, 2.0});
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].amplitude == doctest::Approx(1.0));
  CHECK(rows[1].T == doctest::Approx(run.minimizer.T).epsilon(1e-12));
  for (const auto& r : rows) {
    CHECK(r.V == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.T == doctest::Approx(r.amplitude * r.amplitude * r.sigma * run.minimizer.T).epsilon(1e-10));
    CHECK(r.T >= run.minimizer.T * (1 - 1e-6));
  }
  CHECK(code_of([&] { dilation_probe(prm, u, {0.0}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { dilation_probe(prm, fgtest::gaussian(u.grid), {1.0}); }) == ErrorCode::invalid_argument);
  CHECK(default_probe_sigmas_collapse().back() == doctest::Approx(1e-6));
  CHECK(default_probe_sigmas_bracket().front() == doctest::Approx(1e-2));
  CHECK(default_probe_sigmas_bracket().back() == doctest::Approx(1e2));
}
