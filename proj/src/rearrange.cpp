#include "fracground/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "fracground/error.hpp"
#include "fracground/frac_ops.hpp"

namespace fracground {

namespace {

// Squared lattice distance of each cell from the origin sample (index M/2).
std::vector<std::int64_t> lattice_radii2(const BoxGrid& g) {
  std::vector<std::int64_t> out(g.size());
  const int c = g.points() / 2;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto idx = g.unflatten(n);
    std::int64_t r2 = 0;
    for (int d = 0; d < g.dim(); ++d) {
      const std::int64_t k = idx[d] - c;
      r2 += k * k;
    }
    out[n] = r2;
  }
  return out;
}

std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

void check_radial_decreasing(const ScalarField& f, const RadialProfile& prof) {
  const double peak = f.max_abs();
  if (peak == 0.0) return;
  const double lowest = f.min_value();
  if (lowest < -kNegativityTolerance * peak) {
    std::ostringstream msg;
    msg << "field is not nonnegative: min/max = " << lowest / peak;
    fail(ErrorCode::not_radial_decreasing, msg.str());
  }
  const double defect = prof.monotonicity_defect();
  if (defect > kMonotonicityTolerance * peak) {
    std::ostringstream msg;
    msg << "radial profile increases by " << defect / peak << " of max";
    fail(ErrorCode::not_radial_decreasing, msg.str());
  }
}

}  // namespace

double unit_sphere_measure(int dim) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

double unit_ball_volume(int dim) {
  return std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

ScalarField rearrange_decreasing(const ScalarField& f) {
  const auto& g = f.grid;
  const auto r2 = lattice_radii2(g);
  std::vector<std::size_t> cells(g.size());
  std::iota(cells.begin(), cells.end(), std::size_t{0});
  std::sort(cells.begin(), cells.end(), [&](std::size_t a, std::size_t b) {
    return r2[a] != r2[b] ? r2[a] < r2[b] : a < b;
  });

  std::vector<double> sorted(g.size());
  std::transform(f.values.begin(), f.values.end(), sorted.begin(),
                 [](double v) { return std::abs(v); });
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < cells.size(); ++i) out[cells[i]] = sorted[i];
  return ScalarField(g, std::move(out));
}

double polya_szego_gap(const ScalarField& f, double s) {
  return seminorm_spectral_squared(f, s) - seminorm_spectral_squared(rearrange_decreasing(f), s);
}

double RadialProfile::monotonicity_defect() const {
  double worst = 0.0;
  for (std::size_t b = 1; b < values.size(); ++b)
    worst = std::max(worst, values[b] - values[b - 1]);
  return worst;
}

RadialProfile shell_profile(const ScalarField& f) {
  const auto& g = f.grid;
  const auto r2 = lattice_radii2(g);
  const std::size_t shells = static_cast<std::size_t>(g.points() / 2);
  std::vector<double> sum(shells, 0.0);
  std::vector<std::size_t> count(shells, 0);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto b = static_cast<std::size_t>(isqrt(r2[n]));
    if (b >= shells) continue;
    sum[b] += f.values[n];
    ++count[b];
  }
  RadialProfile prof;
  prof.dim = g.dim();
  for (std::size_t b = 0; b < shells; ++b) {
    if (count[b] == 0) continue;
    prof.radii.push_back(static_cast<double>(b) * g.spacing());
    prof.values.push_back(sum[b] / static_cast<double>(count[b]));
    prof.counts.push_back(count[b]);
  }
  return prof;
}

RadialProfile radial_profile(const ScalarField& f) {
  auto prof = shell_profile(f);
  check_radial_decreasing(f, prof);
  return prof;
}

double RadialBoundReport::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) m = std::min(m, row.margin);
  return rows.empty() ? 0.0 : m;
}

bool RadialBoundReport::holds(double rel_tol) const {
  return min_margin() >= -rel_tol * l2_norm;
}

RadialBoundReport radial_bound_check(const ScalarField& f) {
  check_radial_decreasing(f, shell_profile(f));
  const auto& g = f.grid;
  const auto r2 = lattice_radii2(g);
  const double h = g.spacing();

  RadialBoundReport rep;
  rep.dim = g.dim();
  rep.l2_norm = lp_norm(f, 2.0);
  rep.coefficient = std::sqrt(g.dim() / unit_sphere_measure(g.dim()));

  const auto max_r2 = *std::max_element(r2.begin(), r2.end());
  const auto shells = static_cast<std::size_t>(isqrt(max_r2)) + 1;
  std::vector<RadialBoundRow> worst(shells, RadialBoundRow{0, 0, 0, std::numeric_limits<double>::infinity()});
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (r2[n] == 0) continue;
    const double r = std::sqrt(static_cast<double>(r2[n])) * h;
    const double bound = rep.coefficient * std::pow(r, -0.5 * g.dim()) * rep.l2_norm;
    const double margin = bound - f.values[n];
    auto& row = worst[static_cast<std::size_t>(isqrt(r2[n]))];
    if (margin < row.margin) row = {r, bound, f.values[n], margin};
  }
  for (const auto& row : worst)
    if (std::isfinite(row.margin)) rep.rows.push_back(row);
  return rep;
}

}  // namespace fracground
