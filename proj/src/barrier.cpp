#include "fracground/barrier.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <tuple>

#include "fracground/error.hpp"
#include "fracground/frac_ops.hpp"

namespace fracground {

double BarrierSpec::profile(double r) const {
  const double t = r / sigma.value_or(1.0);
  if (t <= radius) return zeta;
  if (t < radius + 1.0) return zeta * (radius + 1.0 - t);
  return 0.0;
}

ScalarField make_barrier(const BarrierSpec& spec, const BoxGrid& grid) {
  require(spec.zeta > 0.0 && spec.radius > 0.0, ErrorCode::invalid_argument,
          "barrier needs zeta > 0 and R > 0");
  require(!spec.sigma || *spec.sigma > 0.0, ErrorCode::invalid_argument,
          "barrier dilation must be positive");
  if (spec.support_radius() >= grid.half_width()) {
    std::ostringstream msg;
    msg << "barrier support radius " << spec.support_radius() << " reaches the box half-width "
        << grid.half_width();
    fail(ErrorCode::support_outside_box, msg.str());
  }
  return ScalarField::sample(grid, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    return spec.profile(std::sqrt(r2));
  });
}

std::vector<BarrierSeminormRow> barrier_seminorm_scan(double zeta, const std::vector<double>& radii,
                                                      const BoxGrid& grid, double s) {
  std::vector<BarrierSeminormRow> rows;
  rows.reserve(radii.size());
  for (double r : radii) {
    const auto w = make_barrier({zeta, r, std::nullopt}, grid);
    const double l2 = lp_norm(w, 2.0);
    rows.push_back({r, seminorm_spectral_squared(w, s), l2 * l2});
  }
  return rows;
}

std::vector<double> default_barrier_radii(const BoxGrid& grid) {
  std::vector<double> radii;
  for (double r = 1.0; r + 1.0 < grid.half_width(); r *= 2.0) radii.push_back(r);
  return radii;
}

double default_zeta(double p) { return 2.0 * zeta_min(p); }

namespace {

// Least squares for V ~ c1 R^N - c2 R^{N-1}.
std::pair<double, double> fit_growth(const std::vector<ConstraintScanRow>& rows, int dim) {
  if (rows.size() < 2)
    return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  double saa = 0, sab = 0, sbb = 0, sav = 0, sbv = 0;
  for (const auto& row : rows) {
    const double a = std::pow(row.radius, dim);
    const double b = -std::pow(row.radius, dim - 1);
    saa += a * a;
    sab += a * b;
    sbb += b * b;
    sav += a * row.V;
    sbv += b * row.V;
  }
  const double det = saa * sbb - sab * sab;
  return {(sav * sbb - sbv * sab) / det, (saa * sbv - sab * sav) / det};
}

}  // namespace

ConstraintScan barrier_constraint_scan(double p, double zeta, const BoxGrid& grid,
                                       std::vector<double> radii) {
  const Nonlinearity nl{p};
  if (!(zeta > nl.zeta_min())) {
    std::ostringstream msg;
    msg << "plateau height " << zeta << " is at or below zeta_min(p) = " << nl.zeta_min()
        << ", so G(zeta) <= 0";
    fail(ErrorCode::zeta_below_min, msg.str());
  }
  if (radii.empty()) radii = default_barrier_radii(grid);

  ConstraintScan scan;
  for (double r : radii) {
    if (r + 1.0 >= grid.half_width()) break;
    scan.rows.push_back({r, constraint_V(make_barrier({zeta, r, std::nullopt}, grid), p)});
  }
  const auto hit = std::find_if(scan.rows.begin(), scan.rows.end(),
                                [](const ConstraintScanRow& row) { return row.V > 0.0; });
  if (hit == scan.rows.end())
    fail(ErrorCode::no_positive_constraint,
         "no scanned plateau radius inside the box gives V(w_R) > 0");

  const int dim = grid.dim();
  scan.radius_star = hit->radius;
  scan.sigma_scaling = std::pow(hit->V, -1.0 / dim);

  // The sampled V is continuous and increasing in sigma; solve V = 1 on the grid.
  auto residual = [&](double sigma) {
    return constraint_V(make_barrier({zeta, scan.radius_star, sigma}, grid), p) - 1.0;
  };
  const double sigma_max = 0.999 * grid.half_width() / (scan.radius_star + 1.0);
  double lo = std::min(scan.sigma_scaling, sigma_max);
  double hi = lo;
  // Once the support shrinks below a cell the sampled V stops depending on
  // sigma, so the bracket search is bounded.
  for (int k = 0; residual(lo) > 0.0; ++k) {
    if (k == 60 || lo * (scan.radius_star + 1.0) < 0.5 * grid.spacing()) {
      std::ostringstream msg;
      msg << "grid spacing " << grid.spacing() << " cannot resolve the normalized barrier "
          << "(continuum support radius " << scan.sigma_scaling * (scan.radius_star + 1.0)
          << "); the sampled V stays above 1";
      fail(ErrorCode::unresolved_grid, msg.str());
    }
    lo *= 0.8;
  }
  while (residual(hi) < 0.0) {
    require(hi < sigma_max, ErrorCode::support_outside_box,
            "normalized barrier does not fit inside the box");
    hi = std::min(hi * 1.25, sigma_max);
  }
  if (lo == hi) {
    scan.sigma_star = lo;
  } else {
    std::uintmax_t iters = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        residual, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
    const double a = bracket.first, b = bracket.second;
    scan.sigma_star = std::abs(residual(a)) <= std::abs(residual(b)) ? a : b;
  }
  scan.V_normalized = residual(scan.sigma_star) + 1.0;

  std::tie(scan.fit_c1, scan.fit_c2) = fit_growth(scan.rows, dim);
  scan.growth_certified = std::isfinite(scan.fit_c1) && scan.fit_c1 > 0.0;
  return scan;
}

}  // namespace fracground
