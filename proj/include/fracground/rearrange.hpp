#pragma once

#include <vector>

#include "fracground/field.hpp"

namespace fracground {

/// Discrete symmetric decreasing rearrangement of |f|: the sorted values are
/// assigned to cells in order of lattice distance from the origin, ties broken
/// by flat index. Equimeasurable with |f| by construction.
ScalarField rearrange_decreasing(const ScalarField& f);

/// [f]^2 - [f*]^2 in the spectral seminorm. The continuum inequality says this
/// is >= 0; on a grid it holds up to a discretization slack.
double polya_szego_gap(const ScalarField& f, double s);

/// Default relative slack for polya_szego_gap: gap >= -slack * [f]^2.
inline constexpr double kPolyaSzegoSlack = 1e-3;

/// Shell-averaged profile. Shell b holds the cells with lattice radius in
/// [b, b+1) (in units of h), so radii[b] = b h. Only shells lying entirely in
/// the inscribed ball (b + 1 <= M/2) are reported.
struct RadialProfile {
  int dim = 1;
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<std::size_t> counts;

  /// Largest increase values[b+1] - values[b] (0 when non-increasing).
  double monotonicity_defect() const;
};

/// Profile without checking the precondition of radial_profile.
RadialProfile shell_profile(const ScalarField& f);

/// Tolerances for "nonnegative radial non-increasing", relative to max f.
inline constexpr double kNegativityTolerance = 1e-8;
inline constexpr double kMonotonicityTolerance = 1e-6;

/// Throws not_radial_decreasing unless f is nonnegative and its shell profile
/// is non-increasing within the tolerances above.
RadialProfile radial_profile(const ScalarField& f);

struct RadialBoundRow {
  double radius;   // |x| of the tightest cell in the shell
  double bound;    // (N / omega_{N-1})^{1/2} |x|^{-N/2} ||f||_2
  double value;    // f at that cell
  double margin;   // bound - value
};

struct RadialBoundReport {
  int dim = 1;
  double l2_norm = 0.0;
  double coefficient = 0.0;  // (N / omega_{N-1})^{1/2}
  std::vector<RadialBoundRow> rows;

  double min_margin() const;
  /// True when every margin >= -rel_tol * ||f||_2.
  bool holds(double rel_tol = 1e-6) const;
};

/// Pointwise decay bound for nonnegative radial decreasing fields, one row per
/// shell (all shells, including partial ones near the box corners). Same
/// precondition as radial_profile.
RadialBoundReport radial_bound_check(const ScalarField& f);

/// Lebesgue measure of the unit sphere in R^N, 2 pi^{N/2} / Gamma(N/2).
double unit_sphere_measure(int dim);
/// Volume of the unit ball in R^N, pi^{N/2} / Gamma(N/2 + 1).
double unit_ball_volume(int dim);

}  // namespace fracground
