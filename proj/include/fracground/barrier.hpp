#pragma once

#include <optional>
#include <vector>

#include "fracground/field.hpp"

namespace fracground {

/// Plateau-collar profile w_R(x) = v(|x| / sigma) with
///   v(t) = zeta             for t <= R,
///          zeta (R + 1 - t) for R < t < R + 1,
///          0                beyond.
struct BarrierSpec {
  double zeta = 1.0;
  double radius = 1.0;
  std::optional<double> sigma;

  double profile(double r) const;
  double support_radius() const { return sigma.value_or(1.0) * (radius + 1.0); }
};

/// Throws support_outside_box unless the support radius is below L.
ScalarField make_barrier(const BarrierSpec& spec, const BoxGrid& grid);

struct BarrierSeminormRow {
  double radius;
  double seminorm2;  // [w_R]^2, spectral
  double l2norm2;    // ||w_R||_2^2
  double hs_norm2() const { return seminorm2 + l2norm2; }
};

std::vector<BarrierSeminormRow> barrier_seminorm_scan(double zeta, const std::vector<double>& radii,
                                                      const BoxGrid& grid, double s);

/// R = 1, 2, 4, ... while R + 1 < L.
std::vector<double> default_barrier_radii(const BoxGrid& grid);

struct ConstraintScanRow {
  double radius;
  double V;
};

struct ConstraintScan {
  std::vector<ConstraintScanRow> rows;
  double radius_star = 0.0;
  /// V(w_{R*})^{-1/N}, the continuum scaling choice.
  double sigma_scaling = 0.0;
  /// sigma refined so that the sampled V(w_{R*, sigma}) is 1 to round-off.
  double sigma_star = 0.0;
  double V_normalized = 0.0;
  /// Least-squares fit V(w_R) ~ c1 R^N - c2 R^{N-1}; NaN with fewer than two rows.
  double fit_c1 = 0.0;
  double fit_c2 = 0.0;
  bool growth_certified = false;

  BarrierSpec normalized_spec(double zeta) const { return {zeta, radius_star, sigma_star}; }
};

/// Finds the smallest scanned R with V(w_R) > 0 and the dilation sigma* with
/// V(w_{R*, sigma*}) = 1. Throws zeta_below_min when G(zeta) <= 0 and
/// no_positive_constraint when no scanned R fits in the box with V > 0.
ConstraintScan barrier_constraint_scan(double p, double zeta, const BoxGrid& grid,
                                       std::vector<double> radii = {});

/// 2 zeta_min(p).
double default_zeta(double p);

}  // namespace fracground
