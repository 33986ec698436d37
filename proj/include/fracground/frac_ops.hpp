#pragma once

#include "fracground/field.hpp"
#include "fracground/parallel.hpp"

namespace fracground {

/// (-Delta)^s as the Fourier multiplier |xi|^{2s}. s = 1 is accepted as the
/// classical Laplacian.
ScalarField frac_laplacian(const ScalarField& f, double s);

/// [f]^2 = sum_k |xi_k|^{2s} |F f(k)|^2 (pi/L)^N, the spectral seminorm squared.
double seminorm_spectral_squared(const ScalarField& f, double s);
double seminorm_spectral(const ScalarField& f, double s);

/// Largest grid (total samples) accepted by seminorm_direct; the double sum
/// costs O(size^2).
inline constexpr std::size_t kDirectSeminormMaxPoints = std::size_t{1} << 13;

enum class DirectKernel {
  /// Sum of |x - y + 2L m|^{-N-2s} over all periodic images m: the kernel of
  /// the torus operator whose symbol is |xi|^{2s}.
  periodized,
  /// Only the closest image. Drops the far field, roughly
  /// int_{|z|>L} |z|^{-N-2s} dz times 2 |f|_2^2, which does not shrink as f decays.
  nearest_image,
};

/// Gagliardo double sum over distinct cell pairs,
///   h^{2N} sum_{x != y} |f(x) - f(y)|^2 K(x - y),
/// with the diagonal skipped. Throws grid_too_large above
/// kDirectSeminormMaxPoints.
double seminorm_direct_squared(const ScalarField& f, double s,
                               Reduction mode = Reduction::deterministic,
                               DirectKernel kind = DirectKernel::periodized);
double seminorm_direct(const ScalarField& f, double s,
                       Reduction mode = Reduction::deterministic,
                       DirectKernel kind = DirectKernel::periodized);

/// A(N,s) = int_{R^N} (1 - cos z_1) / |z|^{N+2s} dz. The Gagliardo and spectral
/// seminorms satisfy [f]_direct^2 = 2 A [f]_spectral^2.
struct EquivalenceConstant {
  int dim;
  double order;
  double value;

  double ratio() const { return 2.0 * value; }
};

EquivalenceConstant equivalence_constant(int dim, double s);

/// Power nonlinearity split as G = G1 - G2, g = g1 - g2 = G'.
struct Nonlinearity {
  double power;

  double g1(double t) const;
  double g2(double t) const { return t; }
  double G1(double t) const;
  double G2(double t) const { return 0.5 * t * t; }
  double g(double t) const { return g1(t) - g2(t); }
  double G(double t) const { return G1(t) - G2(t); }
  /// Positive root of G: ((p+1)/2)^{1/(p-1)}.
  double zeta_min() const;
};

double G_value(double t, double p);
double g_value(double t, double p);
double zeta_min(double p);

/// V(f) = int G(f) dx.
double constraint_V(const ScalarField& f, double p);

enum class Normalization {
  spectral,    // 1/2 [f]_spec^2 - V(f)
  gagliardo,   // 1/2 (2A) [f]_spec^2 + int (f^2/2 - |f|^{p+1}/(p+1))
};

double energy(const ScalarField& f, double s, double p,
              Normalization norm = Normalization::spectral);

/// Discrete L^q norm, q in [1, inf).
double lp_norm(const ScalarField& f, double q);

/// ||f||_{L^{2N/(N-2s)}} / [f]_spec. Requires N > 2s and a nonzero seminorm.
double sobolev_ratio(const ScalarField& f, double s);

}  // namespace fracground
