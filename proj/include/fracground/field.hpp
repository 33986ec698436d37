#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fracground {

/// Problem data for (-Delta)^s u + u = |u|^{p-1} u in dimension N.
///
/// The critical exponents are derived from (N, s) on construction:
///   p_crit = (N + 2s) / (N - 2s)   and   2*_s = 2N / (N - 2s)
/// when N > 2s, and +infinity otherwise.
class ProblemParams {
 public:
  /// Throws Error(invalid_argument) unless N in {1,2,3}, 0 < s < 1, p > 1.
  ProblemParams(int dim, double order, double power);

  int dim() const { return dim_; }
  double order() const { return order_; }
  double power() const { return power_; }
  double critical_power() const { return critical_power_; }
  double sobolev_exponent() const { return sobolev_exponent_; }
  bool subcritical() const { return power_ < critical_power_; }

 private:
  int dim_;
  double order_;
  double power_;
  double critical_power_;
  double sobolev_exponent_;
};

/// Periodic box [-L, L)^N sampled with M points per axis.
///
/// Sample j on an axis sits at x_j = -L + j h with h = 2L/M, so the origin is
/// index M/2. Frequencies follow the FFT ordering: storage index i maps to the
/// lattice integer k = i for i < M/2 and k = i - M otherwise, and
/// xi_k = (pi / L) k.
class BoxGrid {
 public:
  int dim() const { return dim_; }
  int points() const { return points_; }
  double half_width() const { return half_width_; }
  double spacing() const { return 2.0 * half_width_ / points_; }
  double cell_volume() const;
  std::size_t size() const { return size_; }

  double coordinate(int j) const { return -half_width_ + j * spacing(); }
  int lattice_index(int i) const { return i < points_ / 2 ? i : i - points_; }
  double frequency(int i) const;

  /// Row-major multi-index of a flat offset (last axis fastest).
  std::array<int, 3> unflatten(std::size_t flat) const;
  std::size_t flatten(std::span<const int> idx) const;

  /// |x|^2 at each sample.
  std::vector<double> squared_radii() const;
  /// |xi|^2 at each storage slot of the spectral array.
  std::vector<double> squared_frequencies() const;

  /// Same sample layout on [-scale L, scale L)^N.
  BoxGrid scaled(double scale) const;

  bool operator==(const BoxGrid&) const = default;

 private:
  friend BoxGrid make_grid(int dim, int points, double half_width);
  BoxGrid(int dim, int points, double half_width);

  int dim_ = 1;
  int points_ = 8;
  double half_width_ = 1.0;
  std::size_t size_ = 8;
};

/// Validates N in {1,2,3}, M a power of two >= 8 and L > 0.
BoxGrid make_grid(int dim, int points, double half_width);

struct ScalarField {
  BoxGrid grid;
  std::vector<double> values;

  ScalarField(BoxGrid g, std::vector<double> v);
  static ScalarField zeros(const BoxGrid& g);
  /// Samples fn(x) where x holds dim() coordinates.
  template <class Fn>
  static ScalarField sample(const BoxGrid& g, Fn&& fn);

  double max_value() const;
  double min_value() const;
  double max_abs() const;
};

/// Fourier coefficients in FFT storage order (see BoxGrid).
struct SpectralField {
  BoxGrid grid;
  std::vector<std::complex<double>> coeffs;

  /// Coefficient at lattice vector k, each component in [-M/2, M/2).
  std::complex<double> at(std::span<const int> k) const;
};

/// Rectangle rule: cell_volume * sum(values).
double integrate(const ScalarField& f);
double integrate(const BoxGrid& g, std::span<const double> values);

/// Unitary transform, discrete surrogate of
///   F u(xi) = (2 pi)^{-N/2} int e^{-i xi.x} u(x) dx,
/// so that h^N sum |f|^2 = (pi/L)^N sum |F f|^2.
SpectralField forward_transform(const ScalarField& f);
/// Real part of the inverse transform.
ScalarField inverse_transform(const SpectralField& F);

/// Multiplies the spectrum by symbol(|xi|^2) and transforms back.
template <class Symbol>
ScalarField apply_symbol(const ScalarField& f, Symbol&& symbol);

/// Largest |f| on the outermost shell of samples relative to max |f|.
double boundary_ratio(const ScalarField& f);

// ---------------------------------------------------------------------------

template <class Fn>
ScalarField ScalarField::sample(const BoxGrid& g, Fn&& fn) {
  std::vector<double> v(g.size());
  std::array<double, 3> x{};
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto idx = g.unflatten(n);
    for (int d = 0; d < g.dim(); ++d) x[d] = g.coordinate(idx[d]);
    v[n] = fn(std::span<const double>(x.data(), g.dim()));
  }
  return ScalarField(g, std::move(v));
}

template <class Symbol>
ScalarField apply_symbol(const ScalarField& f, Symbol&& symbol) {
  auto spec = forward_transform(f);
  const auto xi2 = f.grid.squared_frequencies();
  for (std::size_t n = 0; n < xi2.size(); ++n) spec.coeffs[n] *= symbol(xi2[n]);
  return inverse_transform(spec);
}

}  // namespace fracground
