#include "fracground/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "fracground/error.hpp"

namespace fracground {

ProblemParams::ProblemParams(int dim, double order, double power)
    : dim_(dim), order_(order), power_(power) {
  require(dim >= 1 && dim <= 3, ErrorCode::invalid_argument,
          "dimension must be 1, 2 or 3, got " + std::to_string(dim));
  require(order > 0.0 && order < 1.0, ErrorCode::invalid_argument,
          "fractional order s must lie in (0,1), got " + std::to_string(order));
  require(power > 1.0 && std::isfinite(power), ErrorCode::invalid_argument,
          "exponent p must exceed 1, got " + std::to_string(power));
  const double n = dim;
  if (n > 2.0 * order) {
    critical_power_ = (n + 2.0 * order) / (n - 2.0 * order);
    sobolev_exponent_ = 2.0 * n / (n - 2.0 * order);
  } else {
    critical_power_ = std::numeric_limits<double>::infinity();
    sobolev_exponent_ = std::numeric_limits<double>::infinity();
  }
}

// ---------------------------------------------------------------------------

BoxGrid::BoxGrid(int dim, int points, double half_width)
    : dim_(dim), points_(points), half_width_(half_width) {
  size_ = 1;
  for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(points);
}

BoxGrid make_grid(int dim, int points, double half_width) {
  require(dim >= 1 && dim <= 3, ErrorCode::invalid_argument,
          "grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
  require(points >= 8, ErrorCode::invalid_argument,
          "points per axis below minimum of 8: " + std::to_string(points));
  require((points & (points - 1)) == 0, ErrorCode::invalid_argument,
          "points per axis must be a power of two: " + std::to_string(points));
  require(half_width > 0.0 && std::isfinite(half_width), ErrorCode::invalid_argument,
          "box half-width must be positive");
  return BoxGrid(dim, points, half_width);
}

double BoxGrid::cell_volume() const { return std::pow(spacing(), dim_); }

double BoxGrid::frequency(int i) const {
  return std::numbers::pi / half_width_ * lattice_index(i);
}

std::array<int, 3> BoxGrid::unflatten(std::size_t flat) const {
  std::array<int, 3> idx{};
  for (int d = dim_ - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % points_);
    flat /= points_;
  }
  return idx;
}

std::size_t BoxGrid::flatten(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (int d = 0; d < dim_; ++d) {
    const int i = ((idx[d] % points_) + points_) % points_;
    flat = flat * points_ + static_cast<std::size_t>(i);
  }
  return flat;
}

std::vector<double> BoxGrid::squared_radii() const {
  std::vector<double> out(size_);
  for (std::size_t n = 0; n < size_; ++n) {
    const auto idx = unflatten(n);
    double r2 = 0.0;
    for (int d = 0; d < dim_; ++d) {
      const double x = coordinate(idx[d]);
      r2 += x * x;
    }
    out[n] = r2;
  }
  return out;
}

std::vector<double> BoxGrid::squared_frequencies() const {
  std::vector<double> axis(points_);
  for (int i = 0; i < points_; ++i) axis[i] = frequency(i) * frequency(i);
  std::vector<double> out(size_);
  for (std::size_t n = 0; n < size_; ++n) {
    const auto idx = unflatten(n);
    double xi2 = 0.0;
    for (int d = 0; d < dim_; ++d) xi2 += axis[idx[d]];
    out[n] = xi2;
  }
  return out;
}

BoxGrid BoxGrid::scaled(double scale) const {
  return make_grid(dim_, points_, half_width_ * scale);
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(BoxGrid g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  require(values.size() == grid.size(), ErrorCode::invalid_argument,
          "field has " + std::to_string(values.size()) + " values, grid needs " +
              std::to_string(grid.size()));
  for (double x : values)
    require(std::isfinite(x), ErrorCode::invalid_argument, "field contains non-finite value");
}

ScalarField ScalarField::zeros(const BoxGrid& g) {
  return ScalarField(g, std::vector<double>(g.size(), 0.0));
}

double ScalarField::max_value() const { return *std::max_element(values.begin(), values.end()); }
double ScalarField::min_value() const { return *std::min_element(values.begin(), values.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

std::complex<double> SpectralField::at(std::span<const int> k) const {
  require(static_cast<int>(k.size()) == grid.dim(), ErrorCode::invalid_argument,
          "lattice vector has wrong dimension");
  for (int kd : k)
    require(kd >= -grid.points() / 2 && kd < grid.points() / 2, ErrorCode::invalid_argument,
            "lattice index out of range");
  return coeffs[grid.flatten(k)];
}

double integrate(const BoxGrid& g, std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return g.cell_volume() * sum;
}

double integrate(const ScalarField& f) { return integrate(f.grid, f.values); }

// ---------------------------------------------------------------------------
// FFTW plans are created once per (N, M, direction) and executed through the
// new-array interface, which is thread safe. Plan creation is not, hence the
// mutex.

namespace {

class PlanCache {
 public:
  fftw_plan get(int dim, int points, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(dim, points, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second.get();
    std::array<int, 3> n{points, points, points};
    std::size_t total = 1;
    for (int d = 0; d < dim; ++d) total *= points;
    auto* buf = fftw_alloc_complex(total);
    fftw_plan plan = fftw_plan_dft(dim, n.data(), buf, buf, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    plans_.emplace(key, PlanHandle(plan, &fftw_destroy_plan));
    return plan;
  }

 private:
  using PlanHandle = std::unique_ptr<std::remove_pointer_t<fftw_plan>, void (*)(fftw_plan)>;
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, PlanHandle> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void execute(const BoxGrid& g, std::vector<std::complex<double>>& data, int sign) {
  fftw_plan plan = plan_cache().get(g.dim(), g.points(), sign);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

// Sample j sits at -L + j h, so e^{-i xi_k x_j} carries (-1)^k on each axis;
// with M even that equals (-1)^i for storage index i.
double shift_sign(const BoxGrid& g, std::size_t flat) {
  const auto idx = g.unflatten(flat);
  int parity = 0;
  for (int d = 0; d < g.dim(); ++d) parity += idx[d];
  return (parity & 1) ? -1.0 : 1.0;
}

}  // namespace

SpectralField forward_transform(const ScalarField& f) {
  const auto& g = f.grid;
  std::vector<std::complex<double>> data(f.values.begin(), f.values.end());
  execute(g, data, FFTW_FORWARD);
  const double scale = g.cell_volume() * std::pow(2.0 * std::numbers::pi, -0.5 * g.dim());
  for (std::size_t n = 0; n < data.size(); ++n) data[n] *= scale * shift_sign(g, n);
  return SpectralField{g, std::move(data)};
}

ScalarField inverse_transform(const SpectralField& F) {
  const auto& g = F.grid;
  std::vector<std::complex<double>> data = F.coeffs;
  const double scale = std::pow(2.0 * std::numbers::pi, 0.5 * g.dim()) /
                       (g.cell_volume() * static_cast<double>(g.size()));
  for (std::size_t n = 0; n < data.size(); ++n) data[n] *= scale * shift_sign(g, n);
  execute(g, data, FFTW_BACKWARD);
  std::vector<double> out(data.size());
  for (std::size_t n = 0; n < data.size(); ++n) out[n] = data[n].real();
  return ScalarField(g, std::move(out));
}

double boundary_ratio(const ScalarField& f) {
  const double peak = f.max_abs();
  if (peak == 0.0) return 0.0;
  const auto& g = f.grid;
  double edge = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto idx = g.unflatten(n);
    bool outer = false;
    for (int d = 0; d < g.dim(); ++d)
      if (idx[d] == 0 || idx[d] == g.points() - 1) outer = true;
    if (outer) edge = std::max(edge, std::abs(f.values[n]));
  }
  return edge / peak;
}

}  // namespace fracground
