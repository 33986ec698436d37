#include "fracground/dilate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracground/error.hpp"

namespace fracground {

ScalarField resample_dilate(const ScalarField& f, double sigma,
                            std::vector<std::string>* warnings) {
  require(sigma >= 0.5 && sigma <= 2.0, ErrorCode::invalid_argument,
          "per-call dilation factor must lie in [0.5, 2]");
  if (sigma == 1.0) return f;

  const auto& g = f.grid;
  if (warnings) {
    const double ratio = boundary_ratio(f);
    if (ratio > 1e-6) {
      std::ostringstream msg;
      msg << "dilating a field that has not decayed: boundary/max = " << ratio;
      warnings->push_back(msg.str());
    }
  }

  const int dim = g.dim();
  const int m = g.points();
  const double h = g.spacing();
  const double lo = -g.half_width();
  std::vector<double> out(g.size());

  std::array<int, 3> base{};
  std::array<double, 3> frac{};
  std::array<int, 3> corner{};
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto idx = g.unflatten(n);
    for (int d = 0; d < dim; ++d) {
      // fractional sample position of x/sigma, clamped to the box
      double t = (g.coordinate(idx[d]) / sigma - lo) / h;
      t = std::clamp(t, 0.0, static_cast<double>(m - 1));
      int i0 = std::min(static_cast<int>(std::floor(t)), m - 2);
      base[d] = i0;
      frac[d] = t - i0;
    }
    double acc = 0.0;
    for (int c = 0; c < (1 << dim); ++c) {
      double w = 1.0;
      for (int d = 0; d < dim; ++d) {
        const int bit = (c >> d) & 1;
        corner[d] = base[d] + bit;
        w *= bit ? frac[d] : 1.0 - frac[d];
      }
      if (w != 0.0) acc += w * f.values[g.flatten(std::span<const int>(corner.data(), dim))];
    }
    out[n] = acc;
  }
  return ScalarField(g, std::move(out));
}

ScalarField resample_dilate_staged(const ScalarField& f, double sigma,
                                   std::vector<std::string>* warnings) {
  require(sigma > 0.0 && std::isfinite(sigma), ErrorCode::invalid_argument,
          "dilation factor must be positive");
  ScalarField out = f;
  double remaining = sigma;
  while (remaining > 2.0 || remaining < 0.5) {
    const double step = remaining > 2.0 ? 2.0 : 0.5;
    out = resample_dilate(out, step, warnings);
    remaining /= step;
  }
  return resample_dilate(out, remaining, warnings);
}

}  // namespace fracground
