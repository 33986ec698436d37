#include "fracground/frac_ops.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <array>
#include <cmath>
#include <span>
#include <numbers>
#include <string>

#include "fracground/error.hpp"

namespace fracground {

ScalarField frac_laplacian(const ScalarField& f, double s) {
  require(s > 0.0 && s <= 1.0, ErrorCode::invalid_argument,
          "fractional Laplacian order must lie in (0,1]");
  return apply_symbol(f, [s](double xi2) { return xi2 == 0.0 ? 0.0 : std::pow(xi2, s); });
}

double seminorm_spectral_squared(const ScalarField& f, double s) {
  const auto spec = forward_transform(f);
  const auto xi2 = f.grid.squared_frequencies();
  double sum = 0.0;
  for (std::size_t n = 0; n < xi2.size(); ++n)
    if (xi2[n] > 0.0) sum += std::pow(xi2[n], s) * std::norm(spec.coeffs[n]);
  return sum * std::pow(std::numbers::pi / f.grid.half_width(), f.grid.dim());
}

double seminorm_spectral(const ScalarField& f, double s) {
  return std::sqrt(seminorm_spectral_squared(f, s));
}

namespace {

// int over the outside of the unit cube [-1,1]^N of |w|^{-N-2s} dw. By
// homogeneity this is (1/2s) times the flux through the cube surface:
//   (2N / 2s) int_{[-1,1]^{N-1}} (1 + |y|^2)^{-(N+2s)/2} dy.
double outside_cube_integral(int dim, double s) {
  using boost::math::quadrature::gauss;
  const double e = -0.5 * (dim + 2.0 * s);
  double face = 1.0;
  if (dim == 2) {
    face = gauss<double, 30>::integrate([&](double y) { return std::pow(1.0 + y * y, e); }, -1.0, 1.0);
  } else if (dim == 3) {
    face = gauss<double, 30>::integrate(
        [&](double y) {
          return gauss<double, 30>::integrate(
              [&](double z) { return std::pow(1.0 + y * y + z * z, e); }, -1.0, 1.0);
        },
        -1.0, 1.0);
  }
  return 2.0 * dim * face / (2.0 * s);
}

// Lattice sum of |z + 2Lm|^{-N-2s} over images |m|_inf <= P, with the rest
// replaced by its integral (each image stands for one box of volume (2L)^N).
double periodized_kernel(std::span<const double> z, double L, double s, int images, double tail) {
  const int dim = static_cast<int>(z.size());
  const double e = -0.5 * (dim + 2.0 * s);
  const int width = 2 * images + 1;
  int total = 1;
  for (int d = 0; d < dim; ++d) total *= width;
  double sum = 0.0;
  for (int n = 0; n < total; ++n) {
    double r2 = 0.0;
    int rest = n;
    for (int d = 0; d < dim; ++d) {
      const int m = rest % width - images;
      rest /= width;
      const double w = z[d] + 2.0 * L * m;
      r2 += w * w;
    }
    sum += std::pow(r2, e);
  }
  return sum + tail;
}

}  // namespace

double seminorm_direct_squared(const ScalarField& f, double s, Reduction mode, DirectKernel kind) {
  const auto& g = f.grid;
  require(g.size() <= kDirectSeminormMaxPoints, ErrorCode::grid_too_large,
          "direct Gagliardo sum limited to " + std::to_string(kDirectSeminormMaxPoints) +
              " samples, grid has " + std::to_string(g.size()));
  require(s > 0.0 && s < 1.0, ErrorCode::invalid_argument, "Gagliardo order must lie in (0,1)");
  const int dim = g.dim();
  const int m = g.points();
  const double h = g.spacing();
  const double L = g.half_width();

  constexpr int kImages[] = {0, 16, 8, 3};
  const int images = kImages[dim];
  const double tail = std::pow(2.0 * L, -dim) * std::pow((2 * images + 1) * L, -2.0 * s) *
                      outside_cube_integral(dim, s);

  // Kernel h^{2N} K(x - y) tabulated by periodic lattice offset.
  std::vector<double> kernel(g.size(), 0.0);
  std::array<double, 3> z{};
  for (std::size_t n = 1; n < g.size(); ++n) {
    const auto off = g.unflatten(n);
    double d2 = 0.0;
    for (int d = 0; d < dim; ++d) {
      const int k = off[d] <= m / 2 ? off[d] : off[d] - m;
      z[d] = k * h;
      d2 += z[d] * z[d];
    }
    const double K = kind == DirectKernel::nearest_image
                         ? std::pow(d2, -0.5 * (dim + 2.0 * s))
                         : periodized_kernel(std::span<const double>(z.data(), dim), L, s, images, tail);
    kernel[n] = std::pow(h, 2 * dim) * K;
  }

  std::vector<std::array<int, 3>> index(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) index[n] = g.unflatten(n);

  const auto& v = f.values;
  auto body = [&](std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t a = begin; a < end; ++a) {
      const auto& ia = index[a];
      for (std::size_t b = 0; b < g.size(); ++b) {
        if (a == b) continue;
        const auto& ib = index[b];
        std::size_t off = 0;
        for (int d = 0; d < dim; ++d) off = off * m + static_cast<std::size_t>((ia[d] - ib[d] + m) % m);
        const double diff = v[a] - v[b];
        acc += diff * diff * kernel[off];
      }
    }
    return acc;
  };
  return parallel_sum(g.size(), body, mode);
}

double seminorm_direct(const ScalarField& f, double s, Reduction mode, DirectKernel kind) {
  return std::sqrt(seminorm_direct_squared(f, s, mode, kind));
}

// ---------------------------------------------------------------------------
// A(N,s) in polar coordinates is omega_{N-1} int_0^inf r^{-1-2s} (1 - Lambda(r)) dr
// where Lambda is the sphere average of cos(r theta_1): cos r, J0(r), sin(r)/r.
// Writing r^{-1-2s} = Gamma(1+2s)^{-1} int_0^inf t^{2s} e^{-rt} dt and swapping
// the order turns the oscillatory radial integral into
//   A = omega_{N-1} / Gamma(1+2s) * int_0^inf t^{2s} phi(t) dt,
//   phi(t) = 1/t - Laplace[Lambda](t),
// with phi ~ 1/t at the origin and ~ 1/(N t^3) at infinity. Both ends are
// removed analytically by substitution:
//   [0,1]:   u = t^{2s}                    -> int_0^1 t phi(t) / (2s) du
//   [1,inf): t = 1/v, w = v^{2-2s}         -> int_0^1 psi(v) / (2-2s) dw,
// where psi(v) = v^{-3} phi(1/v) is bounded with psi(0) = 1/N.

namespace {

double t_phi(int dim, double t) {
  switch (dim) {
    case 1: return 1.0 / (1.0 + t * t);
    case 2: return 1.0 - t / std::sqrt(1.0 + t * t);
    default: return t == 0.0 ? 1.0 : 1.0 - t * std::atan(1.0 / t);
  }
}

double psi(int dim, double v) {
  switch (dim) {
    case 1: return 1.0 / (1.0 + v * v);
    case 2: {
      const double q = std::sqrt(1.0 + v * v);
      return 1.0 / (q * (1.0 + q));
    }
    default: {
      if (v < 0.1) {
        // (v - atan v) / v^3 = sum_k (-1)^k v^{2k} / (2k+3)
        const double v2 = v * v;
        double term = 1.0, sum = 0.0;
        for (int k = 0; k < 8; ++k) {
          sum += term / (2 * k + 3);
          term *= -v2;
        }
        return sum;
      }
      return (v - std::atan(v)) / (v * v * v);
    }
  }
}

double sphere_measure(int dim) {
  // omega_{N-1} = 2 pi^{N/2} / Gamma(N/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

}  // namespace

EquivalenceConstant equivalence_constant(int dim, double s) {
  require(dim >= 1 && dim <= 3, ErrorCode::invalid_argument, "dimension must be 1, 2 or 3");
  require(s > 0.0 && s < 1.0, ErrorCode::invalid_argument, "order must lie in (0,1)");

  boost::math::quadrature::tanh_sinh<double> quad;
  const double tol = 1e-13;
  const double near = quad.integrate(
      [&](double u) { return t_phi(dim, std::pow(u, 1.0 / (2.0 * s))); }, 0.0, 1.0, tol);
  const double far = quad.integrate(
      [&](double w) { return psi(dim, std::pow(w, 1.0 / (2.0 - 2.0 * s))); }, 0.0, 1.0, tol);
  const double integral = near / (2.0 * s) + far / (2.0 - 2.0 * s);
  return {dim, s, sphere_measure(dim) / std::tgamma(1.0 + 2.0 * s) * integral};
}

// ---------------------------------------------------------------------------

double Nonlinearity::g1(double t) const { return std::pow(std::abs(t), power - 1.0) * t; }

double Nonlinearity::G1(double t) const {
  return std::pow(std::abs(t), power + 1.0) / (power + 1.0);
}

double Nonlinearity::zeta_min() const {
  return std::pow(0.5 * (power + 1.0), 1.0 / (power - 1.0));
}

double G_value(double t, double p) { return Nonlinearity{p}.G(t); }
double g_value(double t, double p) { return Nonlinearity{p}.g(t); }

double zeta_min(double p) {
  require(p > 1.0, ErrorCode::invalid_argument, "exponent p must exceed 1");
  return Nonlinearity{p}.zeta_min();
}

double constraint_V(const ScalarField& f, double p) {
  const Nonlinearity nl{p};
  double sum = 0.0;
  for (double v : f.values) sum += nl.G(v);
  return f.grid.cell_volume() * sum;
}

double energy(const ScalarField& f, double s, double p, Normalization norm) {
  const double t = seminorm_spectral_squared(f, s);
  const double v = constraint_V(f, p);
  if (norm == Normalization::spectral) return 0.5 * t - v;
  return equivalence_constant(f.grid.dim(), s).value * t - v;
}

double lp_norm(const ScalarField& f, double q) {
  require(q >= 1.0 && std::isfinite(q), ErrorCode::invalid_argument, "L^q norm needs q in [1, inf)");
  double sum = 0.0;
  for (double v : f.values) sum += std::pow(std::abs(v), q);
  return std::pow(f.grid.cell_volume() * sum, 1.0 / q);
}

double sobolev_ratio(const ScalarField& f, double s) {
  const int dim = f.grid.dim();
  require(dim > 2.0 * s, ErrorCode::invalid_argument, "Sobolev ratio needs N > 2s");
  const double semi = seminorm_spectral(f, s);
  require(semi > 0.0, ErrorCode::invalid_argument, "Sobolev ratio undefined for zero seminorm");
  return lp_norm(f, 2.0 * dim / (dim - 2.0 * s)) / semi;
}

}  // namespace fracground
