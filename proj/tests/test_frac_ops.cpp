#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "fracground/frac_ops.hpp"
#include "support.hpp"

using namespace fracground;
using fgtest::code_of;
using fgtest::gaussian;

namespace {

double inner(const ScalarField& a, const ScalarField& b) {
  double acc = 0.0;
  for (std::size_t n = 0; n < a.values.size(); ++n) acc += a.values[n] * b.values[n];
  return acc * a.grid.cell_volume();
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double worst = 0.0;
  for (std::size_t n = 0; n < a.values.size(); ++n) worst = std::max(worst, std::abs(a.values[n] - b.values[n]));
  return worst;
}

// pi^{N/2} Gamma(1-s) / (s 4^s Gamma(N/2 + s))
double equivalence_closed_form(int dim, double s) {
  return std::pow(std::numbers::pi, 0.5 * dim) * std::tgamma(1.0 - s) /
         (s * std::pow(4.0, s) * std::tgamma(0.5 * dim + s));
}

}  // namespace

TEST_CASE("spectral seminorm of a Gaussian equals the torus Riemann sum") {
  // Unitary transform of exp(-x^2/2) is exp(-xi^2/2), so the discrete sum is
  // sum_k |xi_k|^{2s} exp(-xi_k^2) (pi/L) up to aliasing, which is negligible here.
  for (double s : {0.25, 0.5, 0.75}) {
    const auto g = make_grid(1, 256, 16.0);
    const double dxi = std::numbers::pi / 16.0;
    double riemann = 0.0;
    for (int k = -128; k < 128; ++k) {
      const double xi = k * dxi;
      riemann += std::pow(std::abs(xi), 2.0 * s) * std::exp(-xi * xi) * dxi;
    }
    CHECK(seminorm_spectral_squared(gaussian(g), s) == doctest::Approx(riemann).epsilon(1e-12));
  }
}

TEST_CASE("frozen value of the Gaussian seminorm at M=256, L=16, s=1/2") {
  const auto g = make_grid(1, 256, 16.0);
  CHECK(seminorm_spectral_squared(gaussian(g), 0.5) == doctest::Approx(0.9935494734).epsilon(1e-9));
}

TEST_CASE("Gaussian seminorm converges to 1 with the kink error of |xi| sampled at spacing pi/L") {
  // The continuum value int |xi| exp(-xi^2) dxi is 1. The rectangle rule on the
  // kink at xi = 0 undershoots by dxi^2 / 6 to leading order.
  for (double L : {16.0, 32.0, 128.0}) {
    const int M = static_cast<int>(16 * L);
    const auto g = make_grid(1, M, L);
    const double dxi = std::numbers::pi / L;
    const double T = seminorm_spectral_squared(gaussian(g), 0.5);
    CHECK(1.0 - T == doctest::Approx(dxi * dxi / 6.0).epsilon(0.02));
  }
  const auto fine = make_grid(1, 4096, 256.0);
  CHECK(std::abs(seminorm_spectral_squared(gaussian(fine), 0.5) - 1.0) < 1e-4);
}

TEST_CASE("equivalence constant matches its closed form") {
  for (int dim : {1, 2, 3})
    for (double s : {0.25, 0.5, 0.75}) {
      CAPTURE(dim);
      CAPTURE(s);
      const auto A = equivalence_constant(dim, s);
      CHECK(A.value == doctest::Approx(equivalence_closed_form(dim, s)).epsilon(1e-10));
      CHECK(A.ratio() == doctest::Approx(2.0 * A.value));
    }
  CHECK(equivalence_constant(1, 0.5).value == doctest::Approx(std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("equivalence constant blows up like 1/(1-s)") {
  const double near = equivalence_constant(1, 0.99).value * 0.01;
  const double less = equivalence_constant(1, 0.95).value * 0.05;
  CHECK(near / less == doctest::Approx(1.0).epsilon(0.2));
  CHECK(code_of([] { equivalence_constant(1, 1.0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("order one is the classical Laplacian") {
  const auto g = make_grid(2, 128, 10.0);
  const auto f = gaussian(g);
  const auto lap = frac_laplacian(f, 1.0);
  const auto exact = ScalarField::sample(g, [](std::span<const double> x) {
    const double r2 = fgtest::r2_of(x);
    return (2.0 - r2) * std::exp(-0.5 * r2);
  });
  CHECK(max_abs_diff(lap, exact) < 1e-10);

  // Second-order finite differences approach the same field.
  const double h = g.spacing();
  const int M = g.points();
  double worst = 0.0;
  for (int i = 1; i < M - 1; ++i)
    for (int j = 1; j < M - 1; ++j) {
      auto at = [&](int a, int b) { return f.values[static_cast<std::size_t>(a) * M + b]; };
      const double fd = -(at(i + 1, j) + at(i - 1, j) + at(i, j + 1) + at(i, j - 1) - 4.0 * at(i, j)) / (h * h);
      worst = std::max(worst, std::abs(fd - lap.values[static_cast<std::size_t>(i) * M + j]));
    }
  CHECK(worst < h * h);
  CHECK(code_of([&] { frac_laplacian(f, 1.5); }) == ErrorCode::invalid_argument);
}

TEST_CASE("box modes are eigenfunctions") {
  const auto g = make_grid(2, 32, 3.0);
  const double k1 = 3.0 * std::numbers::pi / 3.0, k2 = 5.0 * std::numbers::pi / 3.0;
  const auto mode = ScalarField::sample(g, [&](std::span<const double> x) { return std::cos(k1 * x[0]) * std::cos(k2 * x[1]); });
  for (double s : {0.2, 0.5, 0.9}) {
    auto expected = mode;
    for (double& v : expected.values) v *= std::pow(k1 * k1 + k2 * k2, s);
    CHECK(max_abs_diff(frac_laplacian(mode, s), expected) < 1e-10);
  }
}

TEST_CASE("multipliers compose and are self-adjoint") {
  std::mt19937_64 rng(21);
  for (int dim : {1, 2, 3}) {
    const auto g = make_grid(dim, dim == 3 ? 16 : 64, 5.0);
    const auto f = fgtest::random_smooth(g, rng);
    const auto q = fgtest::random_smooth(g, rng);
    const auto twice = frac_laplacian(frac_laplacian(f, 0.3), 0.4);
    const auto once = frac_laplacian(f, 0.7);
    CHECK(max_abs_diff(twice, once) < 1e-10 * (1.0 + once.max_abs()));
    const double lhs = inner(frac_laplacian(f, 0.6), q);
    const double rhs = inner(f, frac_laplacian(q, 0.6));
    CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(lhs)));
    CHECK(inner(f, frac_laplacian(f, 0.6)) == doctest::Approx(seminorm_spectral_squared(f, 0.6)).epsilon(1e-10));
  }
}

TEST_CASE("power nonlinearity values") {
  CHECK(G_value(2.0, 3.0) == doctest::Approx(2.0));
  CHECK(G_value(-2.0, 3.0) == doctest::Approx(2.0));
  CHECK(zeta_min(3.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(G_value(zeta_min(2.5), 2.5) == doctest::Approx(0.0).epsilon(1e-14));
  for (double p : {1.5, 2.0, 3.0})
    for (double t : {-1.3, -0.2, 0.4, 1.7}) {
      const double eps = 1e-6;
      const double fd = (G_value(t + eps, p) - G_value(t - eps, p)) / (2.0 * eps);
      CHECK(g_value(t, p) == doctest::Approx(fd).epsilon(1e-7));
    }
  const Nonlinearity nl{3.0};
  CHECK(nl.G1(2.0) - nl.G2(2.0) == doctest::Approx(nl.G(2.0)));
  CHECK(nl.g1(-2.0) == doctest::Approx(-8.0));
}

TEST_CASE("energy is half the seminorm minus the constraint functional") {
  const auto g = make_grid(2, 64, 6.0);
  std::mt19937_64 rng(4);
  const auto f = fgtest::random_smooth(g, rng);
  const double T = seminorm_spectral_squared(f, 0.5);
  const double V = constraint_V(f, 2.0);
  CHECK(energy(f, 0.5, 2.0) == doctest::Approx(0.5 * T - V).epsilon(1e-12));
  const double A = equivalence_constant(2, 0.5).value;
  CHECK(energy(f, 0.5, 2.0, Normalization::gagliardo) == doctest::Approx(A * T - V).epsilon(1e-12));
}

TEST_CASE("L^q norms of a Gaussian and Hoelder interpolation") {
  const auto g = make_grid(2, 128, 10.0);
  for (double q : {1.0, 2.0, 3.0, 4.0})
    CHECK(std::pow(lp_norm(gaussian(g), q), q) == doctest::Approx(2.0 * std::numbers::pi / q).epsilon(1e-10));
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = fgtest::random_smooth(g, rng);
    // 1/3 = (1/3)/2 + (2/3)/4
    CHECK(lp_norm(f, 3.0) <= std::pow(lp_norm(f, 2.0), 1.0 / 3.0) * std::pow(lp_norm(f, 4.0), 2.0 / 3.0) * (1 + 1e-12));
  }
  CHECK(code_of([&] { lp_norm(gaussian(g), 0.5); }) == ErrorCode::invalid_argument);
}

TEST_CASE("direct seminorm of |f| never exceeds that of f") {
  const auto g = make_grid(2, 32, 4.0);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = fgtest::random_smooth(g, rng);
    auto mod = f;
    for (double& v : mod.values) v = std::abs(v);
    for (auto kind : {DirectKernel::periodized, DirectKernel::nearest_image})
      CHECK(seminorm_direct_squared(mod, 0.5, Reduction::deterministic, kind) <=
            seminorm_direct_squared(f, 0.5, Reduction::deterministic, kind) * (1 + 1e-12));
  }
}

TEST_CASE("nearest-image sum drops a positive far field") {
  const auto g = make_grid(1, 256, 16.0);
  const auto f = gaussian(g);
  const double periodized = seminorm_direct_squared(f, 0.5);
  const double nearest = seminorm_direct_squared(f, 0.5, Reduction::deterministic, DirectKernel::nearest_image);
  CHECK(nearest < periodized);
  // Far field of the kernel beyond |z| = L, paired with 2 |f|_2^2.
  const double tail = 2.0 * (2.0 / 16.0) * std::pow(lp_norm(f, 2.0), 2);
  CHECK(periodized - nearest == doctest::Approx(tail).epsilon(0.25));
}

TEST_CASE("direct to spectral ratio is field independent") {
  const auto g = make_grid(1, 256, 16.0);
  const double two_A = equivalence_constant(1, 0.5).ratio();
  std::mt19937_64 rng(17);
  std::vector<double> ratios;
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = fgtest::random_smooth(g, rng);
    ratios.push_back(seminorm_direct_squared(f, 0.5) / (two_A * seminorm_spectral_squared(f, 0.5)));
  }
  const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size();
  double var = 0.0;
  for (double r : ratios) var += (r - mean) * (r - mean);
  const double sd = std::sqrt(var / (ratios.size() - 1));
  CHECK(sd / mean <= 0.05);
  CHECK(mean == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("direct seminorm guards") {
  const auto big = make_grid(2, 128, 4.0);
  CHECK(code_of([&] { seminorm_direct_squared(gaussian(big), 0.5); }) == ErrorCode::grid_too_large);
  const auto g = make_grid(1, 64, 4.0);
  CHECK(code_of([&] { seminorm_direct_squared(gaussian(g), 1.0); }) == ErrorCode::invalid_argument);
  const auto f = gaussian(g);
  CHECK(seminorm_direct_squared(f, 0.5, Reduction::fast) ==
        doctest::Approx(seminorm_direct_squared(f, 0.5)).epsilon(1e-12));
}

TEST_CASE("Sobolev quotient is dilation invariant and bounded") {
  const auto g = make_grid(2, 128, 12.0);
  std::vector<double> q;
  for (double w : {0.7, 1.0, 1.4}) q.push_back(sobolev_ratio(gaussian(g, w), 0.5));
  CHECK(q[0] == doctest::Approx(q[1]).epsilon(0.02));
  CHECK(q[2] == doctest::Approx(q[1]).epsilon(0.02));
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) CHECK(sobolev_ratio(fgtest::random_smooth(g, rng), 0.5) < 2.0 * q[1]);
  CHECK(code_of([&] { sobolev_ratio(gaussian(make_grid(1, 64, 4.0)), 0.5); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { sobolev_ratio(ScalarField::zeros(g), 0.5); }) == ErrorCode::invalid_argument);
}
