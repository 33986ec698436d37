#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include <doctest.h>

#include "fracground/error.hpp"
#include "fracground/field.hpp"

namespace fgtest {

using fracground::BoxGrid;
using fracground::ScalarField;

inline double r2_of(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return r2;
}

// exp(-|x|^2 / (2 w^2)) scaled by amp.
inline ScalarField gaussian(const BoxGrid& g, double width = 1.0, double amp = 1.0) {
  return ScalarField::sample(g, [&](std::span<const double> x) {
    return amp * std::exp(-r2_of(x) / (2.0 * width * width));
  });
}

// Sum of a few Gaussian blobs with random centers, widths and signed
// amplitudes, kept well inside the box so the periodic wrap is invisible.
inline ScalarField random_smooth(const BoxGrid& g, std::mt19937_64& rng, bool signed_amps = true) {
  const double L = g.half_width();
  std::uniform_real_distribution<double> center(-0.3 * L, 0.3 * L);
  std::uniform_real_distribution<double> width(0.08 * L, 0.2 * L);
  std::uniform_real_distribution<double> amp(signed_amps ? -1.0 : 0.2, 1.0);
  struct Blob { double c[3]; double w; double a; };
  Blob blobs[4];
  for (auto& b : blobs) {
    for (double& c : b.c) c = center(rng);
    b.w = width(rng);
    b.a = amp(rng);
  }
  return ScalarField::sample(g, [&](std::span<const double> x) {
    double v = 0.0;
    for (const auto& b : blobs) {
      double r2 = 0.0;
      for (std::size_t d = 0; d < x.size(); ++d) r2 += (x[d] - b.c[d]) * (x[d] - b.c[d]);
      v += b.a * std::exp(-r2 / (2.0 * b.w * b.w));
    }
    return v;
  });
}

// Runs fn and returns the code of the fracground::Error it throws.
inline fracground::ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const fracground::Error& e) {
    return e.code();
  }
  FAIL("expected fracground::Error");
  return fracground::ErrorCode::config;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("fracground_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fgtest
