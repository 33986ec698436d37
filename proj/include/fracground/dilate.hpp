#pragma once

#include <string>
#include <vector>

#include "fracground/field.hpp"

namespace fracground {

/// Samples f(x / sigma) on the same grid by multilinear interpolation.
///
/// sigma must lie in [0.5, 2]; larger changes are composed from several calls.
/// Points falling outside the box read the clamped boundary value. When the
/// outermost shell of f carries more than 1e-6 max|f| a warning is appended
/// to `warnings` (if given), since the clamp is then visibly wrong.
ScalarField resample_dilate(const ScalarField& f, double sigma,
                            std::vector<std::string>* warnings = nullptr);

/// Composes clipped resample_dilate calls to reach an arbitrary sigma > 0.
ScalarField resample_dilate_staged(const ScalarField& f, double sigma,
                                   std::vector<std::string>* warnings = nullptr);

}  // namespace fracground
