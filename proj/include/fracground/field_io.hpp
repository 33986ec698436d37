#pragma once

#include <filesystem>
#include <optional>

#include "fracground/field.hpp"

namespace fracground {

// FSF1 layout (all little-endian):
//   0..3   magic "FSF1"
//   4      version (1)
//   5      dimension N
//   6..7   reserved, zero
//   8..15  half-width L, float64
//   16..19 points per axis M, uint32
//   20..27 fractional order s, float64 (NaN when unset)
//   28..   M^N float64 samples, row-major, last axis fastest
inline constexpr std::size_t kFieldHeaderBytes = 28;
inline constexpr unsigned char kFieldVersion = 1;

struct FieldFile {
  ScalarField field;
  std::optional<double> order;
};

void write_field(const ScalarField& f, const std::filesystem::path& path,
                 std::optional<double> order = std::nullopt);

/// Throws Error with bad_magic, version_mismatch, bad_header, truncated,
/// trailing_data or io.
FieldFile read_field_file(const std::filesystem::path& path);
ScalarField read_field(const std::filesystem::path& path);

}  // namespace fracground
