#include "fracground/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

#include "fracground/error.hpp"

namespace fracground {

namespace {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian hosts are not supported");

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  } else {
    return v;
  }
}

template <class T>
void put(std::vector<unsigned char>& buf, std::size_t offset, T v) {
  const auto le = to_little(v);
  std::memcpy(buf.data() + offset, &le, sizeof(T));
}

template <class T>
T get(const std::vector<unsigned char>& buf, std::size_t offset) {
  T v;
  std::memcpy(&v, buf.data() + offset, sizeof(T));
  return to_little(v);
}

}  // namespace

void write_field(const ScalarField& f, const std::filesystem::path& path,
                 std::optional<double> order) {
  const auto& g = f.grid;
  std::vector<unsigned char> buf(kFieldHeaderBytes + 8 * g.size(), 0);
  std::memcpy(buf.data(), "FSF1", 4);
  buf[4] = kFieldVersion;
  buf[5] = static_cast<unsigned char>(g.dim());
  put<double>(buf, 8, g.half_width());
  put<std::uint32_t>(buf, 16, static_cast<std::uint32_t>(g.points()));
  put<double>(buf, 20, order.value_or(std::numeric_limits<double>::quiet_NaN()));
  for (std::size_t n = 0; n < g.size(); ++n)
    put<double>(buf, kFieldHeaderBytes + 8 * n, f.values[n]);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::io, "cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  require(static_cast<bool>(out), ErrorCode::io, "write failed: " + path.string());
}

FieldFile read_field_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::io, "cannot open for reading: " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());

  if (buf.size() < 4 || std::memcmp(buf.data(), "FSF1", 4) != 0)
    fail(ErrorCode::bad_magic, "not an FSF1 file: " + path.string());
  require(buf.size() >= kFieldHeaderBytes, ErrorCode::truncated,
          "FSF1 header truncated: " + path.string());
  if (buf[4] != kFieldVersion)
    fail(ErrorCode::version_mismatch,
         "unsupported FSF1 version " + std::to_string(buf[4]) + ": " + path.string());

  const int dim = buf[5];
  const double half_width = get<double>(buf, 8);
  const auto points = get<std::uint32_t>(buf, 16);
  const double order = get<double>(buf, 20);
  require(buf[6] == 0 && buf[7] == 0, ErrorCode::bad_header, "reserved header bytes not zero");
  require(dim >= 1 && dim <= 3, ErrorCode::bad_header,
          "bad dimension " + std::to_string(dim) + " in " + path.string());
  require(points >= 8 && points <= (1u << 24) && (points & (points - 1)) == 0,
          ErrorCode::bad_header, "bad points per axis " + std::to_string(points));
  require(half_width > 0.0 && std::isfinite(half_width), ErrorCode::bad_header,
          "bad half-width in " + path.string());

  const BoxGrid g = make_grid(dim, static_cast<int>(points), half_width);
  const std::size_t want = kFieldHeaderBytes + 8 * g.size();
  if (buf.size() < want)
    fail(ErrorCode::truncated, "FSF1 payload holds " +
                                   std::to_string((buf.size() - kFieldHeaderBytes) / 8) +
                                   " values, header declares " + std::to_string(g.size()));
  if (buf.size() > want)
    fail(ErrorCode::trailing_data, "FSF1 file has trailing bytes: " + path.string());

  std::vector<double> values(g.size());
  for (std::size_t n = 0; n < g.size(); ++n)
    values[n] = get<double>(buf, kFieldHeaderBytes + 8 * n);
  for (double v : values)
    require(std::isfinite(v), ErrorCode::bad_header, "FSF1 payload holds non-finite value");

  FieldFile file{ScalarField(g, std::move(values)), std::nullopt};
  if (!std::isnan(order)) file.order = order;
  return file;
}

ScalarField read_field(const std::filesystem::path& path) {
  return read_field_file(path).field;
}

}  // namespace fracground
