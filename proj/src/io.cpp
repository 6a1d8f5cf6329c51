// SPDX-License-Identifier: Apache-2.0

#include "tcrcg/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace tcrcg {
namespace {

constexpr char kMagic[4] = {'T', '3', 'B', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes{};
  for (std::size_t b = 0; b < sizeof(T); ++b) bytes[b] = static_cast<unsigned char>(value >> (8 * b));
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw FormatError("t3b: truncated input");
  T value = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) value |= static_cast<T>(bytes[b]) << (8 * b);
  return value;
}

// Next whitespace-delimited header token of a netpbm file, skipping comments.
std::size_t pnm_number(std::istream& in) {
  int c = in.get();
  while (in) {
    if (c == '#') {
      while (in && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (!in || !std::isdigit(c)) throw FormatError("ppm: malformed header");
  std::size_t v = 0;
  while (in && std::isdigit(c)) {
    v = v * 10 + static_cast<std::size_t>(c - '0');
    if (v > (1u << 24)) throw FormatError("ppm: header value too large");
    c = in.get();
  }
  // Exactly one whitespace byte separates the header from the raster.
  if (!std::isspace(c)) throw FormatError("ppm: malformed header");
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

unsigned char to_byte(double v) {
  if (!std::isfinite(v)) v = 0.0;
  return static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

void write_t3b(std::ostream& out, const Tensor3& a) {
  const Dims d = a.dims();
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (d.n1 > kMax || d.n2 > kMax || d.n3 > kMax) throw ShapeError("t3b: extent exceeds 32 bits");
  out.write(kMagic, 4);
  put_le(out, static_cast<std::uint32_t>(d.n1));
  put_le(out, static_cast<std::uint32_t>(d.n2));
  put_le(out, static_cast<std::uint32_t>(d.n3));
  for (double v : a.values()) put_le(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw std::runtime_error("t3b: write failed");
}

Tensor3 read_t3b(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || !std::equal(magic, magic + 4, kMagic)) throw FormatError("t3b: bad magic");
  Dims d;
  d.n1 = get_le<std::uint32_t>(in);
  d.n2 = get_le<std::uint32_t>(in);
  d.n3 = get_le<std::uint32_t>(in);
  if (d.n1 == 0 || d.n2 == 0 || d.n3 == 0) throw FormatError("t3b: zero extent " + to_string(d));
  Tensor3 a(d);
  for (double& v : a.values()) {
    v = std::bit_cast<double>(get_le<std::uint64_t>(in));
    if (std::isnan(v)) throw FormatError("t3b: NaN entry");
  }
  return a;
}

void save_t3b(const std::string& path, const Tensor3& a) {
  auto out = open_out(path);
  write_t3b(out, a);
}

Tensor3 load_t3b(const std::string& path) {
  auto in = open_in(path);
  return read_t3b(in);
}

Tensor3 read_ppm(std::istream& in) {
  char magic[2] = {};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '6') throw FormatError("ppm: only binary P6 is supported");
  const std::size_t cols = pnm_number(in);
  const std::size_t rows = pnm_number(in);
  const std::size_t maxval = pnm_number(in);
  if (rows == 0 || cols == 0) throw FormatError("ppm: empty image");
  if (maxval == 0 || maxval > 255) throw FormatError("ppm: only 8-bit images are supported");
  std::vector<unsigned char> raster(rows * cols * 3);
  in.read(reinterpret_cast<char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
  if (!in) throw FormatError("ppm: truncated raster");
  Tensor3 img(Dims{rows, cols, 3});
  const double scale = 1.0 / static_cast<double>(maxval);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t c = 0; c < 3; ++c) img(i, j, c) = raster[(i * cols + j) * 3 + c] * scale;
  return img;
}

Tensor3 load_ppm(const std::string& path) {
  auto in = open_in(path);
  return read_ppm(in);
}

void write_ppm(std::ostream& out, const Tensor3& img) {
  const Dims d = img.dims();
  if (d.n3 != 3) throw ShapeError("write_ppm: expected 3 channels, got " + to_string(d));
  out << "P6\n" << d.n2 << ' ' << d.n1 << "\n255\n";
  std::vector<unsigned char> raster(d.n1 * d.n2 * 3);
  for (std::size_t i = 0; i < d.n1; ++i)
    for (std::size_t j = 0; j < d.n2; ++j)
      for (std::size_t c = 0; c < 3; ++c) raster[(i * d.n2 + j) * 3 + c] = to_byte(img(i, j, c));
  out.write(reinterpret_cast<const char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
  if (!out) throw std::runtime_error("ppm: write failed");
}

void save_ppm(const std::string& path, const Tensor3& img) {
  auto out = open_out(path);
  write_ppm(out, img);
}

void write_pgm(std::ostream& out, std::size_t rows, std::size_t cols, const std::vector<double>& values) {
  if (values.size() != rows * cols) throw ShapeError("write_pgm: value count does not match raster");
  out << "P5\n" << cols << ' ' << rows << "\n255\n";
  std::vector<unsigned char> raster(values.size());
  std::transform(values.begin(), values.end(), raster.begin(), to_byte);
  out.write(reinterpret_cast<const char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
  if (!out) throw std::runtime_error("pgm: write failed");
}

}  // namespace tcrcg
