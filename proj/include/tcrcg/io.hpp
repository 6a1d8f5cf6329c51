// SPDX-License-Identifier: Apache-2.0
//
// File formats: T3B dense tensors, binary PPM (P6) images and PGM (P5)
// rasters.
//
// T3B layout: "T3B1", u32 n1, u32 n2, u32 n3 (little-endian), then
// n1*n2*n3 little-endian IEEE doubles, i fastest, then j, then k.

#ifndef TCRCG_IO_HPP
#define TCRCG_IO_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcrcg/tensor.hpp"

namespace tcrcg {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_t3b(std::ostream& out, const Tensor3& a);
// Throws FormatError on a bad magic, zero extents, truncation or NaN.
Tensor3 read_t3b(std::istream& in);

void save_t3b(const std::string& path, const Tensor3& a);
Tensor3 load_t3b(const std::string& path);

// 8-bit P6 image as rows x cols x 3 with values in [0, 1].
Tensor3 read_ppm(std::istream& in);
Tensor3 load_ppm(const std::string& path);
// Values are clamped to [0, 1] and rounded to 8 bits. Requires n3 == 3.
void write_ppm(std::ostream& out, const Tensor3& img);
void save_ppm(const std::string& path, const Tensor3& img);

// 8-bit P5 raster from row-major values in [0, 1].
void write_pgm(std::ostream& out, std::size_t rows, std::size_t cols,
               const std::vector<double>& values);

}  // namespace tcrcg

#endif  // TCRCG_IO_HPP
