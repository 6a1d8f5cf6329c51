// SPDX-License-Identifier: Apache-2.0
//
// Uniform sampling of entries with replacement and the multiplicity-weighted
// sampling operator R_Omega. Because indices can repeat, R_Omega is a
// diagonal operator whose weights are the multiplicities; it is not a
// projection when duplicates exist.

#ifndef TCRCG_SAMPLING_HPP
#define TCRCG_SAMPLING_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "tcrcg/tensor.hpp"

namespace tcrcg {

struct Index3 {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  std::uint32_t k = 0;
  friend bool operator==(const Index3&, const Index3&) = default;
};

// One distinct sampled entry: linear storage index and how often it was drawn.
struct SampledEntry {
  std::size_t linear = 0;
  std::uint32_t count = 0;
};

class SamplingSet {
 public:
  SamplingSet() = default;
  // Draw order is preserved; counts are derived. Throws ShapeError for
  // out-of-range indices.
  SamplingSet(Dims dims, std::vector<Index3> draws, std::optional<std::uint64_t> seed = std::nullopt);

  const Dims& dims() const { return dims_; }
  std::size_t size() const { return draws_.size(); }
  const std::vector<Index3>& draws() const { return draws_; }
  // Distinct entries sorted by linear index.
  const std::vector<SampledEntry>& support() const { return support_; }
  // Seed the draws were generated from; absent for derived sets.
  std::optional<std::uint64_t> seed() const { return seed_; }

  std::uint32_t multiplicity(std::size_t i, std::size_t j, std::size_t k) const;
  // m / (n1 n2 n3)
  double sampling_ratio() const;

 private:
  Dims dims_;
  std::vector<Index3> draws_;
  std::vector<SampledEntry> support_;
  std::optional<std::uint64_t> seed_;
};

// m i.i.d. uniform draws over the index grid, reproducible from the seed.
SamplingSet sample_omega(const Dims& dims, std::size_t m, std::uint64_t seed);

// Entry (i,j,k) of the result is multiplicity(i,j,k) * z(i,j,k).
Tensor3 apply_r_omega(const SamplingSet& omega, const Tensor3& z);

// sum over draws of x * y at the drawn entry, i.e. <x, R_Omega y>.
double sampled_inner(const SamplingSet& omega, const Tensor3& x, const Tensor3& y);

std::uint32_t max_multiplicity(const SamplingSet& omega);

// Splits the draw list into `groups` contiguous blocks of floor(m / groups)
// draws; the remainder goes to block 0.
std::vector<SamplingSet> partition_omega(const SamplingSet& omega, std::size_t groups);

// CSV with header "i,j,k,multiplicity", zero-based indices, one row per
// distinct entry in linear order.
void write_omega_csv(std::ostream& out, const SamplingSet& omega);
SamplingSet read_omega_csv(std::istream& in, const Dims& dims);

// Binary companion of T3B: "O3B1", u32 n1 n2 n3, u64 seed-present flag,
// u64 seed, u64 m, then m draws as three u32 each; little-endian.
void write_omega_binary(std::ostream& out, const SamplingSet& omega);
SamplingSet read_omega_binary(std::istream& in);

}  // namespace tcrcg

#endif  // TCRCG_SAMPLING_HPP
