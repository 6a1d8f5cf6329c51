// SPDX-License-Identifier: Apache-2.0

#include "tcrcg/sampling.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tcrcg/rng.hpp"

namespace tcrcg {
namespace {

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
  if (!in) throw std::runtime_error("omega binary: truncated input");
  T value = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) value |= static_cast<T>(bytes[b]) << (8 * b);
  return value;
}

}  // namespace

SamplingSet::SamplingSet(Dims dims, std::vector<Index3> draws, std::optional<std::uint64_t> seed)
    : dims_(dims), draws_(std::move(draws)), seed_(seed) {
  std::vector<std::size_t> linear;
  linear.reserve(draws_.size());
  for (const auto& d : draws_) {
    if (d.i >= dims_.n1 || d.j >= dims_.n2 || d.k >= dims_.n3) {
      throw ShapeError("sampling index (" + std::to_string(d.i) + "," + std::to_string(d.j) + "," +
                       std::to_string(d.k) + ") outside " + to_string(dims_));
    }
    linear.push_back(d.i + dims_.n1 * (d.j + dims_.n2 * static_cast<std::size_t>(d.k)));
  }
  std::sort(linear.begin(), linear.end());
  for (std::size_t p = 0; p < linear.size();) {
    std::size_t q = p;
    while (q < linear.size() && linear[q] == linear[p]) ++q;
    support_.push_back(SampledEntry{linear[p], static_cast<std::uint32_t>(q - p)});
    p = q;
  }
}

std::uint32_t SamplingSet::multiplicity(std::size_t i, std::size_t j, std::size_t k) const {
  const std::size_t key = i + dims_.n1 * (j + dims_.n2 * k);
  auto it = std::lower_bound(support_.begin(), support_.end(), key,
                             [](const SampledEntry& e, std::size_t v) { return e.linear < v; });
  return it != support_.end() && it->linear == key ? it->count : 0;
}

double SamplingSet::sampling_ratio() const {
  return static_cast<double>(draws_.size()) / static_cast<double>(dims_.size());
}

SamplingSet sample_omega(const Dims& dims, std::size_t m, std::uint64_t seed) {
  require_nonempty(dims, "sample_omega");
  if (m == 0) throw std::invalid_argument("sample_omega: m must be positive");
  SplitMix64 rng(seed);
  std::vector<Index3> draws;
  draws.reserve(m);
  for (std::size_t t = 0; t < m; ++t) {
    Index3 d;
    d.i = static_cast<std::uint32_t>(rng.below(dims.n1));
    d.j = static_cast<std::uint32_t>(rng.below(dims.n2));
    d.k = static_cast<std::uint32_t>(rng.below(dims.n3));
    draws.push_back(d);
  }
  return SamplingSet(dims, std::move(draws), seed);
}

Tensor3 apply_r_omega(const SamplingSet& omega, const Tensor3& z) {
  require_same_dims(omega.dims(), z.dims(), "apply_r_omega");
  Tensor3 out(z.dims());
  auto src = z.values();
  auto dst = out.values();
  for (const auto& e : omega.support()) dst[e.linear] = e.count * src[e.linear];
  return out;
}

double sampled_inner(const SamplingSet& omega, const Tensor3& x, const Tensor3& y) {
  require_same_dims(omega.dims(), x.dims(), "sampled_inner");
  require_same_dims(omega.dims(), y.dims(), "sampled_inner");
  auto xv = x.values();
  auto yv = y.values();
  double acc = 0.0;
  for (const auto& e : omega.support()) acc += e.count * xv[e.linear] * yv[e.linear];
  return acc;
}

std::uint32_t max_multiplicity(const SamplingSet& omega) {
  std::uint32_t m = 0;
  for (const auto& e : omega.support()) m = std::max(m, e.count);
  return m;
}

std::vector<SamplingSet> partition_omega(const SamplingSet& omega, std::size_t groups) {
  const std::size_t m = omega.size();
  if (groups == 0 || groups > m) {
    throw std::invalid_argument("partition_omega: cannot split " + std::to_string(m) +
                                " draws into " + std::to_string(groups) + " groups");
  }
  const std::size_t base = m / groups;
  const std::size_t first = base + m % groups;
  std::vector<SamplingSet> out;
  out.reserve(groups);
  const auto& draws = omega.draws();
  std::size_t start = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t len = g == 0 ? first : base;
    std::vector<Index3> part(draws.begin() + static_cast<std::ptrdiff_t>(start),
                             draws.begin() + static_cast<std::ptrdiff_t>(start + len));
    if (groups == 1) {
      out.emplace_back(omega.dims(), std::move(part), omega.seed());
    } else {
      out.emplace_back(omega.dims(), std::move(part));
    }
    start += len;
  }
  return out;
}

void write_omega_csv(std::ostream& out, const SamplingSet& omega) {
  const Dims d = omega.dims();
  out << "i,j,k,multiplicity\n";
  for (const auto& e : omega.support()) {
    const std::size_t i = e.linear % d.n1;
    const std::size_t j = (e.linear / d.n1) % d.n2;
    const std::size_t k = e.linear / d.slice_size();
    out << i << ',' << j << ',' << k << ',' << e.count << '\n';
  }
}

SamplingSet read_omega_csv(std::istream& in, const Dims& dims) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("i,j,k,multiplicity", 0) != 0) {
    throw std::runtime_error("omega csv: missing header 'i,j,k,multiplicity'");
  }
  std::vector<Index3> draws;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    long long i = -1, j = -1, k = -1, c = -1;
    char s1 = 0, s2 = 0, s3 = 0;
    row >> i >> s1 >> j >> s2 >> k >> s3 >> c;
    if (!row || s1 != ',' || s2 != ',' || s3 != ',' || i < 0 || j < 0 || k < 0 || c < 1) {
      throw std::runtime_error("omega csv: malformed row " + std::to_string(lineno));
    }
    for (long long t = 0; t < c; ++t) {
      draws.push_back(Index3{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                             static_cast<std::uint32_t>(k)});
    }
  }
  return SamplingSet(dims, std::move(draws));
}

void write_omega_binary(std::ostream& out, const SamplingSet& omega) {
  out.write("O3B1", 4);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(omega.dims().n1));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(omega.dims().n2));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(omega.dims().n3));
  put_le<std::uint64_t>(out, omega.seed().has_value() ? 1 : 0);
  put_le<std::uint64_t>(out, omega.seed().value_or(0));
  put_le<std::uint64_t>(out, omega.size());
  for (const auto& d : omega.draws()) {
    put_le<std::uint32_t>(out, d.i);
    put_le<std::uint32_t>(out, d.j);
    put_le<std::uint32_t>(out, d.k);
  }
}

SamplingSet read_omega_binary(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "O3B1", 4) != 0) throw std::runtime_error("omega binary: bad magic");
  Dims d;
  d.n1 = get_le<std::uint32_t>(in);
  d.n2 = get_le<std::uint32_t>(in);
  d.n3 = get_le<std::uint32_t>(in);
  const bool has_seed = get_le<std::uint64_t>(in) != 0;
  const std::uint64_t seed = get_le<std::uint64_t>(in);
  const std::uint64_t m = get_le<std::uint64_t>(in);
  std::vector<Index3> draws;
  draws.reserve(m);
  for (std::uint64_t t = 0; t < m; ++t) {
    Index3 x;
    x.i = get_le<std::uint32_t>(in);
    x.j = get_le<std::uint32_t>(in);
    x.k = get_le<std::uint32_t>(in);
    draws.push_back(x);
  }
  return SamplingSet(d, std::move(draws), has_seed ? std::optional<std::uint64_t>(seed) : std::nullopt);
}

}  // namespace tcrcg
