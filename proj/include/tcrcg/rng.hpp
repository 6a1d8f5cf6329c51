// SPDX-License-Identifier: Apache-2.0
//
// Counter-based SplitMix64 generator ("splitmix64/v1").
//
// Output k of a stream with key s is mix(s + (k + 1) * 0x9E3779B97F4A7C15)
// where mix is the SplitMix64 finalizer. Uniform doubles take the top 53
// bits; bounded integers use rejection sampling on the full 64-bit word;
// normals use the Box-Muller transform with both variates consumed in
// order. Everything is specified in integer arithmetic except the final
// log/sqrt/cos of Box-Muller.

#ifndef TCRCG_RNG_HPP
#define TCRCG_RNG_HPP

#include <cstdint>
#include <optional>
#include <string_view>

namespace tcrcg {

inline constexpr std::string_view kRngName = "splitmix64/v1";

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derives an independent stream key from a base seed and a tag (trial id,
// purpose code, ...).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  return splitmix64_mix(base ^ splitmix64_mix(tag + 0x632BE59BD9B4E019ULL));
}

class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGamma;
    return splitmix64_mix(state_);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);

  double normal();

 private:
  std::uint64_t state_;
  std::optional<double> spare_;
};

}  // namespace tcrcg

#endif  // TCRCG_RNG_HPP
