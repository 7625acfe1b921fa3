#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace qbd {

// Each trajectory draws from independent mt19937_64 engines, one per
// substream, seeded with splitmix64(seed, substream). Uniform and exponential
// variates are computed here rather than through <random> distributions, whose
// output is implementation-defined, so records are identical across standard
// libraries.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64+splitmix64";

enum class Substream : std::uint64_t { arrivals = 1, thermal = 2, outcomes = 3 };

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t seed, Substream stream)
      : engine_(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream)))) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Exponential waiting time; infinite when rate is zero.
  double exponential(double rate) {
    if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
    return -std::log1p(-uniform()) / rate;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qbd
