#pragma once

// Counter-based random numbers: every draw is a pure function of a 64-bit key
// and a 64-bit counter, so results do not depend on evaluation order or on how
// work is split across threads.

#include <cstdint>
#include <span>
#include <vector>

namespace bernphase {

/// SplitMix64 finalizer (Steele, Lea & Flood; constants from Vigna's reference code).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stream tags keep independent uses of one user seed apart.
enum class Stream : std::uint64_t {
  EdgeField = 0x6564676566696c64ULL,
  Coupling = 0x636f75706c696e67ULL,
  Shift = 0x7368696674736571ULL,
  Percolation = 0x7065726373757276ULL,
};

/// Key for one trial of one stream.
constexpr std::uint64_t derive_key(std::uint64_t seed, Stream stream, std::uint64_t trial) noexcept {
  return splitmix64(splitmix64(seed ^ static_cast<std::uint64_t>(stream)) + splitmix64(~trial));
}

/// 64 random bits for (key, counter).
constexpr std::uint64_t counter_bits(std::uint64_t key, std::uint64_t counter) noexcept {
  return splitmix64(key ^ splitmix64(counter + 0x632BE59BD9B4E019ULL));
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr double counter_uniform(std::uint64_t key, std::uint64_t counter) noexcept {
  return to_unit(counter_bits(key, counter));
}

/// Inverse-CDF sampler over a finite alphabet.
class DiscreteSampler {
 public:
  DiscreteSampler() = default;
  explicit DiscreteSampler(std::span<const double> weights) {
    cdf_.reserve(weights.size());
    double acc = 0.0;
    for (double w : weights) {
      acc += w;
      cdf_.push_back(acc);
    }
    // Any normalization slack goes to the last symbol.
    if (!cdf_.empty()) cdf_.back() = 2.0;
  }

  std::size_t operator()(double u) const noexcept {
    std::size_t i = 0;
    while (u >= cdf_[i]) ++i;
    return i;
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace bernphase
