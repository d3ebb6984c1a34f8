#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bernphase/measure.hpp"

namespace bernphase::gen {

/// Random strictly positive probability vector; the last weight absorbs the
/// rounding so the sum is exactly representable within tolerance.
inline std::vector<double> random_weights(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(k);
  double s = 0.0;
  for (auto& x : w) s += (x = u(rng));
  for (auto& x : w) x /= s;
  return w;
}

inline DiscreteMeasure random_measure(std::mt19937_64& rng, std::size_t k) {
  return DiscreteMeasure::make(random_weights(rng, k));
}

inline std::size_t random_alphabet(std::mt19937_64& rng, std::size_t lo = 2, std::size_t hi = 8) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace bernphase::gen
