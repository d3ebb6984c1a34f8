#pragma once

// Statistical check of the coupling theta(x, x', j) = x if j = 0 else x',
// with (x, x', j) ~ mu x nu x lambda and lambda(0) = t: the pushforward law
// must be (1-t) nu + t mu, coordinatewise the factor map Psi.

#include <cstdint>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "bernphase/measure.hpp"
#include "bernphase/rng.hpp"

namespace bernphase {

inline std::size_t theta(std::size_t x, std::size_t x_prime, int j) { return j == 0 ? x : x_prime; }

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::vector<std::uint64_t> counts;
  std::vector<double> expected;
};

/// Pearson goodness-of-fit of observed counts against a probability vector.
inline ChiSquareResult chi_square_test(std::vector<std::uint64_t> counts, const DiscreteMeasure& target) {
  if (counts.size() != target.size()) detail::fail(ErrorKind::AlphabetMismatch, "count/target size mismatch");
  ChiSquareResult res;
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  res.expected.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    res.expected[i] = static_cast<double>(total) * target[i];
    const double diff = static_cast<double>(counts[i]) - res.expected[i];
    res.statistic += diff * diff / res.expected[i];
  }
  res.dof = static_cast<int>(counts.size()) - 1;
  if (res.dof > 0) {
    const boost::math::chi_squared_distribution<double> chi(res.dof);
    res.p_value = boost::math::cdf(boost::math::complement(chi, res.statistic));
  }
  res.counts = std::move(counts);
  return res;
}

inline ChiSquareResult coupling_pushforward_test(const DiscreteMeasure& nu, const DiscreteMeasure& mu, double t,
                                                 std::uint64_t samples, std::uint64_t seed) {
  detail::require_same_alphabet(nu, mu);
  detail::require_unit_interval(t, "t");
  if (samples < 1000) detail::fail(ErrorKind::ParameterOutOfRange, "coupling test needs >= 1000 samples");
  const DiscreteSampler draw_mu(mu.weights());
  const DiscreteSampler draw_nu(nu.weights());
  const std::uint64_t key = derive_key(seed, Stream::Coupling, 0);
  std::vector<std::uint64_t> counts(nu.size(), 0);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const std::size_t x = draw_mu(counter_uniform(key, 3 * i));
    const std::size_t x_prime = draw_nu(counter_uniform(key, 3 * i + 1));
    const int j = counter_uniform(key, 3 * i + 2) < t ? 0 : 1;
    ++counts[theta(x, x_prime, j)];
  }
  return chi_square_test(std::move(counts), mix(nu, mu, t));
}

}  // namespace bernphase
