#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <boost/math/distributions/normal.hpp>

namespace bernphase {

struct SampleSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;  // unbiased
  double se = 0.0;  // sd / sqrt(count)
};

/// Welford accumulation, order-dependent only through floating rounding.
inline SampleSummary summarize(std::span<const double> xs) {
  SampleSummary s;
  double m2 = 0.0;
  for (double x : xs) {
    ++s.count;
    const double delta = x - s.mean;
    s.mean += delta / static_cast<double>(s.count);
    m2 += delta * (x - s.mean);
  }
  if (s.count > 1) {
    s.sd = std::sqrt(m2 / static_cast<double>(s.count - 1));
    s.se = s.sd / std::sqrt(static_cast<double>(s.count));
  }
  return s;
}

/// Ordinary least-squares slope of ys against xs.
inline double ols_slope(std::span<const double> xs, std::span<const double> ys) {
  const auto n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

/// Two-sided standard normal critical value for the given confidence level.
inline double normal_critical(double confidence) {
  const boost::math::normal_distribution<double> z;
  return boost::math::quantile(z, 0.5 + 0.5 * confidence);
}

/// log(sum exp(xs)) without overflow; -inf for an empty range.
inline double log_sum_exp(std::span<const double> xs) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : xs) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - mx);
  return mx + std::log(s);
}

inline double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (!std::isfinite(b)) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace bernphase
