#pragma once

// Closed subgroup of R generated by the differences of log-likelihood ratios:
// trivial, a lattice aZ, or dense. Deciding commensurability of floats is a
// heuristic; the tolerances below are the contract.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "bernphase/measure.hpp"

namespace bernphase {

struct RangeGroupOptions {
  double zero_tolerance = 1e-12;       // differences at or below this are zero
  double remainder_tolerance = 1e-9;   // Euclid stops once a remainder drops below this
  double multiple_tolerance = 1e-9;    // relative slack for d = n a
  std::int64_t denominator_cap = 1'000'000;
};

enum class RangeGroupKind { Trivial, Lattice, Dense };

inline const char* to_string(RangeGroupKind k) {
  switch (k) {
    case RangeGroupKind::Trivial: return "Trivial";
    case RangeGroupKind::Lattice: return "Lattice";
    case RangeGroupKind::Dense: return "Dense";
  }
  return "?";
}

struct RangeGroupReport {
  RangeGroupKind kind = RangeGroupKind::Trivial;
  std::optional<double> generator;  // present iff Lattice
  std::vector<double> witnesses;    // positive differences examined, ascending
  bool heuristic = false;           // set when the verdict rests on the float tolerances
};

namespace detail {

/// Real Euclidean algorithm; remainders within `tol` of zero or of the divisor count as exact.
inline double real_gcd(double a, double b, double tol) {
  if (a < b) std::swap(a, b);
  while (b > tol) {
    double r = std::fmod(a, b);
    if (b - r <= tol) r = 0.0;
    a = b;
    b = r;
  }
  return a;
}

struct Rational {
  std::int64_t num;
  std::int64_t den;
};

/// First continued-fraction convergent p/q of x with |x - p/q| <= tol and q <= qmax.
inline std::optional<Rational> convergent_within(double x, double tol, std::int64_t qmax) {
  std::int64_t h_prev = 0, h = 1, k_prev = 1, k = 0;
  double y = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(y);
    if (fl > 9.0e15) return std::nullopt;
    const auto a = static_cast<std::int64_t>(fl);
    const std::int64_t h_next = a * h + h_prev;
    const std::int64_t k_next = a * k + k_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    if (k > qmax) return std::nullopt;
    if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) <= tol) return Rational{h, k};
    const double frac = y - fl;
    if (frac <= 0.0) return Rational{h, k};
    y = 1.0 / frac;
  }
  return std::nullopt;
}

/// Generator of the group spanned by `diffs` (ascending, positive) via rational
/// approximation of each ratio to the smallest element.
inline std::optional<double> continued_fraction_generator(std::span<const double> diffs,
                                                          const RangeGroupOptions& opt) {
  const double r = diffs.front();
  std::vector<Rational> ratios;
  std::int64_t lcm = 1;
  for (double d : diffs) {
    auto q = convergent_within(d / r, opt.multiple_tolerance * d / r, opt.denominator_cap);
    if (!q) return std::nullopt;
    ratios.push_back(*q);
    lcm = std::lcm(lcm, q->den);
    if (lcm > opt.denominator_cap) return std::nullopt;
  }
  std::int64_t g = 0;
  for (const auto& q : ratios) g = std::gcd(g, q.num * (lcm / q.den));
  return r * static_cast<double>(g) / static_cast<double>(lcm);
}

inline RangeGroupReport classify_differences(std::vector<double> diffs, const RangeGroupOptions& opt) {
  RangeGroupReport report;
  std::sort(diffs.begin(), diffs.end());
  diffs.erase(std::unique(diffs.begin(), diffs.end(),
                          [&](double x, double y) { return std::abs(x - y) <= opt.zero_tolerance; }),
              diffs.end());
  report.witnesses = diffs;
  if (diffs.empty()) return report;

  double a = diffs.front();
  for (std::size_t i = 1; i < diffs.size(); ++i) a = real_gcd(a, diffs[i], opt.remainder_tolerance);

  bool integral = a > opt.remainder_tolerance;
  for (double d : diffs) {
    if (!integral) break;
    const double n = std::round(d / a);
    integral = n >= 1.0 && n <= static_cast<double>(opt.denominator_cap) &&
               std::abs(d - n * a) <= opt.multiple_tolerance * d;
  }
  const auto cf = continued_fraction_generator(diffs, opt);
  if (integral && cf && std::abs(*cf - a) <= opt.multiple_tolerance * a) {
    report.kind = RangeGroupKind::Lattice;
    report.generator = a;
  } else {
    report.kind = RangeGroupKind::Dense;
    report.heuristic = true;
  }
  return report;
}

}  // namespace detail

/// Subgroup generated by log(dmu0/dmu1)(x) - log(dmu0/dmu1)(x'), optionally
/// extended by extra generators (log of modular function values).
inline RangeGroupReport essential_range_group(const MeasurePair& pair,
                                              std::span<const double> extra_generators = {},
                                              const RangeGroupOptions& opt = {}) {
  const auto lr = pair.log_ratios();
  std::vector<double> diffs;
  for (std::size_t i = 0; i < lr.size(); ++i) {
    for (std::size_t j = i + 1; j < lr.size(); ++j) {
      const double d = std::abs(lr[i] - lr[j]);
      if (d > opt.zero_tolerance) diffs.push_back(d);
    }
  }
  for (double g : extra_generators) {
    if (std::abs(g) > opt.zero_tolerance) diffs.push_back(std::abs(g));
  }
  return detail::classify_differences(std::move(diffs), opt);
}

}  // namespace bernphase
