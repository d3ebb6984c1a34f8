#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bernphase/error.hpp"
#include "bernphase/measure.hpp"

namespace bernphase {

inline constexpr double kMergeTolerance = 1e-12;
inline constexpr std::size_t kDefaultAtomCap = 1'000'000;

struct Atom {
  double value;  // nats
  double prob;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finitely supported law on the real line. Atoms are sorted by value, values
/// closer than kMergeTolerance are merged and values within the tolerance of
/// zero are snapped to exactly zero.
class ScalarDistribution {
 public:
  ScalarDistribution() : atoms_{{0.0, 1.0}} {}

  static ScalarDistribution point_mass(double value) {
    ScalarDistribution d;
    d.atoms_ = {{value, 1.0}};
    return d;
  }

  /// Sorts and merges arbitrary (value, prob) pairs.
  static ScalarDistribution from_atoms(std::vector<Atom> raw) {
    if (raw.empty()) detail::fail(ErrorKind::InvalidInput, "distribution needs at least one atom");
    double total = 0.0;
    for (const auto& a : raw) {
      if (!(a.prob > 0.0) || !std::isfinite(a.value)) {
        detail::fail(ErrorKind::InvalidInput, "atoms need finite values and positive probabilities");
      }
      total += a.prob;
    }
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
      detail::fail(ErrorKind::NotNormalized, "atom probabilities sum to " + std::to_string(total));
    }
    std::sort(raw.begin(), raw.end(), [](const Atom& x, const Atom& y) { return x.value < y.value; });
    ScalarDistribution d;
    d.atoms_.clear();
    d.atoms_.reserve(raw.size());
    double anchor = 0.0;
    for (const auto& a : raw) {
      if (!d.atoms_.empty() && a.value - anchor <= kMergeTolerance) {
        d.atoms_.back().prob += a.prob;
      } else {
        anchor = a.value;
        d.atoms_.push_back(a);
      }
    }
    for (auto& a : d.atoms_) {
      if (std::abs(a.value) <= kMergeTolerance) a.value = 0.0;
    }
    return d;
  }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  double total_probability() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.prob;
    return s;
  }

  double mean() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.prob * a.value;
    return s;
  }

  /// P(V >= x), counting atoms within the merge tolerance below x.
  double prob_at_least(double x) const {
    double s = 0.0;
    for (const auto& a : atoms_) {
      if (a.value >= x - kMergeTolerance) s += a.prob;
    }
    return s;
  }

  /// Sample by inverse CDF from a uniform u in [0,1).
  double quantile(double u) const {
    double acc = 0.0;
    for (const auto& a : atoms_) {
      acc += a.prob;
      if (u < acc) return a.value;
    }
    return atoms_.back().value;
  }

 private:
  std::vector<Atom> atoms_;
};

/// Law of the sum of independent draws from a and b.
inline ScalarDistribution convolve(const ScalarDistribution& a, const ScalarDistribution& b,
                                   std::size_t atom_cap = kDefaultAtomCap) {
  const std::size_t raw = a.size() * b.size();
  // Merging can only shrink the support; refuse outright when even a heavily
  // merged result could not fit.
  if (raw / 64 > atom_cap) {
    detail::fail(ErrorKind::AtomBudgetExceeded,
                 std::to_string(raw) + " raw atoms exceed cap " + std::to_string(atom_cap));
  }
  std::vector<Atom> sums;
  sums.reserve(raw);
  for (const auto& x : a.atoms()) {
    for (const auto& y : b.atoms()) sums.push_back({x.value + y.value, x.prob * y.prob});
  }
  // Renormalize away accumulated rounding so long convolution chains stay valid.
  double total = 0.0;
  for (const auto& s : sums) total += s.prob;
  for (auto& s : sums) s.prob /= total;
  auto out = ScalarDistribution::from_atoms(std::move(sums));
  if (out.size() > atom_cap) {
    detail::fail(ErrorKind::AtomBudgetExceeded,
                 std::to_string(out.size()) + " atoms exceed cap " + std::to_string(atom_cap));
  }
  return out;
}

/// phi(t) = E exp(t V).
inline double mgf(const ScalarDistribution& d, double t) {
  double s = 0.0;
  for (const auto& a : d.atoms()) s += a.prob * std::exp(t * a.value);
  return s;
}

/// phi'(t) = E V exp(t V).
inline double mgf_derivative(const ScalarDistribution& d, double t) {
  double s = 0.0;
  for (const auto& a : d.atoms()) s += a.prob * a.value * std::exp(t * a.value);
  return s;
}

/// TowardRoot: law of log(dmu1/dmu0) under mu0. AwayFromRoot: law of
/// log(dmu0/dmu1) under mu1.
inline ScalarDistribution log_ratio_distribution(const MeasurePair& pair, Direction direction) {
  const auto& law = pair.edge_law(direction);
  std::vector<Atom> raw;
  raw.reserve(pair.size());
  for (std::size_t i = 0; i < pair.size(); ++i) raw.push_back({pair.edge_value(direction, i), law[i]});
  return ScalarDistribution::from_atoms(std::move(raw));
}

/// Z = X + Y for independent X (toward the root) and Y (away from it).
inline ScalarDistribution edge_pair_sum(const MeasurePair& pair) {
  return convolve(log_ratio_distribution(pair, Direction::TowardRoot),
                  log_ratio_distribution(pair, Direction::AwayFromRoot));
}

struct ChernoffMinimum {
  double t_star;
  double value;
};

/// Minimizes phi(t) = E exp(t Z) over [0, 1] for a finite law Z.
///
/// phi is convex, so phi' is nondecreasing and the minimizer is the sign change
/// of phi'. Bisecting on phi' locates it to machine precision, whereas
/// comparing phi values directly stalls near sqrt(epsilon) at a quadratic
/// minimum.
inline ChernoffMinimum chernoff_min(const ScalarDistribution& z) {
  const double d0 = mgf_derivative(z, 0.0);
  const double d1 = mgf_derivative(z, 1.0);
  if (d0 >= 0.0 && d1 <= 0.0) {
    // Flat: phi is constant on [0,1] (point mass at zero).
    return {0.5, mgf(z, 0.5)};
  }
  if (d0 >= 0.0) return {0.0, mgf(z, 0.0)};
  if (d1 <= 0.0) return {1.0, mgf(z, 1.0)};
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 0.0; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (mgf_derivative(z, mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double t = 0.5 * (lo + hi);
  return {t, mgf(z, t)};
}

inline ChernoffMinimum chernoff_min(const MeasurePair& pair) { return chernoff_min(edge_pair_sum(pair)); }

}  // namespace bernphase
