#pragma once

// Finite probability measures with strictly positive weights, the Hellinger
// geometry on them and the convex interpolation (1-t)nu + t mu.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bernphase/error.hpp"

namespace bernphase {

inline constexpr double kNormalizationTolerance = 1e-9;

/// Strictly positive probability weights on the alphabet {0, ..., size-1}.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;

  /// Validates but never renormalizes; the caller owns exactness.
  static DiscreteMeasure make(std::vector<double> weights) {
    if (weights.empty()) {
      detail::fail(ErrorKind::InvalidInput, "a measure needs at least one weight");
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
        detail::fail(ErrorKind::NonPositiveWeight,
                     "weight " + std::to_string(i) + " is " + std::to_string(weights[i]));
      }
    }
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(sum - 1.0) > kNormalizationTolerance) {
      throw NotNormalizedError(sum);
    }
    DiscreteMeasure m;
    m.weights_ = std::move(weights);
    return m;
  }

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }

  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

  class NotNormalizedError : public Error {
   public:
    explicit NotNormalizedError(double sum)
        : Error(ErrorKind::NotNormalized, "weights sum to " + format_sum(sum)), sum_(sum) {}
    double sum() const noexcept { return sum_; }

   private:
    static std::string format_sum(double s) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", s);
      return buf;
    }
    double sum_;
  };

 private:
  std::vector<double> weights_;
};

inline DiscreteMeasure make_measure(std::vector<double> weights) {
  return DiscreteMeasure::make(std::move(weights));
}

namespace detail {
inline void require_same_alphabet(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.size() != b.size()) {
    fail(ErrorKind::AlphabetMismatch,
         "alphabet sizes " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
}
}  // namespace detail

/// Bhattacharyya coefficient sum_i sqrt(mu_i nu_i) = 1 - H^2.
inline double affinity(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  detail::require_same_alphabet(mu, nu);
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += std::sqrt(mu[i] * nu[i]);
  return s;
}

/// Squared Hellinger distance H^2 = 1 - sum_i sqrt(mu_i nu_i), clamped into [0, 1).
inline double hellinger_sq(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const double h2 = 1.0 - affinity(mu, nu);
  return std::clamp(h2, 0.0, std::nextafter(1.0, 0.0));
}

/// Componentwise (1-t) nu + t mu.
inline DiscreteMeasure mix(const DiscreteMeasure& nu, const DiscreteMeasure& mu, double t) {
  detail::require_same_alphabet(nu, mu);
  detail::require_unit_interval(t, "t");
  if (t == 0.0) return nu;
  if (t == 1.0) return mu;
  std::vector<double> w(nu.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = (1.0 - t) * nu[i] + t * mu[i];
  // A convex combination of two normalized vectors is normalized up to rounding.
  return DiscreteMeasure::make(std::move(w));
}

/// Product measure on the alphabet {0..a-1} x {0..b-1}, flattened row-major.
inline DiscreteMeasure product(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  std::vector<double> w;
  w.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) w.push_back(a[i] * b[j]);
  }
  return DiscreteMeasure::make(std::move(w));
}

enum class Direction { TowardRoot, AwayFromRoot };

inline const char* to_string(Direction d) {
  return d == Direction::TowardRoot ? "TowardRoot" : "AwayFromRoot";
}

/// Ordered pair (mu0, mu1) with cached log(mu0(i)/mu1(i)).
class MeasurePair {
 public:
  MeasurePair(DiscreteMeasure mu0, DiscreteMeasure mu1) : mu0_(std::move(mu0)), mu1_(std::move(mu1)) {
    detail::require_same_alphabet(mu0_, mu1_);
    log_ratios_.resize(mu0_.size());
    for (std::size_t i = 0; i < mu0_.size(); ++i) {
      log_ratios_[i] = std::log(mu0_[i]) - std::log(mu1_[i]);
    }
  }

  const DiscreteMeasure& mu0() const noexcept { return mu0_; }
  const DiscreteMeasure& mu1() const noexcept { return mu1_; }
  std::size_t size() const noexcept { return mu0_.size(); }
  std::span<const double> log_ratios() const noexcept { return log_ratios_; }

  /// Sampling law of an edge symbol: mu0 toward the root, mu1 away from it.
  const DiscreteMeasure& edge_law(Direction d) const noexcept {
    return d == Direction::TowardRoot ? mu0_ : mu1_;
  }

  /// X_e at symbol i: log(dmu1/dmu0) toward the root, log(dmu0/dmu1) away.
  double edge_value(Direction d, std::size_t symbol) const {
    return d == Direction::TowardRoot ? -log_ratios_[symbol] : log_ratios_[symbol];
  }

  double affinity() const { return bernphase::affinity(mu0_, mu1_); }
  double hellinger_sq() const { return bernphase::hellinger_sq(mu0_, mu1_); }

  /// The pair (mix(nu, mu0, t), mix(nu, mu1, t)).
  MeasurePair interpolate(const DiscreteMeasure& nu, double t) const {
    return MeasurePair(mix(nu, mu0_, t), mix(nu, mu1_, t));
  }

 private:
  DiscreteMeasure mu0_;
  DiscreteMeasure mu1_;
  std::vector<double> log_ratios_;
};

/// Symmetric binary pair (p, 1-p) / (1-p, p) with the given affinity in (0, 1].
inline MeasurePair symmetric_binary_pair(double target_affinity) {
  if (!(target_affinity > 0.0 && target_affinity <= 1.0)) {
    detail::fail(ErrorKind::ParameterOutOfRange, "affinity must lie in (0,1]");
  }
  // 2 sqrt(p(1-p)) = a  =>  p = (1 + sqrt(1 - a^2)) / 2
  const double p = 0.5 * (1.0 + std::sqrt(1.0 - target_affinity * target_affinity));
  return MeasurePair(DiscreteMeasure::make({p, 1.0 - p}), DiscreteMeasure::make({1.0 - p, p}));
}

/// Operator norm of F -> t F + (1-t) nu(F) 1 from the mean-zero functions of
/// L^2(mix(nu, mu, t)) into L^2(mu). Bounded by sqrt(t).
inline double site_contraction_norm(const DiscreteMeasure& nu, const DiscreteMeasure& mu, double t) {
  detail::require_same_alphabet(nu, mu);
  if (!(t > 0.0 && t <= 1.0)) {
    detail::fail(ErrorKind::ParameterOutOfRange, "t must lie in (0,1], got " + std::to_string(t));
  }
  const auto k = static_cast<Eigen::Index>(nu.size());
  const DiscreteMeasure m = mix(nu, mu, t);

  Eigen::MatrixXd A(k, k);  // the map on raw coordinate vectors
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      A(i, j) = (1.0 - t) * nu[static_cast<std::size_t>(j)] + (i == j ? t : 0.0);
    }
  }
  Eigen::VectorXd sqrt_m(k), sqrt_mu(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    sqrt_m(i) = std::sqrt(m[static_cast<std::size_t>(i)]);
    sqrt_mu(i) = std::sqrt(mu[static_cast<std::size_t>(i)]);
  }
  // Orthonormal coordinates: u = D_m^{1/2} F, image coordinates D_mu^{1/2} G.
  Eigen::MatrixXd B = sqrt_mu.asDiagonal() * A * sqrt_m.cwiseInverse().asDiagonal();
  // Mean zero under m is orthogonality to sqrt(m) in the u coordinates.
  const Eigen::VectorXd e = sqrt_m / sqrt_m.norm();
  const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(k, k) - e * e.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B * P);
  return svd.singularValues()(0);
}

}  // namespace bernphase
