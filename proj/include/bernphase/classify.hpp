#pragma once

// Theorem-certified verdicts from exact thresholds: the dissipative / weakly
// mixing dichotomy at affinity exp(-delta/2), the Krieger trichotomy from the
// essential-range group, the free-group spectral radius, and the scan of the
// interpolation parameter t for the transition point t1.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bernphase/measure.hpp"
#include "bernphase/range_group.hpp"

namespace bernphase {

inline constexpr double kCriticalTolerance = 1e-12;

enum class Phase { Dissipative, CriticalDissipative, CriticalUnknown, WeaklyMixing };

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::Dissipative: return "Dissipative";
    case Phase::CriticalDissipative: return "CriticalDissipative";
    case Phase::CriticalUnknown: return "CriticalUnknown";
    case Phase::WeaklyMixing: return "WeaklyMixing";
  }
  return "?";
}

/// Position on the dissipative -> weakly mixing axis (critical cases share a rank).
inline int phase_rank(Phase p) {
  switch (p) {
    case Phase::Dissipative: return 0;
    case Phase::CriticalDissipative:
    case Phase::CriticalUnknown: return 1;
    case Phase::WeaklyMixing: return 2;
  }
  return -1;
}

struct Classification {
  Phase phase = Phase::CriticalUnknown;
  double affinity = 0.0;
  double threshold = 0.0;  // exp(-delta / 2)
  double delta = 0.0;
};

/// `regular_full_orbit` asserts a q-regular tree whose group has full
/// Poincare exponent log(q-1); only then is the critical case decided.
inline Classification classify_tree_action(double delta, double affinity, bool regular_full_orbit) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    detail::fail(ErrorKind::ParameterOutOfRange, "delta must be > 0");
  }
  if (!(affinity > 0.0 && affinity <= 1.0 + kNormalizationTolerance)) {
    detail::fail(ErrorKind::ParameterOutOfRange, "affinity must lie in (0,1]");
  }
  Classification c;
  c.affinity = affinity;
  c.delta = delta;
  c.threshold = std::exp(-0.5 * delta);
  if (std::abs(affinity - c.threshold) <= kCriticalTolerance) {
    c.phase = regular_full_orbit ? Phase::CriticalDissipative : Phase::CriticalUnknown;
  } else {
    c.phase = affinity > c.threshold ? Phase::WeaklyMixing : Phase::Dissipative;
  }
  return c;
}

inline Classification classify_tree_action(double delta, const MeasurePair& pair, bool regular_full_orbit) {
  return classify_tree_action(delta, pair.affinity(), regular_full_orbit);
}

enum class KriegerKind { FlowIsTranslation, TypeIIIlambda, TypeIII1 };

inline const char* to_string(KriegerKind k) {
  switch (k) {
    case KriegerKind::FlowIsTranslation: return "FlowIsTranslation";
    case KriegerKind::TypeIIIlambda: return "TypeIIIlambda";
    case KriegerKind::TypeIII1: return "TypeIII1";
  }
  return "?";
}

struct KriegerFlow {
  KriegerKind kind = KriegerKind::FlowIsTranslation;
  std::optional<double> lambda;  // exp(-a) for a lattice aZ
};

struct KriegerReport {
  RangeGroupReport lambda_group;  // Lambda: from the log-ratio differences
  RangeGroupReport sigma_group;   // Sigma: Lambda together with log Delta(G)
  KriegerFlow krieger;
  KriegerFlow flow_of_weights;
  std::string caveat = "valid only in the weakly mixing regime (affinity > exp(-delta/2))";
};

inline KriegerFlow flow_from_group(const RangeGroupReport& g) {
  switch (g.kind) {
    case RangeGroupKind::Trivial: return {KriegerKind::FlowIsTranslation, std::nullopt};
    case RangeGroupKind::Lattice: return {KriegerKind::TypeIIIlambda, std::exp(-*g.generator)};
    case RangeGroupKind::Dense: return {KriegerKind::TypeIII1, std::nullopt};
  }
  return {};
}

/// Does not check weak mixing; compose with classify_tree_action.
inline KriegerReport krieger_type(const MeasurePair& pair, std::span<const double> log_modular_generators = {}) {
  KriegerReport r;
  r.lambda_group = essential_range_group(pair);
  r.sigma_group = log_modular_generators.empty() ? r.lambda_group
                                                 : essential_range_group(pair, log_modular_generators);
  r.krieger = flow_from_group(r.lambda_group);
  r.flow_of_weights = flow_from_group(r.sigma_group);
  return r;
}

enum class SpectralRegime { Dissipative, WeaklyMixingNonamenable, StronglyErgodic };

inline const char* to_string(SpectralRegime r) {
  switch (r) {
    case SpectralRegime::Dissipative: return "Dissipative";
    case SpectralRegime::WeaklyMixingNonamenable: return "WeaklyMixingNonamenable";
    case SpectralRegime::StronglyErgodic: return "StronglyErgodic";
  }
  return "?";
}

struct SpectralReport {
  int d = 2;
  double affinity = 0.0;
  double rho_action = 0.0;
  double rho_group = 0.0;  // sqrt(2d-1) / d
  SpectralRegime regime = SpectralRegime::Dissipative;
};

/// The two branches of the spectral radius formula, exposed for continuity checks.
inline double spectral_upper_branch(int d, double a) {
  const double m = 2.0 * d - 1.0;
  return a * a / (2.0 * d) * (m + std::pow(a, -4.0));
}
inline double spectral_lower_branch(int d) { return std::sqrt(2.0 * d - 1.0) / d; }

/// Spectral radius of the averaged Koopman operator for the uniform
/// symmetric measure on the generators of F_d acting on its Cayley tree.
inline SpectralReport spectral_radius_free(int d, double affinity) {
  if (d < 2) detail::fail(ErrorKind::ParameterOutOfRange, "d must be >= 2");
  if (!(affinity > 0.0 && affinity <= 1.0 + kNormalizationTolerance)) {
    detail::fail(ErrorKind::ParameterOutOfRange, "affinity must lie in (0,1]");
  }
  SpectralReport r;
  r.d = d;
  r.affinity = affinity;
  const double m = 2.0 * d - 1.0;
  const double kink = std::pow(m, -0.25);
  const double diss = std::pow(m, -0.5);
  r.rho_group = spectral_lower_branch(d);
  r.rho_action = affinity > kink ? spectral_upper_branch(d, affinity) : r.rho_group;
  if (affinity <= diss) {
    r.regime = SpectralRegime::Dissipative;
  } else if (affinity <= kink) {
    r.regime = SpectralRegime::WeaklyMixingNonamenable;
  } else {
    r.regime = SpectralRegime::StronglyErgodic;
  }
  return r;
}

inline SpectralReport spectral_radius_free(int d, const MeasurePair& pair) {
  return spectral_radius_free(d, pair.affinity());
}

struct ScanPoint {
  double t;
  double affinity;
};

struct PhaseScanResult {
  std::vector<ScanPoint> grid;
  double threshold = 0.0;
  double delta = 0.0;
  std::optional<double> t1;
  int crossings = 0;
  bool monotone = true;
};

/// Affinity of the interpolated pair (mix(nu, mu0, t), mix(nu, mu1, t)).
inline double interpolated_affinity(const DiscreteMeasure& nu, const MeasurePair& pair, double t) {
  return affinity(mix(nu, pair.mu0(), t), mix(nu, pair.mu1(), t));
}

/// Scans t in [0, 1] for the crossing of the affinity curve with exp(-delta/2).
/// A unique crossing is refined by bisection; several crossings are only counted.
inline PhaseScanResult phase_scan(double delta, const DiscreteMeasure& nu, const MeasurePair& pair, int grid_points,
                                  double bisect_tol) {
  if (!(delta > 0.0)) detail::fail(ErrorKind::ParameterOutOfRange, "delta must be > 0");
  if (grid_points < 16) detail::fail(ErrorKind::ParameterOutOfRange, "grid needs >= 16 points");
  if (!(bisect_tol > 0.0)) detail::fail(ErrorKind::ParameterOutOfRange, "bisection tolerance must be > 0");
  detail::require_same_alphabet(nu, pair.mu0());

  PhaseScanResult res;
  res.delta = delta;
  res.threshold = std::exp(-0.5 * delta);
  const auto f = [&](double t) { return interpolated_affinity(nu, pair, t) - res.threshold; };

  res.grid.reserve(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    const double t = i == grid_points - 1 ? 1.0 : static_cast<double>(i) / (grid_points - 1);
    res.grid.push_back({t, interpolated_affinity(nu, pair, t)});
  }
  bool nonincreasing = true, nondecreasing = true;
  std::optional<std::size_t> bracket;
  for (std::size_t i = 0; i + 1 < res.grid.size(); ++i) {
    const double a = res.grid[i].affinity, b = res.grid[i + 1].affinity;
    nonincreasing = nonincreasing && b <= a;
    nondecreasing = nondecreasing && b >= a;
    if ((a > res.threshold) != (b > res.threshold)) {
      ++res.crossings;
      bracket = i;
    }
  }
  res.monotone = nonincreasing || nondecreasing;
  if (res.crossings != 1) return res;

  double lo = res.grid[*bracket].t, hi = res.grid[*bracket + 1].t;
  const bool lo_above = f(lo) > 0.0;
  while (hi - lo > bisect_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((f(mid) > 0.0) == lo_above) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  res.t1 = 0.5 * (lo + hi);
  return res;
}

}  // namespace bernphase
