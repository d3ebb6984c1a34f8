#pragma once

// Finite-depth evidence for the conservative/dissipative dichotomy. For a
// tree action the orbit sum is T_n(x) = sum_{d(rho,v) <= n} exp(S_v(x)); for
// the Z-shift preset it is T_m(x) = sum_{|k| <= m} dk mu / d mu (x). Neither
// statistic certifies anything; verdicts are labelled as evidence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "bernphase/field.hpp"
#include "bernphase/parallel.hpp"
#include "bernphase/rng.hpp"
#include "bernphase/stats.hpp"

namespace bernphase {

enum class Evidence { RecurrentEvidence, DissipativeEvidence, Inconclusive };

inline const char* to_string(Evidence e) {
  switch (e) {
    case Evidence::RecurrentEvidence: return "RecurrentEvidence";
    case Evidence::DissipativeEvidence: return "DissipativeEvidence";
    case Evidence::Inconclusive: return "Inconclusive";
  }
  return "?";
}

inline constexpr double kDefaultCauchyEpsilon = 1e-6;
inline constexpr double kSlopeConfidence = 0.99;

struct ConfidenceInterval {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct RecurrenceDiagnostic {
  std::vector<int> depths;                  // n (tree radius) or m (shift range), 0..N
  std::vector<std::vector<double>> log_T;   // [trial][depth]
  std::vector<double> mean_log_T;           // per depth
  int window_begin = 0;                     // regression window, inclusive
  int window_end = 0;
  ConfidenceInterval slope;                 // d log T_n / dn, per-trial regressions
  ConfidenceInterval tail_slope;            // growth of the newest orbit terms
  double tail_boundary = 0.0;               // tail slope separating summable from not
  double max_relative_increment = 0.0;      // max over trials of (T_N - T_{N-1}) / T_N
  double epsilon = kDefaultCauchyEpsilon;
  double confidence = kSlopeConfidence;
  Evidence verdict = Evidence::Inconclusive;
  bool truncation_bias = false;
};

namespace detail {

/// Shared verdict logic. `log_terms[trial][n]` is the log of the orbit terms
/// first included at depth n; `tail_x[n]` is the abscissa against which their
/// growth is regressed and `boundary` the slope below which the terms are
/// summable (0 for exponential scales, -1 against log m).
inline RecurrenceDiagnostic assess_growth(std::vector<std::vector<double>> log_T,
                                          const std::vector<std::vector<double>>& log_terms,
                                          const std::vector<double>& tail_x, double boundary, double epsilon) {
  RecurrenceDiagnostic d;
  const std::size_t trials = log_T.size();
  const std::size_t last = log_T.front().size() - 1;
  d.depths.resize(last + 1);
  for (std::size_t n = 0; n <= last; ++n) d.depths[n] = static_cast<int>(n);
  d.window_begin = static_cast<int>((last + 1) / 2);
  d.window_end = static_cast<int>(last);
  d.tail_boundary = boundary;
  d.epsilon = epsilon;

  std::vector<double> xs, tx;
  for (int n = d.window_begin; n <= d.window_end; ++n) {
    xs.push_back(n);
    tx.push_back(tail_x[static_cast<std::size_t>(n)]);
  }
  std::vector<double> slopes(trials), tails(trials), ys, ts;
  for (std::size_t i = 0; i < trials; ++i) {
    ys.assign(log_T[i].begin() + d.window_begin, log_T[i].end());
    ts.assign(log_terms[i].begin() + d.window_begin, log_terms[i].end());
    slopes[i] = ols_slope(xs, ys);
    tails[i] = ols_slope(tx, ts);
    d.max_relative_increment = std::max(d.max_relative_increment, std::exp(log_terms[i][last] - log_T[i][last]));
  }
  const double z = normal_critical(d.confidence);
  const auto ci = [z](const std::vector<double>& v) {
    const auto s = summarize(v);
    return ConfidenceInterval{s.mean, s.mean - z * s.se, s.mean + z * s.se};
  };
  d.slope = ci(slopes);
  d.tail_slope = ci(tails);

  d.mean_log_T.assign(last + 1, 0.0);
  for (std::size_t n = 0; n <= last; ++n) {
    std::vector<double> col(trials);
    for (std::size_t i = 0; i < trials; ++i) col[i] = log_T[i][n];
    d.mean_log_T[n] = summarize(col).mean;
  }

  const bool converged = d.max_relative_increment < epsilon;
  if (converged && d.tail_slope.upper < boundary) {
    d.verdict = Evidence::DissipativeEvidence;
  } else if (!converged && d.slope.lower > 0.0 && d.tail_slope.lower > boundary) {
    d.verdict = Evidence::RecurrentEvidence;
  } else {
    d.verdict = Evidence::Inconclusive;
  }
  d.log_T = std::move(log_T);
  return d;
}

}  // namespace detail

struct RecurrenceOptions {
  double epsilon = kDefaultCauchyEpsilon;
  unsigned threads = 0;
  std::uint64_t vertex_cap = kDefaultVertexCap;
};

/// Growth of T_n over `trials` independent edge fields of the tree action.
inline RecurrenceDiagnostic recurrence_diagnostic(const TreeSpec& spec, const MeasurePair& pair, int depth,
                                                  int trials, std::uint64_t seed, const RecurrenceOptions& opt = {}) {
  if (trials < 30) detail::fail(ErrorKind::ParameterOutOfRange, "recurrence diagnostic needs >= 30 trials");
  if (depth < 4) detail::fail(ErrorKind::ParameterOutOfRange, "recurrence diagnostic needs depth >= 4");
  std::uint64_t vertices = 0;
  try {
    vertices = ball_size(spec, depth);
  } catch (const Error&) {
    detail::fail(ErrorKind::DepthBudget, "depth " + std::to_string(depth) + " overflows vertex indexing");
  }
  if (vertices > opt.vertex_cap) {
    detail::fail(ErrorKind::DepthBudget,
                 std::to_string(vertices) + " vertices exceed cap " + std::to_string(opt.vertex_cap));
  }
  const auto law = std::make_shared<const EdgeLaw>(spec, pair);
  const auto count = static_cast<std::size_t>(trials);
  std::vector<std::vector<double>> log_T(count), log_U(count);
  parallel_for(count, opt.threads, [&](std::size_t i) {
    const LazyField field(law, field_key(seed, i));
    const auto levels = sphere_cocycles(field, depth);
    auto& t = log_T[i];
    auto& u = log_U[i];
    t.resize(levels.size());
    u.resize(levels.size());
    double acc = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < levels.size(); ++n) {
      u[n] = log_sum_exp(levels[n]);
      acc = log_add_exp(acc, u[n]);
      t[n] = acc;
    }
  });
  std::vector<double> tail_x(static_cast<std::size_t>(depth) + 1);
  for (std::size_t n = 0; n < tail_x.size(); ++n) tail_x[n] = static_cast<double>(n);
  return detail::assess_growth(std::move(log_T), log_U, tail_x, 0.0, opt.epsilon);
}

/// mu_n^t(0) of the Z-family: 1/2 for n <= 4t^2, else 1/2 + t / sqrt(n).
inline double ks_family(double t, std::int64_t n) {
  if (!(t >= 0.0)) detail::fail(ErrorKind::ParameterOutOfRange, "t must be >= 0");
  const auto nd = static_cast<double>(n);
  if (nd <= 4.0 * t * t) return 0.5;
  return 0.5 + t / std::sqrt(nd);
}

/// Growth of T_m = sum_{|k| <= m} prod_{|n| <= window} (d mu_{n-k} / d mu_n)(x_n)
/// for the Z-family, m up to window / 4. The factors far from the origin tend
/// to 1, so the truncated product is accurate while shifts stay well inside
/// the window; the report still carries the truncation-bias flag.
inline RecurrenceDiagnostic shift_recurrence_diagnostic(double t, int window, int trials, std::uint64_t seed,
                                                        const RecurrenceOptions& opt = {}) {
  if (!(t >= 0.0)) detail::fail(ErrorKind::ParameterOutOfRange, "t must be >= 0");
  if (window < 16) detail::fail(ErrorKind::ParameterOutOfRange, "shift diagnostic needs window >= 16");
  if (trials < 30) detail::fail(ErrorKind::ParameterOutOfRange, "shift diagnostic needs >= 30 trials");

  const std::int64_t w = window;
  const std::int64_t m_max = w / 4;
  const std::int64_t span = w + m_max;  // measure indices n - k live in [-span, span]
  std::vector<double> p0(static_cast<std::size_t>(2 * span + 1));
  std::vector<double> log0(p0.size()), log1(p0.size());
  for (std::int64_t n = -span; n <= span; ++n) {
    const auto i = static_cast<std::size_t>(n + span);
    p0[i] = ks_family(t, n);
    log0[i] = std::log(p0[i]);
    log1[i] = std::log1p(-p0[i]);
  }
  const auto idx = [span](std::int64_t n) { return static_cast<std::size_t>(n + span); };

  const auto count = static_cast<std::size_t>(trials);
  std::vector<std::vector<double>> log_T(count), log_I(count);
  parallel_for(count, opt.threads, [&](std::size_t trial) {
    const std::uint64_t key = derive_key(seed, Stream::Shift, trial);
    std::vector<unsigned char> x(p0.size());
    for (std::int64_t n = -w; n <= w; ++n) {
      x[idx(n)] = counter_uniform(key, static_cast<std::uint64_t>(n + span)) < p0[idx(n)] ? 0 : 1;
    }
    const auto log_mu = [&](std::int64_t m, unsigned char s) { return s == 0 ? log0[idx(m)] : log1[idx(m)]; };
    std::vector<double> log_rn(static_cast<std::size_t>(2 * m_max + 1));
    for (std::int64_t k = -m_max; k <= m_max; ++k) {
      double s = 0.0;
      for (std::int64_t n = -w; n <= w; ++n) s += log_mu(n - k, x[idx(n)]) - log_mu(n, x[idx(n)]);
      log_rn[static_cast<std::size_t>(k + m_max)] = s;
    }
    auto& tt = log_T[trial];
    auto& ii = log_I[trial];
    tt.resize(static_cast<std::size_t>(m_max) + 1);
    ii.resize(tt.size());
    ii[0] = log_rn[static_cast<std::size_t>(m_max)];
    tt[0] = ii[0];
    for (std::int64_t m = 1; m <= m_max; ++m) {
      const auto um = static_cast<std::size_t>(m);
      ii[um] = log_add_exp(log_rn[static_cast<std::size_t>(m_max + m)], log_rn[static_cast<std::size_t>(m_max - m)]);
      tt[um] = log_add_exp(tt[um - 1], ii[um]);
    }
  });
  // Terms of a polynomially growing orbit: the sum diverges unless the new
  // terms decay faster than 1/m, i.e. slope -1 against log m.
  std::vector<double> tail_x(static_cast<std::size_t>(m_max) + 1);
  for (std::size_t m = 0; m < tail_x.size(); ++m) tail_x[m] = std::log(static_cast<double>(std::max<std::size_t>(m, 1)));
  auto d = detail::assess_growth(std::move(log_T), log_I, tail_x, -1.0, opt.epsilon);
  d.truncation_bias = true;
  return d;
}

}  // namespace bernphase
