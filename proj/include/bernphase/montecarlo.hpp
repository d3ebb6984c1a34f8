#pragma once

// Trial-parallel Monte Carlo studies over independent edge fields: the sphere
// martingale W_n and the Koopman correlation E sqrt(dg mu / d mu).

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "bernphase/action.hpp"
#include "bernphase/field.hpp"
#include "bernphase/parallel.hpp"
#include "bernphase/stats.hpp"

namespace bernphase {

struct MartingaleStudy {
  int trials = 0;
  std::vector<SampleSummary> W;          // index n = 0..depth
  std::vector<SampleSummary> increments;  // index n: W_{n+1} - W_n, n = 0..depth-1
};

inline MartingaleStudy martingale_study(const TreeSpec& spec, const MeasurePair& pair, int depth, int trials,
                                        std::uint64_t seed, unsigned threads = 0) {
  if (depth < 1) detail::fail(ErrorKind::ParameterOutOfRange, "martingale depth must be >= 1");
  if (trials < 2) detail::fail(ErrorKind::ParameterOutOfRange, "martingale study needs >= 2 trials");
  (void)ball_size(spec, depth);
  const auto law = std::make_shared<const EdgeLaw>(spec, pair);
  const auto count = static_cast<std::size_t>(trials);
  const auto levels = static_cast<std::size_t>(depth) + 1;
  std::vector<double> w(count * levels);
  parallel_for(count, threads, [&](std::size_t i) {
    const LazyField field(law, field_key(seed, i));
    const auto spheres = sphere_cocycles(field, depth);
    for (std::size_t n = 0; n < levels; ++n) {
      double s = 0.0;
      for (double x : spheres[n]) s += std::exp(0.5 * x);
      w[i * levels + n] = s;
    }
  });
  MartingaleStudy st;
  st.trials = trials;
  std::vector<double> col(count);
  for (std::size_t n = 0; n < levels; ++n) {
    for (std::size_t i = 0; i < count; ++i) col[i] = w[i * levels + n];
    st.W.push_back(summarize(col));
    if (n + 1 < levels) {
      for (std::size_t i = 0; i < count; ++i) col[i] = w[i * levels + n + 1] - w[i * levels + n];
      st.increments.push_back(summarize(col));
    }
  }
  return st;
}

/// Sample mean of sqrt(dg mu / d mu) = exp(S_{g rho} / 2); its expectation
/// is affinity^{2|g|}.
inline SampleSummary koopman_study(const TreeSpec& spec, const FreeWord& g, const MeasurePair& pair, int trials,
                                   std::uint64_t seed, unsigned threads = 0) {
  detail::require_cayley_for(spec, g);
  if (trials < 2) detail::fail(ErrorKind::ParameterOutOfRange, "koopman study needs >= 2 trials");
  const auto law = std::make_shared<const EdgeLaw>(spec, pair);
  std::vector<double> vals(static_cast<std::size_t>(trials));
  parallel_for(vals.size(), threads, [&](std::size_t i) {
    const LazyField field(law, field_key(seed, i));
    vals[i] = std::exp(0.5 * cocycle_sum(field, g.as_vertex()));
  });
  return summarize(vals);
}

}  // namespace bernphase
