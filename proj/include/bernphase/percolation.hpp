#pragma once

// Block construction behind the recurrence half of the threshold theorem:
// R_M is the sum of M independent copies of Z = X + Y, an edge of the derived
// tree (vertices at depths divisible by M) survives when the cocycle
// increment along its geodesic segment is >= 0, and the derived tree
// percolates iff p (q-1)^M > 1.
//
// Distinct derived edges cover edge-disjoint geodesic segments, so retention
// events are independent and the percolation is exactly Bernoulli(p); survival
// is a Galton-Watson survival probability with Binomial((q-1)^M, p) offspring.

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "bernphase/distribution.hpp"
#include "bernphase/field.hpp"
#include "bernphase/parallel.hpp"
#include "bernphase/stats.hpp"

namespace bernphase {

/// Exact law of R_M.
inline ScalarDistribution block_sum_distribution(const MeasurePair& pair, int M,
                                                 std::size_t atom_cap = kDefaultAtomCap) {
  if (M < 1) detail::fail(ErrorKind::ParameterOutOfRange, "block length must be >= 1");
  const ScalarDistribution z = edge_pair_sum(pair);
  ScalarDistribution r = z;
  for (int k = 1; k < M; ++k) r = convolve(r, z, atom_cap);
  return r;
}

enum class BlockLengthStatus { Found, BoundImpossible, Exhausted };

inline const char* to_string(BlockLengthStatus s) {
  switch (s) {
    case BlockLengthStatus::Found: return "found";
    case BlockLengthStatus::BoundImpossible: return "bound-impossible";
    case BlockLengthStatus::Exhausted: return "mmax-exhausted";
  }
  return "?";
}

struct BlockLengthResult {
  BlockLengthStatus status = BlockLengthStatus::Exhausted;
  std::optional<int> M;
  double probability = 0.0;  // P(R_M >= 0) at the returned M, or at the last M tried
  double target = 0.0;       // exp(-M delta) at that M
  double chernoff_value = 0.0;
};

/// Smallest M <= M_max with P(R_M >= 0) > exp(-M delta). Since
/// P(R_M >= 0) <= (inf phi)^M, no M can succeed when inf phi <= exp(-delta).
inline BlockLengthResult find_block_length(const MeasurePair& pair, double delta, int M_max,
                                           std::size_t atom_cap = kDefaultAtomCap) {
  if (!(delta > 0.0)) detail::fail(ErrorKind::ParameterOutOfRange, "delta must be > 0");
  if (M_max < 1) detail::fail(ErrorKind::ParameterOutOfRange, "M_max must be >= 1");
  BlockLengthResult res;
  const ScalarDistribution z = edge_pair_sum(pair);
  res.chernoff_value = chernoff_min(z).value;
  if (res.chernoff_value <= std::exp(-delta)) {
    res.status = BlockLengthStatus::BoundImpossible;
    return res;
  }
  ScalarDistribution r = z;
  for (int M = 1; M <= M_max; ++M) {
    if (M > 1) r = convolve(r, z, atom_cap);
    res.probability = r.prob_at_least(0.0);
    res.target = std::exp(-M * delta);
    if (res.probability > res.target) {
      res.status = BlockLengthStatus::Found;
      res.M = M;
      return res;
    }
  }
  res.status = BlockLengthStatus::Exhausted;
  return res;
}

/// Survival probability of a Galton-Watson process with Binomial(children, p)
/// offspring: 1 - s* where s* is the smallest fixed point of
/// f(s) = (1 - p + p s)^children.
inline double gw_survival(double children, double p, double damping = 1.0, double tol = 1e-12) {
  if (!(p >= 0.0 && p <= 1.0)) detail::fail(ErrorKind::ParameterOutOfRange, "p must lie in [0,1]");
  if (!(damping > 0.0 && damping <= 1.0)) detail::fail(ErrorKind::ParameterOutOfRange, "damping must lie in (0,1]");
  if (children * p <= 1.0) return 0.0;  // (sub)critical: extinction is certain
  if (p == 1.0) return 1.0;
  const auto f = [&](double s) { return std::pow(1.0 - p + p * s, children); };
  const auto df = [&](double s) { return children * p * std::pow(1.0 - p + p * s, children - 1.0); };
  // Iterating from 0 climbs monotonically to the smallest fixed point.
  double s = 0.0;
  for (int iter = 0; iter < 10'000'000; ++iter) {
    const double next = (1.0 - damping) * s + damping * f(s);
    const bool done = std::abs(next - s) < tol;
    s = next;
    if (done) break;
  }
  // Newton polish; f'(s*) < 1 at the attracting fixed point.
  for (int iter = 0; iter < 8; ++iter) {
    const double g = f(s) - s;
    const double dg = df(s) - 1.0;
    if (dg == 0.0) break;
    const double next = s - g / dg;
    if (!(next >= 0.0 && next < 1.0)) break;
    s = next;
  }
  return 1.0 - s;
}

struct PercolationMonteCarlo {
  int trials = 0;
  int depth = 0;              // derived-tree generations required for survival
  double survival = 0.0;      // fraction of trials whose cluster reaches `depth`
  double survival_se = 0.0;
  std::uint64_t examined_edges = 0;
  std::uint64_t retained_edges = 0;
  double retained_fraction = 0.0;
  double retained_se = 0.0;
};

struct PercolationReport {
  int M = 1;
  double p = 0.0;
  int branching = 0;          // q-1 or 2d-1
  double children = 0.0;      // branching^M derived children per vertex
  double criterion = 0.0;     // p exp(M delta) = p branching^M
  bool supercritical = false;
  double survival = 0.0;
  std::optional<PercolationMonteCarlo> mc;
};

struct PercolationOptions {
  std::optional<int> mc_trials;
  int mc_depth = 14;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::size_t atom_cap = kDefaultAtomCap;
  std::uint64_t vertex_cap = kDefaultVertexCap;
};

namespace detail {

/// Does the retained cluster of the forward subtree rooted at rho (branching
/// children at every vertex, the root included) reach `generations` derived
/// levels? Counts the derived edges examined and retained along the way.
inline bool cluster_reaches(const LazyField& field, int M, int generations, std::uint64_t vertex_cap,
                            std::uint64_t& examined, std::uint64_t& retained) {
  const auto& spec = field.spec();
  const std::uint64_t b = static_cast<std::uint64_t>(spec.branching());
  // A vertex of the forward subtree is tracked by its tree rank within its
  // sphere; the root's children are restricted to uniform indices < b.
  struct Node {
    std::uint64_t rank;
    double s;  // S_v relative to the block start; only block sums matter
  };
  std::vector<std::uint64_t> sphere_offset{0};
  const auto ensure_offsets = [&](int depth) {
    while (static_cast<int>(sphere_offset.size()) <= depth) {
      const int n = static_cast<int>(sphere_offset.size());
      sphere_offset.push_back(sphere_offset.back() + sphere_size(spec, n - 1));
    }
  };
  std::vector<std::uint64_t> frontier{0};
  std::uint64_t visited = 1;
  for (int gen = 0; gen < generations; ++gen) {
    std::vector<std::uint64_t> next;
    const int base_depth = gen * M;
    ensure_offsets(base_depth + M);
    for (std::uint64_t start : frontier) {
      // Depth-first over the b^M descendants M levels down.
      std::vector<Node> stack{{start, 0.0}};
      std::vector<int> level{base_depth};
      while (!stack.empty()) {
        const Node node = stack.back();
        const int depth = level.back();
        stack.pop_back();
        level.pop_back();
        if (depth == base_depth + M) {
          ++examined;
          if (node.s >= -kMergeTolerance) {
            ++retained;
            next.push_back(node.rank);
          }
          continue;
        }
        const std::uint64_t rank_base = depth == 0 ? 0 : node.rank * b;
        for (std::uint64_t j = 0; j < b; ++j) {
          const std::uint64_t child_rank = rank_base + j;
          const std::uint64_t child_index = sphere_offset[static_cast<std::size_t>(depth + 1)] + child_rank;
          const double x = field.value(edge_id(child_index, Direction::TowardRoot)) +
                           field.value(edge_id(child_index, Direction::AwayFromRoot));
          stack.push_back({child_rank, node.s + x});
          level.push_back(depth + 1);
        }
      }
    }
    if (next.empty()) return false;
    visited += next.size();
    if (visited > vertex_cap) fail(ErrorKind::DepthBudget, "percolation cluster exceeds vertex cap");
    frontier = std::move(next);
  }
  return true;
}

}  // namespace detail

inline PercolationReport percolation_report(const TreeSpec& spec, const MeasurePair& pair, int M,
                                            const PercolationOptions& opt = {}) {
  if (M < 1) detail::fail(ErrorKind::ParameterOutOfRange, "block length must be >= 1");
  PercolationReport rep;
  rep.M = M;
  rep.branching = spec.branching();
  rep.children = std::pow(static_cast<double>(rep.branching), M);
  rep.p = block_sum_distribution(pair, M, opt.atom_cap).prob_at_least(0.0);
  rep.criterion = rep.p * rep.children;
  rep.supercritical = rep.criterion > 1.0;
  rep.survival = gw_survival(rep.children, rep.p);

  if (opt.mc_trials) {
    const int trials = *opt.mc_trials;
    if (trials < 1) detail::fail(ErrorKind::ParameterOutOfRange, "mc trials must be >= 1");
    if (opt.mc_depth < 1) detail::fail(ErrorKind::ParameterOutOfRange, "mc depth must be >= 1");
    try {
      (void)ball_size(spec, opt.mc_depth * M);
    } catch (const Error&) {
      detail::fail(ErrorKind::DepthBudget, "mc depth overflows vertex indexing");
    }
    const auto law = std::make_shared<const EdgeLaw>(spec, pair);
    const auto count = static_cast<std::size_t>(trials);
    std::vector<unsigned char> survived(count);
    std::vector<std::uint64_t> examined(count), retained(count);
    parallel_for(count, opt.threads, [&](std::size_t i) {
      const LazyField field(law, derive_key(opt.seed, Stream::Percolation, i));
      survived[i] = detail::cluster_reaches(field, M, opt.mc_depth, opt.vertex_cap, examined[i], retained[i]);
    });
    PercolationMonteCarlo mc;
    mc.trials = trials;
    mc.depth = opt.mc_depth;
    std::uint64_t alive = 0;
    for (std::size_t i = 0; i < count; ++i) {
      alive += survived[i];
      mc.examined_edges += examined[i];
      mc.retained_edges += retained[i];
    }
    mc.survival = static_cast<double>(alive) / trials;
    mc.survival_se = std::sqrt(mc.survival * (1.0 - mc.survival) / trials);
    if (mc.examined_edges > 0) {
      const auto n = static_cast<double>(mc.examined_edges);
      mc.retained_fraction = static_cast<double>(mc.retained_edges) / n;
      mc.retained_se = std::sqrt(mc.retained_fraction * (1.0 - mc.retained_fraction) / n);
    }
    rep.mc = mc;
  }
  return rep;
}

}  // namespace bernphase
