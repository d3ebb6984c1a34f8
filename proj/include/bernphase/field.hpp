#pragma once

// Random edge field x = (x_e) with x_e ~ mu0 on edges oriented toward the
// root and x_e ~ mu1 on edges oriented away from it, the cocycle sums
// S_v = sum_{e in E([rho, v])} X_e(x_e) and the Radon-Nikodym derivatives
// dg mu / d mu = exp(S_{g rho}).

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "bernphase/action.hpp"
#include "bernphase/measure.hpp"
#include "bernphase/rng.hpp"
#include "bernphase/tree.hpp"

namespace bernphase {

inline constexpr std::uint64_t kDefaultVertexCap = 10'000'000;

/// Shared, immutable sampling state for one (spec, pair).
class EdgeLaw {
 public:
  EdgeLaw(TreeSpec spec, MeasurePair pair)
      : spec_(spec),
        pair_(std::move(pair)),
        toward_(pair_.mu0().weights()),
        away_(pair_.mu1().weights()) {
    if (pair_.size() > std::numeric_limits<std::uint16_t>::max()) {
      detail::fail(ErrorKind::InvalidInput, "alphabet too large for edge symbols");
    }
  }

  const TreeSpec& spec() const noexcept { return spec_; }
  const MeasurePair& pair() const noexcept { return pair_; }

  /// Symbol of edge `id` under `key`; a pure function of (key, id).
  std::uint16_t symbol(std::uint64_t key, std::uint64_t id) const noexcept {
    const double u = counter_uniform(key, id);
    const bool toward = (id & 1U) == 0;
    return static_cast<std::uint16_t>(toward ? toward_(u) : away_(u));
  }

  /// X_e for edge `id` carrying `symbol`.
  double value(std::uint64_t id, std::uint16_t symbol) const noexcept {
    const double lr = pair_.log_ratios()[symbol];
    return (id & 1U) == 0 ? -lr : lr;
  }

 private:
  TreeSpec spec_;
  MeasurePair pair_;
  DiscreteSampler toward_;
  DiscreteSampler away_;
};

/// Key of the edge field for trial `trial` under a user seed.
inline std::uint64_t field_key(std::uint64_t seed, std::uint64_t trial = 0) {
  return derive_key(seed, Stream::EdgeField, trial);
}

/// Every edge symbol within `depth`, materialized. Resampling with the same
/// (spec, pair, depth, key) reproduces identical symbols, and a symbol does
/// not depend on the truncation depth.
class FieldSample {
 public:
  FieldSample(std::shared_ptr<const EdgeLaw> law, int depth, std::uint64_t key,
              std::uint64_t vertex_cap = kDefaultVertexCap)
      : law_(std::move(law)), depth_(depth), key_(key) {
    if (depth < 0) detail::fail(ErrorKind::ParameterOutOfRange, "depth must be >= 0");
    std::uint64_t vertices = 0;
    try {
      vertices = ball_size(law_->spec(), depth);
    } catch (const Error&) {
      detail::fail(ErrorKind::DepthBudget, "depth " + std::to_string(depth) + " overflows vertex indexing");
    }
    if (vertices > vertex_cap) {
      detail::fail(ErrorKind::DepthBudget, std::to_string(vertices) + " vertices exceed cap " +
                                               std::to_string(vertex_cap));
    }
    symbols_.resize(depth == 0 ? 0 : 2 * vertices);
    for (std::uint64_t id = 2; id < symbols_.size(); ++id) symbols_[id] = law_->symbol(key_, id);
  }

  const TreeSpec& spec() const noexcept { return law_->spec(); }
  const MeasurePair& pair() const noexcept { return law_->pair(); }
  const EdgeLaw& law() const noexcept { return *law_; }
  int depth() const noexcept { return depth_; }
  std::uint64_t key() const noexcept { return key_; }

  /// Number of oriented edges carrying a symbol.
  std::size_t edge_count() const noexcept { return symbols_.size() < 2 ? 0 : symbols_.size() - 2; }

  std::uint16_t symbol(std::uint64_t id) const {
    if (id < 2 || id >= symbols_.size()) detail::fail(ErrorKind::OutOfDepth, "edge outside sampled depth");
    return symbols_[id];
  }

  std::uint16_t symbol(const OrientedEdge& e) const {
    if (static_cast<int>(e.child.depth()) > depth_) detail::fail(ErrorKind::OutOfDepth, "edge outside sampled depth");
    return symbol(edge_id(spec(), e));
  }

  double value(std::uint64_t id) const { return law_->value(id, symbol(id)); }

 private:
  std::shared_ptr<const EdgeLaw> law_;
  int depth_;
  std::uint64_t key_;
  std::vector<std::uint16_t> symbols_;
};

/// Same field, drawing symbols on demand. Agrees with FieldSample for equal keys.
class LazyField {
 public:
  LazyField(std::shared_ptr<const EdgeLaw> law, std::uint64_t key) : law_(std::move(law)), key_(key) {}

  const TreeSpec& spec() const noexcept { return law_->spec(); }
  const MeasurePair& pair() const noexcept { return law_->pair(); }
  int depth() const noexcept { return std::numeric_limits<int>::max(); }
  std::uint16_t symbol(std::uint64_t id) const noexcept { return law_->symbol(key_, id); }
  double value(std::uint64_t id) const noexcept { return law_->value(id, symbol(id)); }

 private:
  std::shared_ptr<const EdgeLaw> law_;
  std::uint64_t key_;
};

inline FieldSample sample_field(const TreeSpec& spec, const MeasurePair& pair, int depth, std::uint64_t seed,
                                std::uint64_t vertex_cap = kDefaultVertexCap) {
  return FieldSample(std::make_shared<const EdgeLaw>(spec, pair), depth, field_key(seed), vertex_cap);
}

/// S_v: sum of X_e over both orientations of every edge of [rho, v].
template <class Field>
double cocycle_sum(const Field& field, const Vertex& v) {
  if (static_cast<int>(v.depth()) > field.depth()) {
    detail::fail(ErrorKind::OutOfDepth, "vertex depth " + std::to_string(v.depth()) + " exceeds sampled depth");
  }
  require_valid_vertex(field.spec(), v);
  double s = 0.0;
  Vertex prefix_v;
  for (int step : v.steps) {
    prefix_v.steps.push_back(step);
    const std::uint64_t child = vertex_index(field.spec(), prefix_v);
    s += field.value(edge_id(child, Direction::TowardRoot));
    s += field.value(edge_id(child, Direction::AwayFromRoot));
  }
  return s;
}

/// S_v evaluated on the translated field h^{-1} . x, whose coordinate at e is
/// x_{h e}. Used to check the cocycle identity S_{hg rho}(x) = S_{g rho}(h^{-1} x) + S_{h rho}(x).
template <class Field>
double cocycle_sum_translated(const Field& field, const Vertex& v, const FreeWord& h) {
  const auto& spec = field.spec();
  double s = 0.0;
  for (std::size_t len = 1; len <= v.depth(); ++len) {
    const Vertex child = prefix(v, len);
    const Vertex parent = prefix(v, len - 1);
    for (Direction dir : {Direction::TowardRoot, Direction::AwayFromRoot}) {
      const OrientedEdge he = act_on_edge(spec, h, OrientedEdge{parent, child, dir});
      if (static_cast<int>(he.child.depth()) > field.depth()) {
        detail::fail(ErrorKind::OutOfDepth, "translated edge outside sampled depth");
      }
      const std::uint16_t sym = field.symbol(edge_id(spec, he));
      s += field.pair().edge_value(dir, sym);
    }
  }
  return s;
}

/// dg mu / d mu (x) = exp(S_{g rho}(x)).
template <class Field>
double rn_derivative(const Field& field, const FreeWord& g) {
  detail::require_cayley_for(field.spec(), g);
  return std::exp(cocycle_sum(field, g.as_vertex()));
}

/// S_v for every vertex with d(rho, v) <= depth, one vector per sphere in
/// breadth-first rank order.
template <class Field>
std::vector<std::vector<double>> sphere_cocycles(const Field& field, int depth) {
  if (depth > field.depth()) detail::fail(ErrorKind::OutOfDepth, "requested depth exceeds sampled depth");
  const auto& spec = field.spec();
  const auto b = static_cast<std::uint64_t>(spec.branching());
  std::vector<std::vector<double>> levels(static_cast<std::size_t>(depth) + 1);
  levels[0] = {0.0};
  std::uint64_t offset = 1;  // index of the first vertex of the next sphere
  for (int n = 1; n <= depth; ++n) {
    const auto& prev = levels[static_cast<std::size_t>(n - 1)];
    auto& cur = levels[static_cast<std::size_t>(n)];
    const std::uint64_t fan = n == 1 ? static_cast<std::uint64_t>(spec.degree()) : b;
    cur.resize(prev.size() * fan);
    for (std::uint64_t r = 0; r < cur.size(); ++r) {
      const std::uint64_t child = offset + r;
      cur[r] = prev[r / fan] + field.value(edge_id(child, Direction::TowardRoot)) +
               field.value(edge_id(child, Direction::AwayFromRoot));
    }
    offset += cur.size();
  }
  return levels;
}

/// W_n = sum over the sphere of radius n of exp(S_v / 2).
template <class Field>
double martingale_W(const Field& field, int n) {
  if (n < 0 || n > field.depth()) detail::fail(ErrorKind::OutOfDepth, "sphere radius outside sampled depth");
  const auto levels = sphere_cocycles(field, n);
  double w = 0.0;
  for (double s : levels.back()) w += std::exp(0.5 * s);
  return w;
}

}  // namespace bernphase
