#pragma once

// Implicit rooted trees: the full q-regular tree and the Cayley tree of the
// free group F_d (a 2d-regular tree with reduced-word labels). Vertices are
// geodesic paths from the root and are never materialized wholesale.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bernphase/error.hpp"
#include "bernphase/measure.hpp"

namespace bernphase {

enum class TreeKind { Regular, Cayley };

class TreeSpec {
 public:
  static TreeSpec regular(int q) {
    if (q < 3) detail::fail(ErrorKind::ParameterOutOfRange, "regular tree needs q >= 3, got " + std::to_string(q));
    return TreeSpec(TreeKind::Regular, q);
  }
  static TreeSpec cayley(int d) {
    if (d < 2) detail::fail(ErrorKind::ParameterOutOfRange, "Cayley tree needs d >= 2, got " + std::to_string(d));
    if (d > 26) detail::fail(ErrorKind::ParameterOutOfRange, "at most 26 generators are encodable");
    return TreeSpec(TreeKind::Cayley, d);
  }

  /// "regular:3" or "cayley:2".
  static TreeSpec parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
      detail::fail(ErrorKind::InvalidInput, "tree spec must look like regular:q or cayley:d");
    }
    const auto kind = text.substr(0, colon);
    int value = 0;
    try {
      value = std::stoi(std::string(text.substr(colon + 1)));
    } catch (const std::exception&) {
      detail::fail(ErrorKind::InvalidInput, "tree spec parameter is not an integer: " + std::string(text));
    }
    if (kind == "regular") return regular(value);
    if (kind == "cayley") return cayley(value);
    detail::fail(ErrorKind::InvalidInput, "unknown tree kind '" + std::string(kind) + "'");
  }

  TreeKind kind() const noexcept { return kind_; }
  /// q for Regular(q), d for Cayley(d).
  int parameter() const noexcept { return param_; }
  int degree() const noexcept { return kind_ == TreeKind::Regular ? param_ : 2 * param_; }
  /// Children of every non-root vertex.
  int branching() const noexcept { return degree() - 1; }

  std::string to_string() const {
    return (kind_ == TreeKind::Regular ? "regular:" : "cayley:") + std::to_string(param_);
  }

  friend bool operator==(const TreeSpec&, const TreeSpec&) = default;

 private:
  TreeSpec(TreeKind k, int p) : kind_(k), param_(p) {}
  TreeKind kind_;
  int param_;
};

/// Path from the root. Regular: child indices (first step in [0,q), later
/// steps in [0,q-1)). Cayley: signed generator letters, +i for the i-th
/// generator and -i for its inverse, forming a reduced word.
struct Vertex {
  std::vector<int> steps;

  std::size_t depth() const noexcept { return steps.size(); }
  bool is_root() const noexcept { return steps.empty(); }
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Edge between `parent` and `child` (child extends parent by one step),
/// traversed child -> parent when TowardRoot and parent -> child otherwise.
struct OrientedEdge {
  Vertex parent;
  Vertex child;
  Direction direction;

  friend bool operator==(const OrientedEdge&, const OrientedEdge&) = default;
};

namespace detail {

/// Cayley letters in canonical order a, b, ..., A, B, ...
inline int cayley_letter(int d, int k) { return k < d ? k + 1 : -(k - d + 1); }
inline int cayley_order(int d, int letter) { return letter > 0 ? letter - 1 : d - letter - 1; }

}  // namespace detail

/// Index of the step among the choices available after `prev` (0 = root step).
inline int uniform_child_index(const TreeSpec& spec, int prev, int step) {
  if (spec.kind() == TreeKind::Regular) return step;
  const int d = spec.parameter();
  const int k = detail::cayley_order(d, step);
  if (prev == 0) return k;
  const int forbidden = detail::cayley_order(d, -prev);
  return k > forbidden ? k - 1 : k;
}

/// Inverse of uniform_child_index.
inline int step_from_child_index(const TreeSpec& spec, int prev, int index) {
  if (spec.kind() == TreeKind::Regular) return index;
  const int d = spec.parameter();
  if (prev == 0) return detail::cayley_letter(d, index);
  const int forbidden = detail::cayley_order(d, -prev);
  return detail::cayley_letter(d, index >= forbidden ? index + 1 : index);
}

inline bool is_valid_vertex(const TreeSpec& spec, const Vertex& v) {
  int prev = 0;
  for (std::size_t i = 0; i < v.steps.size(); ++i) {
    const int s = v.steps[i];
    if (spec.kind() == TreeKind::Regular) {
      const int limit = i == 0 ? spec.parameter() : spec.parameter() - 1;
      if (s < 0 || s >= limit) return false;
    } else {
      if (s == 0 || std::abs(s) > spec.parameter() || s == -prev) return false;
    }
    prev = s;
  }
  return true;
}

inline void require_valid_vertex(const TreeSpec& spec, const Vertex& v) {
  if (!is_valid_vertex(spec, v)) {
    detail::fail(ErrorKind::InvalidInput, "vertex is not a valid path in " + spec.to_string());
  }
}

/// Number of vertices at distance n from the root.
inline std::uint64_t sphere_size(const TreeSpec& spec, int n) {
  if (n < 0) detail::fail(ErrorKind::ParameterOutOfRange, "sphere radius must be >= 0");
  if (n == 0) return 1;
  const auto b = static_cast<std::uint64_t>(spec.branching());
  std::uint64_t count = static_cast<std::uint64_t>(spec.degree());
  for (int k = 1; k < n; ++k) {
    if (count > std::numeric_limits<std::uint64_t>::max() / b) {
      detail::fail(ErrorKind::Overflow, "sphere of radius " + std::to_string(n) + " overflows 64 bits");
    }
    count *= b;
  }
  return count;
}

/// Number of vertices at distance <= n.
inline std::uint64_t ball_size(const TreeSpec& spec, int n) {
  std::uint64_t total = 0;
  for (int k = 0; k <= n; ++k) {
    const std::uint64_t s = sphere_size(spec, k);
    if (total > std::numeric_limits<std::uint64_t>::max() - s) {
      detail::fail(ErrorKind::Overflow, "ball of radius " + std::to_string(n) + " overflows 64 bits");
    }
    total += s;
  }
  return total;
}

/// Breadth-first index: the root is 0, then each sphere in lexicographic order
/// of uniform child indices. Stable under changes of truncation depth.
inline std::uint64_t vertex_index(const TreeSpec& spec, const Vertex& v) {
  const auto n = static_cast<int>(v.depth());
  if (n == 0) return 0;
  const std::uint64_t end = ball_size(spec, n);  // also rejects overflowing depths
  std::uint64_t rank = 0;
  const auto b = static_cast<std::uint64_t>(spec.branching());
  int prev = 0;
  for (std::size_t i = 0; i < v.steps.size(); ++i) {
    const auto j = static_cast<std::uint64_t>(uniform_child_index(spec, prev, v.steps[i]));
    rank = i == 0 ? j : rank * b + j;
    prev = v.steps[i];
  }
  return end - sphere_size(spec, n) + rank;
}

/// Vertex at the given depth with the given rank inside its sphere.
inline Vertex vertex_at(const TreeSpec& spec, int depth, std::uint64_t rank) {
  if (rank >= sphere_size(spec, depth)) detail::fail(ErrorKind::ParameterOutOfRange, "rank outside sphere");
  std::vector<int> idx(static_cast<std::size_t>(depth));
  const auto b = static_cast<std::uint64_t>(spec.branching());
  for (int i = depth - 1; i >= 1; --i) {
    idx[static_cast<std::size_t>(i)] = static_cast<int>(rank % b);
    rank /= b;
  }
  if (depth > 0) idx[0] = static_cast<int>(rank);
  Vertex v;
  int prev = 0;
  for (int j : idx) {
    prev = step_from_child_index(spec, prev, j);
    v.steps.push_back(prev);
  }
  return v;
}

inline std::size_t common_prefix(const Vertex& v, const Vertex& w) {
  std::size_t k = 0;
  while (k < v.steps.size() && k < w.steps.size() && v.steps[k] == w.steps[k]) ++k;
  return k;
}

inline int distance(const Vertex& v, const Vertex& w) {
  const std::size_t k = common_prefix(v, w);
  return static_cast<int>(v.steps.size() + w.steps.size() - 2 * k);
}

inline Vertex prefix(const Vertex& v, std::size_t len) {
  return Vertex{std::vector<int>(v.steps.begin(), v.steps.begin() + static_cast<std::ptrdiff_t>(len))};
}

/// Both orientations of every edge on the geodesic from v to w, walking from
/// v up to the branch point and then down to w.
inline std::vector<OrientedEdge> path_edges(const TreeSpec& spec, const Vertex& v, const Vertex& w) {
  require_valid_vertex(spec, v);
  require_valid_vertex(spec, w);
  const std::size_t k = common_prefix(v, w);
  std::vector<OrientedEdge> out;
  out.reserve(2 * static_cast<std::size_t>(distance(v, w)));
  for (std::size_t len = v.steps.size(); len > k; --len) {
    Vertex child = prefix(v, len);
    Vertex parent = prefix(v, len - 1);
    out.push_back({parent, child, Direction::TowardRoot});
    out.push_back({std::move(parent), std::move(child), Direction::AwayFromRoot});
  }
  for (std::size_t len = k + 1; len <= w.steps.size(); ++len) {
    Vertex child = prefix(w, len);
    Vertex parent = prefix(w, len - 1);
    out.push_back({parent, child, Direction::TowardRoot});
    out.push_back({std::move(parent), std::move(child), Direction::AwayFromRoot});
  }
  return out;
}

/// Canonical integer id of an oriented edge: 2 * index(child) + direction.
inline std::uint64_t edge_id(std::uint64_t child_index, Direction d) {
  return 2 * child_index + (d == Direction::AwayFromRoot ? 1 : 0);
}

inline std::uint64_t edge_id(const TreeSpec& spec, const OrientedEdge& e) {
  return edge_id(vertex_index(spec, e.child), e.direction);
}

/// Critical exponent of sum_n |S_n| exp(-s n): log(q-1) or log(2d-1).
inline double poincare_exponent(const TreeSpec& spec) { return std::log(static_cast<double>(spec.branching())); }

/// Least-squares slope of log(count_n) against n over n0..n1 inclusive.
inline double estimate_exponent(std::span<const std::uint64_t> counts, int n0, int n1) {
  if (n0 < 0 || n1 <= n0 || static_cast<std::size_t>(n1) >= counts.size()) {
    detail::fail(ErrorKind::DegenerateWindow, "window [" + std::to_string(n0) + ", " + std::to_string(n1) +
                                                  "] does not fit " + std::to_string(counts.size()) + " counts");
  }
  double sx = 0, sy = 0;
  const double m = n1 - n0 + 1;
  for (int n = n0; n <= n1; ++n) {
    const auto c = counts[static_cast<std::size_t>(n)];
    if (c == 0) detail::fail(ErrorKind::InvalidInput, "sphere counts must be positive");
    sx += n;
    sy += std::log(static_cast<double>(c));
  }
  const double mx = sx / m, my = sy / m;
  double sxy = 0, sxx = 0;
  for (int n = n0; n <= n1; ++n) {
    const double dx = n - mx;
    sxy += dx * (std::log(static_cast<double>(counts[static_cast<std::size_t>(n)])) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

// Encoding: Regular "2.0.1", Cayley "abA" (capitals are inverses), "" = root.

inline std::string format_vertex(const TreeSpec& spec, const Vertex& v) {
  std::string out;
  for (std::size_t i = 0; i < v.steps.size(); ++i) {
    const int s = v.steps[i];
    if (spec.kind() == TreeKind::Regular) {
      if (i > 0) out += '.';
      out += std::to_string(s);
    } else {
      out += s > 0 ? static_cast<char>('a' + s - 1) : static_cast<char>('A' - s - 1);
    }
  }
  return out;
}

inline Vertex parse_vertex(const TreeSpec& spec, std::string_view text) {
  Vertex v;
  if (text.empty()) return v;
  if (spec.kind() == TreeKind::Regular) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto dot = text.find('.', pos);
      const auto token = text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
      if (token.empty() || token.find_first_not_of("0123456789") != std::string_view::npos) {
        detail::fail(ErrorKind::InvalidInput, "bad vertex '" + std::string(text) + "'");
      }
      v.steps.push_back(std::stoi(std::string(token)));
      if (dot == std::string_view::npos) break;
      pos = dot + 1;
    }
  } else {
    for (char c : text) {
      if (c >= 'a' && c <= 'z') {
        v.steps.push_back(c - 'a' + 1);
      } else if (c >= 'A' && c <= 'Z') {
        v.steps.push_back(-(c - 'A' + 1));
      } else {
        detail::fail(ErrorKind::InvalidInput, "bad letter in word '" + std::string(text) + "'");
      }
    }
  }
  require_valid_vertex(spec, v);
  return v;
}

}  // namespace bernphase
