#pragma once

// F_d acting on its Cayley tree by left multiplication, and the closed forms
// for the Kakutani sum and the Koopman correlation <rho_g(1), 1> of the
// interpolated edge-oriented Bernoulli action.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "bernphase/measure.hpp"
#include "bernphase/tree.hpp"

namespace bernphase {

/// Reduced word in F_d; letters are +i / -i for the i-th generator and its inverse.
class FreeWord {
 public:
  FreeWord() = default;

  /// Freely reduces the given letters.
  static FreeWord from_letters(const std::vector<int>& letters) {
    FreeWord w;
    for (int l : letters) w.push_back_reduced(l);
    return w;
  }

  /// Parses the Cayley encoding ("abA"); the word must already be reduced.
  /// Letters a, b, ... with capitals as inverses; the word is reduced.
  static FreeWord parse(std::string_view text, int d) {
    (void)TreeSpec::cayley(d);
    std::vector<int> letters;
    for (char c : text) {
      int l = 0;
      if (c >= 'a' && c <= 'z') l = c - 'a' + 1;
      if (c >= 'A' && c <= 'Z') l = -(c - 'A' + 1);
      if (l == 0 || std::abs(l) > d) {
        detail::fail(ErrorKind::InvalidInput, "bad letter in word '" + std::string(text) + "'");
      }
      letters.push_back(l);
    }
    return from_letters(letters);
  }

  const std::vector<int>& letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool is_identity() const noexcept { return letters_.empty(); }

  /// Largest generator index used (0 for the identity).
  int rank_used() const noexcept {
    int r = 0;
    for (int l : letters_) r = std::max(r, std::abs(l));
    return r;
  }

  FreeWord inverse() const {
    FreeWord w;
    w.letters_.assign(letters_.rbegin(), letters_.rend());
    for (int& l : w.letters_) l = -l;
    return w;
  }

  friend FreeWord operator*(const FreeWord& g, const FreeWord& h) {
    FreeWord w = g;
    for (int l : h.letters_) w.push_back_reduced(l);
    return w;
  }

  /// The vertex g . rho of the Cayley tree.
  Vertex as_vertex() const { return Vertex{letters_}; }

  std::string to_string() const {
    std::string out;
    for (int l : letters_) out += l > 0 ? static_cast<char>('a' + l - 1) : static_cast<char>('A' - l - 1);
    return out;
  }

  friend bool operator==(const FreeWord&, const FreeWord&) = default;

 private:
  void push_back_reduced(int l) {
    if (l == 0) detail::fail(ErrorKind::InvalidInput, "letter 0 is not a generator");
    if (!letters_.empty() && letters_.back() == -l) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }

  std::vector<int> letters_;
};

namespace detail {
inline void require_cayley_for(const TreeSpec& spec, const FreeWord& g) {
  if (spec.kind() != TreeKind::Cayley) fail(ErrorKind::SpecMismatch, "word action needs a Cayley tree");
  if (g.rank_used() > spec.parameter()) {
    fail(ErrorKind::SpecMismatch, "word uses generator " + std::to_string(g.rank_used()) + " but d = " +
                                      std::to_string(spec.parameter()));
  }
}
}  // namespace detail

/// g . v as the reduced concatenation of g and the word of v.
inline Vertex act_on_vertex(const TreeSpec& spec, const FreeWord& g, const Vertex& v) {
  detail::require_cayley_for(spec, g);
  require_valid_vertex(spec, v);
  return (g * FreeWord::from_letters(v.steps)).as_vertex();
}

/// Image of an oriented edge; the orientation label is recomputed relative to
/// the root, so it flips whenever g swaps which endpoint is farther out.
inline OrientedEdge act_on_edge(const TreeSpec& spec, const FreeWord& g, const OrientedEdge& e) {
  Vertex gp = act_on_vertex(spec, g, e.parent);
  Vertex gc = act_on_vertex(spec, g, e.child);
  if (gc.depth() > gp.depth()) return {std::move(gp), std::move(gc), e.direction};
  const Direction flipped =
      e.direction == Direction::TowardRoot ? Direction::AwayFromRoot : Direction::TowardRoot;
  return {std::move(gc), std::move(gp), flipped};
}

/// Oriented edges whose orientation label differs from that of their
/// g-translate: both orientations of each edge of [rho, g rho].
inline int flipped_edge_count(const FreeWord& g) { return 2 * static_cast<int>(g.length()); }

/// sum_e H^2(mu^t_{g e}, mu^t_e) in closed form.
inline double kakutani_sum(const FreeWord& g, const MeasurePair& pair, const DiscreteMeasure& nu, double t) {
  detail::require_unit_interval(t, "t");
  if (g.is_identity() || t == 0.0) return 0.0;
  const MeasurePair mt = pair.interpolate(nu, t);
  return flipped_edge_count(g) * mt.hellinger_sq();
}

/// Same sum evaluated edge by edge over the ball that contains every flipped
/// edge. Kept as a cross-check of the closed form.
inline double kakutani_sum_per_edge(const TreeSpec& spec, const FreeWord& g, const MeasurePair& pair,
                                    const DiscreteMeasure& nu, double t) {
  detail::require_unit_interval(t, "t");
  detail::require_cayley_for(spec, g);
  const MeasurePair mt = pair.interpolate(nu, t);
  const int radius = static_cast<int>(g.length()) + 1;
  double sum = 0.0;
  for (int depth = 1; depth <= radius; ++depth) {
    const auto count = sphere_size(spec, depth);
    for (std::uint64_t r = 0; r < count; ++r) {
      Vertex child = vertex_at(spec, depth, r);
      Vertex parent = prefix(child, child.depth() - 1);
      for (Direction dir : {Direction::TowardRoot, Direction::AwayFromRoot}) {
        const OrientedEdge e{parent, child, dir};
        const OrientedEdge ge = act_on_edge(spec, g, e);
        sum += hellinger_sq(mt.edge_law(ge.direction), mt.edge_law(e.direction));
      }
    }
  }
  return sum;
}

/// <rho^t_g(1), 1> = prod_e (1 - H^2(mu^t_{g e}, mu^t_e)) = affinity_t^{2|g|}.
inline double koopman_correlation(const FreeWord& g, const MeasurePair& pair, const DiscreteMeasure& nu, double t) {
  detail::require_unit_interval(t, "t");
  if (g.is_identity()) return 1.0;
  const double a = pair.interpolate(nu, t).affinity();
  return std::exp(flipped_edge_count(g) * std::log(a));
}

}  // namespace bernphase
