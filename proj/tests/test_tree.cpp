#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "bernphase/tree.hpp"

using namespace bernphase;

TEST(TreeSpec, ParseAndValidate) {
  EXPECT_EQ(TreeSpec::parse("regular:3").degree(), 3);
  EXPECT_EQ(TreeSpec::parse("cayley:2").degree(), 4);
  EXPECT_EQ(TreeSpec::parse("cayley:2").branching(), 3);
  EXPECT_THROW(TreeSpec::parse("regular:2"), Error);
  EXPECT_THROW(TreeSpec::parse("cayley:1"), Error);
  EXPECT_THROW(TreeSpec::parse("binary"), Error);
}

TEST(Sphere, Sizes) {
  const auto r3 = TreeSpec::regular(3);
  EXPECT_EQ(sphere_size(r3, 0), 1u);
  EXPECT_EQ(sphere_size(r3, 4), 24u);
  EXPECT_EQ(sphere_size(TreeSpec::cayley(2), 2), 12u);
  EXPECT_EQ(ball_size(r3, 5), 94u);
  EXPECT_THROW(sphere_size(TreeSpec::cayley(26), 40), Error);
}

TEST(Poincare, ExactExponents) {
  EXPECT_NEAR(poincare_exponent(TreeSpec::regular(3)), 0.6931471805599453, 1e-15);
  EXPECT_NEAR(poincare_exponent(TreeSpec::cayley(2)), 1.0986122886681098, 1e-15);
  EXPECT_NEAR(poincare_exponent(TreeSpec::cayley(3)), 1.6094379124341003, 1e-15);
}

TEST(Poincare, Estimates) {
  const std::vector<std::uint64_t> geo{1, 2, 4, 8, 16};
  EXPECT_NEAR(estimate_exponent(geo, 1, 4), std::log(2.0), 1e-12);
  const std::vector<std::uint64_t> flat{5, 5, 5, 5};
  EXPECT_NEAR(estimate_exponent(flat, 0, 3), 0.0, 1e-15);
  std::vector<std::uint64_t> r3;
  for (int n = 0; n <= 10; ++n) r3.push_back(sphere_size(TreeSpec::regular(3), n));
  EXPECT_NEAR(estimate_exponent(r3, 2, 10), std::log(2.0), 1e-12);
  EXPECT_THROW(estimate_exponent(geo, 3, 3), Error);
}

TEST(VertexIndex, BreadthFirstBijection) {
  for (const auto& spec : {TreeSpec::regular(3), TreeSpec::regular(4), TreeSpec::cayley(2)}) {
    std::set<std::uint64_t> seen;
    std::uint64_t expected = 0;
    for (int n = 0; n <= 5; ++n) {
      for (std::uint64_t r = 0; r < sphere_size(spec, n); ++r) {
        const Vertex v = vertex_at(spec, n, r);
        EXPECT_TRUE(is_valid_vertex(spec, v));
        EXPECT_EQ(vertex_index(spec, v), expected++);
        EXPECT_EQ(parse_vertex(spec, format_vertex(spec, v)).steps, v.steps);
      }
    }
  }
}

TEST(VertexEncoding, Strings) {
  const auto r3 = TreeSpec::regular(3);
  EXPECT_EQ(parse_vertex(r3, "2.0.1").steps, (std::vector<int>{2, 0, 1}));
  EXPECT_TRUE(parse_vertex(r3, "").steps.empty());
  EXPECT_THROW(parse_vertex(r3, "0.2"), Error);  // below the root only q-1 children
  const auto c2 = TreeSpec::cayley(2);
  EXPECT_EQ(parse_vertex(c2, "abA").steps, (std::vector<int>{1, 2, -1}));
  EXPECT_EQ(format_vertex(c2, Vertex{{1, 2, -1}}), "abA");
  EXPECT_THROW(parse_vertex(c2, "aA"), Error);
  EXPECT_THROW(parse_vertex(c2, "ac"), Error);
}

TEST(PathEdges, Geodesics) {
  const auto r3 = TreeSpec::regular(3);
  const Vertex rho{}, w = parse_vertex(r3, "1.0.1");
  EXPECT_TRUE(path_edges(r3, w, w).empty());
  const auto e = path_edges(r3, rho, w);
  ASSERT_EQ(e.size(), 6u);
  int toward = 0;
  for (const auto& x : e) toward += x.direction == Direction::TowardRoot;
  EXPECT_EQ(toward, 3);
  const auto sib = path_edges(r3, parse_vertex(r3, "0"), parse_vertex(r3, "2"));
  EXPECT_EQ(sib.size(), 4u);
  EXPECT_EQ(distance(parse_vertex(r3, "0.1"), parse_vertex(r3, "2")), 3);
}

TEST(EdgeId, DistinctPerOrientation) {
  EXPECT_EQ(edge_id(1, Direction::TowardRoot), 2u);
  EXPECT_EQ(edge_id(1, Direction::AwayFromRoot), 3u);
}
