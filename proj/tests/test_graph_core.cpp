#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "ultradense/graph_core.hpp"

using namespace ultradense;

namespace {

Vertex nk(int n, std::int64_t c, std::uint64_t pos)
{
  return encode(GraphKind::nk_omega(n), {c, pos});
}

} // namespace

TEST(GraphCore, NKOmegaAdjacencyIsSameLine)
{
  GraphSession s(GraphKind::nk_omega(2));
  EXPECT_TRUE(s.adjacent(nk(2, 1, 0), nk(2, 1, 7)));
  EXPECT_FALSE(s.adjacent(nk(2, 1, 0), nk(2, 2, 0)));
}

TEST(GraphCore, ZigzagCoversIntegersOnce)
{
  std::set<std::uint64_t> seen;
  for (std::int64_t i = -50; i <= 50; ++i) {
    EXPECT_EQ(unzigzag(zigzag(i)), i);
    seen.insert(zigzag(i));
  }
  // -50..50 lands exactly on 0..100.
  EXPECT_EQ(seen.size(), 101u);
  EXPECT_EQ(*seen.rbegin(), 100u);
}

TEST(GraphCore, EncodeDecodeOmegaKn)
{
  auto kind = GraphKind::omega_kn(3);
  for (std::int64_t c = -4; c <= 4; ++c)
    for (std::uint64_t pos = 0; pos < 3; ++pos) {
      Vertex v = encode(kind, {c, pos});
      EXPECT_EQ(decode(kind, v), (Coord{c, pos}));
      EXPECT_EQ(component_of(kind, v), c);
    }
  EXPECT_THROW(encode(kind, {0, 3}), Error);
}

TEST(GraphCore, OmegaKnNeighborsWithinComponent)
{
  auto kind = GraphKind::omega_kn(3);
  GraphSession s(kind);
  Vertex x = encode(kind, {0, 0});
  VertexSet S{encode(kind, {0, 0}), encode(kind, {0, 1}),
              encode(kind, {0, 2}), encode(kind, {1, 0})};
  EXPECT_EQ(s.neighbors_within(x, S),
            (VertexSet{encode(kind, {0, 1}), encode(kind, {0, 2})}));
  EXPECT_TRUE(s.neighbors_within(x, {}).empty());
}

TEST(GraphCore, WitnessContractHenson)
{
  GraphSession s(GraphKind::henson(3), 11);
  Vertex a = s.alice_witness({}, {});
  Vertex b = s.alice_witness({}, {a});
  Vertex w = s.alice_witness({a}, {b});
  EXPECT_TRUE(s.adjacent(w, a));
  EXPECT_FALSE(s.adjacent(w, b));
  EXPECT_EQ(s.neighbors_within(w, {a, b}), VertexSet{a});
}

TEST(GraphCore, WitnessRejectsEdgeInUForH3)
{
  GraphSession s(GraphKind::henson(3));
  Vertex a = s.alice_witness({}, {});
  Vertex b = s.alice_witness({a}, {});
  ASSERT_TRUE(s.adjacent(a, b));
  EXPECT_THROW(s.alice_witness({a, b}, {}), HypothesisError);
}

TEST(GraphCore, WitnessRandomAvoidsForbidden)
{
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GraphSession s(GraphKind::random(), seed);
    Vertex a = s.alice_witness({}, {});
    Vertex b = s.alice_witness({}, {});
    Vertex c = s.alice_witness({}, {});
    Vertex w = s.alice_witness({a}, {b}, {c});
    EXPECT_TRUE(w != a && w != b && w != c);
    EXPECT_TRUE(s.adjacent(w, a));
    EXPECT_FALSE(s.adjacent(w, b));
    EXPECT_FALSE(s.adjacent(w, c));
  }
}

TEST(GraphCore, WitnessErrors)
{
  GraphSession s(GraphKind::random());
  Vertex a = s.alice_witness({}, {});
  EXPECT_THROW(s.alice_witness({a}, {a}), HypothesisError);
  EXPECT_THROW(s.alice_witness({99}, {}), IsoRejection);
  GraphSession c(GraphKind::nk_omega(2));
  EXPECT_THROW(c.alice_witness({}, {}), Error);
}

TEST(GraphCore, KnFreeCheck)
{
  GraphSession s(GraphKind::random());
  Vertex a = s.alice_witness({}, {});
  Vertex b = s.alice_witness({a}, {});
  EXPECT_TRUE(s.kn_free_check({a, b}, 3)); // |S| < k
  Vertex c = s.alice_witness({a, b}, {});
  // Triangle confirmed edge by edge before asking.
  ASSERT_TRUE(s.adjacent(a, b) && s.adjacent(b, c) && s.adjacent(a, c));
  EXPECT_FALSE(s.kn_free_check({a, b, c}, 3));
  EXPECT_TRUE(s.kn_free_check({a, b, c}, 4));
}

// Property: a seeded Henson session never realizes a triangle, whatever
// witnesses are requested.
TEST(GraphCoreProperty, H3SessionsStayTriangleFree)
{
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    gen::Gen g(seed);
    GraphSession s(GraphKind::henson(3), seed);
    std::vector<Vertex> vs;
    for (int i = 0; i < 25; ++i) {
      VertexSet U, V;
      for (Vertex v : vs) {
        if (g.between(0, 3) == 0) {
          U.insert(v);
          if (!s.kn_free_check(U, 2))
            U.erase(v);
        } else if (g.coin()) {
          V.insert(v);
        }
      }
      vs.push_back(s.alice_witness(U, V));
    }
    // Exhaustive triple scan, independent of kn_free_check.
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j)
        for (std::size_t k = j + 1; k < vs.size(); ++k)
          ASSERT_FALSE(s.adjacent(vs[i], vs[j]) && s.adjacent(vs[j], vs[k]) &&
                       s.adjacent(vs[i], vs[k]));
  }
}

TEST(GraphCore, ReplayReproducesAdjacency)
{
  GraphSession s(GraphKind::henson(3), 5);
  Vertex a = s.alice_witness({}, {});
  Vertex b = s.alice_witness({a}, {});
  s.alice_witness({b}, {a});
  auto r = GraphSession::replay(s.transcript());
  ASSERT_EQ(r.size(), s.size());
  for (Vertex u = 0; u < s.size(); ++u)
    for (Vertex v = 0; v < s.size(); ++v)
      if (u != v) {
        EXPECT_EQ(r.adjacent(u, v), s.adjacent(u, v));
      }
}

TEST(GraphCore, SnapshotIsIndependent)
{
  GraphSession s(GraphKind::random(), 3);
  s.alice_witness({}, {});
  auto snap = s.snapshot();
  s.alice_witness({}, {});
  EXPECT_EQ(snap.size(), 1u);
  EXPECT_EQ(s.size(), 2u);
}
