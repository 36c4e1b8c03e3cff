#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "ultradense/partial_iso.hpp"

using namespace ultradense;

namespace {

std::set<oracle::Class> as_classes(std::vector<Component> const &cs)
{
  std::set<oracle::Class> out;
  for (auto const &c : cs)
    out.insert({{c.vertices.begin(), c.vertices.end()}, c.complete});
  return out;
}

} // namespace

TEST(PartialIso, ValidateEmptyAndSinglePair)
{
  GraphSession s(GraphKind::henson(3), 2);
  Vertex a = s.alice_witness({}, {});
  Vertex b = s.alice_witness({a}, {});
  EXPECT_TRUE(validate(s, {}).empty());
  EXPECT_EQ(validate(s, {{a, b}}).size(), 1u);
}

TEST(PartialIso, ValidateRejectsIndexConflict)
{
  auto kind = GraphKind::nk_omega(2);
  GraphSession s(kind);
  Vertex x1 = encode(kind, {1, 0}), y1 = encode(kind, {1, 1});
  Vertex x2 = encode(kind, {2, 0}), y2 = encode(kind, {1, 2});
  EXPECT_THROW(validate(s, {{x1, y1}, {x2, y2}}), IsoRejection);
  try {
    validate(s, {{x1, y1}, {x2, y2}});
  } catch (IsoRejection const &e) {
    EXPECT_EQ(e.reason(), IsoRejection::Reason::IndexMapConflict);
  }
}

TEST(PartialIso, ValidateRejectsNonInjective)
{
  GraphSession s(GraphKind::random());
  Vertex a = s.alice_witness({}, {});
  Vertex b = s.alice_witness({}, {});
  Vertex c = s.alice_witness({}, {});
  EXPECT_THROW(validate(s, {{a, c}, {b, c}}), IsoRejection);
  EXPECT_THROW(validate(s, {{a, b}, {a, c}}), IsoRejection);
}

TEST(PartialIso, ComposeExamples)
{
  auto f = PartialIso::unchecked({{0, 1}});
  EXPECT_EQ(compose(f, PartialIso::unchecked({{1, 2}})),
            PartialIso::unchecked({{0, 2}}));
  EXPECT_TRUE(compose(f, PartialIso::unchecked({{3, 4}})).empty());
}

TEST(PartialIso, PowerExamples)
{
  auto f = PartialIso::unchecked({{0, 1}, {1, 2}, {2, 0}});
  EXPECT_EQ(power(f, 1), f);
  EXPECT_EQ(power(f, 3), PartialIso::identity({0, 1, 2}));
  EXPECT_EQ(power(f, -1), invert(f));
}

TEST(PartialIsoProperty, ComposeMatchesChase)
{
  gen::Gen g(101);
  for (int t = 0; t < 500; ++t) {
    auto f = g.table(8, 8), h = g.table(8, 8);
    EXPECT_EQ(compose(PartialIso::unchecked(f), PartialIso::unchecked(h)).map(),
              oracle::compose(f, h));
  }
}

TEST(PartialIsoProperty, PowerMatchesChase)
{
  gen::Gen g(202);
  for (int t = 0; t < 500; ++t) {
    auto f = g.table(8, 8);
    auto k = g.between(-6, 6);
    if (k == 0)
      continue;
    EXPECT_EQ(power(PartialIso::unchecked(f), k).map(), oracle::power(f, k))
      << "k=" << k;
  }
}

TEST(PartialIsoProperty, InvertIsInvolution)
{
  gen::Gen g(303);
  for (int t = 0; t < 200; ++t) {
    auto f = g.iso(10, 10);
    EXPECT_EQ(invert(invert(f)), f);
    EXPECT_EQ(invert(f).dom(), f.ran());
  }
}

TEST(PartialIso, UnionExtend)
{
  GraphSession s(GraphKind::random(), 4);
  Vertex a = s.alice_witness({}, {});
  Vertex b = s.alice_witness({}, {a});
  Vertex c = s.alice_witness({}, {a, b});
  auto f = validate(s, {{a, b}});
  EXPECT_EQ(union_extend(s, f, {}), f);
  EXPECT_THROW(union_extend(s, f, {{a, c}}), IsoRejection);
}

TEST(PartialIso, ComponentExamples)
{
  auto chain = components(PartialIso::unchecked({{0, 1}, {1, 2}}));
  ASSERT_EQ(chain.size(), 1u);
  EXPECT_FALSE(chain[0].complete);
  EXPECT_EQ(chain[0].vertices, (std::vector<Vertex>{0, 1, 2}));
  EXPECT_EQ(chain[0].head(), 0u);
  EXPECT_EQ(chain[0].tail(), 2u);

  auto cyc = components(PartialIso::unchecked({{0, 1}, {1, 0}}));
  ASSERT_EQ(cyc.size(), 1u);
  EXPECT_TRUE(cyc[0].complete);
}

TEST(PartialIsoProperty, ComponentsMatchChase)
{
  gen::Gen g(404);
  for (int t = 0; t < 500; ++t) {
    auto f = g.table(9, 9);
    auto cs = components(PartialIso::unchecked(f));
    EXPECT_EQ(as_classes(cs), oracle::partition(f));
    // Chains walk forward head to tail.
    for (auto const &c : cs)
      for (std::size_t i = 0; i + 1 < c.vertices.size(); ++i)
        EXPECT_EQ(f.at(c.vertices[i]), c.vertices[i + 1]);
  }
}

TEST(PartialIso, InClassI)
{
  EXPECT_TRUE(in_class_I(PartialIso{}));
  EXPECT_FALSE(in_class_I(PartialIso::unchecked({{0, 1}, {1, 0}})));
  EXPECT_TRUE(in_class_I(
    PartialIso::unchecked({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}})));
}

TEST(PartialIso, OrbitProfileExamples)
{
  auto f = PartialIso::unchecked({{0, 1}, {1, 0}, {5, 6}});
  auto none = orbit_rep_profile(f, {});
  for (auto h : none.hits)
    EXPECT_EQ(h, 0u);
  auto one = orbit_rep_profile(PartialIso::unchecked({{0, 1}, {1, 0}}), {0});
  ASSERT_EQ(one.hits.size(), 1u);
  EXPECT_EQ(one.hits[0], 1u);
  EXPECT_TRUE(one.complete_exactly_one());
}

TEST(PartialIsoProperty, OrbitProfileMatchesChase)
{
  gen::Gen g(505);
  for (int t = 0; t < 300; ++t) {
    auto f = g.table(9, 9);
    VertexSet sigma;
    for (Vertex v = 0; v < 9; ++v)
      if (g.between(0, 2) == 0)
        sigma.insert(v);
    auto prof = orbit_rep_profile(PartialIso::unchecked(f), sigma);
    std::map<std::set<Vertex>, std::size_t> want;
    for (auto const &cl : oracle::partition(f)) {
      std::size_t k = 0;
      for (Vertex v : cl.members)
        k += sigma.count(v);
      want[cl.members] = k;
    }
    ASSERT_EQ(prof.comps.size(), prof.hits.size());
    std::map<std::set<Vertex>, std::size_t> got;
    for (std::size_t i = 0; i < prof.comps.size(); ++i)
      got[{prof.comps[i].vertices.begin(), prof.comps[i].vertices.end()}] =
        prof.hits[i];
    EXPECT_EQ(got, want);
  }
}

TEST(PartialIso, IndexMap)
{
  auto kind = GraphKind::nk_omega(3);
  auto q = PartialIso::unchecked({{encode(kind, {1, 0}), encode(kind, {2, 0})},
                                  {encode(kind, {1, 4}), encode(kind, {2, 9})}});
  EXPECT_EQ(index_map(kind, q), (std::map<std::int64_t, std::int64_t>{{1, 2}}));
  auto bad = PartialIso::unchecked({{encode(kind, {1, 0}), encode(kind, {2, 0})},
                                    {encode(kind, {1, 1}), encode(kind, {3, 0})}});
  EXPECT_THROW(index_map(kind, bad), IsoRejection);
}
