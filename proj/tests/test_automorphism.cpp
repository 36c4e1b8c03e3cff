#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "ultradense/automorphism.hpp"

using namespace ultradense;

namespace {

// One fixed point at line integer 0 under z ↦ W(z + 1).
FinitePermZ one_fixed_point() { return FinitePermZ({{0, 1}, {1, 0}}); }

Vertex nk(int n, std::int64_t c, std::int64_t z)
{
  return encode(GraphKind::nk_omega(n), {c, zigzag(z)});
}

} // namespace

TEST(LineShift, ImageAndPreimage)
{
  LineShiftOracle f(3, IndexPerm::parse("(1 2)", 3), {1, 0, -2}, {});
  EXPECT_EQ(f.image(nk(3, 1, 5)), nk(3, 2, 6));
  EXPECT_EQ(f.image(nk(3, 2, 5)), nk(3, 1, 5));
  EXPECT_EQ(f.image(nk(3, 3, 0)), nk(3, 3, -2));
  for (std::int64_t c = 1; c <= 3; ++c)
    for (std::int64_t z = -6; z <= 6; ++z)
      EXPECT_EQ(f.preimage(*f.image(nk(3, c, z))), nk(3, c, z));
  EXPECT_EQ(f.apply(nk(3, 3, 0), -3), nk(3, 3, 6));
}

TEST(LineShift, WindowsAndFixedPoints)
{
  LineShiftOracle f(2, IndexPerm::identity(2), {1, 0},
                    {one_fixed_point(), FinitePermZ{}});
  EXPECT_EQ(f.image(nk(2, 1, 0)), nk(2, 1, 0));
  EXPECT_TRUE(f.fix_infinite());
  auto far = f.far_fixed_point(2, 40);
  ASSERT_TRUE(far);
  EXPECT_GE(decode(GraphKind::nk_omega(2), *far).position, 40u);
  EXPECT_EQ(f.image(*far), *far);
  EXPECT_FALSE(f.far_fixed_point(1, 0));
}

TEST(FinitePermZ, RejectsNonBijection)
{
  EXPECT_THROW(FinitePermZ(std::map<std::int64_t, std::int64_t>{{0, 1}}), Error);
  FinitePermZ p({{0, 2}, {2, 0}});
  EXPECT_EQ(p.apply(0), 2);
  EXPECT_EQ(p.unapply(0), 2);
  EXPECT_EQ(p.apply(7), 7);
}

TEST(ComponentShift, PermutesWholeComponents)
{
  auto kind = GraphKind::omega_kn(3);
  ComponentShiftOracle f(3, 2, FinitePermZ{}, 1, 0);
  for (std::int64_t c = -3; c <= 3; ++c) {
    EXPECT_EQ(f.fbar(c), c + 2);
    std::set<std::int64_t> comps;
    std::set<std::uint64_t> pos;
    for (std::uint64_t p = 0; p < 3; ++p) {
      auto y = decode(kind, *f.image(encode(kind, {c, p})));
      comps.insert(y.component);
      pos.insert(y.position);
    }
    EXPECT_EQ(comps.size(), 1u);
    EXPECT_EQ(pos.size(), 3u);
  }
}

TEST(Stabilizing, FiniteOrbitOnEachLine)
{
  LineShiftOracle f(2, IndexPerm::identity(2), {1, 1},
                    {one_fixed_point(), one_fixed_point()});
  auto v = classify_stabilizing(f, 4);
  ASSERT_TRUE(v.stabilizing);
  // The witness is invariant and balanced.
  std::map<std::int64_t, std::size_t> per_line;
  for (Vertex x : v.lambda) {
    EXPECT_TRUE(v.lambda.count(*f.image(x)));
    ++per_line[component_of(GraphKind::nk_omega(2), x)];
  }
  EXPECT_EQ(per_line.size(), 2u);
  EXPECT_EQ(per_line[1], per_line[2]);
}

TEST(Stabilizing, PureShiftsAreNonStabilizing)
{
  LineShiftOracle f(3, IndexPerm::identity(3), {1, -1, 2}, {});
  EXPECT_FALSE(classify_stabilizing(f, 4).stabilizing);
}

// Every invariant finite set meets the two lines unequally.
TEST(Stabilizing, UnequalInvariantSetsAreNonStabilizing)
{
  LineShiftOracle f(2, IndexPerm::identity(2), {1, 1},
                    {one_fixed_point(), FinitePermZ{}});
  EXPECT_FALSE(classify_stabilizing(f, 4).stabilizing);
}

TEST(Stabilizing, FiniteCycleAcrossSwappedLines)
{
  // f̄ = (1 2), shifts cancel along the cycle: every orbit is finite.
  LineShiftOracle f(2, IndexPerm::parse("(1 2)", 2), {3, -3}, {});
  EXPECT_TRUE(classify_stabilizing(f, 4).stabilizing);
}

TEST(OracleJson, RebuildsLineShift)
{
  LineShiftOracle f(2, IndexPerm::parse("(1 2)", 2), {1, -2},
                    {one_fixed_point(), FinitePermZ{}});
  auto g = oracle_from_json(f.describe());
  for (std::int64_t c = 1; c <= 2; ++c)
    for (std::int64_t z = -5; z <= 5; ++z)
      EXPECT_EQ(g->image(nk(2, c, z)), f.image(nk(2, c, z)));
  EXPECT_THROW(oracle_from_json({{"policy", "nope"}}), Error);
}

TEST(FiniteTruncation, StrictThrowsOnMiss)
{
  FiniteTruncation lax(PartialIso::unchecked({{1, 2}}));
  EXPECT_FALSE(lax.image(5).has_value());
  FiniteTruncation strict(PartialIso::unchecked({{1, 2}}), true);
  EXPECT_EQ(strict.image(1), 2u);
  EXPECT_THROW(strict.image(5), OracleExhausted);
}
