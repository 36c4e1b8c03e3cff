#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "ultradense/campaign.hpp"
#include "ultradense/henson_engine.hpp"
#include "ultradense/verifier.hpp"

using namespace ultradense;

namespace {

struct Fixture
{
  GraphSession s{GraphKind::henson(3), 17};
  std::vector<Vertex> v;
  Fixture()
  {
    for (int i = 0; i < 5; ++i)
      v.push_back(s.alice_witness({}, {}));
  }
};

// p = {(a, a')} with a' fresh and not adjacent to a.
PClassIso single_pair(GraphSession &s, Vertex a)
{
  Vertex b = s.alice_witness({}, {a});
  return make_p_class(s, validate(s, {{a, b}}));
}

} // namespace

TEST(Henson, NeighExtendOnEmpty)
{
  GraphSession s(GraphKind::random(), 1);
  Vertex x = s.alice_witness({}, {}), y = s.alice_witness({}, {});
  EXPECT_EQ(neigh_extend(s, PartialIso{}, x, y).map(),
            (std::map<Vertex, Vertex>{{x, y}}));
}

TEST(Henson, NeighExtendWithMatchedNeighbourhood)
{
  Fixture f;
  auto q = validate(f.s, {{f.v[0], f.v[1]}});
  Vertex x = f.s.alice_witness({f.v[0]}, {f.v[1]});
  // N(y) ∩ ran(q) = (N(x) ∩ dom(q))q
  Vertex y = f.s.alice_witness({f.v[1]}, {f.v[0], x});
  auto r = neigh_extend(f.s, q, x, y);
  EXPECT_EQ(r.image(x), y);
  EXPECT_TRUE(r.extends(q));
}

TEST(Henson, NeighExtendRejectsExtraNeighbour)
{
  Fixture f;
  auto q = validate(f.s, {{f.v[0], f.v[1]}});
  Vertex x = f.s.alice_witness({}, {f.v[0], f.v[1]});
  Vertex y = f.s.alice_witness({f.v[1]}, {x});
  EXPECT_THROW(neigh_extend(f.s, q, x, y), HypothesisError);
}

TEST(Henson, OnePointExtend)
{
  Fixture f;
  auto [q1, y1] = one_point_extend(f.s, PartialIso{}, f.v[0], {});
  EXPECT_EQ(q1.image(f.v[0]), y1);
  auto [q2, y2] = one_point_extend(f.s, q1, f.v[2], q1.ran());
  EXPECT_FALSE(q1.in_ran(y2));
  EXPECT_TRUE(in_class_I(q2));
  EXPECT_THROW(one_point_extend(f.s, q2, f.v[0], {}), HypothesisError);
}

TEST(Henson, ConjugatorSinglePair)
{
  Fixture f;
  auto p = single_pair(f.s, f.v[0]);
  auto c = build_conjugator(f.s, PartialIso{}, p);
  ASSERT_GE(c.m, 1u);
  // Chase x through h 2m times by hand.
  auto y = oracle::step_power(c.h.map(), oracle::inverse(c.h.map()), f.v[0],
                              static_cast<std::int64_t>(2 * c.m));
  ASSERT_TRUE(y);
  EXPECT_EQ(*y, *p.iso.image(f.v[0]));
  EXPECT_TRUE(in_class_I(c.h));
}

TEST(Henson, ConjugatorTwoPairs)
{
  Fixture f;
  Vertex a = f.v[0], b = f.v[1];
  Vertex a2 = f.s.alice_witness({}, {a, b});
  Vertex b2 = f.s.alice_witness(f.s.adjacent(a, b) ? VertexSet{a2} : VertexSet{},
                                f.s.adjacent(a, b) ? VertexSet{a, b}
                                                   : VertexSet{a, b, a2});
  auto p = make_p_class(f.s, validate(f.s, {{a, a2}, {b, b2}}));
  auto q = validate(f.s, {{f.v[2], f.v[3]}});
  auto c = build_conjugator(f.s, q, p);
  auto h2m = oracle::power(c.h.map(), static_cast<std::int64_t>(2 * c.m));
  EXPECT_EQ(h2m.at(a), a2);
  EXPECT_EQ(h2m.at(b), b2);
  EXPECT_TRUE(c.h.extends(q));
}

TEST(Henson, ConjugatorRejectsSharedVertex)
{
  Fixture f;
  auto p = single_pair(f.s, f.v[0]);
  auto q = validate(f.s, {{f.v[0], f.v[1]}});
  EXPECT_THROW(build_conjugator(f.s, q, p), HypothesisError);
}

TEST(Henson, ChainLinkDegenerate)
{
  Fixture f;
  Vertex x = f.v[0];
  Vertex y = f.s.alice_witness({}, {x});
  auto r = chain_link(f.s, PartialIso{}, {}, {}, x, y, 2, {x}, {y});
  EXPECT_EQ(r.size(), 4u);
  EXPECT_EQ(power(r, 4).image(x), y);
}

// y sees the tail of a Γ component, so the vertex before y must see its head.
TEST(Henson, ChainLinkEndpointTouchesFixed)
{
  GraphSession s(GraphKind::henson(3));
  Vertex g0 = s.alice_witness({}, {});
  auto [q, g1] = one_point_extend(s, PartialIso{}, g0, {});
  Vertex x = s.alice_witness({}, {g0, g1});
  Vertex y = s.alice_witness({g1}, {g0, x});
  auto r = chain_link(s, q, {}, q.support(), x, y, 2, {x}, {y});
  EXPECT_TRUE(r.extends(q));
  EXPECT_EQ(power(r, 4).image(x), y);
  Vertex before = *invert(r).image(y);
  EXPECT_TRUE(s.adjacent(before, g0));
  EXPECT_TRUE(in_class_I(r));
}

TEST(Henson, SplitIntoP)
{
  Fixture f;
  auto [e1, e2] = split_into_P(f.s, PartialIso{});
  EXPECT_TRUE(e1.iso.empty() && e2.iso.empty());

  auto q = one_point_extend(f.s, PartialIso{}, f.v[0], {}).first;
  q = one_point_extend(f.s, q, f.v[2], {}).first;
  auto [p1, p2] = split_into_P(f.s, q);
  EXPECT_TRUE(is_p_class(f.s, p1.iso));
  EXPECT_TRUE(is_p_class(f.s, p2.iso));
  EXPECT_TRUE(compose(p1.iso, p2.iso).extends(q));
}

TEST(Henson, PClassRejectsEdgeAcross)
{
  Fixture f;
  Vertex a = f.v[0];
  Vertex b = f.s.alice_witness({a}, {});
  EXPECT_FALSE(is_p_class(f.s, PartialIso::unchecked({{a, b}})));
  EXPECT_THROW(make_p_class(f.s, PartialIso::unchecked({{a, b}})),
               HypothesisError);
}

TEST(Henson, EmptyPGivesTrivialCertificate)
{
  Fixture f;
  HensonOracle o(f.s, PartialIso{});
  auto cert = density_witness_henson(f.s, o, PartialIso{}, PClassIso{});
  EXPECT_TRUE(cert.target.empty());
  EXPECT_TRUE(verify(cert).ok);
}

TEST(Henson, SinglePairCertificateVerifies)
{
  Fixture f;
  auto p = single_pair(f.s, f.v[0]);
  HensonOracle o(f.s, PartialIso{});
  auto cert = density_witness_henson(f.s, o, PartialIso{}, p);
  auto rep = verify(WitnessCertificate::parse(cert.serialize()));
  EXPECT_TRUE(rep.ok) << rep.to_string();
  EXPECT_TRUE(f.s.kn_free_check(f.s.realized_vertices(), 3));
}

TEST(HensonProperty, RandomInstancesVerify)
{
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto inst = random_henson_instance(3, seed);
    HensonOracle o(inst.session, inst.f_base);
    auto cert = density_witness_henson(inst.session, o, inst.q, inst.p);
    auto rep = verify(WitnessCertificate::parse(cert.serialize()));
    ASSERT_TRUE(rep.ok) << "seed " << seed << "\n" << rep.to_string();
    EXPECT_TRUE(cert.h.extends(inst.q));
  }
}

TEST(HensonProperty, H4InstancesVerify)
{
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto inst = random_henson_instance(4, seed);
    HensonOracle o(inst.session, inst.f_base);
    auto cert = density_witness_henson(inst.session, o, inst.q, inst.p);
    EXPECT_TRUE(verify(cert).ok) << "seed " << seed;
    EXPECT_TRUE(inst.session.kn_free_check(inst.session.realized_vertices(), 4));
  }
}
