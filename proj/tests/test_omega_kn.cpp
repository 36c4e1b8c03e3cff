#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "ultradense/campaign.hpp"
#include "ultradense/omega_kn_engine.hpp"
#include "ultradense/verifier.hpp"

using namespace ultradense;

namespace {

Vertex ok(int n, std::int64_t c, std::uint64_t pos)
{
  return encode(GraphKind::omega_kn(n), {c, pos});
}

// Component c onto component d, position-preserving.
std::map<Vertex, Vertex> whole(int n, std::int64_t c, std::int64_t d)
{
  std::map<Vertex, Vertex> m;
  for (int p = 0; p < n; ++p)
    m[ok(n, c, static_cast<std::uint64_t>(p))] =
      ok(n, d, static_cast<std::uint64_t>(p));
  return m;
}

} // namespace

TEST(OmegaKn, ISigmaChain)
{
  auto kind = GraphKind::omega_kn(2);
  auto q = PartialIso::unchecked(whole(2, 0, 1));
  EXPECT_TRUE(in_I_sigma_class(kind, q, {ok(2, 0, 0), ok(2, 0, 1)}));
  EXPECT_TRUE(in_I_sigma_class(kind, PartialIso{}, {}));
}

TEST(OmegaKn, ISigmaRejectsCompleteIndexCycle)
{
  auto kind = GraphKind::omega_kn(2);
  auto m = whole(2, 0, 1);
  auto back = whole(2, 1, 0);
  m.insert(back.begin(), back.end());
  EXPECT_FALSE(in_I_sigma_class(kind, PartialIso::unchecked(m),
                                {ok(2, 0, 0), ok(2, 0, 1)}));
}

TEST(OmegaKn, ISigmaHypothesisErrors)
{
  auto kind = GraphKind::omega_kn(2);
  // Domain is half a component.
  EXPECT_THROW(in_I_sigma_class(kind,
                                PartialIso::unchecked({{ok(2, 0, 0), ok(2, 1, 0)}}),
                                {ok(2, 0, 0)}),
               HypothesisError);
  // Two Σ points on one chain.
  EXPECT_THROW(in_I_sigma_class(kind, PartialIso::unchecked(whole(2, 0, 1)),
                                {ok(2, 0, 0), ok(2, 1, 0)}),
               HypothesisError);
}

TEST(OmegaKn, SigmaFeasibleExamples)
{
  auto both_in_zero = SigmaPlacement::from_counts(2, {{0, 2}});
  auto part = sigma_feasible(2, both_in_zero);
  ASSERT_TRUE(part);
  EXPECT_EQ(part->r, 1u);
  EXPECT_NO_THROW(check_partition(2, both_in_zero, *part));

  EXPECT_FALSE(sigma_feasible(2, SigmaPlacement::from_counts(2, {{0, 2}, {1, 1}})));
  EXPECT_FALSE(sigma_feasible(2, SigmaPlacement::from_counts(2, {})));
  EXPECT_THROW(SigmaPlacement::from_counts(2, {{0, 3}}), Error);
}

TEST(OmegaKn, SigmaFeasibleNeedsExactPartWeights)
{
  // n = 3, weights 2 + 2 + 2: no part can total exactly 3.
  EXPECT_FALSE(sigma_feasible(3, SigmaPlacement::from_counts(
                                   3, {{0, 2}, {1, 2}, {2, 2}})));
  EXPECT_FALSE(oracle::sigma_model_exists(3, {2, 2, 2}));
  // 2 + 1 + 3 splits as {0, 1} and {2}.
  auto pl = SigmaPlacement::from_counts(3, {{0, 2}, {1, 1}, {2, 3}});
  auto part = sigma_feasible(3, pl);
  ASSERT_TRUE(part);
  EXPECT_EQ(part->r, 2u);
  EXPECT_EQ(part->part_of(0), part->part_of(1));
  EXPECT_NE(part->part_of(0), part->part_of(2));
}

TEST(OmegaKn, CheckPartitionRejectsBadWeights)
{
  auto pl = SigmaPlacement::from_counts(2, {{0, 1}, {1, 1}});
  SigmaPartition bad;
  bad.r = 2;
  bad.carriers = {{0}, {1}};
  EXPECT_THROW(check_partition(2, pl, bad), Error);
}

TEST(OmegaKn, BuildFromPartitionDepthOne)
{
  int n = 2;
  auto pl = SigmaPlacement::from_counts(n, {{0, 1}, {3, 1}});
  auto part = *sigma_feasible(n, pl);
  auto q1 = build_f_from_partition(n, pl, part, 1);
  auto imap = index_map(GraphKind::omega_kn(n), q1);
  ASSERT_EQ(imap.size(), 1u);
  EXPECT_EQ(imap.begin()->first, part.member(0, 0));
  EXPECT_EQ(imap.begin()->second, part.member(0, 1));
  EXPECT_EQ(q1.size(), static_cast<std::size_t>(n));
  for (auto [x, y] : q1.map())
    EXPECT_FALSE(pl.sigma.count(x) && pl.sigma.count(y));
}

TEST(OmegaKnProperty, BuildFromPartitionMonotoneAndSigmaSparse)
{
  for (int n = 1; n <= 3; ++n) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto inst = random_omega_instance(n, static_cast<std::size_t>(n) *
                                             (1 + seed % 2),
                                        seed);
      auto pl = SigmaPlacement::from_sigma(n, inst.sigma);
      auto part = *sigma_feasible(n, pl);
      PartialIso prev;
      for (std::size_t d = 1; d <= 8; ++d) {
        auto q = build_f_from_partition(n, pl, part, d);
        EXPECT_TRUE(q.extends(prev));
        auto prof = orbit_rep_profile(q, pl.sigma);
        EXPECT_TRUE(prof.at_most_one());
        EXPECT_TRUE(in_class_I(q));
        prev = q;
      }
    }
  }
}

TEST(OmegaKn, SplitIntoF)
{
  auto kind = GraphKind::omega_kn(3);
  auto [a, b] = split_into_F(kind, PartialIso{});
  EXPECT_TRUE(a.iso.empty() && b.iso.empty());

  auto q = PartialIso::unchecked({{ok(3, 0, 0), ok(3, 0, 1)}});
  auto [p1, p2] = split_into_F(kind, q);
  EXPECT_TRUE(is_f_class(kind, p1.iso));
  EXPECT_TRUE(is_f_class(kind, p2.iso));
  auto r = compose(p1.iso, p2.iso);
  EXPECT_TRUE(r.extends(q));
  for (std::uint64_t p = 0; p < 3; ++p)
    EXPECT_TRUE(r.in_dom(ok(3, 0, p)));
}

TEST(OmegaKn, FClassRejectsPartialComponents)
{
  auto kind = GraphKind::omega_kn(2);
  EXPECT_FALSE(is_f_class(kind, PartialIso::unchecked({{ok(2, 0, 0), ok(2, 1, 0)}})));
  EXPECT_FALSE(is_f_class(kind, PartialIso::unchecked(whole(2, 0, 0))));
}

TEST(OmegaKn, WitnessTrivialAndSingleComponent)
{
  int n = 2;
  auto kind = GraphKind::omega_kn(n);
  auto pl = SigmaPlacement::from_counts(n, {{0, 1}, {3, 1}});
  auto part = *sigma_feasible(n, pl);
  PartialIso q;
  for (std::size_t d = 1; !(q.in_dom(ok(n, 0, 0)) && q.in_dom(ok(n, 3, 0))); ++d)
    q = build_f_from_partition(n, pl, part, d);
  ComponentShiftOracle f(n, 1, FinitePermZ{}, 1, 0);

  auto trivial = density_witness_omega(f, q, FClassIso{}, pl.sigma);
  EXPECT_TRUE(verify(trivial).ok);

  auto p = make_f_class(kind, PartialIso::unchecked(whole(n, 9, -7)));
  auto cert = density_witness_omega(f, q, p, pl.sigma);
  auto rep = verify(WitnessCertificate::parse(cert.serialize()));
  EXPECT_TRUE(rep.ok) << rep.to_string();
  std::size_t chains = 0;
  for (auto const &c : components(cert.h))
    chains += c.complete ? 0 : 1;
  EXPECT_EQ(chains, pl.sigma.size());
}

TEST(OmegaKn, WitnessNeedsInfiniteSupport)
{
  int n = 2;
  auto pl = SigmaPlacement::from_counts(n, {{0, 2}});
  auto q = build_f_from_partition(n, pl, *sigma_feasible(n, pl), 2);
  ComponentShiftOracle f(n, 0, FinitePermZ{}, 0, 0);
  EXPECT_THROW(density_witness_omega(f, q, FClassIso{}, pl.sigma),
               HypothesisError);
}
