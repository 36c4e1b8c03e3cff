#include "ultradense/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "ultradense/verifier.hpp"
#include "ultradense/word_algebra.hpp"

namespace ultradense {

namespace {

constexpr int kDraws = 64;

std::uint64_t splitmix(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::int64_t uniform(Rng &rng, std::int64_t lo, std::int64_t hi)
{
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

template <class T>
T const &pick(Rng &rng, std::vector<T> const &xs)
{
  return xs.at(static_cast<std::size_t>(
    uniform(rng, 0, static_cast<std::int64_t>(xs.size()) - 1)));
}

bool coin(Rng &rng, int one_in) { return uniform(rng, 1, one_in) == 1; }

// Random subset of `pool` with no k-clique, built greedily in shuffled order.
VertexSet clique_free_subset(GraphSession const &s, Rng &rng,
                             std::vector<Vertex> pool, int k)
{
  std::shuffle(pool.begin(), pool.end(), rng);
  VertexSet out;
  for (Vertex v : pool) {
    if (!coin(rng, 2))
      continue;
    out.insert(v);
    if (!s.kn_free_check(out, k))
      out.erase(v);
  }
  return out;
}

// p copying the adjacency pattern of `dom` onto fresh vertices, joined to
// nothing in dom and to a random K_k-free part of `avoid` (none when k = 0).
PartialIso fresh_copy(GraphSession &s, Rng &rng, std::vector<Vertex> const &dom,
                      VertexSet const &avoid, int k = 0)
{
  std::vector<Vertex> pool(avoid.begin(), avoid.end());
  std::map<Vertex, Vertex> copy;
  for (Vertex x : dom) {
    VertexSet U, V = avoid;
    V.insert(dom.begin(), dom.end());
    for (auto [orig, img] : copy)
      (s.adjacent(x, orig) ? U : V).insert(img);
    if (k > 0)
      for (Vertex a : clique_free_subset(s, rng, pool, k)) {
        U.insert(a);
        if (!s.kn_free_check(U, k))
          U.erase(a);
      }
    for (Vertex u : U)
      V.erase(u);
    copy.emplace(x, s.alice_witness(U, V, {}));
  }
  return validate(s, {copy.begin(), copy.end()});
}

FinitePermZ random_window(Rng &rng)
{
  if (!coin(rng, 3))
    return {};
  std::int64_t a = uniform(rng, -3, 3), b = uniform(rng, -3, 3);
  if (a == b)
    return {};
  return FinitePermZ({{a, b}, {b, a}});
}

TrialResult fail(std::uint64_t seed, std::string detail)
{
  return {seed, false, std::move(detail), {}, std::nullopt};
}

// Serializes, reparses and verifies; the reparsed certificate is what the
// verifier sees.
TrialResult verify_line(std::uint64_t seed, WitnessCertificate const &cert)
{
  std::string line = cert.serialize();
  auto back = WitnessCertificate::parse(line);
  if (back.serialize() != line)
    return fail(seed, "certificate does not round-trip");
  auto rep = verify(back);
  TrialResult r{seed, rep.ok, rep.ok ? "" : rep.to_string(), line,
                std::nullopt};
  return r;
}

TrialResult henson_trial(int n, std::uint64_t seed, bool conjugator_only)
{
  auto inst = random_henson_instance(n, seed);
  GraphSession &s = inst.session;
  TrialResult r;
  if (conjugator_only) {
    auto c = build_conjugator(s, inst.q, inst.p);
    bool ok = c.h.extends(inst.q) && in_class_I(c.h) &&
              power(c.h, static_cast<std::int64_t>(2 * c.m)).extends(inst.p.iso);
    r = ok ? TrialResult{seed, true, {}, {}, std::nullopt}
           : fail(seed, "h^2m does not extend p");
  } else {
    HensonOracle f(s, inst.f_base);
    r = verify_line(seed, density_witness_henson(s, f, inst.q, inst.p));
  }
  r.kn_free = s.kn_free_check(s.realized_vertices(), n);
  if (r.pass && !*r.kn_free) {
    r.pass = false;
    r.detail = "session contains a K_" + std::to_string(n);
  }
  return r;
}

TrialResult omega_trial(int n, std::size_t sigma_size, std::uint64_t seed)
{
  auto inst = random_omega_instance(n, sigma_size, seed);
  auto cert = density_witness_omega(inst.f, inst.q, inst.p, inst.sigma);
  auto r = verify_line(seed, cert);
  std::size_t chains = 0;
  for (auto const &c : components(cert.h))
    chains += c.complete ? 0 : 1;
  if (r.pass && chains != inst.sigma.size()) {
    r.pass = false;
    r.detail = "h has " + std::to_string(chains) +
               " incomplete components, |Σ| = " +
               std::to_string(inst.sigma.size());
  }
  return r;
}

PartialIso engine_product(WitnessCertificate const &cert,
                          AutomorphismOracle &f)
{
  if (cert.product.empty())
    return PartialIso::identity(cert.target.dom());
  auto w1 = FreeWord::parse(cert.words.at("omega1"));
  auto w2 = FreeWord::parse(cert.words.at("omega2"));
  auto prod = compose(compose(evaluate(w1, cert.h, f),
                              power(cert.h, cert.params.at("k"))),
                      invert(evaluate(w2, cert.h, f)));
  return prod.restrict(cert.target.dom());
}

TrialResult nk_trial(CampaignSpec const &spec, int n, std::uint64_t seed,
                     bool n2_route)
{
  auto inst = random_nk_instance(n, seed, spec.fbar, n2_route);
  if (!inst)
    return fail(seed, "no instance with nonempty A_{f,Σ} drawn");
  AFSigmaContext ctx(inst->f, inst->sigma);
  Rng rng(splitmix(seed ^ 0x5eedULL));
  auto q = seed_class_iso(ctx, inst->class_perm);

  if (spec.family == "nk-build") {
    auto [gamma, delta] = random_build_sets(ctx.kind, rng, q);
    auto qbar = *index_perm_of(ctx.kind, q);
    for (Vertex g : gamma)
      if (!q.in_dom(g)) {
        VertexSet used = q.support();
        used.insert(gamma.begin(), gamma.end());
        used.insert(delta.begin(), delta.end());
        q = class_one_point(
          ctx, q, g,
          fresh_in(ctx.kind, qbar.apply(static_cast<int>(
                               component_of(ctx.kind, g))),
                   used));
      }
    auto built = main_build(ctx, q, gamma, delta);
    auto rep = check_S(ctx.kind, built.h, {gamma, gamma, q.dom(), delta},
                       built.w, ctx.f);
    if (!built.h.extends(q))
      return fail(seed, "h does not extend q");
    if (!rep.holds)
      return fail(seed, rep.to_string());
    return {seed, true, {}, {}, std::nullopt};
  }

  auto p = random_p4(ctx.kind, rng, {});
  auto cert = n2_route ? n2_special_witness(ctx, q, p)
                       : density_witness_nkomega(ctx, q, p);
  cert.seed = seed;
  auto r = verify_line(seed, cert);
  if (r.pass && !n2_route) {
    auto f2 = oracle_from_json(cert.f);
    auto theirs = evaluate_product(cert.product, cert.h, *f2, cert.target)
                    .restrict(cert.target.dom());
    if (engine_product(cert, ctx.f) != theirs) {
      r.pass = false;
      r.detail = "engine and verifier products differ";
    }
  }
  return r;
}

} // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::size_t i)
{
  return splitmix(seed * 0x100000001b3ULL + i);
}

HensonInstance random_henson_instance(int n, std::uint64_t seed)
{
  Rng rng(seed);
  GraphSession s(GraphKind::henson(n), seed);
  std::vector<Vertex> base;
  auto grow = uniform(rng, 4, 8);
  for (std::int64_t i = 0; i < grow; ++i) {
    VertexSet U = clique_free_subset(s, rng, base, n - 1);
    VertexSet V;
    for (Vertex v : base)
      if (!U.count(v))
        V.insert(v);
    base.push_back(s.alice_witness(U, V, {}));
  }

  std::shuffle(base.begin(), base.end(), rng);
  auto nq = static_cast<std::size_t>(uniform(rng, 0, 3));
  auto np = static_cast<std::size_t>(uniform(rng, 1, 3));
  nq = std::min(nq, base.size() - np);

  PartialIso q;
  for (std::size_t i = 0; i < nq; ++i)
    q = one_point_extend(s, q, base[i], {}).first;

  std::vector<Vertex> pdom(base.begin() + static_cast<std::ptrdiff_t>(nq),
                           base.begin() + static_cast<std::ptrdiff_t>(nq + np));
  PClassIso p = make_p_class(s, fresh_copy(s, rng, pdom, q.support(), n - 1));

  PartialIso fb;
  auto nf = uniform(rng, 0, 2);
  for (std::int64_t i = 0; i < nf; ++i) {
    Vertex x = pick(rng, base);
    if (!fb.in_dom(x))
      fb = one_point_extend(s, fb, x, {}).first;
  }
  return {std::move(s), fb, q, p};
}

OmegaInstance random_omega_instance(int n, std::size_t sigma_size,
                                    std::uint64_t seed)
{
  Rng rng(seed);
  GraphKind kind = GraphKind::omega_kn(n);
  for (int draw = 0; draw < kDraws; ++draw) {
    VertexSet sigma;
    while (sigma.size() < sigma_size)
      sigma.insert(encode(kind, {uniform(rng, -3, 3),
                                 static_cast<std::uint64_t>(
                                   uniform(rng, 0, n - 1))}));
    auto placement = SigmaPlacement::from_sigma(n, sigma);
    auto partition = sigma_feasible(n, placement);
    if (!partition)
      continue;

    PartialIso q;
    for (std::size_t depth = 1; depth <= 32; ++depth) {
      q = build_f_from_partition(n, placement, *partition, depth);
      if (std::all_of(sigma.begin(), sigma.end(),
                      [&](Vertex v) { return q.in_dom(v); }))
        break;
    }

    std::int64_t shift = uniform(rng, 1, 2) * (coin(rng, 2) ? 1 : -1);
    std::int64_t a = uniform(rng, -3, 3), b = uniform(rng, -3, 3);
    FinitePermZ perm = a == b ? FinitePermZ{}
                              : FinitePermZ({{a, b}, {b, a}});
    ComponentShiftOracle f(n, shift, perm, uniform(rng, 0, n - 1),
                           uniform(rng, 0, n - 1));

    // p: whole components to fresh whole components, positions shuffled.
    std::set<std::int64_t> used;
    auto ncomp = uniform(rng, 1, 2);
    std::map<Vertex, Vertex> pm;
    for (std::int64_t i = 0; i < ncomp; ++i) {
      std::int64_t src, dst;
      do src = uniform(rng, -8, 8); while (!used.insert(src).second);
      do dst = uniform(rng, -8, 8); while (!used.insert(dst).second);
      std::vector<std::uint64_t> pos(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j)
        pos[static_cast<std::size_t>(j)] = static_cast<std::uint64_t>(j);
      std::shuffle(pos.begin(), pos.end(), rng);
      for (int j = 0; j < n; ++j)
        pm[encode(kind, {src, static_cast<std::uint64_t>(j)})] =
          encode(kind, {dst, pos[static_cast<std::size_t>(j)]});
    }
    return {n, f, sigma, q, make_f_class(kind, PartialIso::unchecked(pm))};
  }
  throw Error("no feasible Σ placement drawn");
}

std::optional<NKInstance> random_nk_instance(int n, std::uint64_t seed,
                                             std::optional<IndexPerm> fbar,
                                             bool n2_route)
{
  if (fbar && !piccard_partner(*fbar))
    return std::nullopt;
  Rng rng(seed);
  GraphKind kind = GraphKind::nk_omega(n);
  auto perms = all_perms(n);
  for (int draw = 0; draw < kDraws; ++draw) {
    IndexPerm pi = n2_route ? IndexPerm::identity(2)
                            : fbar.value_or(pick(rng, perms));
    std::vector<std::int64_t> shifts;
    std::vector<FinitePermZ> windows;
    for (int c = 1; c <= n; ++c) {
      shifts.push_back(uniform(rng, -2, 2));
      windows.push_back(random_window(rng));
    }
    if (n2_route) {
      auto still = static_cast<std::size_t>(uniform(rng, 0, 1));
      shifts[still] = 0;
      windows[still] = {};
      if (shifts[1 - still] == 0)
        shifts[1 - still] = 1;
    }
    LineShiftOracle f(n, pi, shifts, windows);
    if (n == 2 && pi.is_identity() && f.fix_infinite() != n2_route)
      continue;

    VertexSet sigma;
    auto size = uniform(rng, 1, n);
    while (static_cast<std::int64_t>(sigma.size()) < size)
      sigma.insert(encode(kind, {uniform(rng, 1, n),
                                 static_cast<std::uint64_t>(
                                   uniform(rng, 0, 8))}));
    AFSigmaContext ctx(f, sigma);
    auto sigma_perm = a_f_sigma_nonempty(ctx);
    if (!sigma_perm || classify_stabilizing(f, 4).stabilizing)
      continue;
    return NKInstance{f, sigma, *sigma_perm};
  }
  return std::nullopt;
}

PartialIso random_p4(GraphKind const &kind, Rng &rng, VertexSet const &avoid)
{
  VertexSet used = avoid;
  auto fresh = [&](std::int64_t c) {
    for (;;) {
      Vertex v = encode(kind, {c, static_cast<std::uint64_t>(
                                    uniform(rng, 0, 16))});
      if (used.insert(v).second)
        return v;
    }
  };
  std::map<Vertex, Vertex> pm;
  auto size = uniform(rng, 0, 3);
  for (std::int64_t i = 0; i < size; ++i) {
    std::int64_t c = uniform(rng, 1, kind.n);
    Vertex x = fresh(c);
    pm[x] = fresh(c);
  }
  return PartialIso::unchecked(pm);
}

std::pair<VertexSet, VertexSet> random_build_sets(GraphKind const &kind,
                                                  Rng &rng,
                                                  PartialIso const &q)
{
  auto point = [&] {
    return encode(kind, {uniform(rng, 1, kind.n),
                         static_cast<std::uint64_t>(uniform(rng, 0, 12))});
  };
  VertexSet gamma, delta;
  auto ng = uniform(rng, 1, 3);
  while (static_cast<std::int64_t>(gamma.size()) < ng)
    gamma.insert(point());
  auto nd = uniform(rng, 0, 2);
  for (std::int64_t i = 0; i < nd; ++i) {
    Vertex d = point();
    if (!gamma.count(d) && !q.in_ran(d) && !q.in_dom(d))
      delta.insert(d);
  }
  return {gamma, delta};
}

CampaignSpec CampaignSpec::from_json(nlohmann::json const &j)
{
  CampaignSpec s;
  s.family = j.at("family").get<std::string>();
  if (j.contains("sizes"))
    s.sizes = j.at("sizes").get<std::vector<int>>();
  else if (j.contains("n"))
    s.sizes = {j.at("n").get<int>()};
  s.trials = j.value("trials", std::size_t{0});
  s.seed = j.value("seed", std::uint64_t{0});
  s.sigma_size = j.value("sigma_size", std::size_t{0});
  if (j.contains("fbar")) {
    if (s.sizes.size() != 1)
      throw HypothesisError("campaign spec", "fbar needs exactly one size");
    s.fbar = IndexPerm::parse(j.at("fbar").get<std::string>(), s.sizes[0]);
  }
  return s;
}

TrialResult run_trial(CampaignSpec const &spec, int n, std::uint64_t seed)
{
  try {
    auto const &fam = spec.family;
    if (fam == "henson" || fam == "henson-conjugator")
      return henson_trial(n, seed, fam == "henson-conjugator");
    if (fam == "omega-kn")
      return omega_trial(n, spec.sigma_size ? spec.sigma_size
                                            : static_cast<std::size_t>(n),
                         seed);
    if (fam == "nkomega" || fam == "nk-build")
      return nk_trial(spec, n, seed, false);
    if (fam == "n2")
      return nk_trial(spec, n, seed, true);
    throw HypothesisError("campaign", "unknown family " + fam);
  } catch (HypothesisError const &) {
    throw;
  } catch (std::exception const &e) {
    return fail(seed, e.what());
  }
}

CampaignSummary run_campaign(CampaignSpec const &spec)
{
  CampaignSummary sum;
  sum.family = spec.family;
  sum.sizes = spec.sizes;
  auto start = std::chrono::steady_clock::now();
  for (int n : spec.sizes) {
    if (spec.family == "n2" && n != 2)
      throw HypothesisError("campaign", "the n2 family needs n = 2");
    if (spec.fbar && !piccard_partner(*spec.fbar)) {
      sum.class_empty = true;
      continue;
    }
    for (std::size_t i = 0; i < spec.trials; ++i) {
      std::uint64_t seed =
        trial_seed(spec.seed + static_cast<std::uint64_t>(n), i);
      auto r = run_trial(spec, n, seed);
      ++sum.attempted;
      if (r.pass)
        ++sum.passed;
      else
        sum.failing_seeds.push_back(seed);
      sum.trials.push_back(std::move(r));
    }
  }
  sum.seconds = std::chrono::duration<double>(
                  std::chrono::steady_clock::now() - start)
                  .count();
  return sum;
}

nlohmann::json CampaignSummary::to_json() const
{
  nlohmann::json j;
  j["family"] = family;
  j["sizes"] = sizes;
  j["attempted"] = attempted;
  j["passed"] = passed;
  j["class_empty"] = class_empty;
  j["failing_seeds"] = failing_seeds;
  j["seconds"] = seconds;
  return j;
}

std::string CampaignSummary::to_string() const
{
  std::ostringstream out;
  out << family << " n=";
  for (std::size_t i = 0; i < sizes.size(); ++i)
    out << (i ? "," : "") << sizes[i];
  out << ": " << passed << "/" << attempted << " passed";
  if (class_empty)
    out << " (class empty, no trials attempted)";
  out << " in " << seconds << " s\n";
  for (auto const &t : trials)
    if (!t.pass)
      out << "  seed " << t.seed << ": " << t.detail << "\n";
  return out.str();
}

} // namespace ultradense
