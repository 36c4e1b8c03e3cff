#include "ultradense/nkomega_engine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace ultradense {

namespace {

void require(bool cond, std::string const &clause, std::string const &detail)
{
  if (!cond)
    throw HypothesisError(clause, detail);
}

// Internal consistency checks of the inductions.
void ensure(bool cond, std::string const &clause, std::string const &detail)
{
  if (!cond)
    throw HypothesisError("assert " + clause, detail);
}

std::string vstr(Vertex v) { return std::to_string(v); }

VertexSet unite(VertexSet a, VertexSet const &b)
{
  a.insert(b.begin(), b.end());
  return a;
}

VertexSet minus_set(VertexSet a, VertexSet const &b)
{
  for (Vertex v : b)
    a.erase(v);
  return a;
}

int comp(GraphKind const &kind, Vertex v)
{
  return static_cast<int>(component_of(kind, v));
}

IndexPerm require_qbar(GraphKind const &kind, PartialIso const &q,
                       std::string const &clause)
{
  auto qbar = index_perm_of(kind, q);
  require(qbar.has_value(), clause,
          "the index map of q is not a permutation of all components");
  return *qbar;
}

// {s f^k : s ∈ S, |k| ≤ b}
VertexSet forbid_orbit(LineShiftOracle &f, VertexSet const &S, std::size_t b)
{
  VertexSet out;
  auto bound = static_cast<std::int64_t>(b);
  for (Vertex s : S)
    for (std::int64_t k = -bound; k <= bound; ++k)
      out.insert(*f.apply(s, k));
  return out;
}

// The prefix w_{p,x} and the point it reaches.
struct Reach
{
  FreeWord prefix;
  Vertex image;
};

Reach reach(FreeWord const &w, PartialIso const &p, LineShiftOracle &f,
            Vertex x)
{
  auto pre = largest_defined_prefix(w, p, f, x);
  return {pre, *evaluate_at(pre, p, f, x)};
}

// Every point of the p-component through v, v included.
VertexSet component_through(PartialIso const &p, Vertex v)
{
  VertexSet out{v};
  for (auto cur = p.image(v); cur && !out.count(*cur); cur = p.image(*cur))
    out.insert(*cur);
  for (auto cur = p.preimage(v); cur && !out.count(*cur);
       cur = p.preimage(*cur))
    out.insert(*cur);
  return out;
}

bool meets(VertexSet const &a, VertexSet const &b)
{
  for (Vertex v : a)
    if (b.count(v))
      return true;
  return false;
}

std::size_t complete_count(PartialIso const &q)
{
  std::size_t k = 0;
  for (auto const &c : components(q))
    k += c.complete;
  return k;
}

// Smallest m ≥ 1 and the tail of a Σ-carrying chain in L_b with
// (b)q̄^m = target. Lowest m first, then lowest tail id.
std::optional<std::pair<Vertex, std::size_t>>
carrier_tail(AFSigmaContext const &ctx, PartialIso const &q,
             IndexPerm const &qbar, int target)
{
  std::optional<std::pair<Vertex, std::size_t>> best;
  for (auto const &c : components(q)) {
    if (c.complete)
      continue;
    bool carries = false;
    for (Vertex v : c.vertices)
      carries = carries || ctx.sigma.count(v);
    if (!carries)
      continue;
    int b = comp(ctx.kind, c.tail());
    int cur = b;
    for (std::size_t m = 1; m <= static_cast<std::size_t>(ctx.n); ++m) {
      cur = qbar.apply(cur);
      if (cur == target) {
        if (!best || m < best->second ||
            (m == best->second && c.tail() < best->first))
          best = std::make_pair(c.tail(), m);
        break;
      }
    }
  }
  return best;
}

// Fresh path y0 → y1 → … → y_m = end with y0 the given tail.
PartialIso fresh_path(AFSigmaContext const &ctx, PartialIso const &q,
                      IndexPerm const &qbar, Vertex tail, std::size_t m,
                      Vertex end, VertexSet avoid)
{
  auto out = q.map();
  avoid = unite(unite(avoid, q.support()), ctx.sigma);
  avoid.insert(end);
  Vertex prev = tail;
  int c = comp(ctx.kind, tail);
  for (std::size_t i = 1; i < m; ++i) {
    c = qbar.apply(c);
    Vertex y = fresh_in(ctx.kind, c, avoid);
    avoid.insert(y);
    out[prev] = y;
    prev = y;
  }
  out[prev] = end;
  return PartialIso::unchecked(std::move(out));
}

// A shortest word over α, β, β⁻¹ whose value in S_n is `target`.
FreeWord word_for(IndexPerm const &target, IndexPerm const &a,
                  IndexPerm const &b)
{
  int n = a.degree();
  auto id = IndexPerm::identity(n);
  std::map<IndexPerm, std::pair<IndexPerm, Syllable>> parent;
  std::deque<IndexPerm> queue{id};
  std::set<IndexPerm> seen{id};
  std::vector<std::pair<IndexPerm, Syllable>> gens = {
    {a, {Letter::Alpha, 1}}, {b, {Letter::Beta, 1}},
    {b.inverse(), {Letter::Beta, -1}}};
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    if (cur == target) {
      std::vector<Syllable> raw;
      while (!(cur == id)) {
        auto const &[prev, syl] = parent.at(cur);
        raw.push_back(syl);
        cur = prev;
      }
      std::reverse(raw.begin(), raw.end());
      return FreeWord::reduce(raw);
    }
    for (auto const &[g, syl] : gens) {
      auto nxt = cur * g;
      if (seen.insert(nxt).second) {
        parent.emplace(nxt, std::make_pair(cur, syl));
        queue.push_back(nxt);
      }
    }
  }
  throw HypothesisError("generation",
                        "⟨h̄, f̄⟩ does not reach " + target.to_string());
}

// Puts Σ (and `extra`) inside dom(q) ∩ ran(q) by adding fresh neighbours
// outside Σ. Class membership is re-certified afterwards.
PartialIso normalize_sigma(AFSigmaContext const &ctx, PartialIso q,
                           VertexSet const &extra, VertexSet const &avoid)
{
  auto qbar = require_qbar(ctx.kind, q, "normalize");
  auto all = unite(ctx.sigma, extra);
  auto taken = unite(unite(all, avoid), q.support());
  for (Vertex v : all) {
    if (q.in_dom(v))
      continue;
    Vertex y = fresh_in(ctx.kind, qbar.apply(comp(ctx.kind, v)), taken);
    taken.insert(y);
    q = easy_one_point(ctx.kind, q, v, y);
  }
  for (Vertex v : all) {
    if (q.in_ran(v))
      continue;
    Vertex x =
      fresh_in(ctx.kind, qbar.inverse().apply(comp(ctx.kind, v)), taken);
    taken.insert(x);
    q = easy_one_point(ctx.kind, q, x, v);
  }
  auto bad = class_violation(ctx, q);
  ensure(!bad, "normalize", bad ? *bad : "");
  return q;
}

} // namespace

AFSigmaContext::AFSigmaContext(LineShiftOracle &oracle, VertexSet sig)
: f(oracle),
  sigma(std::move(sig)),
  n(oracle.n()),
  kind(GraphKind::nk_omega(oracle.n())),
  fbar(oracle.fbar())
{
  for (Vertex s : sigma)
    decode(kind, s); // range check
}

std::optional<IndexPerm> index_perm_of(GraphKind const &kind,
                                       PartialIso const &q)
{
  auto m = index_map(kind, q);
  if (static_cast<int>(m.size()) != kind.n)
    return std::nullopt;
  std::vector<int> img(static_cast<std::size_t>(kind.n));
  for (auto [a, b] : m)
    img[static_cast<std::size_t>(a - 1)] = static_cast<int>(b - 1);
  return IndexPerm(img);
}

Vertex fresh_in(GraphKind const &kind, int c, VertexSet const &avoid)
{
  for (std::uint64_t pos = 0;; ++pos) {
    Vertex v = encode(kind, {c, pos});
    if (!avoid.count(v))
      return v;
  }
}

VertexSet finite_fixed_points(LineShiftOracle const &f)
{
  require(!f.fix_infinite(), "fixed points",
          "fix(f) is infinite under this policy");
  GraphKind kind = GraphKind::nk_omega(f.n());
  VertexSet out;
  for (int c = 1; c <= f.n(); ++c) {
    if (f.fbar().apply(c) != c)
      continue;
    // W(z + s) = z forces z + s to be a moved window key.
    for (auto [t, img] : f.window(c).moved())
      if (img + f.shift(c) == t)
        out.insert(encode(kind, {c, zigzag(img)}));
  }
  return out;
}

std::optional<std::string> class_violation(AFSigmaContext const &ctx,
                                           PartialIso const &q)
{
  auto qbar = index_perm_of(ctx.kind, q);
  if (!qbar)
    return "q̄ is not in S_n";
  if (!generates_symmetric({ctx.fbar, *qbar}, ctx.n))
    return "⟨f̄, q̄⟩ ≠ S_n for q̄ = " + qbar->to_string();
  for (Vertex s : ctx.sigma)
    if (!q.in_dom(s))
      return "Σ point " + vstr(s) + " outside dom(q)";
  auto prof = orbit_rep_profile(q, ctx.sigma);
  if (!prof.at_most_one())
    return "a component of q meets Σ twice";
  if (!prof.complete_exactly_one())
    return "a complete component of q misses Σ";
  std::set<int> fed; // components whose Σ point sits on a chain
  for (std::size_t i = 0; i < prof.comps.size(); ++i)
    if (!prof.comps[i].complete && prof.hits[i] == 1)
      for (Vertex v : prof.comps[i].vertices)
        if (ctx.sigma.count(v))
          fed.insert(comp(ctx.kind, v));
  for (auto const &cyc : qbar->cycles()) {
    bool ok = false;
    for (int c : cyc)
      ok = ok || fed.count(c);
    if (!ok)
      return "q̄-cycle through " + std::to_string(cyc.front()) +
             " has no Σ point on an incomplete component";
  }
  return std::nullopt;
}

PartialIso easy_one_point(GraphKind const &kind, PartialIso const &q, Vertex x,
                          Vertex y)
{
  auto qbar = require_qbar(kind, q, "easy one-point");
  int a = comp(kind, x);
  int target = qbar.apply(a);
  require(!q.in_dom(x), "easy one-point", vstr(x) + " is already in dom(q)");
  require(!q.in_ran(y), "easy one-point", vstr(y) + " is already in ran(q)");
  require(comp(kind, y) == target, "easy one-point",
          "x lies in L_" + std::to_string(a) + " so y must lie in L_" +
            std::to_string(target) + ", not L_" +
            std::to_string(comp(kind, y)));
  auto m = q.map();
  m.emplace(x, y);
  return PartialIso::unchecked(std::move(m));
}

PartialIso extend_orbit_reps(AFSigmaContext const &ctx, PartialIso const &q,
                             std::size_t depth)
{
  auto qbar = require_qbar(ctx.kind, q, "orbit reps");
  for (Vertex s : ctx.sigma)
    require(q.in_dom(s), "orbit reps", "Σ point " + vstr(s) + " not in dom(q)");
  auto prof = orbit_rep_profile(q, ctx.sigma);
  require(prof.at_most_one() && prof.complete_exactly_one(), "orbit reps",
          "Σ must meet each component at most once and each cycle once");
  // Reachability: every q̄-cycle holds a Σ point on a chain.
  {
    std::set<int> fed;
    for (std::size_t i = 0; i < prof.comps.size(); ++i)
      if (!prof.comps[i].complete)
        for (Vertex v : prof.comps[i].vertices)
          if (ctx.sigma.count(v))
            fed.insert(comp(ctx.kind, v));
    for (auto const &cyc : qbar.cycles()) {
      bool ok = false;
      for (int c : cyc)
        ok = ok || fed.count(c);
      require(ok, "orbit reps",
              "no Σ point on a chain reaches L_" + std::to_string(cyc.front()));
    }
  }
  if (depth == 0)
    return q;

  auto const original = q;
  auto boundary = minus_set(q.ran(), q.dom());
  std::size_t cycles_before = complete_count(q);

  auto g = q;
  auto push_tail = [&](Vertex x) {
    Vertex y = fresh_in(ctx.kind, qbar.apply(comp(ctx.kind, x)),
                        unite(g.support(), ctx.sigma));
    g = easy_one_point(ctx.kind, g, x, y);
  };
  auto push_head = [&](Vertex y) {
    Vertex x = fresh_in(ctx.kind, qbar.inverse().apply(comp(ctx.kind, y)),
                        unite(g.support(), ctx.sigma));
    g = easy_one_point(ctx.kind, g, x, y);
  };
  auto attach = [&](Vertex y) {
    auto hit = carrier_tail(ctx, g, qbar, comp(ctx.kind, y));
    ensure(hit.has_value(), "orbit reps",
           "no Σ-carrying chain reaches vertex " + vstr(y));
    g = fresh_path(ctx, g, qbar, hit->first, hit->second, y, {});
  };

  for (Vertex x : boundary)
    push_tail(x);

  // Hang every Σ-free chain behind a Σ-carrying one.
  for (;;) {
    auto p = orbit_rep_profile(g, ctx.sigma);
    std::optional<Vertex> head;
    for (std::size_t i = 0; i < p.comps.size() && !head; ++i)
      if (!p.comps[i].complete && p.hits[i] == 0)
        head = p.comps[i].head();
    if (!head)
      break;
    attach(*head);
  }

  // Absorb the first `depth` vertices of the enumeration.
  for (Vertex v = 0; v < depth; ++v) {
    bool in_d = g.in_dom(v), in_r = g.in_ran(v);
    if (in_d && in_r)
      continue;
    if (in_r) {
      push_tail(v);
    } else if (in_d) {
      push_head(v);
    } else {
      attach(v);
      push_tail(v);
    }
  }

  for (Vertex x : boundary)
    ensure(!original.in_dom(*g.image(x)), "orbit reps boundary",
           "(x)g lands in dom(q) for x = " + vstr(x));
  auto after = orbit_rep_profile(g, ctx.sigma);
  for (std::size_t i = 0; i < after.comps.size(); ++i)
    ensure(after.hits[i] == 1, "orbit reps profile",
           "component headed by " + vstr(after.comps[i].head()) +
             " meets Σ " + std::to_string(after.hits[i]) + " times");
  ensure(complete_count(g) == cycles_before, "orbit reps cycles",
         "a new complete component appeared");
  return g;
}

PartialIso class_one_point(AFSigmaContext const &ctx, PartialIso const &q,
                           Vertex x, Vertex y)
{
  require_qbar(ctx.kind, q, "class one-point");
  for (Vertex s : ctx.sigma)
    require(q.in_dom(s), "class one-point",
            "Σ point " + vstr(s) + " not in dom(q)");
  require(!q.in_dom(x), "class one-point", vstr(x) + " is in dom(q)");
  require(!q.in_dom(y) && !q.in_ran(y), "class one-point",
          vstr(y) + " is in dom(q) ∪ ran(q)");
  require(x != y, "class one-point", "x = y");
  return easy_one_point(ctx.kind, q, x, y);
}

PartialIso class_one_point_before(AFSigmaContext const &ctx,
                                  PartialIso const &q, Vertex x, Vertex y)
{
  return invert(class_one_point(ctx, invert(q), y, x));
}

PartialIso amalgamate(AFSigmaContext const &ctx, PartialIso const &q,
                      Vertex x, Vertex y)
{
  for (Vertex s : ctx.sigma)
    require(q.in_dom(s), "amalgamate", "Σ point " + vstr(s) + " not in dom(q)");
  require(!q.in_dom(x), "amalgamate", vstr(x) + " is in dom(q)");
  require(!q.in_ran(y), "amalgamate", vstr(y) + " is in ran(q)");
  auto cs = components(q);
  auto idx = component_index(cs);
  require(idx.count(x) && idx.count(y), "amalgamate",
          "x and y must lie on components of q");
  auto const &A = cs[idx.at(x)];
  auto const &B = cs[idx.at(y)];
  require(idx.at(x) != idx.at(y), "amalgamate",
          "x and y lie on the same component");
  VertexSet a_set(A.vertices.begin(), A.vertices.end());
  VertexSet b_set(B.vertices.begin(), B.vertices.end());
  require(!(meets(a_set, ctx.sigma) && meets(b_set, ctx.sigma)), "amalgamate",
          "would orphan representative");
  auto without_a = index_perm_of(ctx.kind, q.restrict(minus_set(q.dom(), a_set)));
  auto without_b = index_perm_of(ctx.kind, q.restrict(minus_set(q.dom(), b_set)));
  require(without_a && without_b && *without_a == *without_b, "amalgamate",
          "q minus A and q minus B must induce the same permutation");
  return easy_one_point(ctx.kind, q, x, y);
}

std::optional<IndexPerm> piccard_partner(IndexPerm const &a)
{
  int n = a.degree();
  if (n > 8)
    throw HypothesisError("piccard", "degree " + std::to_string(n) +
                                       " is out of desk range");
  if (a.is_identity()) {
    if (n == 1)
      return a;
    if (n == 2)
      return IndexPerm::parse("(1 2)", 2);
    return std::nullopt;
  }
  for (auto const &b : all_perms(n))
    if (generates_symmetric({a, b}, n))
      return b;
  return std::nullopt;
}

std::optional<IndexPerm> a_f_sigma_nonempty(AFSigmaContext const &ctx)
{
  if (ctx.sigma.empty())
    return std::nullopt;
  std::set<int> carriers;
  for (Vertex s : ctx.sigma)
    carriers.insert(comp(ctx.kind, s));
  for (auto const &sigma : all_perms(ctx.n)) {
    if (!generates_symmetric({ctx.fbar, sigma}, ctx.n))
      continue;
    bool ok = true;
    for (auto const &cyc : sigma.cycles()) {
      bool fed = false;
      for (int c : cyc)
        fed = fed || carriers.count(c);
      ok = ok && fed;
    }
    if (ok)
      return sigma;
  }
  return std::nullopt;
}

std::vector<std::int64_t> nonstab_escape(LineShiftOracle &f,
                                         PartialIso const &q, Vertex x)
{
  if (!q.in_dom(x))
    return {};
  auto bound = static_cast<std::int64_t>(q.size() + 1);

  // Steps along q from v until leaving dom(q); nullopt on a cycle.
  auto chain_exit = [&](Vertex v) -> std::optional<std::int64_t> {
    std::int64_t m = 0;
    for (Vertex cur = v; q.in_dom(cur); cur = *q.image(cur)) {
      ++m;
      if (*q.image(cur) == v)
        return std::nullopt;
    }
    return m;
  };

  // States are points on complete components, reached through the
  // recorded exponent list.
  std::map<Vertex, std::vector<std::int64_t>> seen;
  std::deque<Vertex> queue;
  if (auto m = chain_exit(x))
    return {*m, 0};
  seen[x] = {};
  queue.push_back(x);
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    auto path = seen.at(v);
    std::vector<Vertex> cycle;
    for (Vertex cur = *q.image(v);; cur = *q.image(cur)) {
      cycle.push_back(cur);
      if (cur == v)
        break;
    }
    for (std::int64_t mag = 1; mag <= bound; ++mag)
      for (std::int64_t sign : {1, -1})
        for (std::size_t i = 0; i < cycle.size(); ++i) {
          std::int64_t k = sign * mag;
          Vertex t = *f.apply(cycle[i], k);
          auto next = path;
          next.push_back(static_cast<std::int64_t>(i + 1));
          next.push_back(k);
          if (!q.in_dom(t))
            return next;
          if (auto m = chain_exit(t)) {
            next.push_back(*m);
            next.push_back(0);
            return next;
          }
          if (!seen.count(t)) {
            seen[t] = next;
            queue.push_back(t);
          }
        }
  }
  throw HypothesisError("non-stabilizing",
                        "no escape from dom(q) for vertex " + vstr(x) +
                          "; f stabilizes a finite set around it");
}

FreeWord escape_word(std::vector<std::int64_t> const &exponents)
{
  std::vector<Syllable> raw;
  for (std::size_t i = 0; i < exponents.size(); ++i)
    if (exponents[i] != 0)
      raw.push_back({i % 2 == 0 ? Letter::Alpha : Letter::Beta, exponents[i]});
  return FreeWord::reduce(raw);
}

PartialIso seed_class_iso(AFSigmaContext const &ctx, IndexPerm const &sigma)
{
  require(sigma.degree() == ctx.n, "seed", "σ has the wrong degree");
  std::map<Vertex, Vertex> m;
  VertexSet taken = ctx.sigma;
  std::set<int> covered;
  for (Vertex s : ctx.sigma) {
    int c = comp(ctx.kind, s);
    std::size_t len = 0;
    for (auto const &cyc : sigma.cycles())
      if (std::find(cyc.begin(), cyc.end(), c) != cyc.end())
        len = cyc.size();
    Vertex pred = fresh_in(ctx.kind, sigma.inverse().apply(c), taken);
    taken.insert(pred);
    m[pred] = s;
    Vertex cur = s;
    int cc = c;
    for (std::size_t i = 0; i < len; ++i) {
      covered.insert(cc);
      cc = sigma.apply(cc);
      Vertex nxt = fresh_in(ctx.kind, cc, taken);
      taken.insert(nxt);
      m[cur] = nxt;
      cur = nxt;
    }
  }
  require(static_cast<int>(covered.size()) == ctx.n, "seed",
          "some σ-cycle carries no Σ point");
  return PartialIso::unchecked(std::move(m));
}

BuildResult base_case_build(AFSigmaContext const &ctx, PartialIso const &q_in,
                            VertexSet const &gamma, VertexSet const &delta)
{
  auto qbar = require_qbar(ctx.kind, q_in, "base case");
  for (Vertex d : delta)
    require(!q_in.in_ran(d), "base case", "ran(q) meets Δ at " + vstr(d));
  if (auto bad = class_violation(ctx, q_in))
    throw HypothesisError("base case", *bad);

  bool two_id = ctx.n == 2 && ctx.fbar.is_identity();
  LineShiftOracle &f = ctx.f;

  // Γ ⊆ dom(q), and fix(f) ⊆ dom(q) in the two-line identity case.
  auto q = q_in;
  VertexSet absorb = gamma;
  if (two_id)
    absorb = unite(absorb, finite_fixed_points(f));
  for (Vertex v : absorb)
    if (!q.in_dom(v)) {
      Vertex y = fresh_in(ctx.kind, qbar.apply(comp(ctx.kind, v)),
                          unite(unite(q.support(), delta), absorb));
      q = class_one_point(ctx, q, v, y);
    }
  VertexSet const phi = q.dom();

  auto check_outer = [&](PartialIso const &qj, FreeWord const &lam,
                         VertexSet const &gj) {
    for (Vertex d : delta)
      ensure(!qj.in_ran(d), "base case (I)", "ran meets Δ at " + vstr(d));
    std::map<Vertex, Vertex> seen;
    for (Vertex u : gj) {
      auto r = reach(lam, qj, f, u);
      auto [it, fresh] = seen.emplace(r.image, u);
      ensure(fresh, "base case (II)",
             "vertices " + vstr(it->second) + " and " + vstr(u) +
               " reach the same point");
      for (Vertex v : component_through(qj, r.image))
        ensure(!phi.count(v), "base case (III)",
               "the chain through (u)λ_u meets dom(q), u = " + vstr(u));
      ensure(r.prefix.length() < lam.length(), "base case (IV)",
             "λ is fully defined at " + vstr(u));
    }
  };

  VertexSet gj;
  auto lambda = FreeWord::alpha(1);
  for (Vertex x0 : gamma) {
    Vertex x = x0;
    FreeWord next, rho;
    std::optional<Vertex> y;
    for (int attempt = 0;; ++attempt) {
      ensure(attempt < 2, "base case swap", "roles swapped twice");
      // ν drives x out of dom(q_j) when λ(q_j) is defined at x.
      FreeWord nu;
      if (auto img = evaluate_at(lambda, q, f, x))
        nu = escape_word(nonstab_escape(f, q, *img));
      auto lam_nu = lambda * nu;
      ensure(!evaluate_at(lam_nu * FreeWord::alpha(1), q, f, x),
             "base case ν", "x stays in dom(λνα(q))");

      std::size_t m = lam_nu.length() + 1;
      if (!two_id) {
        int a = comp(ctx.kind, x);
        int b = evaluate_perm(lam_nu, qbar, ctx.fbar).apply(a);
        auto order = static_cast<std::size_t>(qbar.order());
        std::size_t lo = m;
        for (; m < lo + order; ++m)
          if (ctx.fbar.apply(qbar.pow(static_cast<std::int64_t>(m)).apply(b)) !=
              qbar.pow(static_cast<std::int64_t>(m)).apply(b))
            break;
        require(m < lo + order, "base case m",
                "f̄ fixes the q̄-orbit of " + std::to_string(b) +
                  " pointwise; ⟨f̄, q̄⟩ ≠ S_n");
      }
      rho = lam_nu * FreeWord::alpha(static_cast<std::int64_t>(m)) *
            FreeWord::beta(1);
      next = rho * FreeWord::alpha(1);

      auto rx = reach(next, q, f, x);
      y.reset();
      std::size_t len_y = 0;
      for (Vertex u : gj) {
        auto ru = reach(next, q, f, u);
        if (ru.image == rx.image) {
          y = u;
          len_y = ru.prefix.length();
        }
      }
      if (y && rx.prefix.length() < len_y) {
        // The longer prefix takes the inductive role.
        gj.erase(*y);
        gj.insert(x);
        lambda = next;
        check_outer(q, lambda, gj);
        x = *y;
        continue;
      }
      break;
    }

    // Inner induction r_0 = q_j, …, r_{|ρ|}.
    auto r = q;
    auto const qj = q;
    std::map<Vertex, Vertex> base_img; // (u)λ^{(j)}_{q_j,u}
    for (Vertex u : gj)
      base_img[u] = reach(lambda, qj, f, u).image;
    std::size_t len_y0 = y ? reach(next, qj, f, *y).prefix.length() : 0;
    std::size_t b = next.b_count();
    bool collided_before = true;
    for (std::size_t k = 0; k <= rho.length(); ++k) {
      auto rx = reach(next, r, f, x);
      std::optional<Reach> ry;
      if (y)
        ry = reach(next, r, f, *y);
      bool collide = ry && ry->image == rx.image;
      ensure(k <= rx.prefix.length() && rx.prefix.length() <= rho.length(),
             "base case (i)", "k = " + std::to_string(k));
      for (Vertex d : delta)
        ensure(!r.in_ran(d), "base case (ii)", "ran meets Δ");
      std::map<Vertex, Vertex> seen;
      for (Vertex u : gj) {
        auto ru = reach(next, r, f, u);
        if (u != y)
          ensure(ru.prefix == reach(lambda, qj, f, u).prefix, "base case (iii)",
                 "prefix changed for " + vstr(u));
        ensure(seen.emplace(ru.image, u).second, "base case (iv)",
               "collision inside Γ_j");
        for (Vertex v : component_through(r, ru.image))
          ensure(!phi.count(v), "base case (v)",
                 "chain through (u)λ_u meets dom(q), u = " + vstr(u));
        if (u != y)
          ensure(base_img[u] != rx.image, "base case (vi)",
                 "x reaches the old image of " + vstr(u));
      }
      ensure(!r.in_dom(rx.image), "base case (vi)", "(x)λ_x in dom(r_k)");
      if (k > 0 && !collided_before)
        ensure(!collide, "base case (vii)", "a separated pair met again");
      if (y) {
        ensure(rx.prefix.length() > ry->prefix.length(), "base case (viii)",
               "the prefix of x is not longer than that of y");
        if (collide)
          ensure(ry->prefix.length() >= len_y0 + k, "base case (viii)",
                 "y's prefix grows too slowly");
      }
      collided_before = collide;

      if (k == rho.length() || rx.prefix.length() == rho.length())
        break;
      Vertex z = rx.image;
      int c = comp(ctx.kind, z);
      VertexSet avoid = unite(unite(delta, r.support()), {z});
      for (Vertex u : gj)
        avoid.insert(reach(next, r, f, u).image);
      Vertex zp = fresh_in(ctx.kind, qbar.apply(c), forbid_orbit(f, avoid, b));
      r = class_one_point(ctx, r, z, zp);
    }
    ensure(reach(next, r, f, x).prefix == rho, "base case (i)",
           "x did not reach the end of ρ");
    q = r;
    gj.insert(x);
    lambda = next;
    check_outer(q, lambda, gj);
  }

  auto tail = word_for(evaluate_perm(lambda, qbar, ctx.fbar).inverse(), qbar,
                       ctx.fbar);
  auto w = lambda * tail;
  ensure(w.starts_with(Letter::Alpha) && !w.has_alpha_inverse(),
         "base case word", w.to_string());
  auto rep = check_S(ctx.kind, q, {gamma, {}, phi, delta}, w, f);
  ensure(rep.holds, "base case 𝒮", rep.to_string());
  return {q, w};
}

PartialIso fill_prod(AFSigmaContext const &ctx, PartialIso const &q,
                     SSets const &sets, FreeWord const &w, Vertex x)
{
  auto qbar = require_qbar(ctx.kind, q, "fill prod");
  require(w.starts_with(Letter::Alpha) && !w.has_alpha_inverse(), "fill prod",
          "w must start with α and avoid α⁻¹");
  require(sets.gamma.count(x) && !sets.theta.count(x), "fill prod",
          vstr(x) + " is not in Γ∖Θ");
  for (Vertex v : unite(sets.gamma, sets.phi))
    require(q.in_dom(v), "fill prod", "Γ ∪ Φ not inside dom(q)");
  auto pre = check_S(ctx.kind, q, sets, w, ctx.f);
  require(pre.holds, "fill prod", "q fails 𝒮: " + pre.to_string());
  LineShiftOracle &f = ctx.f;

  auto wx = largest_defined_prefix(w, q, f, x);
  require(wx.length() < w.length(), "fill prod",
          vstr(x) + " is already in dom(w(q))");
  std::size_t M = wx.length() + 1;
  std::size_t b = w.b_count();
  VertexSet others = sets.gamma;
  others.erase(x);

  // Letters of w in order.
  std::vector<Syllable> letters;
  for (auto const &s : w.syllables())
    for (std::int64_t i = 0; i < std::abs(s.exp); ++i)
      letters.push_back({s.letter, s.exp > 0 ? 1 : -1});

  auto h = q;
  std::map<Vertex, FreeWord> fixed_prefix;
  for (Vertex u : others)
    fixed_prefix[u] = largest_defined_prefix(w, q, f, u);

  for (std::size_t j = M - 1; j < w.length(); ++j) {
    auto rho = w.prefix(j);
    if (letters[j].letter == Letter::Alpha) {
      Vertex y = *evaluate_at(rho, h, f, x);
      ensure(!h.in_dom(y), "fill prod (iii)", "(x)ρ_j in dom(q_j)");
      VertexSet avoid = unite(unite(h.support(), sets.delta), {y});
      for (Vertex u : sets.gamma)
        avoid.insert(reach(w, h, f, u).image);
      Vertex z = fresh_in(ctx.kind, qbar.apply(comp(ctx.kind, y)),
                          forbid_orbit(f, avoid, b));
      h = class_one_point(ctx, h, y, z);
    }
    // (i)–(v) at the new length.
    auto rho1 = w.prefix(j + 1);
    for (Vertex d : sets.delta)
      ensure(!h.in_ran(d), "fill prod (i)", "ran meets Δ");
    auto xr = *evaluate_at(rho1, h, f, x);
    auto slack = static_cast<std::int64_t>(b - rho1.b_count());
    for (std::int64_t i = -slack; i <= slack; ++i)
      ensure(!h.in_dom(*f.apply(xr, i)), "fill prod (iii)",
             "(x)ρ f^" + std::to_string(i) + " in dom");
    auto rx = reach(w, h, f, x);
    for (Vertex u : others) {
      auto ru = reach(w, h, f, u);
      ensure(ru.prefix == fixed_prefix[u] && !h.in_dom(ru.image),
             "fill prod (ii)", "prefix of " + vstr(u) + " moved");
      ensure(ru.image != rx.image, "fill prod (iv)",
             vstr(x) + " meets " + vstr(u));
    }
    for (Vertex u : sets.gamma) {
      auto ru = reach(w, h, f, u);
      for (Vertex v : component_through(h, ru.image))
        ensure(!sets.phi.count(v), "fill prod (v)", "chain through (u)w_u meets Φ, u = " + vstr(u));
    }
  }

  auto theta = sets.theta;
  theta.insert(x);
  auto post = check_S(ctx.kind, h, {sets.gamma, theta, sets.phi, sets.delta},
                      w, f);
  ensure(post.holds, "fill prod 𝒮", post.to_string());
  return h;
}

BuildResult main_build(AFSigmaContext const &ctx, PartialIso const &q_in,
                       VertexSet const &gamma, VertexSet const &delta)
{
  auto qbar = require_qbar(ctx.kind, q_in, "main build");
  for (Vertex g : gamma)
    require(!delta.count(g), "main build", "Γ and Δ share " + vstr(g));
  for (Vertex d : delta)
    require(!q_in.in_ran(d), "main build", "ran(q) meets Δ at " + vstr(d));

  auto q = q_in;
  for (Vertex g : gamma)
    if (!q.in_dom(g)) {
      Vertex y = fresh_in(ctx.kind, qbar.apply(comp(ctx.kind, g)),
                          unite(unite(q.support(), delta), gamma));
      q = class_one_point(ctx, q, g, y);
    }
  VertexSet const phi = q.dom();

  auto base = base_case_build(ctx, q, gamma, delta);
  auto h = base.h;
  VertexSet theta;
  for (Vertex x : gamma) {
    h = fill_prod(ctx, h, {gamma, theta, phi, delta}, base.w, x);
    theta.insert(x);
  }
  auto rep = check_S(ctx.kind, h, {gamma, gamma, phi, delta}, base.w, ctx.f);
  ensure(rep.holds, "main build 𝒮", rep.to_string());
  return {h, base.w};
}

bool is_p4_class(GraphKind const &kind, PartialIso const &p)
{
  for (auto [x, y] : p.map())
    if (p.in_dom(y) || component_of(kind, x) != component_of(kind, y))
      return false;
  return true;
}

P4Split split_into_P4(GraphKind const &kind, PartialIso const &q)
{
  if (q.empty())
    return {};
  auto m = index_map(kind, q);
  // Lowest completion σ of q̄.
  std::optional<IndexPerm> sigma;
  for (auto const &s : all_perms(kind.n)) {
    bool ok = true;
    for (auto [a, b] : m)
      ok = ok && s.apply(static_cast<int>(a)) == b;
    if (ok) {
      sigma = s;
      break;
    }
  }
  VertexSet taken = q.support();
  PartialIso adjust, r;
  if (sigma->is_identity()) {
    adjust = PartialIso::identity(q.dom());
    r = q;
  } else {
    std::map<Vertex, Vertex> am;
    for (Vertex x : q.dom()) {
      Vertex y = fresh_in(kind, sigma->apply(comp(kind, x)), taken);
      taken.insert(y);
      am[x] = y;
    }
    adjust = PartialIso::unchecked(std::move(am));
    r = compose(invert(adjust), q);
  }
  std::map<Vertex, Vertex> pm;
  taken = unite(taken, r.support());
  for (Vertex x : r.dom()) {
    Vertex y = fresh_in(kind, comp(kind, x), taken);
    taken.insert(y);
    pm[x] = y;
  }
  auto p1 = PartialIso::unchecked(std::move(pm));
  auto p2 = compose(invert(p1), r);
  return {p1, p2, adjust};
}

WitnessCertificate density_witness_nkomega(AFSigmaContext const &ctx,
                                           PartialIso const &q_given,
                                           PartialIso const &p)
{
  require(is_p4_class(ctx.kind, p), "density",
          "p must have dom(p) ∩ ran(p) = ∅ and p̄ = id");
  require(!(ctx.n == 2 && ctx.fbar.is_identity() && ctx.f.fix_infinite()),
          "density", "two lines, f̄ = id and fix(f) infinite: use the n2 route");
  require(a_f_sigma_nonempty(ctx).has_value(), "density",
          "the class A_{f,Σ} is empty");
  // [∅] is the whole class: start from a seeded representative.
  auto const q_in =
    q_given.empty() && a_f_sigma_nonempty(ctx)
      ? seed_class_iso(ctx, *a_f_sigma_nonempty(ctx))
      : q_given;
  if (auto bad = class_violation(ctx, q_in))
    throw HypothesisError("density", *bad);
  auto verdict = classify_stabilizing(ctx.f, 4);
  require(!verdict.stabilizing, "density", "f is stabilizing");

  WitnessCertificate cert;
  cert.construction = "nkomega";
  cert.kind = ctx.kind;
  cert.f = ctx.f.describe();
  cert.sigma = ctx.sigma;
  cert.q = q_given;
  cert.p = p;
  cert.target = p;
  if (p.empty()) {
    cert.h = q_in;
    return cert;
  }
  LineShiftOracle &f = ctx.f;

  auto q = normalize_sigma(ctx, q_in, unite(p.dom(), p.ran()), {});
  auto qbar = *index_perm_of(ctx.kind, q);
  VertexSet const dom_p = p.dom(), ran_p = p.ran();

  // ω₁ for dom(p).
  auto [q1, omega1] = main_build(ctx, q, dom_p, {});
  VertexSet img1;
  for (Vertex x : dom_p)
    img1.insert(*evaluate_at(omega1, q1, f, x));
  for (Vertex y : img1)
    if (!q1.in_ran(y)) {
      Vertex x = fresh_in(ctx.kind, qbar.inverse().apply(comp(ctx.kind, y)),
                          unite(q1.support(), img1));
      q1 = class_one_point(ctx, q1, x, y);
    }
  for (Vertex x : dom_p) {
    Vertex y = *evaluate_at(omega1, q1, f, x);
    ensure(q1.in_ran(y) && !q1.in_dom(y), "density (7)",
           "(x)ω₁ not a chain tail for x = " + vstr(x));
  }

  // ω₂ for ran(p), built on q₁⁻¹ away from the ω₁ images.
  auto inv = main_build(ctx, invert(q1), ran_p, img1);
  auto q2 = invert(inv.h);
  auto omega2 = inv.w.swap_alpha();
  VertexSet img2;
  for (Vertex x : ran_p)
    img2.insert(*evaluate_at(omega2, q2, f, x));
  for (Vertex v : img1)
    ensure(!q2.in_dom(v), "density ω₂", "dom(q₂) meets (dom p)ω₁");
  for (Vertex v : img2)
    ensure(!q2.in_ran(v), "density ω₂", "ran(q₂) meets (ran p)ω₂");

  // Padding chains x_{i(j,1)} → … → x_{i(j,m_j+1)} along each q̄-cycle.
  auto h = q2;
  VertexSet taken = unite(unite(q2.support(), img1), img2);
  for (auto const &cyc : qbar.cycles()) {
    std::vector<Vertex> xs;
    for (int c : cyc) {
      xs.push_back(fresh_in(ctx.kind, c, taken));
      taken.insert(xs.back());
    }
    xs.push_back(fresh_in(ctx.kind, cyc.front(), taken));
    taken.insert(xs.back());
    for (std::size_t k = 0; k + 1 < xs.size(); ++k)
      h = class_one_point(ctx, h, xs[k], xs[k + 1]);
  }
  for (Vertex x : dom_p)
    ensure(!h.in_dom(*evaluate_at(omega1, h, f, x)), "density h₀",
           "dom(h₀) meets (dom p)ω₁");
  for (Vertex x : ran_p) {
    auto v = evaluate_at(omega2, h, f, x);
    ensure(v && !h.in_ran(*v), "density h₀", "(ran p)ω₂ meets ran(h₀)");
  }

  // The ladder h_1 … h_{k−1}.
  auto k = static_cast<std::size_t>(qbar.order());
  std::map<Vertex, Vertex> ys;
  for (Vertex x : dom_p)
    ys[x] = *evaluate_at(omega1, h, f, x);
  for (std::size_t j = 0; j + 1 < k; ++j) {
    VertexSet avoid = h.support();
    for (auto [x, y] : ys)
      avoid.insert(y);
    for (Vertex x : ran_p)
      avoid.insert(*evaluate_at(omega2, h, f, x));
    for (auto &[x, y] : ys) {
      ensure(!h.in_dom(y), "density ladder",
             "(x)ω₁h^" + std::to_string(j) + " in dom(h_j)");
      Vertex z = fresh_in(ctx.kind, qbar.apply(comp(ctx.kind, y)), avoid);
      avoid.insert(z);
      h = class_one_point(ctx, h, y, z);
      y = z;
    }
  }

  // Join (x)ω₁h^{k−1} to ((x)p)ω₂.
  std::vector<std::pair<Vertex, Vertex>> joins;
  for (auto [x, y] : ys)
    joins.emplace_back(y, *evaluate_at(omega2, h, f, *p.image(x)));
  for (auto [from, to] : joins) {
    ensure(!h.in_dom(from) && !h.in_ran(to), "density join",
           "endpoints already used");
    if (!h.in_dom(to))
      h = class_one_point(ctx, h, from, to);
    else
      h = amalgamate(ctx, h, from, to);
  }
  if (auto bad = class_violation(ctx, h))
    ensure(false, "density class", *bad);

  cert.h = h;
  cert.params["k"] = static_cast<std::int64_t>(k);
  cert.words["omega1"] = omega1.to_string();
  cert.words["omega2"] = omega2.to_string();
  cert.product = {{omega1, false},
                  {FreeWord::alpha(static_cast<std::int64_t>(k)), false},
                  {omega2, true}};

  // Engine-side evaluation of the product.
  for (auto [x, px] : p.map()) {
    auto a = evaluate_at(omega1, h, f, x);
    for (std::size_t i = 0; a && i < k; ++i)
      a = h.image(*a);
    auto b = evaluate_at(omega2, h, f, px);
    ensure(a && b && *a == *b, "density product",
           "ω₁h^kω₂⁻¹ misses the pair at " + vstr(x));
  }
  return cert;
}

WitnessCertificate n2_special_witness(AFSigmaContext const &ctx,
                                      PartialIso const &q_given,
                                      PartialIso const &p)
{
  require(ctx.n == 2 && ctx.fbar.is_identity(), "n2",
          "needs two lines and f̄ = id");
  require(ctx.f.fix_infinite(), "n2", "fix(f) is finite: wrong routing");
  require(is_p4_class(ctx.kind, p), "n2",
          "p must have dom(p) ∩ ran(p) = ∅ and p̄ = id");
  // [∅] is the whole class: start from a seeded representative.
  auto const q_in =
    q_given.empty() && a_f_sigma_nonempty(ctx)
      ? seed_class_iso(ctx, *a_f_sigma_nonempty(ctx))
      : q_given;
  if (auto bad = class_violation(ctx, q_in))
    throw HypothesisError("n2", *bad);
  auto verdict = classify_stabilizing(ctx.f, 4);
  require(!verdict.stabilizing, "n2", "f is stabilizing");

  WitnessCertificate cert;
  cert.construction = "n2";
  cert.kind = ctx.kind;
  cert.f = ctx.f.describe();
  cert.sigma = ctx.sigma;
  cert.q = q_given;
  cert.p = p;
  cert.target = p;
  if (p.empty()) {
    cert.h = q_in;
    return cert;
  }
  LineShiftOracle &f = ctx.f;
  int fix_line = ctx.f.shift(2) == 0 ? 2 : 1;
  int mov_line = 3 - fix_line;
  require(ctx.f.shift(mov_line) != 0, "n2",
          "both lines have infinitely many fixed points");

  auto q = normalize_sigma(ctx, q_in, unite(p.dom(), p.ran()), {});
  auto on_line = [&](VertexSet const &s, int line) {
    VertexSet out;
    for (Vertex v : s)
      if (comp(ctx.kind, v) == line)
        out.insert(v);
    return out;
  };
  auto shifted = [&](VertexSet const &s, std::int64_t m) {
    VertexSet out;
    for (Vertex v : s)
      out.insert(*f.apply(v, m));
    return out;
  };
  // 1, −1, 2, −2, … until the shifted set misses `avoid`.
  auto find_exp = [&](VertexSet const &s, VertexSet const &avoid) {
    for (std::int64_t mag = 1;; ++mag)
      for (std::int64_t m : {mag, -mag})
        if (!meets(shifted(s, m), avoid))
          return m;
  };
  std::uint64_t far = 0;
  auto fresh_fixed = [&](VertexSet const &avoid) {
    for (;;) {
      auto v = *ctx.f.far_fixed_point(fix_line, far);
      far = decode(ctx.kind, v).position + 1;
      if (!avoid.count(v))
        return v;
    }
  };

  VertexSet const dom_p = p.dom(), ran_p = p.ran();

  std::int64_t m1 = find_exp(on_line(dom_p, mov_line), q.support());
  VertexSet a1 = shifted(dom_p, m1);
  auto q1 = q;
  for (Vertex v : a1) {
    if (q1.in_dom(v))
      continue;
    Vertex y = comp(ctx.kind, v) == mov_line
                 ? fresh_fixed(unite(q1.support(), a1))
                 : fresh_in(ctx.kind, mov_line, unite(q1.support(), a1));
    q1 = class_one_point(ctx, q1, v, y);
  }
  VertexSet b1; // (L_fix ∩ dom p) f^{m1} q1
  for (Vertex v : on_line(dom_p, fix_line))
    b1.insert(*q1.image(*f.apply(v, m1)));
  std::int64_t m2 = find_exp(b1, q1.support());
  auto d1 = [&](PartialIso const &h) {
    VertexSet out;
    for (Vertex v : dom_p)
      out.insert(*f.apply(*h.image(*f.apply(v, m1)), m2));
    return out;
  };
  for (Vertex v : d1(q1))
    ensure(!q1.in_dom(v), "n2 m2", "(dom p)f^{m1}q1f^{m2} meets dom(q1)");

  std::int64_t m3 = find_exp(on_line(ran_p, mov_line), q1.support());
  VertexSet a3 = shifted(ran_p, m3);
  auto q2 = q1;
  VertexSet keep = unite(d1(q1), a3);
  for (Vertex v : a3) {
    if (q2.in_ran(v))
      continue;
    if (comp(ctx.kind, v) == mov_line) {
      Vertex t = fresh_fixed(unite(q2.support(), keep));
      q2 = class_one_point(ctx, q2, t, v);
    } else {
      Vertex x = fresh_in(ctx.kind, mov_line, unite(q2.support(), keep));
      q2 = class_one_point_before(ctx, q2, x, v);
    }
  }
  auto D1 = d1(q2);
  for (Vertex v : D1)
    ensure(!q2.in_dom(v), "n2 q2", "(dom p)f^{m1}q2f^{m2} meets dom(q2)");
  VertexSet b3; // (L_fix ∩ ran p) f^{m3} q2⁻¹
  for (Vertex v : on_line(ran_p, fix_line))
    b3.insert(*q2.preimage(*f.apply(v, m3)));
  std::int64_t m4 = find_exp(b3, unite(q2.support(), D1));
  auto r1 = [&](Vertex px) {
    return *f.apply(*q2.preimage(*f.apply(px, m3)), m4);
  };
  VertexSet R1;
  for (Vertex v : ran_p)
    R1.insert(r1(v));
  for (Vertex v : R1)
    ensure(!q2.in_ran(v), "n2 m4", "(ran p)f^{m3}q2⁻¹f^{m4} meets ran(q2)");

  auto h = q2;
  VertexSet avoid = unite(unite(q2.support(), D1), R1);
  std::vector<std::pair<Vertex, Vertex>> joins;
  for (auto [x, px] : p.map()) {
    Vertex a = *f.apply(*q2.image(*f.apply(x, m1)), m2);
    Vertex y = fresh_in(ctx.kind, 3 - comp(ctx.kind, a), avoid);
    avoid.insert(y);
    h = class_one_point(ctx, h, a, y);
    joins.emplace_back(y, r1(px));
  }
  for (auto [y, b] : joins) {
    if (!h.in_dom(b) && !h.in_ran(b))
      h = class_one_point(ctx, h, y, b);
    else
      h = amalgamate(ctx, h, y, b);
  }
  if (auto bad = class_violation(ctx, h))
    ensure(false, "n2 class", *bad);

  auto word = FreeWord::reduce({{Letter::Beta, m1},
                                {Letter::Alpha, 1},
                                {Letter::Beta, m2},
                                {Letter::Alpha, 2},
                                {Letter::Beta, -m4},
                                {Letter::Alpha, 1},
                                {Letter::Beta, -m3}});
  cert.h = h;
  cert.params = {{"m1", m1}, {"m2", m2}, {"m3", m3}, {"m4", m4}};
  cert.words["product"] = word.to_string();
  cert.product = {{word, false}};
  for (auto [x, px] : p.map())
    ensure(evaluate_at(word, h, f, x) == px, "n2 product",
           "the word misses the pair at " + vstr(x));
  return cert;
}

} // namespace ultradense
