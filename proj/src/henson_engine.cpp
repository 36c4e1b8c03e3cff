#include "ultradense/henson_engine.hpp"

#include <algorithm>

#include "ultradense/word_algebra.hpp"

namespace ultradense {

namespace {

VertexSet unite(std::initializer_list<VertexSet const *> sets)
{
  VertexSet out;
  for (auto const *s : sets)
    out.insert(s->begin(), s->end());
  return out;
}

VertexSet minus(VertexSet const &a, VertexSet const &b)
{
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::inserter(out, out.end()));
  return out;
}

bool disjoint(VertexSet const &a, VertexSet const &b)
{
  for (Vertex v : a)
    if (b.count(v))
      return false;
  return true;
}

// (N(x) ∩ dom q)q
VertexSet mapped_neighbours(GraphSession const &s, PartialIso const &q,
                            Vertex x)
{
  VertexSet out;
  for (Vertex z : s.neighbors_within(x, q.dom()))
    out.insert(*q.image(z));
  return out;
}

void require(bool cond, char const *clause, std::string const &detail)
{
  if (!cond)
    throw HypothesisError(clause, detail);
}

} // namespace

HensonOracle::HensonOracle(GraphSession &s, PartialIso base)
: _s(s),
  _base(validate(s, base.pairs())),
  _cache(_base)
{
  if (!s.kind().lazy())
    throw Error("HensonOracle needs a lazy session");
}

std::optional<Vertex> HensonOracle::image(Vertex x)
{
  if (auto y = _cache.image(x); y)
    return y;
  VertexSet U = mapped_neighbours(_s, _cache, x);
  VertexSet V = minus(_cache.ran(), U);
  Vertex y = _s.alice_witness(U, V, {x});
  _cache = neigh_extend(_s, _cache, x, y);
  return y;
}

std::optional<Vertex> HensonOracle::preimage(Vertex y)
{
  if (auto x = _cache.preimage(y); x)
    return x;
  PartialIso inv = invert(_cache);
  VertexSet U = mapped_neighbours(_s, inv, y);
  VertexSet V = minus(_cache.dom(), U);
  Vertex x = _s.alice_witness(U, V, {y});
  _cache = invert(neigh_extend(_s, inv, y, x));
  return x;
}

nlohmann::json HensonOracle::describe() const
{
  nlohmann::json pairs = nlohmann::json::array(), base = nlohmann::json::array();
  for (auto [x, y] : _cache.map())
    pairs.push_back({x, y});
  for (auto [x, y] : _base.map())
    base.push_back({x, y});
  return {{"policy", "henson"}, {"pairs", pairs}, {"base", base}};
}

Vertex HensonOracle::support_point(VertexSet const &avoid)
{
  for (Vertex v : _stock)
    if (!avoid.count(v))
      return v;
  Vertex v = _s.alice_witness({}, {}, {});
  if (*image(v) == v)
    throw Error("synthesized support point is fixed");
  _stock.push_back(v);
  return v;
}

std::vector<Vertex> HensonOracle::image_set(VertexSet const &xs)
{
  std::vector<Vertex> out;
  for (Vertex x : xs)
    out.push_back(*image(x));
  return out;
}

std::vector<Vertex> HensonOracle::preimage_set(VertexSet const &ys)
{
  std::vector<Vertex> out;
  for (Vertex y : ys)
    out.push_back(*preimage(y));
  return out;
}

bool is_p_class(GraphSession const &s, PartialIso const &p)
{
  VertexSet dom = p.dom(), ran = p.ran();
  if (!disjoint(dom, ran))
    return false;
  for (Vertex x : dom)
    if (!s.neighbors_within(x, ran).empty())
      return false;
  return true;
}

PClassIso make_p_class(GraphSession const &s, PartialIso p)
{
  validate(s, p.pairs());
  if (!is_p_class(s, p))
    throw HypothesisError("P-class", "dom and ran meet or are joined by an edge");
  return {std::move(p)};
}

PartialIso neigh_extend(GraphSession const &s, PartialIso const &q, Vertex x,
                        Vertex y)
{
  require(!q.in_dom(x), "neigh_extend",
          "vertex " + std::to_string(x) + " already in dom(q)");
  VertexSet want = mapped_neighbours(s, q, x);
  VertexSet have = s.neighbors_within(y, q.ran());
  for (Vertex v : have)
    require(want.count(v), "neigh_extend",
            "unmatched neighbour " + std::to_string(v) + " of " +
              std::to_string(y));
  for (Vertex v : want)
    require(have.count(v), "neigh_extend",
            "missing neighbour " + std::to_string(v) + " of " +
              std::to_string(y));
  return union_extend(s, q, {{x, y}});
}

std::pair<PartialIso, Vertex> one_point_extend(GraphSession &s,
                                               PartialIso const &q, Vertex x,
                                               VertexSet const &avoid)
{
  require(!q.in_dom(x), "one_point_extend",
          "vertex " + std::to_string(x) + " already in dom(q)");
  VertexSet U = mapped_neighbours(s, q, x);
  VertexSet base = q.ran();
  base.insert(x);
  base.insert(avoid.begin(), avoid.end());
  VertexSet V = minus(base, U);
  Vertex y = s.alice_witness(U, V, {});
  return {neigh_extend(s, q, x, y), y};
}

std::size_t pad_components(GraphSession &s, PartialIso &q,
                           VertexSet const &absorb, VertexSet const &avoid)
{
  for (Vertex v : absorb)
    if (!q.in_dom(v))
      q = one_point_extend(s, q, v, avoid).first;

  for (;;) {
    auto comps = components(q);
    if (comps.empty())
      return 1;
    std::size_t longest = 0;
    for (auto const &c : comps) {
      require(!c.complete, "pad_components", "q has a complete component");
      longest = std::max(longest, c.vertices.size());
    }
    Component const *shortest = nullptr;
    for (auto const &c : comps)
      if (!shortest || c.vertices.size() < shortest->vertices.size() ||
          (c.vertices.size() == shortest->vertices.size() &&
           c.tail() < shortest->tail()))
        shortest = &c;
    if (shortest->vertices.size() == longest)
      return longest;
    q = one_point_extend(s, q, shortest->tail(), avoid).first;
  }
}

PartialIso chain_link(GraphSession &s, PartialIso const &q,
                      VertexSet const &delta, VertexSet const &fixed, Vertex x,
                      Vertex y, std::size_t m, VertexSet const &sigma1,
                      VertexSet const &sigma2)
{
  char const *C = "chain_link";
  require(m >= 1, C, "m must be positive");
  require(in_class_I(q), C, "q has a complete component");

  VertexSet supp = q.support();
  require(disjoint(delta, fixed), C, "Δ and Γ intersect");
  require(supp == unite({&delta, &fixed}), C, "dom ∪ ran differs from Δ ⊔ Γ");
  for (auto const &c : components(q)) {
    bool in_fixed = fixed.count(c.head()) != 0;
    for (Vertex v : c.vertices)
      require((fixed.count(v) != 0) == in_fixed, C,
              "component through " + std::to_string(v) + " straddles Γ and Δ");
    if (in_fixed)
      require(c.vertices.size() == m, C,
              "Γ component at " + std::to_string(c.head()) +
                " does not have length m");
  }
  require(!supp.count(x) && !supp.count(y), C, "x or y already used by q");

  PartialIso q2m = power(q, static_cast<std::int64_t>(2 * m));
  VertexSet nx = s.neighbors_within(x, delta), ny = s.neighbors_within(y, delta);
  VertexSet moved;
  for (Vertex z : nx) {
    auto w = q2m.image(z);
    require(w.has_value(), C,
            "neighbour " + std::to_string(z) + " of x outside dom(q^2m)");
    moved.insert(*w);
  }
  require(moved == ny, C, "(N(x) ∩ Δ)q^2m differs from N(y) ∩ Δ");

  VertexSet dom = q.dom(), ran = q.ran();
  require(disjoint(sigma1, ran), C, "Σ1 meets ran(q)");
  require(disjoint(sigma2, dom), C, "Σ2 meets dom(q)");
  require(disjoint(sigma1, fixed) && disjoint(sigma2, fixed), C,
          "Σ1 ∪ Σ2 meets Γ");

  VertexSet sigma = unite({&sigma1, &sigma2});
  std::vector<Component> fixed_comps;
  for (auto const &c : components(q))
    if (fixed.count(c.head()))
      fixed_comps.push_back(c);
  PartialIso cur = q;
  Vertex xi = x;
  std::vector<Vertex> inner;
  for (std::size_t i = 0; i + 1 < 2 * m; ++i) {
    VertexSet gamma_i = cur.support();
    gamma_i.insert(sigma.begin(), sigma.end());
    gamma_i.insert(x);
    gamma_i.insert(y);
    VertexSet U = mapped_neighbours(s, cur, xi);
    // Heads whose forward orbit meets N(y) exactly at step 2m enter here.
    PartialIso ahead = power(q, static_cast<std::int64_t>(2 * m - (i + 1)));
    for (auto const &c : fixed_comps) {
      auto hit = ahead.image(c.head());
      if (hit && s.adjacent(*hit, y))
        U.insert(c.head());
    }
    VertexSet V = minus(gamma_i, U);
    Vertex next = s.alice_witness(U, V, {});
    cur = neigh_extend(s, cur, xi, next);
    inner.push_back(next);
    xi = next;
  }
  cur = neigh_extend(s, cur, xi, y);

  for (Vertex v : inner) {
    require(!sigma.count(v), C, "intermediate vertex lies in Σ1 ∪ Σ2");
    require(s.neighbors_within(v, sigma).empty(), C,
            "intermediate vertex " + std::to_string(v) + " touches Σ1 ∪ Σ2");
  }
  require(in_class_I(cur), C, "result has a complete component");
  require(power(cur, static_cast<std::int64_t>(2 * m)).image(x) == y, C,
          "x does not reach y in 2m steps");
  return cur;
}

Conjugator build_conjugator(GraphSession &s, PartialIso const &q,
                            PClassIso const &p)
{
  char const *C = "build_conjugator";
  require(in_class_I(q), C, "q has a complete component");
  require(is_p_class(s, p.iso), C, "p is not in the P-class");
  VertexSet psupp = p.iso.support();
  require(disjoint(q.support(), psupp), C,
          "supports of q and p intersect");

  PartialIso r = q;
  std::size_t m = pad_components(s, r, {}, psupp);
  VertexSet fixed = r.support();
  VertexSet sigma1 = p.iso.dom(), sigma2 = p.iso.ran();

  for (auto [x, y] : p.iso.map()) {
    VertexSet delta = minus(r.support(), fixed);
    r = chain_link(s, r, delta, fixed, x, y, m, sigma1, sigma2);
  }

  require(power(r, static_cast<std::int64_t>(2 * m)).extends(p.iso), C,
          "h^2m does not extend p");
  return {r, m};
}

std::pair<PClassIso, PClassIso> split_into_P(GraphSession &s,
                                             PartialIso const &q)
{
  VertexSet used = q.support();
  std::map<Vertex, Vertex> copy;
  for (Vertex x : q.dom()) {
    VertexSet U;
    VertexSet V = used;
    for (auto [orig, img] : copy) {
      if (s.adjacent(x, orig))
        U.insert(img);
      else
        V.insert(img);
    }
    Vertex c = s.alice_witness(U, V, {});
    copy.emplace(x, c);
  }
  PartialIso p1 = validate(s, {copy.begin(), copy.end()});
  PartialIso p2 = compose(invert(p1), q);
  return {make_p_class(s, p1), make_p_class(s, p2)};
}

WitnessCertificate density_witness_henson(GraphSession &s, HensonOracle &f,
                                          PartialIso const &q,
                                          PClassIso const &p)
{
  char const *C = "density_witness_henson";
  require(in_class_I(q), C, "q has a complete component");
  require(is_p_class(s, p.iso), C, "p is not in the P-class");

  WitnessCertificate cert;
  cert.construction = "henson";
  cert.q = q;
  cert.p = p.iso;
  cert.target = p.iso;

  if (p.iso.empty()) {
    cert.h = q;
    cert.capture_session(s);
    cert.f = f.describe();
    return cert;
  }

  // Every component of r gets length m and dom(r) covers dom(p) ∪ ran(p).
  PartialIso r = q;
  std::size_t m = pad_components(s, r, p.iso.support(), {});
  for (Vertex v : p.iso.support())
    require(r.in_dom(v), C, "padding left a p-vertex outside dom(q)");

  std::vector<Vertex> tails;
  for (Vertex v : r.ran())
    if (!r.in_dom(v))
      tails.push_back(v);

  std::vector<Vertex> marched;
  for (Vertex tail : tails) {
    Vertex cur = tail;
    for (std::size_t t = 0; t < m; ++t) {
      VertexSet gamma = r.support();
      auto pre = f.preimage_set(gamma);
      VertexSet gamma_inv(pre.begin(), pre.end());
      // x must also miss Γf⁻¹, or y could not be joined to x while avoiding
      // every vertex of Γf⁻¹.
      Vertex x = f.support_point(unite({&gamma, &gamma_inv}));
      Vertex xf = *f.image(x);

      VertexSet V1 = unite({&gamma, &gamma_inv});
      V1.insert(xf);
      Vertex y = s.alice_witness({x}, V1, {});

      auto img = f.image_set(gamma);
      VertexSet gamma_f(img.begin(), img.end());
      Vertex yf = *f.image(y);

      VertexSet U = mapped_neighbours(s, r, cur);
      U.insert(y);
      VertexSet around = unite({&gamma, &gamma_f, &gamma_inv});
      around.insert(yf);
      VertexSet V2 = minus(around, U);
      Vertex next = s.alice_witness(U, V2, {});

      require(!around.count(next), C, "new chain vertex is not fresh");
      require(*f.image(next) != next, C, "new chain vertex is fixed by f");
      r = neigh_extend(s, r, cur, next);
      marched.push_back(next);
      cur = next;
    }
  }

  VertexSet rsupp = r.support();
  for (Vertex v : marched)
    require(!rsupp.count(*f.image(v)), C,
            "image of a marched vertex lands back in the chains");

  // u = (r^m f)⁻¹ p (r^m f)
  PartialIso rm = power(r, static_cast<std::int64_t>(m));
  std::vector<VertexPair> u_pairs;
  for (auto [a, b] : p.iso.map()) {
    auto ra = rm.image(a), rb = rm.image(b);
    require(ra && rb, C, "p-vertex outside dom(r^m)");
    u_pairs.emplace_back(*f.image(*ra), *f.image(*rb));
  }
  PClassIso u = make_p_class(s, validate(s, u_pairs));
  require(disjoint(u.iso.support(), r.support()), C,
          "conjugated target meets the chains");

  Conjugator conj = build_conjugator(s, r, u);

  auto mm = static_cast<std::int64_t>(m);
  auto ll = static_cast<std::int64_t>(conj.m);
  FreeWord lead = FreeWord::alpha(mm) * FreeWord::beta(1);
  cert.product = {{lead, false}, {FreeWord::alpha(2 * ll), false},
                  {lead, true}};
  cert.h = conj.h;
  cert.params = {{"m", mm}, {"l", ll}};
  cert.words = {{"lead", lead.to_string()}};

  // Evaluate now so the oracle cache holds every value the verifier needs.
  PartialIso prod;
  {
    PartialIso a = evaluate(lead, cert.h, f);
    PartialIso mid = evaluate(FreeWord::alpha(2 * ll), cert.h, f);
    prod = compose(compose(a, mid), invert(a));
  }
  require(prod.extends(p.iso), C, "h^m f h^2l (h^m f)^-1 does not extend p");

  cert.capture_session(s);
  cert.f = f.describe();
  return cert;
}

} // namespace ultradense
