#include "ultradense/omega_kn_engine.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "ultradense/word_algebra.hpp"

namespace ultradense {

namespace {

using CompSet = std::set<std::int64_t>;

void require(bool cond, char const *clause, std::string const &detail)
{
  if (!cond)
    throw HypothesisError(clause, detail);
}

void require_omega(GraphKind const &kind, char const *clause)
{
  require(kind.family == Family::OmegaKn, clause, "graph is not ωKₙ");
}

CompSet comps_of(GraphKind const &kind, VertexSet const &vs)
{
  CompSet out;
  for (Vertex v : vs)
    out.insert(component_of(kind, v));
  return out;
}

VertexSet whole(GraphKind const &kind, std::int64_t c)
{
  VertexSet out;
  for (int pos = 0; pos < kind.n; ++pos)
    out.insert(encode(kind, {c, static_cast<std::uint64_t>(pos)}));
  return out;
}

// L_from → L_to, position preserving.
void link(GraphKind const &kind, std::map<Vertex, Vertex> &m,
          std::int64_t from, std::int64_t to)
{
  for (int pos = 0; pos < kind.n; ++pos) {
    auto p = static_cast<std::uint64_t>(pos);
    m.emplace(encode(kind, {from, p}), encode(kind, {to, p}));
  }
}

bool zig_less(std::int64_t a, std::int64_t b) { return zigzag(a) < zigzag(b); }

// Index chains head..tail, in the order components() returns them.
std::vector<std::vector<std::int64_t>> index_chains(GraphKind const &kind,
                                                    PartialIso const &q)
{
  std::vector<std::vector<std::int64_t>> out;
  for (auto const &c : components(index_iso(kind, q))) {
    if (c.complete)
      continue;
    std::vector<std::int64_t> chain;
    for (Vertex z : c.vertices)
      chain.push_back(unzigzag(z));
    out.push_back(std::move(chain));
  }
  return out;
}

} // namespace

SigmaPlacement SigmaPlacement::from_sigma(int n, VertexSet const &sigma)
{
  GraphKind kind = GraphKind::omega_kn(n);
  SigmaPlacement out;
  out.sigma = sigma;
  for (Vertex v : sigma)
    ++out.counts[component_of(kind, v)];
  return out;
}

SigmaPlacement SigmaPlacement::from_counts(
  int n, std::map<std::int64_t, std::size_t> counts)
{
  GraphKind kind = GraphKind::omega_kn(n);
  VertexSet sigma;
  for (auto [c, k] : counts) {
    if (k > static_cast<std::size_t>(n))
      throw Error("component " + std::to_string(c) + " holds only " +
                  std::to_string(n) + " vertices");
    for (std::size_t pos = 0; pos < k; ++pos)
      sigma.insert(encode(kind, {c, pos}));
  }
  return from_sigma(n, sigma);
}

std::size_t SigmaPartition::part_of(std::int64_t c) const
{
  if (r == 0)
    throw Error("partition has no parts");
  std::uint64_t below = 0;
  for (std::size_t i = 0; i < carriers.size(); ++i)
    for (auto k : carriers[i]) {
      if (k == c)
        return i;
      below += zigzag(k) < zigzag(c);
    }
  return static_cast<std::size_t>((zigzag(c) - below) % r);
}

std::int64_t SigmaPartition::member(std::size_t part, std::int64_t j) const
{
  if (part >= r)
    throw Error("no part " + std::to_string(part));
  std::uint64_t idx = zigzag(j);
  auto const &explicit_ = carriers[part];
  if (idx < explicit_.size())
    return explicit_[idx];

  // The rank among uncarried indices of the wanted tail member.
  std::uint64_t rank = (idx - explicit_.size()) * r + part;
  CompSet carried;
  for (auto const &ks : carriers)
    carried.insert(ks.begin(), ks.end());
  for (std::uint64_t z = 0;; ++z) {
    auto c = unzigzag(z);
    if (carried.count(c))
      continue;
    if (rank == 0)
      return c;
    --rank;
  }
}

PartialIso index_iso(GraphKind const &kind, PartialIso const &q)
{
  std::map<Vertex, Vertex> m;
  for (auto [c, d] : index_map(kind, q))
    m.emplace(zigzag(c), zigzag(d));
  return PartialIso::unchecked(std::move(m));
}

bool is_f_class(GraphKind const &kind, PartialIso const &p)
{
  if (kind.family != Family::OmegaKn)
    return false;
  VertexSet dom = p.dom(), ran = p.ran();
  for (Vertex v : dom)
    if (ran.count(v))
      return false;
  for (auto const *side : {&dom, &ran})
    for (auto c : comps_of(kind, *side))
      for (Vertex v : whole(kind, c))
        if (!side->count(v))
          return false;
  try {
    return in_class_I(index_iso(kind, p));
  } catch (IsoRejection const &) {
    return false;
  }
}

FClassIso make_f_class(GraphKind const &kind, PartialIso p)
{
  require(is_f_class(kind, p), "make_f_class",
          "dom and ran must be disjoint unions of components with no "
          "complete index component");
  return {std::move(p)};
}

bool in_I_sigma_class(GraphKind const &kind, PartialIso const &q,
                      VertexSet const &sigma)
{
  char const *C = "in_I_sigma_class";
  require_omega(kind, C);
  VertexSet dom = q.dom();
  for (auto c : comps_of(kind, dom))
    for (Vertex v : whole(kind, c))
      require(dom.count(v), C,
              "dom(q) covers only part of component " + std::to_string(c));
  for (Vertex v : sigma)
    require(dom.count(v), C,
            "Σ vertex " + std::to_string(v) + " lies outside dom(q)");

  auto prof = orbit_rep_profile(q, sigma);
  for (std::size_t i = 0; i < prof.comps.size(); ++i)
    require(prof.hits[i] == 1, C,
            "component of q through vertex " +
              std::to_string(prof.comps[i].head()) + " meets Σ " +
              std::to_string(prof.hits[i]) + " times");

  return in_class_I(index_iso(kind, q));
}

std::optional<SigmaPartition> sigma_feasible(int n,
                                             SigmaPlacement const &placement)
{
  auto total = placement.total();
  auto un = static_cast<std::size_t>(n);
  if (total == 0 || total % un != 0)
    return std::nullopt;
  std::size_t r = total / un;

  // Heaviest first so overfull bins are pruned early.
  std::vector<std::pair<std::int64_t, std::size_t>> items(
    placement.counts.begin(), placement.counts.end());
  std::stable_sort(items.begin(), items.end(),
                   [](auto const &a, auto const &b) {
                     return a.second > b.second;
                   });

  std::vector<std::size_t> load(r, 0);
  std::vector<std::size_t> bin_of(items.size(), 0);
  std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
    if (i == items.size())
      return std::all_of(load.begin(), load.end(),
                         [&](std::size_t l) { return l == un; });
    bool tried_empty = false;
    for (std::size_t b = 0; b < r; ++b) {
      if (load[b] + items[i].second > un)
        continue;
      if (load[b] == 0) {
        // Empty bins are interchangeable.
        if (tried_empty)
          continue;
        tried_empty = true;
      }
      load[b] += items[i].second;
      bin_of[i] = b;
      if (place(i + 1))
        return true;
      load[b] -= items[i].second;
    }
    return false;
  };
  if (!place(0))
    return std::nullopt;

  std::vector<std::vector<std::int64_t>> parts(r);
  for (std::size_t i = 0; i < items.size(); ++i)
    parts[bin_of[i]].push_back(items[i].first);
  for (auto &ks : parts)
    std::sort(ks.begin(), ks.end(), zig_less);
  std::sort(parts.begin(), parts.end(), [](auto const &a, auto const &b) {
    return zig_less(a.front(), b.front());
  });
  return SigmaPartition{r, std::move(parts)};
}

void check_partition(int n, SigmaPlacement const &placement,
                     SigmaPartition const &partition)
{
  auto un = static_cast<std::size_t>(n);
  if (partition.r == 0 || partition.carriers.size() != partition.r)
    throw Error("invalid partition: part count");
  if (partition.r * un != placement.total())
    throw Error("invalid partition: |Σ| is not r·n");
  CompSet seen;
  for (std::size_t i = 0; i < partition.r; ++i) {
    std::size_t weight = 0;
    for (auto c : partition.carriers[i]) {
      if (!seen.insert(c).second)
        throw Error("invalid partition: component " + std::to_string(c) +
                    " in two parts");
      auto it = placement.counts.find(c);
      if (it == placement.counts.end())
        throw Error("invalid partition: component " + std::to_string(c) +
                    " carries no Σ point");
      weight += it->second;
    }
    if (weight != un)
      throw Error("invalid partition: part " + std::to_string(i) +
                  " has Σ-weight " + std::to_string(weight));
  }
  if (seen.size() != placement.counts.size())
    throw Error("invalid partition: a Σ-carrying component is unassigned");
}

PartialIso build_f_from_partition(int n, SigmaPlacement const &placement,
                                  SigmaPartition const &partition,
                                  std::size_t depth)
{
  check_partition(n, placement, partition);
  GraphKind kind = GraphKind::omega_kn(n);
  auto const &sigma = placement.sigma;
  std::map<Vertex, Vertex> out;

  struct Chain
  {
    Vertex head, tail;
    bool hit;
  };

  for (std::size_t part = 0; part < partition.r; ++part) {
    std::vector<Chain> chains;
    for (Vertex v : whole(kind, partition.member(part, 0)))
      chains.push_back({v, v, sigma.count(v) != 0});

    std::int64_t lo = 0, hi = 0;
    for (std::size_t step = 1; step <= depth; ++step) {
      bool forward = step % 2 == 1;
      std::int64_t c = forward ? partition.member(part, ++hi)
                               : partition.member(part, --lo);

      // Σ points of the new component go to chains that have none yet.
      std::vector<Vertex> marked, plain;
      for (Vertex v : whole(kind, c))
        (sigma.count(v) ? marked : plain).push_back(v);
      std::vector<std::size_t> order;
      for (std::size_t i = 0; i < chains.size(); ++i)
        if (!chains[i].hit)
          order.push_back(i);
      if (marked.size() > order.size())
        throw Error("invalid partition: Σ-weight above n in a part");
      for (std::size_t i = 0; i < chains.size(); ++i)
        if (chains[i].hit)
          order.push_back(i);

      std::vector<Vertex> incoming(marked);
      incoming.insert(incoming.end(), plain.begin(), plain.end());
      for (std::size_t k = 0; k < incoming.size(); ++k) {
        Chain &ch = chains[order[k]];
        Vertex v = incoming[k];
        if (forward) {
          out.emplace(ch.tail, v);
          ch.tail = v;
        } else {
          out.emplace(v, ch.head);
          ch.head = v;
        }
        ch.hit = ch.hit || k < marked.size();
      }
    }
  }
  return PartialIso::unchecked(std::move(out));
}

PartialIso round_to_components(GraphKind const &kind, PartialIso const &q)
{
  require_omega(kind, "round_to_components");
  auto imap = index_map(kind, q);
  std::map<Vertex, Vertex> out = q.map();
  for (auto [c, d] : imap) {
    std::vector<Vertex> src, dst;
    for (Vertex v : whole(kind, c))
      if (!q.in_dom(v))
        src.push_back(v);
    for (Vertex v : whole(kind, d))
      if (!q.in_ran(v))
        dst.push_back(v);
    for (std::size_t k = 0; k < src.size(); ++k)
      out.emplace(src[k], dst[k]);
  }
  return PartialIso::unchecked(std::move(out));
}

std::pair<FClassIso, FClassIso> split_into_F(GraphKind const &kind,
                                             PartialIso const &q)
{
  PartialIso r = round_to_components(kind, q);
  if (r.empty())
    return {};

  CompSet dom_comps = comps_of(kind, r.dom());
  CompSet used = comps_of(kind, r.support());

  std::map<Vertex, Vertex> p;
  std::uint64_t z = 0;
  for (auto c : dom_comps) {
    while (used.count(unzigzag(z)))
      ++z;
    link(kind, p, c, unzigzag(z++));
  }
  PartialIso first = PartialIso::unchecked(std::move(p));
  PartialIso second = compose(invert(first), r);
  return {make_f_class(kind, first), make_f_class(kind, second)};
}

WitnessCertificate density_witness_omega(ComponentShiftOracle &f,
                                         PartialIso const &q,
                                         FClassIso const &p,
                                         VertexSet const &sigma)
{
  char const *C = "density_witness_omega";
  GraphKind kind = GraphKind::omega_kn(f.n());
  GraphSession s(kind);
  require(f.shift() != 0, C, "index map of f has finite support");
  require(in_I_sigma_class(kind, q, sigma), C,
          "index map of q has a complete component");
  require(is_f_class(kind, p.iso), C, "p is not in the F-class");

  WitnessCertificate cert;
  cert.construction = "omega-kn";
  cert.sigma = sigma;
  cert.q = q;
  cert.p = p.iso;
  cert.target = p.iso;
  cert.f = f.describe();
  cert.capture_session(s);

  if (p.iso.empty()) {
    cert.h = q;
    return cert;
  }
  require(!sigma.empty(), C, "Σ is empty, so the class is empty");

  // Pad: every p-component into dom, then equal chain lengths.
  std::map<Vertex, Vertex> rm = q.map();
  auto chains = index_chains(kind, q);
  CompSet needed = comps_of(kind, p.iso.support());
  CompSet used = comps_of(kind, q.support());
  used.insert(needed.begin(), needed.end());
  std::uint64_t next_fresh = 0;
  auto fresh = [&] {
    while (used.count(unzigzag(next_fresh)))
      ++next_fresh;
    auto c = unzigzag(next_fresh);
    used.insert(c);
    return c;
  };
  auto shortest = [&] {
    std::size_t best = 0;
    for (std::size_t i = 1; i < chains.size(); ++i)
      if (chains[i].size() < chains[best].size() ||
          (chains[i].size() == chains[best].size() &&
           zig_less(chains[i].back(), chains[best].back())))
        best = i;
    return best;
  };
  auto extend = [&](std::size_t i, std::int64_t c) {
    link(kind, rm, chains[i].back(), c);
    chains[i].push_back(c);
  };

  std::vector<std::int64_t> needed_order(needed.begin(), needed.end());
  std::sort(needed_order.begin(), needed_order.end(), zig_less);
  for (auto c : needed_order) {
    CompSet dom_now = comps_of(kind, PartialIso::unchecked(rm).dom());
    if (dom_now.count(c))
      continue;
    std::optional<std::size_t> at;
    for (std::size_t i = 0; i < chains.size(); ++i)
      if (chains[i].back() == c)
        at = i;
    if (!at) {
      at = shortest();
      extend(*at, c);
    }
    extend(*at, fresh());
  }
  std::size_t m = 0;
  for (auto const &ch : chains)
    m = std::max(m, ch.size());
  for (;;) {
    std::size_t i = shortest();
    if (chains[i].size() == m)
      break;
    extend(i, fresh());
  }

  // March m components past every tail.
  std::size_t N = chains.size();
  std::vector<std::vector<std::int64_t>> L(N);
  for (std::size_t i = 0; i < N; ++i) {
    L[i].push_back(chains[i].back());
    for (std::size_t j = 1; j <= m; ++j) {
      CompSet gamma = comps_of(kind, PartialIso::unchecked(rm).support());
      CompSet around = gamma;
      for (auto c : gamma) {
        around.insert(f.fbar(c));
        around.insert(f.fbar_inv(c));
      }
      std::int64_t pick = 0;
      for (std::uint64_t z = 0;; ++z) {
        pick = unzigzag(z);
        if (!around.count(pick) && f.fbar(pick) != pick)
          break;
      }
      link(kind, rm, L[i].back(), pick);
      L[i].push_back(pick);
    }
  }
  PartialIso r = PartialIso::unchecked(rm);

  auto mm = static_cast<std::int64_t>(m);
  VertexSet rsupp = r.support();
  for (std::size_t i = 0; i < N; ++i)
    for (Vertex x : whole(kind, L[i][0])) {
      std::optional<Vertex> xj = x;
      for (std::size_t j = 1; j <= m; ++j) {
        xj = r.image(*xj);
        require(xj && component_of(kind, *xj) == L[i][j], C,
                "(x)r^j left the staged component L_{i,j}");
        require(!rsupp.count(*f.image(*xj)), C,
                "((x)r^j)f lands in dom(r) ∪ ran(r)");
      }
    }

  // u = (r^m f)⁻¹ p (r^m f)
  PartialIso rpow = power(r, mm);
  std::vector<VertexPair> u_pairs;
  for (auto [a, b] : p.iso.map()) {
    auto ra = rpow.image(a), rb = rpow.image(b);
    require(ra && rb, C, "p-vertex outside dom(r^m)");
    u_pairs.emplace_back(*f.image(*ra), *f.image(*rb));
  }
  PartialIso u = validate(s, u_pairs);
  for (Vertex v : u.support())
    require(!rsupp.count(v), C, "conjugated target meets dom(r) ∪ ran(r)");

  // v joins the chains of u head to tail; ψ hangs them off the last chain.
  auto u_chains = index_chains(kind, u);
  std::map<Vertex, Vertex> hm = rm;
  for (auto [a, b] : u.map())
    hm.emplace(a, b);
  for (std::size_t k = 0; k + 1 < u_chains.size(); ++k)
    link(kind, hm, u_chains[k].back(), u_chains[k + 1].front());
  link(kind, hm, L[N - 1].back(), u_chains.front().front());
  PartialIso h = validate(s, PartialIso::unchecked(hm).pairs());

  std::size_t open = 0;
  for (auto const &c : components(h)) {
    require(!c.complete, C, "h has a complete component");
    ++open;
  }
  require(open == sigma.size(), C,
          "h has " + std::to_string(open) + " components for |Σ| = " +
            std::to_string(sigma.size()));

  FreeWord lead = FreeWord::alpha(mm) * FreeWord::beta(1);
  cert.h = h;
  cert.params = {{"m", mm}};
  cert.words = {{"lead", lead.to_string()}};
  cert.product = {{lead, false}, {FreeWord::alpha(1), false}, {lead, true}};

  PartialIso a = evaluate(lead, h, f);
  PartialIso prod = compose(compose(a, h), invert(a));
  require(prod.extends(p.iso), C, "(h^m f) h (h^m f)^-1 does not extend p");
  return cert;
}

} // namespace ultradense
