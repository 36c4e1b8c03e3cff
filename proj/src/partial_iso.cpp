#include "ultradense/partial_iso.hpp"

#include <algorithm>
#include <sstream>

namespace ultradense {

PartialIso PartialIso::unchecked(std::map<Vertex, Vertex> fwd)
{
  PartialIso p;
  for (auto [x, y] : fwd)
    p._inv.emplace(y, x);
  p._fwd = std::move(fwd);
  return p;
}

PartialIso PartialIso::identity(VertexSet const &on)
{
  std::map<Vertex, Vertex> m;
  for (Vertex v : on)
    m.emplace(v, v);
  return unchecked(std::move(m));
}

std::optional<Vertex> PartialIso::image(Vertex x) const
{
  auto it = _fwd.find(x);
  if (it == _fwd.end())
    return std::nullopt;
  return it->second;
}

std::optional<Vertex> PartialIso::preimage(Vertex y) const
{
  auto it = _inv.find(y);
  if (it == _inv.end())
    return std::nullopt;
  return it->second;
}

VertexSet PartialIso::dom() const
{
  VertexSet out;
  for (auto const &kv : _fwd)
    out.insert(out.end(), kv.first);
  return out;
}

VertexSet PartialIso::ran() const
{
  VertexSet out;
  for (auto const &kv : _inv)
    out.insert(out.end(), kv.first);
  return out;
}

VertexSet PartialIso::support() const
{
  VertexSet out = dom();
  for (auto const &kv : _inv)
    out.insert(kv.first);
  return out;
}

std::vector<VertexPair> PartialIso::pairs() const
{ return {_fwd.begin(), _fwd.end()}; }

bool PartialIso::extends(PartialIso const &other) const
{
  for (auto [x, y] : other._fwd) {
    auto it = _fwd.find(x);
    if (it == _fwd.end() || it->second != y)
      return false;
  }
  return true;
}

PartialIso PartialIso::restrict(VertexSet const &to) const
{
  std::map<Vertex, Vertex> m;
  for (auto [x, y] : _fwd)
    if (to.count(x))
      m.emplace(x, y);
  return unchecked(std::move(m));
}

std::string PartialIso::to_string() const
{
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (auto [x, y] : _fwd) {
    if (!first)
      out << ", ";
    first = false;
    out << x << "->" << y;
  }
  out << '}';
  return out.str();
}

namespace {

using Reason = IsoRejection::Reason;

// Checks `added` against itself and against `base`. `base` is assumed valid.
void check_pairs(GraphSession const &s, std::map<Vertex, Vertex> const &base,
                 std::map<Vertex, Vertex> const &base_inv,
                 std::vector<VertexPair> const &added)
{
  std::map<Vertex, Vertex> fwd;
  std::map<Vertex, Vertex> inv;

  for (auto [x, y] : added) {
    if (!s.realized(x) || !s.realized(y))
      throw IsoRejection(Reason::UnknownVertex, {{x, y}},
                         "unknown vertex in pair (" + std::to_string(x) +
                           "," + std::to_string(y) + ")");

    auto clash = [&](std::map<Vertex, Vertex> const &m, Vertex key,
                     Vertex val) -> std::optional<Vertex> {
      auto it = m.find(key);
      if (it != m.end() && it->second != val)
        return it->second;
      return std::nullopt;
    };
    if (auto other = clash(base, x, y); other)
      throw IsoRejection(Reason::NonInjective, {{x, *other}, {x, y}},
                         "vertex " + std::to_string(x) + " has two images");
    if (auto other = clash(fwd, x, y); other)
      throw IsoRejection(Reason::NonInjective, {{x, *other}, {x, y}},
                         "vertex " + std::to_string(x) + " has two images");
    if (auto other = clash(base_inv, y, x); other)
      throw IsoRejection(Reason::NonInjective, {{*other, y}, {x, y}},
                         "vertex " + std::to_string(y) + " has two preimages");
    if (auto other = clash(inv, y, x); other)
      throw IsoRejection(Reason::NonInjective, {{*other, y}, {x, y}},
                         "vertex " + std::to_string(y) + " has two preimages");
    fwd[x] = y;
    inv[y] = x;
  }

  // Drop pairs already present in base.
  std::vector<VertexPair> fresh;
  for (auto [x, y] : fwd)
    if (!base.count(x))
      fresh.emplace_back(x, y);

  auto const &kind = s.kind();
  if (kind.component_graph()) {
    std::map<std::int64_t, std::pair<std::int64_t, VertexPair>> to, from;
    auto note = [&](Vertex x, Vertex y) {
      auto cx = component_of(kind, x), cy = component_of(kind, y);
      auto [it, ok] = to.emplace(cx, std::make_pair(cy, VertexPair{x, y}));
      if (!ok && it->second.first != cy)
        throw IsoRejection(Reason::IndexMapConflict, {it->second.second, {x, y}},
                           "component " + std::to_string(cx) +
                             " is sent to two components");
      auto [jt, ok2] = from.emplace(cy, std::make_pair(cx, VertexPair{x, y}));
      if (!ok2 && jt->second.first != cx)
        throw IsoRejection(Reason::IndexMapConflict, {jt->second.second, {x, y}},
                           "components " + std::to_string(jt->second.first) +
                             " and " + std::to_string(cx) +
                             " both target component " + std::to_string(cy));
    };
    for (auto [x, y] : base)
      note(x, y);
    for (auto [x, y] : fresh)
      note(x, y);
    return; // on component graphs the index map decides adjacency
  }

  for (std::size_t i = 0; i < fresh.size(); ++i) {
    auto [x, y] = fresh[i];
    for (auto [bx, by] : base)
      if (s.adjacent(x, bx) != s.adjacent(y, by))
        throw IsoRejection(Reason::AdjacencyMismatch, {{bx, by}, {x, y}},
                           "adjacency mismatch between " + std::to_string(bx) +
                             " and " + std::to_string(x));
    for (std::size_t j = 0; j < i; ++j) {
      auto [x2, y2] = fresh[j];
      if (s.adjacent(x, x2) != s.adjacent(y, y2))
        throw IsoRejection(Reason::AdjacencyMismatch, {{x2, y2}, {x, y}},
                           "adjacency mismatch between " + std::to_string(x2) +
                             " and " + std::to_string(x));
    }
  }
}

} // namespace

PartialIso validate(GraphSession const &s, std::vector<VertexPair> const &pairs)
{
  check_pairs(s, {}, {}, pairs);
  std::map<Vertex, Vertex> m(pairs.begin(), pairs.end());
  return PartialIso::unchecked(std::move(m));
}

PartialIso union_extend(GraphSession const &s, PartialIso const &f,
                        std::vector<VertexPair> const &pairs)
{
  std::map<Vertex, Vertex> inv;
  for (auto [x, y] : f.map())
    inv.emplace(y, x);
  check_pairs(s, f.map(), inv, pairs);
  auto m = f.map();
  for (auto [x, y] : pairs)
    m.emplace(x, y);
  return PartialIso::unchecked(std::move(m));
}

PartialIso compose(PartialIso const &f, PartialIso const &g)
{
  std::map<Vertex, Vertex> m;
  for (auto [x, y] : f.map())
    if (auto z = g.image(y); z)
      m.emplace(x, *z);
  return PartialIso::unchecked(std::move(m));
}

PartialIso invert(PartialIso const &f)
{
  std::map<Vertex, Vertex> m;
  for (auto [x, y] : f.map())
    m.emplace(y, x);
  return PartialIso::unchecked(std::move(m));
}

PartialIso power(PartialIso const &f, std::int64_t k)
{
  if (k == 0)
    return PartialIso::identity(f.dom());
  PartialIso const &step_src = f;
  PartialIso inv;
  if (k < 0)
    inv = invert(f);
  PartialIso const &step = k > 0 ? step_src : inv;
  std::uint64_t steps = k > 0 ? static_cast<std::uint64_t>(k)
                              : static_cast<std::uint64_t>(-k);

  std::map<Vertex, Vertex> m;
  for (auto const &kv : step.map()) {
    Vertex cur = kv.first;
    bool ok = true;
    for (std::uint64_t i = 0; i < steps; ++i) {
      auto nxt = step.image(cur);
      if (!nxt) {
        ok = false;
        break;
      }
      cur = *nxt;
    }
    if (ok)
      m.emplace(kv.first, cur);
  }
  return PartialIso::unchecked(std::move(m));
}

std::vector<Component> components(PartialIso const &f)
{
  std::vector<Component> chains, cycles;
  VertexSet seen;

  for (Vertex v : f.support()) {
    if (seen.count(v) || f.in_ran(v))
      continue;
    Component c{{}, false};
    std::optional<Vertex> cur = v;
    while (cur) {
      c.vertices.push_back(*cur);
      seen.insert(*cur);
      cur = f.image(*cur);
    }
    chains.push_back(std::move(c));
  }

  // What remains lies on cycles; the support is visited in ascending order,
  // so each cycle starts at its smallest vertex.
  for (Vertex v : f.support()) {
    if (seen.count(v))
      continue;
    Component c{{}, true};
    Vertex cur = v;
    do {
      c.vertices.push_back(cur);
      seen.insert(cur);
      cur = *f.image(cur);
    } while (cur != v);
    cycles.push_back(std::move(c));
  }

  chains.insert(chains.end(), std::make_move_iterator(cycles.begin()),
                std::make_move_iterator(cycles.end()));
  return chains;
}

std::map<Vertex, std::size_t> component_index(std::vector<Component> const &cs)
{
  std::map<Vertex, std::size_t> out;
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (Vertex v : cs[i].vertices)
      out.emplace(v, i);
  return out;
}

bool in_class_I(PartialIso const &f)
{
  for (auto const &c : components(f))
    if (c.complete)
      return false;
  return true;
}

std::map<std::int64_t, std::int64_t> index_map(GraphKind const &kind,
                                               PartialIso const &f)
{
  std::map<std::int64_t, std::int64_t> out;
  std::map<std::int64_t, std::int64_t> back;
  for (auto [x, y] : f.map()) {
    auto cx = component_of(kind, x), cy = component_of(kind, y);
    auto [it, ok] = out.emplace(cx, cy);
    if (!ok && it->second != cy)
      throw IsoRejection(IsoRejection::Reason::IndexMapConflict, {{x, y}},
                         "component " + std::to_string(cx) +
                           " is sent to two components");
    auto [jt, ok2] = back.emplace(cy, cx);
    if (!ok2 && jt->second != cx)
      throw IsoRejection(IsoRejection::Reason::IndexMapConflict, {{x, y}},
                         "two components target component " +
                           std::to_string(cy));
  }
  return out;
}

bool OrbitProfile::at_most_one() const
{
  return std::all_of(hits.begin(), hits.end(),
                     [](std::size_t h) { return h <= 1; });
}

bool OrbitProfile::complete_exactly_one() const
{
  for (std::size_t i = 0; i < comps.size(); ++i)
    if (comps[i].complete && hits[i] != 1)
      return false;
  return true;
}

OrbitProfile orbit_rep_profile(PartialIso const &f, VertexSet const &sigma)
{
  OrbitProfile prof;
  prof.comps = components(f);
  prof.hits.assign(prof.comps.size(), 0);
  for (std::size_t i = 0; i < prof.comps.size(); ++i)
    for (Vertex v : prof.comps[i].vertices)
      if (sigma.count(v))
        ++prof.hits[i];
  return prof;
}

} // namespace ultradense
