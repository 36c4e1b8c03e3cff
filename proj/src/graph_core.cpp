#include "ultradense/graph_core.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace ultradense {

namespace {

std::string join_ids(std::vector<Vertex> const &ids)
{
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i)
      out += ',';
    out += std::to_string(ids[i]);
  }
  return out;
}

std::vector<Vertex> split_ids(std::string const &field)
{
  std::vector<Vertex> ids;
  std::stringstream ss(field);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty())
      continue;
    ids.push_back(std::stoull(tok));
  }
  return ids;
}

std::uint64_t mix(std::uint64_t x)
{
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace

GraphKind GraphKind::random() { return {Family::Random, 0}; }

GraphKind GraphKind::henson(int n)
{
  if (n < 3)
    throw Error("HensonFree requires n >= 3");
  return {Family::HensonFree, n};
}

GraphKind GraphKind::omega_kn(int n)
{
  if (n < 1)
    throw Error("OmegaKn requires n >= 1");
  return {Family::OmegaKn, n};
}

GraphKind GraphKind::nk_omega(int n)
{
  if (n < 2)
    throw Error("NKOmega requires n >= 2");
  return {Family::NKOmega, n};
}

std::string GraphKind::name() const
{
  switch (family) {
  case Family::Random: return "random";
  case Family::HensonFree: return "henson";
  case Family::OmegaKn: return "omega-kn";
  case Family::NKOmega: return "nkomega";
  }
  return "?";
}

GraphKind GraphKind::parse(std::string const &name, int n)
{
  if (name == "random")
    return random();
  if (name == "henson")
    return henson(n);
  if (name == "omega-kn")
    return omega_kn(n);
  if (name == "nkomega")
    return nk_omega(n);
  throw Error("unknown graph family '" + name + "'");
}

std::uint64_t zigzag(std::int64_t i)
{ return i >= 0 ? 2 * static_cast<std::uint64_t>(i)
                : 2 * static_cast<std::uint64_t>(-(i + 1)) + 1; }

std::int64_t unzigzag(std::uint64_t z)
{ return (z & 1) ? -static_cast<std::int64_t>(z >> 1) - 1
                 : static_cast<std::int64_t>(z >> 1); }

Vertex encode(GraphKind const &kind, Coord const &c)
{
  auto n = static_cast<std::uint64_t>(kind.n);
  switch (kind.family) {
  case Family::OmegaKn:
    if (c.position >= n)
      throw Error("position out of range for OmegaKn");
    return zigzag(c.component) * n + c.position;
  case Family::NKOmega:
    if (c.component < 1 || c.component > kind.n)
      throw Error("component out of range for NKOmega");
    return c.position * n + static_cast<std::uint64_t>(c.component - 1);
  default:
    throw Error("coordinates only exist for component graphs");
  }
}

Coord decode(GraphKind const &kind, Vertex v)
{
  auto n = static_cast<std::uint64_t>(kind.n);
  switch (kind.family) {
  case Family::OmegaKn:
    return {unzigzag(v / n), v % n};
  case Family::NKOmega:
    return {static_cast<std::int64_t>(v % n) + 1, v / n};
  default:
    throw Error("coordinates only exist for component graphs");
  }
}

std::int64_t component_of(GraphKind const &kind, Vertex v)
{ return decode(kind, v).component; }

GraphSession::GraphSession(GraphKind kind, std::uint64_t seed)
: _kind(kind),
  _seed(seed),
  _data(std::make_shared<Data>())
{}

std::size_t GraphSession::size() const { return _data->lower.size(); }

bool GraphSession::realized(Vertex v) const
{ return _kind.component_graph() || v < _data->lower.size(); }

void GraphSession::check_realized(Vertex v) const
{
  if (!realized(v))
    throw IsoRejection(IsoRejection::Reason::UnknownVertex, {{v, v}},
                       "unknown vertex " + std::to_string(v));
}

void GraphSession::detach()
{
  if (_data.use_count() > 1)
    _data = std::make_shared<Data>(*_data);
}

bool GraphSession::raw_adjacent(Vertex u, Vertex v) const
{
  if (u == v)
    return false;
  if (_kind.component_graph())
    return component_of(_kind, u) == component_of(_kind, v);
  if (u > v)
    std::swap(u, v);
  auto const &row = _data->lower[v];
  return (row[u / 64] >> (u % 64)) & 1;
}

bool GraphSession::adjacent(Vertex u, Vertex v) const
{
  check_realized(u);
  check_realized(v);
  return raw_adjacent(u, v);
}

VertexSet GraphSession::neighbors_within(Vertex x, VertexSet const &S) const
{
  check_realized(x);
  VertexSet out;
  for (Vertex s : S) {
    check_realized(s);
    if (raw_adjacent(x, s))
      out.insert(s);
  }
  return out;
}

bool GraphSession::has_clique(std::vector<Vertex> const &candidates,
                              int k) const
{
  if (k <= 0)
    return true;
  if (static_cast<int>(candidates.size()) < k)
    return false;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::vector<Vertex> next;
    for (std::size_t j = i + 1; j < candidates.size(); ++j)
      if (raw_adjacent(candidates[i], candidates[j]))
        next.push_back(candidates[j]);
    if (has_clique(next, k - 1))
      return true;
  }
  return false;
}

bool GraphSession::kn_free_check(VertexSet const &S, int k) const
{
  if (k < 2)
    throw Error("kn_free_check requires k >= 2");
  for (Vertex v : S)
    check_realized(v);
  return !has_clique(std::vector<Vertex>(S.begin(), S.end()), k);
}

VertexSet GraphSession::realized_vertices() const
{
  VertexSet out;
  for (Vertex v = 0; v < _data->lower.size(); ++v)
    out.insert(v);
  return out;
}

std::vector<WitnessCall> const &GraphSession::calls() const
{ return _data->calls; }

Vertex GraphSession::alice_witness(VertexSet const &U, VertexSet const &V,
                                   VertexSet const &forbidden)
{
  if (!_kind.lazy())
    throw Error("alice_witness needs a Random or HensonFree session");

  for (Vertex u : U) {
    check_realized(u);
    if (V.count(u))
      throw HypothesisError("alice_witness",
                            "U and V intersect at " + std::to_string(u));
  }
  for (Vertex v : V)
    check_realized(v);
  for (Vertex v : forbidden)
    check_realized(v);

  int clique = _kind.family == Family::HensonFree ? _kind.n - 1 : 0;
  if (clique && !kn_free_check(U, clique))
    throw HypothesisError("alice_witness", "forbidden clique in U");

  std::vector<Vertex> nbrs(U.begin(), U.end());

  if (_seed != 0) {
    std::vector<Vertex> free;
    for (Vertex v = 0; v < _data->lower.size(); ++v)
      if (!U.count(v) && !V.count(v) && !forbidden.count(v))
        free.push_back(v);

    std::mt19937_64 rng(mix(_seed ^ mix(_data->calls.size())));
    int extras = static_cast<int>(rng() % 4);
    for (int i = 0; i < extras && !free.empty(); ++i) {
      std::size_t idx = rng() % free.size();
      Vertex cand = free[idx];
      free.erase(free.begin() + static_cast<std::ptrdiff_t>(idx));
      nbrs.push_back(cand);
      if (clique) {
        VertexSet trial(nbrs.begin(), nbrs.end());
        if (!kn_free_check(trial, clique))
          nbrs.pop_back();
      }
    }
  }

  detach();
  Vertex w = _data->lower.size();
  std::vector<std::uint64_t> row(w / 64 + 1, 0);
  for (Vertex u : nbrs)
    row[u / 64] |= std::uint64_t{1} << (u % 64);
  _data->lower.push_back(std::move(row));

  _data->calls.push_back({w,
                          std::vector<Vertex>(U.begin(), U.end()),
                          std::vector<Vertex>(V.begin(), V.end()),
                          std::vector<Vertex>(forbidden.begin(),
                                              forbidden.end())});
  return w;
}

std::string GraphSession::transcript() const
{
  std::ostringstream out;
  out << "kind=" << _kind.name() << " n=" << _kind.n << " seed=" << _seed
      << '\n';
  for (auto const &c : _data->calls)
    out << c.result << '|' << join_ids(c.U) << '|' << join_ids(c.V) << '|'
        << join_ids(c.forbidden) << '\n';
  return out.str();
}

GraphSession GraphSession::replay(std::string const &transcript)
{
  std::istringstream in(transcript);
  std::string header;
  if (!std::getline(in, header))
    throw Error("empty transcript");

  std::string kind_name;
  int n = 0;
  std::uint64_t seed = 0;
  {
    std::istringstream hs(header);
    std::string tok;
    while (hs >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw Error("malformed transcript header");
      auto key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "kind")
        kind_name = val;
      else if (key == "n")
        n = std::stoi(val);
      else if (key == "seed")
        seed = std::stoull(val);
    }
  }

  GraphSession s(GraphKind::parse(kind_name, n), seed);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, '|'))
      fields.push_back(f);
    while (fields.size() < 4)
      fields.emplace_back();

    auto ids = [](std::string const &field) {
      auto v = split_ids(field);
      return VertexSet(v.begin(), v.end());
    };
    Vertex expect = std::stoull(fields[0]);
    Vertex got = s.alice_witness(ids(fields[1]), ids(fields[2]),
                                 ids(fields[3]));
    if (got != expect)
      throw Error("transcript replay diverged: expected vertex " +
                  std::to_string(expect) + ", got " + std::to_string(got));
  }
  return s;
}

} // namespace ultradense
