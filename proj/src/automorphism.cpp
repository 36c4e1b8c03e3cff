#include "ultradense/automorphism.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace ultradense {

using nlohmann::json;

std::optional<Vertex> AutomorphismOracle::apply(Vertex x, std::int64_t k)
{
  std::optional<Vertex> cur = x;
  for (std::int64_t i = 0; i < k && cur; ++i)
    cur = image(*cur);
  for (std::int64_t i = 0; i > k && cur; --i)
    cur = preimage(*cur);
  return cur;
}

std::optional<Vertex> FiniteTruncation::image(Vertex x)
{
  auto y = _table.image(x);
  if (!y && _strict)
    throw OracleExhausted(x);
  return y;
}

std::optional<Vertex> FiniteTruncation::preimage(Vertex y)
{
  auto x = _table.preimage(y);
  if (!x && _strict)
    throw OracleExhausted(y);
  return x;
}

json FiniteTruncation::describe() const
{
  json pairs = json::array();
  for (auto [x, y] : _table.map())
    pairs.push_back({x, y});
  return {{"policy", "finite"}, {"pairs", pairs}, {"strict", _strict}};
}

FinitePermZ::FinitePermZ(std::map<std::int64_t, std::int64_t> moved)
{
  for (auto [a, b] : moved) {
    if (a == b)
      continue;
    _fwd.emplace(a, b);
    if (!_inv.emplace(b, a).second)
      throw Error("window map is not injective");
  }
  for (auto [a, b] : _fwd)
    if (!_fwd.count(b) || !_inv.count(a))
      throw Error("window map is not a permutation of its support");
}

std::int64_t FinitePermZ::apply(std::int64_t z) const
{
  auto it = _fwd.find(z);
  return it == _fwd.end() ? z : it->second;
}

std::int64_t FinitePermZ::unapply(std::int64_t z) const
{
  auto it = _inv.find(z);
  return it == _inv.end() ? z : it->second;
}

json FinitePermZ::to_json() const
{
  json out = json::array();
  for (auto [a, b] : _fwd)
    out.push_back({a, b});
  return out;
}

FinitePermZ FinitePermZ::from_json(json const &j)
{
  std::map<std::int64_t, std::int64_t> m;
  for (auto const &pr : j)
    m.emplace(pr.at(0).get<std::int64_t>(), pr.at(1).get<std::int64_t>());
  return FinitePermZ(std::move(m));
}

namespace {

std::uint64_t mod(std::int64_t a, std::int64_t n)
{
  auto r = a % n;
  return static_cast<std::uint64_t>(r < 0 ? r + n : r);
}

} // namespace

ComponentShiftOracle::ComponentShiftOracle(int n, std::int64_t shift,
                                           FinitePermZ perm,
                                           std::int64_t rot_a,
                                           std::int64_t rot_b)
: _kind(GraphKind::omega_kn(n)),
  _shift(shift),
  _perm(std::move(perm)),
  _rot_a(rot_a),
  _rot_b(rot_b)
{}

std::int64_t ComponentShiftOracle::fbar(std::int64_t c) const
{ return _perm.apply(c + _shift); }

std::int64_t ComponentShiftOracle::fbar_inv(std::int64_t c) const
{ return _perm.unapply(c) - _shift; }

std::uint64_t ComponentShiftOracle::rotation(std::int64_t c) const
{ return mod(_rot_a * c + _rot_b, _kind.n); }

std::optional<Vertex> ComponentShiftOracle::image(Vertex x)
{
  auto [c, pos] = decode(_kind, x);
  auto n = static_cast<std::uint64_t>(_kind.n);
  return encode(_kind, {fbar(c), (pos + rotation(c)) % n});
}

std::optional<Vertex> ComponentShiftOracle::preimage(Vertex y)
{
  auto [d, pos] = decode(_kind, y);
  auto c = fbar_inv(d);
  auto n = static_cast<std::uint64_t>(_kind.n);
  return encode(_kind, {c, (pos + n - rotation(c)) % n});
}

json ComponentShiftOracle::describe() const
{
  return {{"policy", "component-shift"}, {"n", _kind.n},
          {"shift", _shift}, {"perm", _perm.to_json()},
          {"rot_a", _rot_a}, {"rot_b", _rot_b}};
}

LineShiftOracle::LineShiftOracle(int n, IndexPerm pi,
                                 std::vector<std::int64_t> shifts,
                                 std::vector<FinitePermZ> windows)
: _kind(GraphKind::nk_omega(n)),
  _pi(std::move(pi)),
  _shifts(std::move(shifts)),
  _windows(std::move(windows))
{
  if (_pi.degree() != n || static_cast<int>(_shifts.size()) != n)
    throw Error("line-shift policy has the wrong degree");
  _windows.resize(static_cast<std::size_t>(n));
}

std::optional<Vertex> LineShiftOracle::image(Vertex x)
{
  auto [c, pos] = decode(_kind, x);
  auto z = unzigzag(pos);
  auto zz = _windows[c - 1].apply(z + _shifts[c - 1]);
  return encode(_kind, {_pi.apply(static_cast<int>(c)), zigzag(zz)});
}

std::optional<Vertex> LineShiftOracle::preimage(Vertex y)
{
  auto [d, pos] = decode(_kind, y);
  int c = _pi.inverse().apply(static_cast<int>(d));
  auto z = _windows[c - 1].unapply(unzigzag(pos)) - _shifts[c - 1];
  return encode(_kind, {c, zigzag(z)});
}

json LineShiftOracle::describe() const
{
  json windows = json::array();
  for (auto const &w : _windows)
    windows.push_back(w.to_json());
  return {{"policy", "line-shift"}, {"n", _kind.n},
          {"pi", _pi.to_string()}, {"shifts", _shifts},
          {"windows", windows}};
}

bool LineShiftOracle::fix_infinite() const
{
  for (int c = 1; c <= _kind.n; ++c)
    if (_pi.apply(c) == c && _shifts[c - 1] == 0)
      return true;
  return false;
}

std::optional<Vertex> LineShiftOracle::far_fixed_point(int c,
                                                       std::uint64_t from) const
{
  if (_pi.apply(c) != c || _shifts[c - 1] != 0)
    return std::nullopt;
  for (std::uint64_t pos = from;; ++pos)
    if (_windows[c - 1].apply(unzigzag(pos)) == unzigzag(pos))
      return encode(_kind, {c, pos});
}

bool LineShiftOracle::in_support(Vertex v) { return *image(v) != v; }

StabilizingVerdict classify_stabilizing(LineShiftOracle const &f,
                                        std::size_t bound)
{
  if (bound == 0)
    throw Error("classify_stabilizing needs a positive bound");

  int n = f.n();
  GraphKind kind = GraphKind::nk_omega(n);
  LineShiftOracle g = f; // queries are const in effect

  std::int64_t radius = 1, total_shift = 0;
  for (int c = 1; c <= n; ++c) {
    total_shift += std::abs(f.shift(c));
    for (auto [a, b] : f.window(c).moved())
      radius = std::max({radius, std::abs(a), std::abs(b)});
  }
  radius += total_shift + 1;

  struct CycleInfo
  {
    std::vector<int> comps;
    bool far_type;                      // any count is reachable
    std::vector<std::vector<Vertex>> orbits; // finite window orbits
  };
  std::vector<CycleInfo> cycles;

  for (auto const &cyc : f.fbar().cycles()) {
    CycleInfo info{cyc, false, {}};
    std::int64_t T = 0;
    for (int c : cyc)
      T += f.shift(c);
    info.far_type = (T == 0);

    // A finite orbit with a nonzero cycle shift must touch a window.
    auto L = static_cast<std::int64_t>(cyc.size());
    std::int64_t step_cap = 8 * L * (radius + 2) + 16;
    VertexSet seen;
    for (int c : cyc) {
      for (auto const &kv : f.window(c).moved()) {
        Vertex start = encode(kind, {c, zigzag(kv.first - f.shift(c))});
        if (seen.count(start))
          continue;
        std::vector<Vertex> orbit{start};
        Vertex cur = *g.image(start);
        std::int64_t steps = 1;
        while (cur != start && steps < step_cap) {
          orbit.push_back(cur);
          cur = *g.image(cur);
          ++steps;
        }
        if (cur != start)
          continue;
        for (Vertex v : orbit)
          seen.insert(v);
        info.orbits.push_back(std::move(orbit));
      }
    }
    cycles.push_back(std::move(info));
  }

  // 0/1 knapsack over a cycle's window orbits; weights are per-line counts.
  auto knapsack = [](CycleInfo const &info, std::size_t cap) {
    auto L = info.comps.size();
    std::vector<std::optional<std::vector<std::size_t>>> picks(cap + 1);
    picks[0] = std::vector<std::size_t>{};
    for (std::size_t o = 0; o < info.orbits.size(); ++o) {
      std::size_t w = info.orbits[o].size() / L;
      for (std::size_t t = cap; t >= w; --t) {
        if (!picks[t] && picks[t - w]) {
          picks[t] = *picks[t - w];
          picks[t]->push_back(o);
        }
        if (t == 0)
          break;
      }
    }
    return picks;
  };

  std::vector<std::vector<std::optional<std::vector<std::size_t>>>> picks;
  for (auto const &info : cycles)
    picks.push_back(knapsack(info, bound));

  for (std::size_t k = 1; k <= bound; ++k) {
    bool all = true;
    for (std::size_t i = 0; i < cycles.size(); ++i)
      all = all && (cycles[i].far_type || picks[i][k]);
    if (!all)
      continue;

    StabilizingVerdict v{true, {}, "", k};
    for (std::size_t i = 0; i < cycles.size(); ++i) {
      auto const &info = cycles[i];
      auto L = info.comps.size();
      // Prefer window orbits, top up with far orbits.
      std::size_t best = k;
      while (!picks[i][best])
        --best;
      for (std::size_t o : *picks[i][best])
        for (Vertex x : info.orbits[o])
          v.lambda.insert(x);
      // best < k only when the cycle shifts sum to zero
      int c0 = info.comps.front();
      std::int64_t z = radius + 1;
      for (std::size_t extra = best; extra < k; ++extra, z += 2) {
        Vertex x = encode(kind, {c0, zigzag(z)});
        for (std::size_t s = 0; s < L; ++s) {
          v.lambda.insert(x);
          x = *g.image(x);
        }
      }
    }
    return v;
  }

  std::string why = "no nonempty invariant union of finite orbits with equal "
                    "line counts up to " + std::to_string(bound);
  return {false, {}, why, 0};
}

std::unique_ptr<AutomorphismOracle> oracle_from_json(json const &j)
{
  auto policy = j.at("policy").get<std::string>();
  if (policy == "finite" || policy == "henson") {
    std::map<Vertex, Vertex> m;
    for (auto const &pr : j.at("pairs"))
      m.emplace(pr.at(0).get<Vertex>(), pr.at(1).get<Vertex>());
    bool strict = policy == "henson" || j.value("strict", false);
    return std::make_unique<FiniteTruncation>(PartialIso::unchecked(m), strict);
  }
  if (policy == "component-shift")
    return std::make_unique<ComponentShiftOracle>(
      j.at("n").get<int>(), j.at("shift").get<std::int64_t>(),
      FinitePermZ::from_json(j.at("perm")), j.at("rot_a").get<std::int64_t>(),
      j.at("rot_b").get<std::int64_t>());
  if (policy == "line-shift") {
    int n = j.at("n").get<int>();
    std::vector<FinitePermZ> windows;
    for (auto const &w : j.at("windows"))
      windows.push_back(FinitePermZ::from_json(w));
    return std::make_unique<LineShiftOracle>(
      n, IndexPerm::parse(j.at("pi").get<std::string>(), n),
      j.at("shifts").get<std::vector<std::int64_t>>(), std::move(windows));
  }
  throw Error("unknown oracle policy '" + policy + "'");
}

} // namespace ultradense
