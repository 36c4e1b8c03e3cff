#include "ultradense/word_algebra.hpp"

#include <cstdlib>
#include <sstream>

namespace ultradense {

FreeWord FreeWord::reduce(std::vector<Syllable> const &raw)
{
  FreeWord w;
  for (auto const &s : raw) {
    if (s.exp == 0)
      throw Error("zero exponent in word");
    if (!w._syl.empty() && w._syl.back().letter == s.letter) {
      w._syl.back().exp += s.exp;
      if (w._syl.back().exp == 0)
        w._syl.pop_back();
    } else {
      w._syl.push_back(s);
    }
  }
  return w;
}

FreeWord FreeWord::alpha(std::int64_t e)
{ return e == 0 ? FreeWord{} : reduce({{Letter::Alpha, e}}); }

FreeWord FreeWord::beta(std::int64_t e)
{ return e == 0 ? FreeWord{} : reduce({{Letter::Beta, e}}); }

FreeWord FreeWord::parse(std::string const &text)
{
  std::vector<Syllable> raw;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "1")
      continue;
    Letter l;
    if (tok[0] == 'a')
      l = Letter::Alpha;
    else if (tok[0] == 'b')
      l = Letter::Beta;
    else
      throw Error("bad word token '" + tok + "'");
    std::int64_t e = 1;
    if (tok.size() > 1) {
      if (tok[1] != '^' || tok.size() < 3)
        throw Error("bad word token '" + tok + "'");
      std::size_t used = 0;
      e = std::stoll(tok.substr(2), &used);
      if (used != tok.size() - 2)
        throw Error("bad word token '" + tok + "'");
    }
    raw.push_back({l, e});
  }
  return reduce(raw);
}

std::size_t FreeWord::length() const
{
  std::size_t n = 0;
  for (auto const &s : _syl)
    n += static_cast<std::size_t>(std::abs(s.exp));
  return n;
}

std::size_t FreeWord::b_count() const
{
  std::size_t n = 0;
  for (auto const &s : _syl)
    if (s.letter == Letter::Beta)
      n += static_cast<std::size_t>(std::abs(s.exp));
  return n;
}

bool FreeWord::has_alpha() const
{
  for (auto const &s : _syl)
    if (s.letter == Letter::Alpha)
      return true;
  return false;
}

bool FreeWord::has_alpha_inverse() const
{
  for (auto const &s : _syl)
    if (s.letter == Letter::Alpha && s.exp < 0)
      return true;
  return false;
}

bool FreeWord::starts_with(Letter l) const
{ return !_syl.empty() && _syl.front().letter == l; }

FreeWord FreeWord::operator*(FreeWord const &o) const
{
  auto raw = _syl;
  raw.insert(raw.end(), o._syl.begin(), o._syl.end());
  return reduce(raw);
}

FreeWord FreeWord::inverse() const
{
  std::vector<Syllable> raw(_syl.rbegin(), _syl.rend());
  for (auto &s : raw)
    s.exp = -s.exp;
  return reduce(raw);
}

FreeWord FreeWord::swap_alpha() const
{
  auto raw = _syl;
  for (auto &s : raw)
    if (s.letter == Letter::Alpha)
      s.exp = -s.exp;
  return reduce(raw);
}

FreeWord FreeWord::prefix(std::size_t letters) const
{
  std::vector<Syllable> raw;
  for (auto const &s : _syl) {
    if (letters == 0)
      break;
    auto mag = static_cast<std::size_t>(std::abs(s.exp));
    auto take = std::min(mag, letters);
    raw.push_back({s.letter, s.exp < 0 ? -static_cast<std::int64_t>(take)
                                       : static_cast<std::int64_t>(take)});
    letters -= take;
  }
  return reduce(raw);
}

std::string FreeWord::to_string() const
{
  if (_syl.empty())
    return "1";
  std::ostringstream out;
  for (std::size_t i = 0; i < _syl.size(); ++i) {
    if (i)
      out << ' ';
    out << (_syl[i].letter == Letter::Alpha ? 'a' : 'b');
    if (_syl[i].exp != 1)
      out << '^' << _syl[i].exp;
  }
  return out.str();
}

namespace {

// One letter of w applied to x; nullopt when undefined.
std::optional<Vertex> step(Letter l, bool forward, PartialIso const &p,
                           AutomorphismOracle &f, Vertex x)
{
  if (l == Letter::Alpha)
    return forward ? p.image(x) : p.preimage(x);
  return forward ? f.image(x) : f.preimage(x);
}

} // namespace

std::optional<Vertex> evaluate_at(FreeWord const &w, PartialIso const &p,
                                  AutomorphismOracle &f, Vertex x)
{
  std::optional<Vertex> cur = x;
  for (auto const &s : w.syllables()) {
    auto mag = std::abs(s.exp);
    for (std::int64_t i = 0; i < mag && cur; ++i)
      cur = step(s.letter, s.exp > 0, p, f, *cur);
    if (!cur)
      return std::nullopt;
  }
  return cur;
}

PartialIso evaluate(FreeWord const &w, PartialIso const &p,
                    AutomorphismOracle &f)
{
  if (!w.has_alpha())
    throw Error("evaluate needs a word containing α; '" + w.to_string() +
                "' acts on every vertex");

  auto const &syl = w.syllables();
  std::size_t first_alpha = syl[0].letter == Letter::Alpha ? 0 : 1;
  VertexSet seeds = syl[first_alpha].exp > 0 ? p.dom() : p.ran();

  std::map<Vertex, Vertex> m;
  for (Vertex c : seeds) {
    std::optional<Vertex> x = c;
    if (first_alpha == 1)
      x = f.apply(c, -syl[0].exp);
    if (!x)
      continue;
    if (auto y = evaluate_at(w, p, f, *x); y)
      m.emplace(*x, *y);
  }
  return PartialIso::unchecked(std::move(m));
}

FreeWord largest_defined_prefix(FreeWord const &w, PartialIso const &p,
                                AutomorphismOracle &f, Vertex x)
{
  std::size_t letters = 0;
  Vertex cur = x;
  for (auto const &s : w.syllables()) {
    auto mag = std::abs(s.exp);
    for (std::int64_t i = 0; i < mag; ++i) {
      auto nxt = step(s.letter, s.exp > 0, p, f, cur);
      if (!nxt)
        return w.prefix(letters);
      cur = *nxt;
      ++letters;
    }
  }
  return w;
}

IndexPerm evaluate_perm(FreeWord const &w, IndexPerm const &a,
                        IndexPerm const &b)
{
  IndexPerm out = IndexPerm::identity(a.degree());
  for (auto const &s : w.syllables())
    out = out * (s.letter == Letter::Alpha ? a : b).pow(s.exp);
  return out;
}

void SConditionReport::fail(int clause, std::vector<Vertex> witness,
                            std::string detail)
{
  holds = false;
  failed_clauses.insert(clause);
  failures.push_back({clause, std::move(witness), std::move(detail)});
}

std::string SConditionReport::to_string() const
{
  if (holds)
    return "all clauses hold";
  std::ostringstream out;
  for (auto const &f : failures) {
    out << "clause " << f.clause << ": " << f.detail;
    if (!f.witness.empty()) {
      out << " [";
      for (std::size_t i = 0; i < f.witness.size(); ++i)
        out << (i ? "," : "") << f.witness[i];
      out << ']';
    }
    out << '\n';
  }
  return out.str();
}

SConditionReport check_S(GraphKind const &kind, PartialIso const &p,
                         SSets const &sets, FreeWord const &w,
                         AutomorphismOracle &f)
{
  for (Vertex t : sets.theta)
    if (!sets.gamma.count(t))
      throw HypothesisError("check_S", "Θ is not contained in Γ at vertex " +
                                         std::to_string(t));

  SConditionReport rep;
  int n = kind.n;

  // (1) The index map of w(p) is the identity.
  if (w.has_alpha()) {
    auto wp = evaluate(w, p, f);
    for (auto [x, y] : wp.map())
      if (component_of(kind, x) != component_of(kind, y)) {
        rep.fail(1, {x, y}, "w(p) moves a vertex between components");
        break;
      }
  }
  {
    auto pm = index_map(kind, p);
    if (static_cast<int>(pm.size()) == n) {
      std::vector<int> pimg(n), fimg(n);
      for (int c = 1; c <= n; ++c) {
        pimg[c - 1] = static_cast<int>(pm.at(c)) - 1;
        Vertex v = encode(kind, {c, 0});
        fimg[c - 1] = static_cast<int>(component_of(kind, *f.image(v))) - 1;
      }
      auto val = evaluate_perm(w, IndexPerm(pimg), IndexPerm(fimg));
      if (!val.is_identity())
        rep.fail(1, {}, "symbolic value " + val.to_string() + " is not id");
    }
  }

  // (2)
  for (Vertex d : sets.delta)
    if (p.in_ran(d))
      rep.fail(2, {d}, "ran(p) meets Δ");

  // (3) and (4)
  std::map<Vertex, Vertex> reached; // x -> (x)w_{p,x}
  for (Vertex x : sets.gamma) {
    auto full = evaluate_at(w, p, f, x);
    bool in_dom = full.has_value();
    if (in_dom != (sets.theta.count(x) != 0))
      rep.fail(3, {x}, in_dom ? "Γ∖Θ vertex in dom(w(p))"
                              : "Θ vertex outside dom(w(p))");
    if (in_dom && sets.theta.count(x) && p.in_dom(*full))
      rep.fail(4, {x, *full}, "image of Θ meets dom(p)");
    auto pre = largest_defined_prefix(w, p, f, x);
    reached[x] = *evaluate_at(pre, p, f, x);
  }

  // (5)
  std::map<Vertex, Vertex> back;
  for (auto [x, y] : reached) {
    auto [it, ok] = back.emplace(y, x);
    if (!ok)
      rep.fail(5, {it->second, x}, "two Γ vertices reach the same point");
  }

  // (6) Only exponents m with y in the domain of p^m count, so the scan stops
  // at the end of the p-component through y in each direction.
  for (auto [x, y] : reached) {
    auto hit = [&](Vertex v, std::int64_t m) {
      if (sets.phi.count(v))
        rep.fail(6, {x, v},
                 "(x)w_{p,x}p^" + std::to_string(m) + " lies in Φ");
    };
    if (p.in_dom(y))
      hit(y, 0);
    std::optional<Vertex> cur = p.image(y);
    for (std::int64_t m = 1; cur && *cur != y; ++m) {
      hit(*cur, m);
      cur = p.image(*cur);
    }
    if (cur && *cur == y)
      continue; // complete component: forward walk already saw everything
    cur = p.preimage(y);
    for (std::int64_t m = -1; cur; --m) {
      hit(*cur, m);
      cur = p.preimage(*cur);
    }
  }

  return rep;
}

} // namespace ultradense
