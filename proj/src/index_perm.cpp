#include "ultradense/index_perm.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <numeric>
#include <sstream>

#include "ultradense/error.hpp"

namespace ultradense {

IndexPerm::IndexPerm(std::vector<int> images)
: _img(std::move(images))
{
  std::vector<bool> hit(_img.size(), false);
  for (int v : _img) {
    if (v < 0 || v >= degree() || hit[v])
      throw Error("not a permutation");
    hit[v] = true;
  }
}

IndexPerm IndexPerm::identity(int n)
{
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 0);
  return IndexPerm(std::move(img));
}

IndexPerm IndexPerm::parse(std::string const &text, int n)
{
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 0);

  std::vector<int> cycle;
  std::string num;
  bool open = false;

  auto flush_num = [&] {
    if (num.empty())
      return;
    int v = std::stoi(num) - 1;
    num.clear();
    if (v < 0 || v >= n)
      throw Error("cycle entry out of range: " + text);
    cycle.push_back(v);
  };

  for (char ch : text) {
    if (ch == '(') {
      if (open)
        throw Error("nested cycle: " + text);
      open = true;
      cycle.clear();
    } else if (ch == ')') {
      if (!open)
        throw Error("unbalanced cycle: " + text);
      flush_num();
      for (std::size_t i = 0; i < cycle.size(); ++i)
        img[cycle[i]] = cycle[(i + 1) % cycle.size()];
      open = false;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      num += ch;
    } else if (ch == ' ' || ch == ',') {
      flush_num();
    } else {
      throw Error("bad character in cycle notation: " + text);
    }
  }
  if (open)
    throw Error("unbalanced cycle: " + text);
  return IndexPerm(std::move(img));
}

IndexPerm IndexPerm::operator*(IndexPerm const &other) const
{
  if (degree() != other.degree())
    throw Error("degree mismatch");
  std::vector<int> img(_img.size());
  for (std::size_t i = 0; i < _img.size(); ++i)
    img[i] = other._img[_img[i]];
  return IndexPerm(std::move(img));
}

IndexPerm IndexPerm::inverse() const
{
  std::vector<int> img(_img.size());
  for (std::size_t i = 0; i < _img.size(); ++i)
    img[_img[i]] = static_cast<int>(i);
  return IndexPerm(std::move(img));
}

IndexPerm IndexPerm::pow(std::int64_t k) const
{
  IndexPerm base = k < 0 ? inverse() : *this;
  std::uint64_t e = k < 0 ? static_cast<std::uint64_t>(-k)
                          : static_cast<std::uint64_t>(k);
  IndexPerm out = identity(degree());
  while (e) {
    if (e & 1)
      out = out * base;
    base = base * base;
    e >>= 1;
  }
  return out;
}

bool IndexPerm::is_identity() const
{
  for (std::size_t i = 0; i < _img.size(); ++i)
    if (_img[i] != static_cast<int>(i))
      return false;
  return true;
}

int IndexPerm::order() const
{
  int ord = 1;
  for (auto const &c : cycles())
    ord = std::lcm(ord, static_cast<int>(c.size()));
  return ord;
}

std::vector<int> IndexPerm::support() const
{
  std::vector<int> out;
  for (std::size_t i = 0; i < _img.size(); ++i)
    if (_img[i] != static_cast<int>(i))
      out.push_back(static_cast<int>(i) + 1);
  return out;
}

std::vector<std::vector<int>> IndexPerm::cycles() const
{
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(_img.size(), false);
  for (std::size_t i = 0; i < _img.size(); ++i) {
    if (seen[i])
      continue;
    std::vector<int> c;
    std::size_t j = i;
    while (!seen[j]) {
      seen[j] = true;
      c.push_back(static_cast<int>(j) + 1);
      j = static_cast<std::size_t>(_img[j]);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::uint64_t IndexPerm::rank() const
{
  std::uint64_t r = 0;
  int n = degree();
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (_img[j] < _img[i])
        ++smaller;
    r = r * static_cast<std::uint64_t>(n - i) + static_cast<std::uint64_t>(smaller);
  }
  return r;
}

bool IndexPerm::is_even() const
{
  int transpositions = 0;
  for (auto const &c : cycles())
    transpositions += static_cast<int>(c.size()) - 1;
  return transpositions % 2 == 0;
}

std::string IndexPerm::to_string() const
{
  std::ostringstream out;
  bool any = false;
  for (auto const &c : cycles()) {
    if (c.size() < 2)
      continue;
    any = true;
    out << '(';
    for (std::size_t i = 0; i < c.size(); ++i)
      out << (i ? " " : "") << c[i];
    out << ')';
  }
  if (!any)
    out << "()";
  return out.str();
}

std::uint64_t factorial(int n)
{
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i)
    f *= static_cast<std::uint64_t>(i);
  return f;
}

std::vector<IndexPerm> all_perms(int n)
{
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 0);
  std::vector<IndexPerm> out;
  do {
    out.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

std::uint64_t generated_order(std::vector<IndexPerm> const &gens, int n)
{
  if (n > 10)
    throw Error("closure out of desk range");
  std::vector<bool> visited(factorial(n), false);
  std::deque<IndexPerm> queue{IndexPerm::identity(n)};
  visited[queue.front().rank()] = true;
  std::uint64_t count = 1;
  while (!queue.empty()) {
    IndexPerm cur = queue.front();
    queue.pop_front();
    for (auto const &g : gens) {
      IndexPerm nxt = cur * g;
      auto r = nxt.rank();
      if (!visited[r]) {
        visited[r] = true;
        ++count;
        queue.push_back(std::move(nxt));
      }
    }
  }
  return count;
}

bool generates_symmetric(std::vector<IndexPerm> const &gens, int n)
{
  if (n <= 1)
    return true;
  // Cheap necessary conditions: an odd element and a transitive action.
  bool odd = std::any_of(gens.begin(), gens.end(),
                         [](IndexPerm const &g) { return !g.is_even(); });
  if (!odd)
    return false;
  std::vector<int> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&](int x) {
    while (comp[x] != x)
      x = comp[x] = comp[comp[x]];
    return x;
  };
  for (auto const &g : gens)
    for (int i = 0; i < n; ++i)
      comp[find(i)] = find(g.images()[i]);
  for (int i = 0; i < n; ++i)
    if (find(i) != find(0))
      return false;
  return generated_order(gens, n) == factorial(n);
}

} // namespace ultradense
