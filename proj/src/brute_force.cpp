#include "ultradense/verifier.hpp"

#include <map>
#include <set>

namespace ultradense {

std::vector<VertexPair> brute_force_word_eval(
  FreeWord const &w, std::vector<VertexPair> const &p,
  std::vector<VertexPair> const &f)
{
  std::map<Vertex, Vertex> p_fwd, p_inv, f_fwd, f_inv;
  std::set<Vertex> universe;
  for (auto [x, y] : p) {
    p_fwd[x] = y;
    p_inv[y] = x;
    universe.insert(x);
    universe.insert(y);
  }
  for (auto [x, y] : f) {
    f_fwd[x] = y;
    f_inv[y] = x;
    universe.insert(x);
    universe.insert(y);
  }

  std::vector<VertexPair> out;
  for (Vertex x : universe) {
    Vertex cur = x;
    bool defined = true;
    for (auto const &s : w.syllables()) {
      auto &table = s.letter == Letter::Alpha ? (s.exp > 0 ? p_fwd : p_inv)
                                              : (s.exp > 0 ? f_fwd : f_inv);
      std::int64_t count = s.exp > 0 ? s.exp : -s.exp;
      for (std::int64_t i = 0; i < count && defined; ++i) {
        auto it = table.find(cur);
        if (it == table.end())
          defined = false;
        else
          cur = it->second;
      }
      if (!defined)
        break;
    }
    if (defined)
      out.emplace_back(x, cur);
  }
  return out;
}

} // namespace ultradense
