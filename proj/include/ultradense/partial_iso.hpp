#ifndef GUARD_ULTRADENSE_PARTIAL_ISO_H
#define GUARD_ULTRADENSE_PARTIAL_ISO_H

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "graph_core.hpp"

namespace ultradense {

// Finite injective map between vertex sets. Values are immutable; the
// adjacency check happens in validate()/union_extend() against a session.
class PartialIso
{
public:
  PartialIso() = default;

  // Skips all checks. For results that are isomorphisms by construction.
  static PartialIso unchecked(std::map<Vertex, Vertex> fwd);

  static PartialIso identity(VertexSet const &on);

  std::optional<Vertex> image(Vertex x) const;
  std::optional<Vertex> preimage(Vertex y) const;

  bool in_dom(Vertex x) const { return _fwd.count(x) != 0; }
  bool in_ran(Vertex y) const { return _inv.count(y) != 0; }

  VertexSet dom() const;
  VertexSet ran() const;
  VertexSet support() const; // dom ∪ ran

  std::vector<VertexPair> pairs() const;
  std::map<Vertex, Vertex> const &map() const { return _fwd; }

  std::size_t size() const { return _fwd.size(); }
  bool empty() const { return _fwd.empty(); }

  // Every pair of `other` is a pair of *this.
  bool extends(PartialIso const &other) const;

  // Restriction to a subset of the domain.
  PartialIso restrict(VertexSet const &to) const;

  bool operator==(PartialIso const &other) const { return _fwd == other._fwd; }

  std::string to_string() const;

private:
  std::map<Vertex, Vertex> _fwd, _inv;
};

PartialIso validate(GraphSession const &s, std::vector<VertexPair> const &pairs);

// x(f∘g) = (xf)g on dom(f) ∩ (dom(g) ∩ ran(f))f⁻¹.
PartialIso compose(PartialIso const &f, PartialIso const &g);

PartialIso invert(PartialIso const &f);

// Iterated composition; power(f, 0) is the identity on dom(f).
PartialIso power(PartialIso const &f, std::int64_t k);

PartialIso union_extend(GraphSession const &s, PartialIso const &f,
                        std::vector<VertexPair> const &pairs);

struct Component
{
  std::vector<Vertex> vertices; // chain order head..tail, or a cycle
  bool complete;

  Vertex head() const { return vertices.front(); }
  Vertex tail() const { return vertices.back(); }
};

// Incomplete components first (by head id), then cycles by smallest vertex.
std::vector<Component> components(PartialIso const &f);

// Index of the component of each vertex in dom ∪ ran.
std::map<Vertex, std::size_t> component_index(std::vector<Component> const &cs);

bool in_class_I(PartialIso const &f);

// Induced map on component indices. Throws IsoRejection(IndexMapConflict)
// when a component is sent to two components or two components collide.
std::map<std::int64_t, std::int64_t> index_map(GraphKind const &kind,
                                               PartialIso const &f);

struct OrbitProfile
{
  std::vector<Component> comps;
  std::vector<std::size_t> hits;

  bool at_most_one() const;
  bool complete_exactly_one() const;
};

OrbitProfile orbit_rep_profile(PartialIso const &f, VertexSet const &sigma);

} // namespace ultradense

#endif // GUARD_ULTRADENSE_PARTIAL_ISO_H
