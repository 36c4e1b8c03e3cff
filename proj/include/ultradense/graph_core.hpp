#ifndef GUARD_ULTRADENSE_GRAPH_CORE_H
#define GUARD_ULTRADENSE_GRAPH_CORE_H

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"

namespace ultradense {

using VertexSet = std::set<Vertex>;

enum class Family { Random, HensonFree, OmegaKn, NKOmega };

struct GraphKind
{
  Family family;
  int n; // unused for Random

  static GraphKind random();
  static GraphKind henson(int n);
  static GraphKind omega_kn(int n);
  static GraphKind nk_omega(int n);

  bool lazy() const
  { return family == Family::Random || family == Family::HensonFree; }

  bool component_graph() const { return !lazy(); }

  std::string name() const;
  static GraphKind parse(std::string const &name, int n);

  bool operator==(GraphKind const &other) const
  { return family == other.family && (family == Family::Random || n == other.n); }
};

// Component coordinates. OmegaKn components range over Z with positions
// 0..n-1; NKOmega components are 1..n with positions in N.
struct Coord
{
  std::int64_t component;
  std::uint64_t position;

  bool operator==(Coord const &other) const = default;
};

std::uint64_t zigzag(std::int64_t i);
std::int64_t unzigzag(std::uint64_t z);

Vertex encode(GraphKind const &kind, Coord const &c);
Coord decode(GraphKind const &kind, Vertex v);
std::int64_t component_of(GraphKind const &kind, Vertex v);

// One recorded alice_witness call.
struct WitnessCall
{
  Vertex result;
  std::vector<Vertex> U, V, forbidden;
};

class GraphSession
{
public:
  explicit GraphSession(GraphKind kind, std::uint64_t seed = 0);

  GraphKind const &kind() const { return _kind; }
  std::uint64_t seed() const { return _seed; }

  // Number of realized vertices of a lazy session.
  std::size_t size() const;
  bool realized(Vertex v) const;

  bool adjacent(Vertex u, Vertex v) const;

  Vertex alice_witness(VertexSet const &U, VertexSet const &V,
                       VertexSet const &forbidden = {});

  VertexSet neighbors_within(Vertex x, VertexSet const &S) const;

  // True iff no k-subset of S induces a complete graph.
  bool kn_free_check(VertexSet const &S, int k) const;
  VertexSet realized_vertices() const;

  std::vector<WitnessCall> const &calls() const;
  std::string transcript() const;
  static GraphSession replay(std::string const &transcript);

  // Shares storage until the next mutation of either copy.
  GraphSession snapshot() const { return *this; }

private:
  struct Data
  {
    std::vector<std::vector<std::uint64_t>> lower; // row v: bits for u < v
    std::vector<WitnessCall> calls;
  };

  void check_realized(Vertex v) const;
  void detach();
  bool raw_adjacent(Vertex u, Vertex v) const;
  bool has_clique(std::vector<Vertex> const &candidates, int k) const;

  GraphKind _kind;
  std::uint64_t _seed;
  std::shared_ptr<Data> _data;
};

} // namespace ultradense

#endif // GUARD_ULTRADENSE_GRAPH_CORE_H
