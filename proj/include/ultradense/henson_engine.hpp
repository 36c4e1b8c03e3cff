#ifndef GUARD_ULTRADENSE_HENSON_ENGINE_H
#define GUARD_ULTRADENSE_HENSON_ENGINE_H

#include <cstdint>
#include <utility>
#include <vector>

#include "automorphism.hpp"
#include "certificate.hpp"
#include "graph_core.hpp"
#include "partial_iso.hpp"

namespace ultradense {

// Automorphism of a lazy graph grown by back-and-forth on demand. Every
// vertex whose image is synthesized is moved, so the support is infinite.
class HensonOracle : public AutomorphismOracle
{
public:
  HensonOracle(GraphSession &s, PartialIso base);

  std::optional<Vertex> image(Vertex x) override;
  std::optional<Vertex> preimage(Vertex y) override;
  nlohmann::json describe() const override;

  PartialIso const &cache() const { return _cache; }
  PartialIso const &base() const { return _base; }

  // Lowest reserved point of the support outside `avoid`; reserves a fresh
  // one when every stocked point is excluded.
  Vertex support_point(VertexSet const &avoid);

  std::vector<Vertex> image_set(VertexSet const &xs);
  std::vector<Vertex> preimage_set(VertexSet const &ys);

private:
  GraphSession &_s;
  PartialIso _base;
  PartialIso _cache;
  std::vector<Vertex> _stock;
};

// dom(p) and ran(p) disjoint with no edges between them.
struct PClassIso
{
  PartialIso iso;
};

bool is_p_class(GraphSession const &s, PartialIso const &p);
PClassIso make_p_class(GraphSession const &s, PartialIso p);

PartialIso neigh_extend(GraphSession const &s, PartialIso const &q, Vertex x,
                        Vertex y);

std::pair<PartialIso, Vertex> one_point_extend(GraphSession &s,
                                               PartialIso const &q, Vertex x,
                                               VertexSet const &avoid);

// Extends q so dom(q) covers `absorb`, then grows the shortest components
// (lowest tail id first) until every component has the same number of
// vertices. Returns that common length; 1 when q stays empty.
std::size_t pad_components(GraphSession &s, PartialIso &q,
                           VertexSet const &absorb, VertexSet const &avoid);

PartialIso chain_link(GraphSession &s, PartialIso const &q,
                      VertexSet const &delta, VertexSet const &fixed, Vertex x,
                      Vertex y, std::size_t m, VertexSet const &sigma1,
                      VertexSet const &sigma2);

struct Conjugator
{
  PartialIso h;
  std::size_t m; // h^{2m} extends p
};

Conjugator build_conjugator(GraphSession &s, PartialIso const &q,
                            PClassIso const &p);

std::pair<PClassIso, PClassIso> split_into_P(GraphSession &s,
                                             PartialIso const &q);

WitnessCertificate density_witness_henson(GraphSession &s, HensonOracle &f,
                                          PartialIso const &q,
                                          PClassIso const &p);

} // namespace ultradense

#endif // GUARD_ULTRADENSE_HENSON_ENGINE_H
