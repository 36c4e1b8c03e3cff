#ifndef GUARD_ULTRADENSE_OMEGA_KN_ENGINE_H
#define GUARD_ULTRADENSE_OMEGA_KN_ENGINE_H

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "automorphism.hpp"
#include "certificate.hpp"
#include "graph_core.hpp"
#include "partial_iso.hpp"

namespace ultradense {

// How many Σ points sit in each component of ωKₙ.
struct SigmaPlacement
{
  std::map<std::int64_t, std::size_t> counts; // only nonzero entries
  VertexSet sigma;

  static SigmaPlacement from_sigma(int n, VertexSet const &sigma);
  // Σ made of the first counts[c] positions of each component.
  static SigmaPlacement from_counts(int n,
                                    std::map<std::int64_t, std::size_t> counts);
  std::size_t total() const { return sigma.size(); }
};

// r infinite parts of Z. Part i is its explicit Σ-carrying members (in
// zigzag order) followed by every r-th remaining index, round-robin.
struct SigmaPartition
{
  std::size_t r = 0;
  std::vector<std::vector<std::int64_t>> carriers;

  std::size_t part_of(std::int64_t c) const;
  // k_{i,j}: the part's member list indexed through zigzag(j).
  std::int64_t member(std::size_t part, std::int64_t j) const;
};

// dom and ran disjoint unions of whole components, no complete component
// in the index map.
struct FClassIso
{
  PartialIso iso;
};

bool is_f_class(GraphKind const &kind, PartialIso const &p);
FClassIso make_f_class(GraphKind const &kind, PartialIso p);

// Induced map on components as a partial map of zigzag codes.
PartialIso index_iso(GraphKind const &kind, PartialIso const &q);

// Throws HypothesisError when dom(q) is not a union of components or Σ does
// not meet each component of q exactly once.
bool in_I_sigma_class(GraphKind const &kind, PartialIso const &q,
                      VertexSet const &sigma);

std::optional<SigmaPartition> sigma_feasible(int n,
                                             SigmaPlacement const &placement);

// Throws Error when the partition does not fit the placement.
void check_partition(int n, SigmaPlacement const &placement,
                     SigmaPartition const &partition);

// The first `depth` bijections of the interleaved construction in every
// part: step 1 goes k_{i,0} to k_{i,1}, then backward and forward in turn.
PartialIso build_f_from_partition(int n, SigmaPlacement const &placement,
                                  SigmaPartition const &partition,
                                  std::size_t depth);

// Extends q to whole components, positions filled in increasing order.
PartialIso round_to_components(GraphKind const &kind, PartialIso const &q);

// (p, p⁻¹r) through fresh components, r the rounded q.
std::pair<FClassIso, FClassIso> split_into_F(GraphKind const &kind,
                                             PartialIso const &q);

WitnessCertificate density_witness_omega(ComponentShiftOracle &f,
                                         PartialIso const &q,
                                         FClassIso const &p,
                                         VertexSet const &sigma);

} // namespace ultradense

#endif // GUARD_ULTRADENSE_OMEGA_KN_ENGINE_H
