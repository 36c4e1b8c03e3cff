#ifndef GUARD_ULTRADENSE_NKOMEGA_ENGINE_H
#define GUARD_ULTRADENSE_NKOMEGA_ENGINE_H

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "automorphism.hpp"
#include "certificate.hpp"
#include "graph_core.hpp"
#include "index_perm.hpp"
#include "partial_iso.hpp"
#include "word_algebra.hpp"

namespace ultradense {

// f and Σ for one nK_ω construction. Σ stays fixed for the lifetime.
struct AFSigmaContext
{
  AFSigmaContext(LineShiftOracle &f, VertexSet sigma);

  LineShiftOracle &f;
  VertexSet sigma;
  int n;
  GraphKind kind;
  IndexPerm fbar;
};

// q̄ as a permutation, when q meets every component in its domain and the
// induced map is total.
std::optional<IndexPerm> index_perm_of(GraphKind const &kind,
                                       PartialIso const &q);

// Lowest-id vertex of component c outside `avoid`.
Vertex fresh_in(GraphKind const &kind, int c, VertexSet const &avoid);

// Fixed points of f, for policies where there are finitely many.
VertexSet finite_fixed_points(LineShiftOracle const &f);

// First violated hypothesis of the orbit-representative extension lemma
// (plus ⟨f̄, q̄⟩ = S_n), or nullopt when q is certified in the class.
std::optional<std::string> class_violation(AFSigmaContext const &ctx,
                                           PartialIso const &q);

PartialIso easy_one_point(GraphKind const &kind, PartialIso const &q, Vertex x,
                          Vertex y);

PartialIso extend_orbit_reps(AFSigmaContext const &ctx, PartialIso const &q,
                             std::size_t depth);

PartialIso class_one_point(AFSigmaContext const &ctx, PartialIso const &q,
                           Vertex x, Vertex y);

// The same step for q⁻¹: adds (x, y) with y ∉ ran(q), x ∉ dom(q) ∪ ran(q).
// Needs Σ ⊆ ran(q).
PartialIso class_one_point_before(AFSigmaContext const &ctx,
                                  PartialIso const &q, Vertex x, Vertex y);

PartialIso amalgamate(AFSigmaContext const &ctx, PartialIso const &q,
                      Vertex x, Vertex y);

// Some b with ⟨a, b⟩ = S_n, smallest rank first. Identity a: b = (1 2) for
// n = 2, the identity for n = 1, none otherwise.
std::optional<IndexPerm> piccard_partner(IndexPerm const &a);

// σ with ⟨f̄, σ⟩ = S_n and every σ-orbit of components meeting Σ.
std::optional<IndexPerm> a_f_sigma_nonempty(AFSigmaContext const &ctx);

// Exponents m_1..m_{2N} (odd ones positive, last possibly 0) taking x out
// of dom(q) along q^{m_1} f^{m_2} ...; empty when x ∉ dom(q).
std::vector<std::int64_t> nonstab_escape(LineShiftOracle &f,
                                         PartialIso const &q, Vertex x);

FreeWord escape_word(std::vector<std::int64_t> const &exponents);

// q with Σ ⊆ dom(q), q̄ = σ and exactly |Σ| chains, each through one point
// of Σ with the Σ point strictly inside the chain.
PartialIso seed_class_iso(AFSigmaContext const &ctx, IndexPerm const &sigma);

struct BuildResult
{
  PartialIso h;
  FreeWord w;
};

BuildResult base_case_build(AFSigmaContext const &ctx, PartialIso const &q,
                            VertexSet const &gamma, VertexSet const &delta);

PartialIso fill_prod(AFSigmaContext const &ctx, PartialIso const &q,
                     SSets const &sets, FreeWord const &w, Vertex x);

BuildResult main_build(AFSigmaContext const &ctx, PartialIso const &q,
                       VertexSet const &gamma, VertexSet const &delta);

// dom(p) ∩ ran(p) = ∅ and p̄ = id.
bool is_p4_class(GraphKind const &kind, PartialIso const &p);

// q ⊆ adjust · p1 · p2 with p1, p2 in the class above.
struct P4Split
{
  PartialIso p1, p2, adjust;
};
P4Split split_into_P4(GraphKind const &kind, PartialIso const &q);

WitnessCertificate density_witness_nkomega(AFSigmaContext const &ctx,
                                           PartialIso const &q,
                                           PartialIso const &p);

WitnessCertificate n2_special_witness(AFSigmaContext const &ctx,
                                      PartialIso const &q,
                                      PartialIso const &p);

} // namespace ultradense

#endif // GUARD_ULTRADENSE_NKOMEGA_ENGINE_H
