#ifndef GUARD_ULTRADENSE_CAMPAIGN_H
#define GUARD_ULTRADENSE_CAMPAIGN_H

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "automorphism.hpp"
#include "certificate.hpp"
#include "graph_core.hpp"
#include "henson_engine.hpp"
#include "index_perm.hpp"
#include "nkomega_engine.hpp"
#include "omega_kn_engine.hpp"
#include "partial_iso.hpp"

namespace ultradense {

using Rng = std::mt19937_64;

// Seed of trial i in a campaign seeded with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t i);

// Random instances. Each generator consumes only its own Rng, so an
// instance is a function of the seed alone.

struct HensonInstance
{
  GraphSession session;
  PartialIso f_base; // seed table of the lazily grown automorphism
  PartialIso q;      // no complete components
  PClassIso p;       // support disjoint from q
};
HensonInstance random_henson_instance(int n, std::uint64_t seed);

struct OmegaInstance
{
  int n;
  ComponentShiftOracle f;
  VertexSet sigma;
  PartialIso q;
  FClassIso p;
};
// Σ has `sigma_size` points (a multiple of n); infeasible placements are
// redrawn.
OmegaInstance random_omega_instance(int n, std::size_t sigma_size,
                                    std::uint64_t seed);

// A non-stabilizing line-shift policy with index permutation `fbar`
// (random when absent), Σ and σ ∈ A_{f,Σ}; nullopt when A_{f,Σ} is empty
// for every draw. `n2_route` asks for n = 2, f̄ = id and infinitely many
// fixed points; otherwise that case is excluded.
struct NKInstance
{
  LineShiftOracle f;
  VertexSet sigma;
  IndexPerm class_perm;
};
std::optional<NKInstance> random_nk_instance(int n, std::uint64_t seed,
                                             std::optional<IndexPerm> fbar,
                                             bool n2_route);

// p with p̄ = id and dom(p) ∩ ran(p) = ∅, avoiding `avoid`.
PartialIso random_p4(GraphKind const &kind, Rng &rng, VertexSet const &avoid);

// Γ and Δ for a main_build run on q.
std::pair<VertexSet, VertexSet> random_build_sets(GraphKind const &kind,
                                                  Rng &rng,
                                                  PartialIso const &q);

struct TrialResult
{
  std::uint64_t seed;
  bool pass;
  std::string detail;      // failure reason
  std::string certificate; // serialized line, when one was produced
  std::optional<bool> kn_free; // Henson families: every realized set K_n-free
};

struct CampaignSpec
{
  std::string family; // henson | henson-conjugator | omega-kn | nkomega | nk-build | n2
  std::vector<int> sizes;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t sigma_size = 0;     // omega-kn; 0 means n
  std::optional<IndexPerm> fbar;  // nkomega / nk-build

  static CampaignSpec from_json(nlohmann::json const &j);
};

struct CampaignSummary
{
  std::string family;
  std::vector<int> sizes;
  std::size_t attempted = 0;
  std::size_t passed = 0;
  bool class_empty = false;
  std::vector<std::uint64_t> failing_seeds;
  std::vector<TrialResult> trials;
  double seconds = 0;

  bool ok() const { return failing_seeds.empty(); }
  nlohmann::json to_json() const;
  std::string to_string() const;
};

TrialResult run_trial(CampaignSpec const &spec, int n, std::uint64_t seed);

CampaignSummary run_campaign(CampaignSpec const &spec);

} // namespace ultradense

#endif // GUARD_ULTRADENSE_CAMPAIGN_H
