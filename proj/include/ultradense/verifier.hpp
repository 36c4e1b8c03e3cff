#ifndef GUARD_ULTRADENSE_VERIFIER_H
#define GUARD_ULTRADENSE_VERIFIER_H

#include <optional>
#include <string>
#include <vector>

#include "automorphism.hpp"
#include "certificate.hpp"
#include "partial_iso.hpp"
#include "word_algebra.hpp"

// Independent of every engine header: only graph_core, partial_iso,
// word_algebra and the certificate schema are visible here.

namespace ultradense {

struct ClauseResult
{
  std::string name;
  bool pass;
  std::string detail;
};

struct Divergence
{
  Vertex vertex;
  Vertex expected;
  std::optional<Vertex> got;
};

struct VerificationReport
{
  bool ok = true;
  std::vector<ClauseResult> clauses;
  std::optional<Divergence> divergence;

  void record(std::string name, bool pass, std::string detail = {});
  std::string to_string() const;
};

VerificationReport verify(WitnessCertificate const &cert);

// The claimed product as a finite map (the identity on the target's domain
// when the product is empty).
PartialIso evaluate_product(std::vector<ProductFactor> const &product,
                            PartialIso const &h, AutomorphismOracle &f,
                            PartialIso const &target);

// Naive per-vertex chase over every id mentioned in p or f. Reference for
// word_algebra::evaluate.
std::vector<VertexPair> brute_force_word_eval(
  FreeWord const &w, std::vector<VertexPair> const &p,
  std::vector<VertexPair> const &f);

} // namespace ultradense

#endif // GUARD_ULTRADENSE_VERIFIER_H
