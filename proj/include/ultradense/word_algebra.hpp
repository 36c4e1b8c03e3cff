#ifndef GUARD_ULTRADENSE_WORD_ALGEBRA_H
#define GUARD_ULTRADENSE_WORD_ALGEBRA_H

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "automorphism.hpp"
#include "partial_iso.hpp"

namespace ultradense {

enum class Letter { Alpha, Beta };

struct Syllable
{
  Letter letter;
  std::int64_t exp;

  bool operator==(Syllable const &o) const = default;
};

// Freely reduced word over α (the partial map) and β (the automorphism).
class FreeWord
{
public:
  FreeWord() = default;

  // Throws on a zero exponent.
  static FreeWord reduce(std::vector<Syllable> const &raw);
  static FreeWord alpha(std::int64_t e = 1);
  static FreeWord beta(std::int64_t e = 1);
  // "a^3 b^-1 a"; "1" is the empty word.
  static FreeWord parse(std::string const &text);

  std::vector<Syllable> const &syllables() const { return _syl; }
  bool empty() const { return _syl.empty(); }

  std::size_t length() const; // letters
  std::size_t b_count() const;
  bool has_alpha() const;
  bool has_alpha_inverse() const;
  bool starts_with(Letter l) const;

  FreeWord operator*(FreeWord const &o) const; // concat then reduce
  FreeWord inverse() const;
  // Replaces α by α⁻¹ throughout.
  FreeWord swap_alpha() const;
  // First `letters` letters.
  FreeWord prefix(std::size_t letters) const;

  std::string to_string() const;

  bool operator==(FreeWord const &o) const { return _syl == o._syl; }

private:
  std::vector<Syllable> _syl;
};

// Value of x under w(p), letter by letter; nullopt when undefined.
std::optional<Vertex> evaluate_at(FreeWord const &w, PartialIso const &p,
                                  AutomorphismOracle &f, Vertex x);

// w(p) as a finite partial map. w must contain α, otherwise w(p) is total.
PartialIso evaluate(FreeWord const &w, PartialIso const &p,
                    AutomorphismOracle &f);

// Letter-granular w_{p,x}.
FreeWord largest_defined_prefix(FreeWord const &w, PartialIso const &p,
                                AutomorphismOracle &f, Vertex x);

// The symbolic value w(a, b) in S_n.
IndexPerm evaluate_perm(FreeWord const &w, IndexPerm const &a,
                        IndexPerm const &b);

struct SFailure
{
  int clause;
  std::vector<Vertex> witness;
  std::string detail;
};

struct SConditionReport
{
  bool holds = true;
  std::set<int> failed_clauses;
  std::vector<SFailure> failures;

  void fail(int clause, std::vector<Vertex> witness, std::string detail);
  std::string to_string() const;
};

struct SSets
{
  VertexSet gamma, theta, phi, delta;
};

// The six clauses of 𝒮(Γ,Θ,Φ,Δ,w) for p on an nK_ω session.
SConditionReport check_S(GraphKind const &kind, PartialIso const &p,
                         SSets const &sets, FreeWord const &w,
                         AutomorphismOracle &f);

} // namespace ultradense

#endif // GUARD_ULTRADENSE_WORD_ALGEBRA_H
