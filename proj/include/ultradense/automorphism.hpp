#ifndef GUARD_ULTRADENSE_AUTOMORPHISM_H
#define GUARD_ULTRADENSE_AUTOMORPHISM_H

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include <json.hpp>

#include "graph_core.hpp"
#include "index_perm.hpp"
#include "partial_iso.hpp"

namespace ultradense {

// An automorphism known through image/preimage queries. Finite truncations
// may be undefined somewhere; policy oracles are total.
class AutomorphismOracle
{
public:
  virtual ~AutomorphismOracle() = default;

  virtual std::optional<Vertex> image(Vertex x) = 0;
  virtual std::optional<Vertex> preimage(Vertex y) = 0;

  // x f^k, nullopt if some step is undefined.
  std::optional<Vertex> apply(Vertex x, std::int64_t k);

  virtual nlohmann::json describe() const = 0;
};

// A fixed finite table. Strict truncations throw OracleExhausted on a miss
// instead of reporting "undefined".
class FiniteTruncation : public AutomorphismOracle
{
public:
  explicit FiniteTruncation(PartialIso table, bool strict = false)
  : _table(std::move(table)),
    _strict(strict)
  {}

  std::optional<Vertex> image(Vertex x) override;
  std::optional<Vertex> preimage(Vertex y) override;
  nlohmann::json describe() const override;

  PartialIso const &table() const { return _table; }

private:
  PartialIso _table;
  bool _strict;
};

// Finitely supported permutation of the integers, as a table.
class FinitePermZ
{
public:
  FinitePermZ() = default;
  explicit FinitePermZ(std::map<std::int64_t, std::int64_t> moved);

  std::int64_t apply(std::int64_t z) const;
  std::int64_t unapply(std::int64_t z) const;
  std::map<std::int64_t, std::int64_t> const &moved() const { return _fwd; }
  bool identity() const { return _fwd.empty(); }

  nlohmann::json to_json() const;
  static FinitePermZ from_json(nlohmann::json const &j);

private:
  std::map<std::int64_t, std::int64_t> _fwd, _inv;
};

// ωKₙ: component c goes to perm(c + shift); positions rotate by
// (rot_a * c + rot_b) mod n.
class ComponentShiftOracle : public AutomorphismOracle
{
public:
  ComponentShiftOracle(int n, std::int64_t shift, FinitePermZ perm,
                       std::int64_t rot_a = 0, std::int64_t rot_b = 0);

  std::optional<Vertex> image(Vertex x) override;
  std::optional<Vertex> preimage(Vertex y) override;
  nlohmann::json describe() const override;

  std::int64_t fbar(std::int64_t c) const;
  std::int64_t fbar_inv(std::int64_t c) const;
  int n() const { return _kind.n; }
  std::int64_t shift() const { return _shift; }

private:
  std::uint64_t rotation(std::int64_t c) const;

  GraphKind _kind;
  std::int64_t _shift;
  FinitePermZ _perm;
  std::int64_t _rot_a, _rot_b;
};

// nK_ω with each line L_c identified with Z through zigzag positions:
// (c, z) goes to (pi(c), window_c(z + shift_c)).
class LineShiftOracle : public AutomorphismOracle
{
public:
  LineShiftOracle(int n, IndexPerm pi, std::vector<std::int64_t> shifts,
                  std::vector<FinitePermZ> windows);

  std::optional<Vertex> image(Vertex x) override;
  std::optional<Vertex> preimage(Vertex y) override;
  nlohmann::json describe() const override;

  int n() const { return _kind.n; }
  IndexPerm const &fbar() const { return _pi; }
  std::int64_t shift(int c) const { return _shifts.at(c - 1); }
  FinitePermZ const &window(int c) const { return _windows.at(c - 1); }

  // Infinite iff some fixed component has zero shift.
  bool fix_infinite() const;
  // A fixed point of f inside component c at zigzag position >= from, if the
  // policy has infinitely many there; nullopt otherwise.
  std::optional<Vertex> far_fixed_point(int c, std::uint64_t from) const;
  bool in_support(Vertex v);

private:
  GraphKind _kind;
  IndexPerm _pi;
  std::vector<std::int64_t> _shifts;
  std::vector<FinitePermZ> _windows;
};

struct StabilizingVerdict
{
  bool stabilizing;
  VertexSet lambda;      // witness when stabilizing
  std::string reason;    // certificate text when not
  std::size_t per_component = 0;
};

// Searches a finite nonempty f-invariant set meeting every line equally,
// with at most `bound` points per line. Exact for LineShiftOracle policies.
StabilizingVerdict classify_stabilizing(LineShiftOracle const &f,
                                        std::size_t bound);

// Rebuilds an oracle from describe(). Henson caches come back as strict
// finite truncations.
std::unique_ptr<AutomorphismOracle> oracle_from_json(nlohmann::json const &j);

} // namespace ultradense

#endif // GUARD_ULTRADENSE_AUTOMORPHISM_H
