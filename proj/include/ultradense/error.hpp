#ifndef GUARD_ULTRADENSE_ERROR_H
#define GUARD_ULTRADENSE_ERROR_H

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ultradense {

using Vertex = std::uint64_t;
using VertexPair = std::pair<Vertex, Vertex>;

// Base of everything the library throws on purpose.
class Error : public std::runtime_error
{
public:
  explicit Error(std::string const &what)
  : std::runtime_error(what)
  {}
};

// A violated precondition or lemma hypothesis. `clause` names the check.
class HypothesisError : public Error
{
public:
  HypothesisError(std::string clause, std::string const &detail)
  : Error(clause + ": " + detail),
    _clause(std::move(clause))
  {}

  std::string const &clause() const { return _clause; }

private:
  std::string _clause;
};

// A set of pairs that is not a partial isomorphism.
class IsoRejection : public Error
{
public:
  enum class Reason { NonInjective, AdjacencyMismatch, IndexMapConflict,
                      UnknownVertex };

  IsoRejection(Reason reason, std::vector<VertexPair> offending,
               std::string const &detail)
  : Error(detail),
    _reason(reason),
    _offending(std::move(offending))
  {}

  Reason reason() const { return _reason; }
  std::vector<VertexPair> const &offending() const { return _offending; }

private:
  Reason _reason;
  std::vector<VertexPair> _offending;
};

// Raised by finite oracles asked about a vertex outside their table.
class OracleExhausted : public Error
{
public:
  explicit OracleExhausted(Vertex v)
  : Error("oracle exhausted at vertex " + std::to_string(v)),
    _vertex(v)
  {}

  Vertex vertex() const { return _vertex; }

private:
  Vertex _vertex;
};

} // namespace ultradense

#endif // GUARD_ULTRADENSE_ERROR_H
