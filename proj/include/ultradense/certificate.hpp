#ifndef GUARD_ULTRADENSE_CERTIFICATE_H
#define GUARD_ULTRADENSE_CERTIFICATE_H

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "graph_core.hpp"
#include "partial_iso.hpp"
#include "word_algebra.hpp"

namespace ultradense {

inline constexpr int kSchemaVersion = 1;

// One factor of the claimed product: w(h), or its inverse.
struct ProductFactor
{
  FreeWord word;
  bool invert = false;
};

struct WitnessCertificate
{
  std::string construction; // henson | omega-kn | nkomega | n2
  GraphKind kind = GraphKind::random();
  std::uint64_t seed = 0;
  std::vector<std::string> transcript; // witness-call lines, no header
  nlohmann::json f = nlohmann::json::object();
  VertexSet sigma;
  PartialIso q, p, h;
  std::map<std::string, std::int64_t> params;
  std::map<std::string, std::string> words;
  std::vector<ProductFactor> product; // empty product is the identity
  PartialIso target;

  nlohmann::json to_json() const;
  static WitnessCertificate from_json(nlohmann::json const &j);

  // One line of JSON, keys sorted.
  std::string serialize() const;
  static WitnessCertificate parse(std::string const &line);

  // Header plus transcript lines, as accepted by GraphSession::replay.
  std::string session_text() const;
  void capture_session(GraphSession const &s);
};

nlohmann::json pairs_to_json(PartialIso const &f);
PartialIso pairs_from_json(nlohmann::json const &j);

} // namespace ultradense

#endif // GUARD_ULTRADENSE_CERTIFICATE_H
