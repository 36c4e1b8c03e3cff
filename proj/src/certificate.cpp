#include "ultradense/certificate.hpp"

#include <sstream>

namespace ultradense {

using nlohmann::json;

json pairs_to_json(PartialIso const &f)
{
  json out = json::array();
  for (auto [x, y] : f.map())
    out.push_back({x, y});
  return out;
}

PartialIso pairs_from_json(json const &j)
{
  std::map<Vertex, Vertex> m;
  std::set<Vertex> ran;
  for (auto const &pr : j) {
    Vertex x = pr.at(0).get<Vertex>(), y = pr.at(1).get<Vertex>();
    if (!m.emplace(x, y).second || !ran.insert(y).second)
      throw Error("pair list is not injective at " + std::to_string(x));
  }
  return PartialIso::unchecked(std::move(m));
}

json WitnessCertificate::to_json() const
{
  json product_j = json::array();
  for (auto const &fac : product)
    product_j.push_back({{"word", fac.word.to_string()},
                         {"invert", fac.invert}});
  return {
    {"schema_version", kSchemaVersion},
    {"construction", construction},
    {"family", kind.name()},
    {"n", kind.n},
    {"session", {{"seed", seed}, {"transcript", transcript}}},
    {"f", f},
    {"sigma", std::vector<Vertex>(sigma.begin(), sigma.end())},
    {"q", pairs_to_json(q)},
    {"p", pairs_to_json(p)},
    {"h", pairs_to_json(h)},
    {"params", params},
    {"words", words},
    {"product", product_j},
    {"target", pairs_to_json(target)},
  };
}

WitnessCertificate WitnessCertificate::from_json(json const &j)
{
  auto version = j.at("schema_version").get<int>();
  if (version != kSchemaVersion)
    throw Error("unsupported schema_version " + std::to_string(version));

  WitnessCertificate c;
  c.construction = j.at("construction").get<std::string>();
  c.kind = GraphKind::parse(j.at("family").get<std::string>(),
                            j.at("n").get<int>());
  c.seed = j.at("session").at("seed").get<std::uint64_t>();
  c.transcript = j.at("session").at("transcript")
                   .get<std::vector<std::string>>();
  c.f = j.at("f");
  auto sig = j.at("sigma").get<std::vector<Vertex>>();
  c.sigma = VertexSet(sig.begin(), sig.end());
  c.q = pairs_from_json(j.at("q"));
  c.p = pairs_from_json(j.at("p"));
  c.h = pairs_from_json(j.at("h"));
  c.params = j.at("params").get<std::map<std::string, std::int64_t>>();
  c.words = j.at("words").get<std::map<std::string, std::string>>();
  for (auto const &fac : j.at("product"))
    c.product.push_back({FreeWord::parse(fac.at("word").get<std::string>()),
                         fac.at("invert").get<bool>()});
  c.target = pairs_from_json(j.at("target"));
  return c;
}

std::string WitnessCertificate::serialize() const { return to_json().dump(); }

WitnessCertificate WitnessCertificate::parse(std::string const &line)
{
  json j;
  try {
    j = json::parse(line);
  } catch (json::parse_error const &e) {
    throw Error(std::string("certificate parse error: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (json::exception const &e) {
    throw Error(std::string("certificate schema error: ") + e.what());
  }
}

std::string WitnessCertificate::session_text() const
{
  std::ostringstream out;
  out << "kind=" << kind.name() << " n=" << kind.n << " seed=" << seed << '\n';
  for (auto const &line : transcript)
    out << line << '\n';
  return out.str();
}

void WitnessCertificate::capture_session(GraphSession const &s)
{
  kind = s.kind();
  seed = s.seed();
  transcript.clear();
  std::istringstream in(s.transcript());
  std::string line;
  std::getline(in, line); // header
  while (std::getline(in, line))
    if (!line.empty())
      transcript.push_back(line);
}

} // namespace ultradense
