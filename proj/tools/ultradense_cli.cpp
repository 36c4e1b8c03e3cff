// ultradense: command-line surface over the engines, verifier and campaigns.
// Exit codes: 0 ok, 1 verification failure, 2 usage or hypothesis error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ultradense/campaign.hpp"
#include "ultradense/verifier.hpp"

using namespace ultradense;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kFailed = 1, kUsage = 2;

std::string read_file(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(std::string const &path) { return json::parse(read_file(path)); }

// Writes to `out` when given, stdout otherwise.
void emit(std::string const &out, std::string const &text)
{
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f)
    throw Error("cannot write " + out);
  f << text;
}

struct IsoFile
{
  GraphKind kind = GraphKind::random();
  PartialIso iso;
  std::optional<GraphSession> session;
};

// {"kind": ..., "n": ..., "pairs": [[x, y], ...], "session": transcript?}
IsoFile read_iso(std::string const &path)
{
  auto j = read_json(path);
  IsoFile f;
  f.kind = GraphKind::parse(j.at("kind").get<std::string>(), j.value("n", 0));
  f.iso = pairs_from_json(j.at("pairs"));
  if (j.contains("session"))
    f.session = GraphSession::replay(j.at("session").get<std::string>());
  return f;
}

std::string pairs_line(PartialIso const &p)
{
  return pairs_to_json(p).dump() + "\n";
}

std::unique_ptr<AutomorphismOracle> load_oracle(json const &j,
                                                std::optional<GraphSession> &s,
                                                std::optional<HensonOracle> &h)
{
  if (j.value("policy", "") == "henson" && j.contains("session")) {
    s = GraphSession::replay(j.at("session").get<std::string>());
    h.emplace(*s, pairs_from_json(j.at("base")));
    return nullptr;
  }
  return oracle_from_json(j);
}

std::optional<std::map<std::int64_t, std::size_t>>
parse_placement(std::string const &text)
{
  std::map<std::int64_t, std::size_t> counts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos)
      return std::nullopt;
    auto k = std::stoul(item.substr(colon + 1));
    if (k)
      counts[std::stoll(item.substr(0, colon))] += k;
  }
  return counts;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"ultradense: dense-pair witnesses for ultrahomogeneous graphs"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::vector<int> sizes;
  std::size_t trials = 10;
  std::string out;
  auto common = [&](CLI::App *sub) {
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("--n", sizes, "Graph parameter n (repeatable for campaigns)");
    sub->add_option("--out", out, "Output file");
  };
  auto first_n = [&](int fallback) {
    return sizes.empty() ? fallback : sizes.front();
  };

  // oracle new | query
  auto *oracle = app.add_subcommand("oracle", "Automorphism policies");
  oracle->require_subcommand(1);
  auto *oracle_new = oracle->add_subcommand("new", "Draw a random policy");
  std::string family = "nkomega";
  oracle_new->add_option("--family", family, "henson | omega-kn | nkomega")
    ->check(CLI::IsMember({"henson", "omega-kn", "nkomega"}));
  common(oracle_new);
  auto *oracle_query = oracle->add_subcommand("query", "Apply a policy");
  std::string oracle_file;
  Vertex vertex = 0;
  std::int64_t power_k = 1;
  oracle_query->add_option("file", oracle_file)->required();
  oracle_query->add_option("--vertex", vertex)->required();
  oracle_query->add_option("--power", power_k, "Exponent k in x f^k");

  // iso validate | compose | components
  auto *iso = app.add_subcommand("iso", "Partial isomorphisms");
  iso->require_subcommand(1);
  std::string iso_a, iso_b;
  auto *iso_validate = iso->add_subcommand("validate", "Check a pair list");
  iso_validate->add_option("file", iso_a)->required();
  auto *iso_compose = iso->add_subcommand("compose", "x(a∘b) = (xa)b");
  iso_compose->add_option("a", iso_a)->required();
  iso_compose->add_option("b", iso_b)->required();
  auto *iso_components = iso->add_subcommand("components", "Chains and cycles");
  iso_components->add_option("file", iso_a)->required();

  // witness henson | omega-kn | nkomega | n2
  auto *witness = app.add_subcommand("witness", "Random instance, one certificate");
  std::string witness_family;
  std::size_t sigma_size = 0;
  witness->add_option("family", witness_family)
    ->required()
    ->check(CLI::IsMember({"henson", "omega-kn", "nkomega", "n2"}));
  witness->add_option("--sigma", sigma_size, "|Σ| for omega-kn (default n)");
  common(witness);

  auto *piccard = app.add_subcommand("piccard", "Generating partners in S_n");
  common(piccard);

  auto *feasible = app.add_subcommand("sigma-feasible",
                                      "Orbit-representative partition for ωKₙ");
  std::string placement_text;
  feasible->add_option("--placement", placement_text,
                       "component:count list, e.g. 0:1,3:1")
    ->required();
  common(feasible);

  auto *classify = app.add_subcommand("classify-stab",
                                      "Stabilizing test for a line-shift policy");
  std::size_t bound = 4;
  classify->add_option("file", oracle_file)->required();
  classify->add_option("--bound", bound, "Points per line to search");

  auto *verify_cmd = app.add_subcommand("verify", "Check certificate lines");
  std::string cert_file;
  verify_cmd->add_option("file", cert_file)->required();

  auto *campaign = app.add_subcommand("campaign", "Randomized runs");
  std::string spec_text;
  std::string fbar_text;
  campaign->add_option("spec", spec_text, "JSON spec file or family name")
    ->required();
  campaign->add_option("--trials", trials);
  campaign->add_option("--sigma", sigma_size);
  campaign->add_option("--fbar", fbar_text, "Index permutation, cycle form");
  common(campaign);

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const &e) {
    return app.exit(e);
  } catch (CLI::ParseError const &e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*oracle_new) {
      int n = first_n(3);
      json j;
      if (family == "henson") {
        auto inst = random_henson_instance(n, seed);
        HensonOracle f(inst.session, inst.f_base);
        j = f.describe();
        j["session"] = inst.session.transcript();
      } else if (family == "omega-kn") {
        j = random_omega_instance(n, static_cast<std::size_t>(n), seed)
              .f.describe();
      } else {
        auto inst = random_nk_instance(n, seed, std::nullopt, false);
        if (!inst)
          throw HypothesisError("oracle new", "no policy drawn");
        j = inst->f.describe();
      }
      emit(out, j.dump() + "\n");
      return kOk;
    }

    if (*oracle_query) {
      std::optional<GraphSession> s;
      std::optional<HensonOracle> h;
      auto owned = load_oracle(read_json(oracle_file), s, h);
      AutomorphismOracle &f = owned ? *owned : *h;
      auto y = f.apply(vertex, power_k);
      std::cout << (y ? std::to_string(*y) : std::string("undefined")) << "\n";
      return kOk;
    }

    if (*iso_validate) {
      auto f = read_iso(iso_a);
      try {
        if (f.kind.lazy()) {
          if (!f.session)
            throw HypothesisError("iso validate",
                                  "lazy families need a session transcript");
          validate(*f.session, f.iso.pairs());
        } else {
          index_map(f.kind, f.iso);
        }
      } catch (IsoRejection const &e) {
        std::cout << "rejected: " << e.what() << "\n";
        return kFailed;
      }
      std::cout << "ok " << f.iso.size() << " pairs\n";
      return kOk;
    }

    if (*iso_compose) {
      auto a = read_iso(iso_a), b = read_iso(iso_b);
      emit(out, pairs_line(compose(a.iso, b.iso)));
      return kOk;
    }

    if (*iso_components) {
      auto f = read_iso(iso_a);
      std::ostringstream o;
      for (auto const &c : components(f.iso)) {
        o << (c.complete ? "cycle" : "chain");
        for (Vertex v : c.vertices)
          o << " " << v;
        o << "\n";
      }
      emit(out, o.str());
      return kOk;
    }

    if (*witness) {
      CampaignSpec spec;
      spec.family = witness_family;
      spec.sigma_size = sigma_size;
      int n = witness_family == "n2" ? 2 : first_n(3);
      auto r = run_trial(spec, n, seed);
      if (!r.certificate.empty())
        emit(out, r.certificate + "\n");
      if (!r.pass) {
        std::cerr << "seed " << seed << ": " << r.detail << "\n";
        return kFailed;
      }
      return kOk;
    }

    if (*piccard) {
      std::ostringstream o;
      for (auto const &a : all_perms(first_n(4))) {
        if (a.is_identity())
          continue;
        auto b = piccard_partner(a);
        o << a.to_string() << " " << (b ? b->to_string() : "none") << "\n";
      }
      emit(out, o.str());
      return kOk;
    }

    if (*feasible) {
      int n = first_n(2);
      auto counts = parse_placement(placement_text);
      if (!counts)
        throw HypothesisError("sigma-feasible", "placement must be c:k,...");
      auto placement = SigmaPlacement::from_counts(n, *counts);
      auto part = sigma_feasible(n, placement);
      if (!part) {
        std::cout << "infeasible\n";
        return kOk;
      }
      json j;
      j["parts"] = part->r;
      j["carriers"] = part->carriers;
      emit(out, j.dump() + "\n");
      return kOk;
    }

    if (*classify) {
      auto owned = oracle_from_json(read_json(oracle_file));
      auto *line = dynamic_cast<LineShiftOracle *>(owned.get());
      if (!line)
        throw HypothesisError("classify-stab", "needs a line-shift policy");
      auto v = classify_stabilizing(*line, bound);
      if (v.stabilizing) {
        std::cout << "stabilizing:";
        for (Vertex x : v.lambda)
          std::cout << " " << x;
        std::cout << "\n";
      } else {
        std::cout << "non-stabilizing: " << v.reason << "\n";
      }
      return kOk;
    }

    if (*verify_cmd) {
      std::istringstream in(read_file(cert_file));
      std::string line;
      std::size_t count = 0, bad = 0;
      while (std::getline(in, line)) {
        if (line.empty())
          continue;
        ++count;
        auto rep = verify(WitnessCertificate::parse(line));
        if (!rep.ok) {
          ++bad;
          std::cout << "certificate " << count << ":\n" << rep.to_string();
        }
      }
      std::cout << (count - bad) << "/" << count << " certificates verified\n";
      return bad ? kFailed : kOk;
    }

    if (*campaign) {
      CampaignSpec spec;
      if (std::filesystem::exists(spec_text)) {
        spec = CampaignSpec::from_json(read_json(spec_text));
      } else {
        spec.family = spec_text;
        spec.sizes = sizes.empty() ? std::vector<int>{3} : sizes;
        spec.trials = trials;
        spec.seed = seed;
        spec.sigma_size = sigma_size;
        if (!fbar_text.empty()) {
          if (spec.sizes.size() != 1)
            throw HypothesisError("campaign", "--fbar needs exactly one --n");
          spec.fbar = IndexPerm::parse(fbar_text, spec.sizes[0]);
        }
      }
      auto sum = run_campaign(spec);
      std::cout << sum.to_string();
      if (!out.empty()) {
        std::ostringstream o;
        for (auto const &t : sum.trials)
          if (!t.certificate.empty())
            o << t.certificate << "\n";
        emit(out, o.str());
      }
      return sum.ok() ? kOk : kFailed;
    }
  } catch (HypothesisError const &e) {
    std::cerr << "hypothesis: " << e.what() << "\n";
    return kUsage;
  } catch (std::exception const &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
