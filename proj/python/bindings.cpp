// Python module over the core operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ultradense/campaign.hpp"
#include "ultradense/nkomega_engine.hpp"
#include "ultradense/omega_kn_engine.hpp"
#include "ultradense/verifier.hpp"
#include "ultradense/word_algebra.hpp"

namespace py = pybind11;
using namespace ultradense;

namespace {

using Pairs = std::vector<VertexPair>;

Pairs to_pairs(PartialIso const &f) { return {f.map().begin(), f.map().end()}; }

GraphSession session_for(std::string const &kind, int n,
                         std::optional<std::string> const &transcript)
{
  if (transcript)
    return GraphSession::replay(*transcript);
  return GraphSession(GraphKind::parse(kind, n));
}

py::dict trial_dict(TrialResult const &t)
{
  py::dict d;
  d["seed"] = t.seed;
  d["pass"] = t.pass;
  d["detail"] = t.detail;
  d["certificate"] = t.certificate;
  d["kn_free"] = t.kn_free;
  return d;
}

} // namespace

PYBIND11_MODULE(_ultradense, m)
{
  m.doc() = "Partial isomorphisms, witness engines and certificate checks.";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<HypothesisError>(m, "HypothesisError", error.ptr());
  py::register_exception<IsoRejection>(m, "IsoRejection", error.ptr());
  py::register_exception<OracleExhausted>(m, "OracleExhausted", error.ptr());

  m.def(
    "validate",
    [](std::string const &kind, int n, Pairs const &pairs,
       std::optional<std::string> const &transcript) {
      auto s = session_for(kind, n, transcript);
      return to_pairs(validate(s, pairs));
    },
    py::arg("kind"), py::arg("n"), py::arg("pairs"),
    py::arg("transcript") = py::none(),
    "Sorted pairs of the partial isomorphism; raises IsoRejection.");

  m.def(
    "compose",
    [](Pairs const &f, Pairs const &g) {
      return to_pairs(compose(PartialIso::unchecked({f.begin(), f.end()}),
                              PartialIso::unchecked({g.begin(), g.end()})));
    },
    "Apply f, then g.");

  m.def("power", [](Pairs const &f, std::int64_t k) {
    return to_pairs(power(PartialIso::unchecked({f.begin(), f.end()}), k));
  });

  m.def(
    "components",
    [](Pairs const &f) {
      py::list out;
      for (auto const &c : components(PartialIso::unchecked({f.begin(), f.end()}))) {
        py::dict d;
        d["vertices"] = c.vertices;
        d["complete"] = c.complete;
        out.append(d);
      }
      return out;
    },
    "Orbit components in the order of their smallest vertex.");

  m.def("reduce_word", [](std::string const &w) {
    return FreeWord::parse(w).to_string();
  });

  m.def(
    "evaluate_word",
    [](std::string const &w, Pairs const &p, Pairs const &f) {
      FiniteTruncation trunc(PartialIso::unchecked({f.begin(), f.end()}));
      return to_pairs(evaluate(FreeWord::parse(w),
                               PartialIso::unchecked({p.begin(), p.end()}), trunc));
    },
    py::arg("word"), py::arg("p"), py::arg("f"),
    "Word in α = p and β = f, with f a finite table.");

  m.def(
    "piccard_partner",
    [](std::string const &cycles, int n) -> std::optional<std::string> {
      auto b = piccard_partner(IndexPerm::parse(cycles, n));
      if (!b)
        return std::nullopt;
      return b->to_string();
    },
    py::arg("cycles"), py::arg("n"));

  m.def(
    "sigma_feasible",
    [](int n, std::map<std::int64_t, std::size_t> const &counts)
      -> std::optional<std::vector<std::vector<std::int64_t>>> {
      auto part = sigma_feasible(n, SigmaPlacement::from_counts(n, counts));
      if (!part)
        return std::nullopt;
      return part->carriers;
    },
    py::arg("n"), py::arg("counts"),
    "Σ-carrying components of each part, or None when no partition exists.");

  m.def(
    "verify",
    [](std::string const &line) {
      auto rep = verify(WitnessCertificate::parse(line));
      py::dict d;
      d["ok"] = rep.ok;
      py::dict clauses;
      for (auto const &c : rep.clauses)
        clauses[py::str(c.name)] = c.pass;
      d["clauses"] = clauses;
      d["report"] = rep.to_string();
      return d;
    },
    "Check one serialized certificate.");

  m.def(
    "run_trial",
    [](std::string const &family, int n, std::uint64_t seed,
       std::size_t sigma_size) {
      CampaignSpec spec;
      spec.family = family;
      spec.sigma_size = sigma_size;
      return trial_dict(run_trial(spec, n, seed));
    },
    py::arg("family"), py::arg("n"), py::arg("seed"), py::arg("sigma_size") = 0);

  m.def(
    "run_campaign",
    [](std::string const &spec_json) {
      auto spec = CampaignSpec::from_json(nlohmann::json::parse(spec_json));
      py::gil_scoped_release release;
      return run_campaign(spec).to_json().dump();
    },
    "JSON campaign spec in, JSON summary out.");
}
