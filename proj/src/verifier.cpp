#include "ultradense/verifier.hpp"

#include <sstream>

namespace ultradense {

void VerificationReport::record(std::string name, bool pass,
                                std::string detail)
{
  ok = ok && pass;
  clauses.push_back({std::move(name), pass, std::move(detail)});
}

std::string VerificationReport::to_string() const
{
  std::ostringstream out;
  out << (ok ? "OK" : "FAIL") << '\n';
  for (auto const &c : clauses) {
    out << "  " << (c.pass ? "pass" : "FAIL") << ' ' << c.name;
    if (!c.detail.empty())
      out << ": " << c.detail;
    out << '\n';
  }
  if (divergence) {
    out << "  first divergence at vertex " << divergence->vertex
        << ": expected " << divergence->expected << ", got ";
    if (divergence->got)
      out << *divergence->got;
    else
      out << "undefined";
    out << '\n';
  }
  return out.str();
}

PartialIso evaluate_product(std::vector<ProductFactor> const &product,
                            PartialIso const &h, AutomorphismOracle &f,
                            PartialIso const &target)
{
  if (product.empty())
    return PartialIso::identity(target.dom());

  // Factors are evaluated one by one: α α⁻¹ is not the identity for a
  // partial map, so no reduction across factor boundaries.
  std::optional<PartialIso> acc;
  for (auto const &fac : product) {
    PartialIso val = evaluate(fac.word, h, f);
    if (fac.invert)
      val = invert(val);
    acc = acc ? compose(*acc, val) : val;
  }
  return *acc;
}

namespace {

bool try_validate(VerificationReport &rep, GraphSession const &s,
                  std::string const &name, PartialIso const &iso)
{
  try {
    validate(s, iso.pairs());
    rep.record(name, true);
    return true;
  } catch (Error const &e) {
    rep.record(name, false, e.what());
    return false;
  }
}

} // namespace

VerificationReport verify(WitnessCertificate const &cert)
{
  VerificationReport rep;

  std::optional<GraphSession> session;
  try {
    if (cert.kind.lazy())
      session = GraphSession::replay(cert.session_text());
    else
      session.emplace(cert.kind, cert.seed);
    rep.record("session_replay", true);
  } catch (Error const &e) {
    rep.record("session_replay", false, e.what());
    return rep;
  }
  GraphSession const &s = *session;

  std::unique_ptr<AutomorphismOracle> f;
  try {
    f = oracle_from_json(cert.f);
    rep.record("f_policy", true);
  } catch (std::exception const &e) {
    rep.record("f_policy", false, e.what());
    return rep;
  }
  if (auto *fin = dynamic_cast<FiniteTruncation *>(f.get()))
    try_validate(rep, s, "f_cache_valid", fin->table());

  bool q_ok = try_validate(rep, s, "q_valid", cert.q);
  bool h_ok = try_validate(rep, s, "h_valid", cert.h);
  try_validate(rep, s, "target_valid", cert.target);
  if (q_ok && h_ok)
    rep.record("h_extends_q", cert.h.extends(cert.q));

  if (cert.construction == "henson") {
    rep.record("h_no_complete", in_class_I(cert.h));
  } else if (cert.construction == "omega-kn") {
    auto prof = orbit_rep_profile(cert.h, cert.sigma);
    std::size_t chains = 0;
    bool complete = false;
    for (auto const &c : prof.comps) {
      chains += !c.complete;
      complete = complete || c.complete;
    }
    rep.record("h_sigma_chains",
               !complete && chains == cert.sigma.size() && prof.at_most_one(),
               std::to_string(chains) + " incomplete components for |Σ| = " +
                 std::to_string(cert.sigma.size()));
  } else if (cert.construction == "nkomega" || cert.construction == "n2") {
    auto prof = orbit_rep_profile(cert.h, cert.sigma);
    bool inside = true;
    for (Vertex v : cert.sigma)
      inside = inside && cert.h.in_dom(v);
    rep.record("h_orbit_reps",
               inside && prof.at_most_one() && prof.complete_exactly_one());
  }

  try {
    PartialIso prod = evaluate_product(cert.product, cert.h, *f, cert.target);
    bool ext = true;
    for (auto [x, y] : cert.target.map()) {
      auto got = prod.image(x);
      if (!got || *got != y) {
        ext = false;
        rep.divergence = Divergence{x, y, got};
        break;
      }
    }
    rep.record("product_extends_target", ext);
  } catch (Error const &e) {
    rep.record("product_extends_target", false, e.what());
  }

  return rep;
}

} // namespace ultradense
