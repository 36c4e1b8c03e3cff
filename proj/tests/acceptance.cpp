// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "ultradense/campaign.hpp"
#include "ultradense/verifier.hpp"

using namespace ultradense;

namespace {

struct Outcome
{
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
    .count();
}

std::string first_failure(CampaignSummary const &s)
{
  for (auto const &t : s.trials)
    if (!t.pass)
      return " first failure seed " + std::to_string(t.seed) + ": " + t.detail;
  return "";
}

CampaignSummary campaign(std::string family, int n, std::size_t trials,
                         std::uint64_t seed, std::size_t sigma_size = 0)
{
  CampaignSpec spec;
  spec.family = std::move(family);
  spec.sizes = {n};
  spec.trials = trials;
  spec.seed = seed;
  spec.sigma_size = sigma_size;
  return run_campaign(spec);
}

// Exhaustive triangle scan with the adjacency oracle.
bool triangle_free(GraphSession const &s)
{
  auto vs = s.realized_vertices();
  std::vector<Vertex> v(vs.begin(), vs.end());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      if (!s.adjacent(v[i], v[j]))
        continue;
      for (std::size_t k = j + 1; k < v.size(); ++k)
        if (s.adjacent(v[i], v[k]) && s.adjacent(v[j], v[k]))
          return false;
    }
  return true;
}

// Sessions realized by criterion 1 and 2, for criterion 3.
std::vector<GraphSession> touched;
CampaignSummary henson_run, omega_run, nk_run, n2_run;

Outcome henson_conjugator()
{
  auto t0 = std::chrono::steady_clock::now();
  std::size_t ok = 0;
  std::string bad;
  for (std::size_t i = 0; i < 100; ++i) {
    auto seed = trial_seed(1001, i);
    auto inst = random_henson_instance(3, seed);
    try {
      auto c = build_conjugator(inst.session, inst.q, inst.p);
      auto h2m = oracle::power(c.h.map(), static_cast<std::int64_t>(2 * c.m));
      bool good = in_class_I(inst.q) && c.h.extends(inst.q);
      for (auto [x, y] : inst.p.iso.map()) {
        auto it = h2m.find(x);
        good = good && it != h2m.end() && it->second == y;
      }
      if (good)
        ++ok;
      else if (bad.empty())
        bad = " seed " + std::to_string(seed) + " misses p";
    } catch (std::exception const &e) {
      if (bad.empty())
        bad = " seed " + std::to_string(seed) + ": " + e.what();
    }
    touched.push_back(inst.session);
  }
  double secs = seconds_since(t0);
  std::ostringstream d;
  d << "henson conjugator n=3 " << ok << "/100 in " << secs << " s" << bad;
  return {ok == 100 && secs < 10.0, d.str()};
}

Outcome henson_density()
{
  henson_run = campaign("henson", 3, 100, 1002);
  for (auto const &t : henson_run.trials)
    if (!t.certificate.empty())
      touched.push_back(GraphSession::replay(
        WitnessCertificate::parse(t.certificate).session_text()));
  return {henson_run.passed == 100,
          "henson density witness n=3 " + std::to_string(henson_run.passed) +
            "/100 verifier-confirmed" + first_failure(henson_run)};
}

Outcome henson_kn_free()
{
  std::size_t ok = 0, vertices = 0;
  for (auto const &s : touched) {
    vertices += s.size();
    ok += triangle_free(s) ? 1 : 0;
  }
  bool pass = !touched.empty() && ok == touched.size();
  return {pass, "K_3-free on " + std::to_string(ok) + "/" +
                  std::to_string(touched.size()) + " sessions (" +
                  std::to_string(vertices) + " realized vertices, all triples)"};
}

Outcome sigma_partition()
{
  std::size_t cases = 0, agree = 0, bad_partition = 0;
  std::string first;
  for (int n = 1; n <= 3; ++n) {
    std::vector<std::size_t> c(4, 0);
    // Every count vector over components 0..3 with entries ≤ n, total ≤ 6.
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == c.size()) {
        std::size_t total = 0;
        for (auto k : c)
          total += k;
        if (total > 6)
          return;
        std::map<std::int64_t, std::size_t> counts;
        for (std::size_t j = 0; j < c.size(); ++j)
          if (c[j])
            counts[static_cast<std::int64_t>(j)] = c[j];
        auto placement = SigmaPlacement::from_counts(n, counts);
        auto part = sigma_feasible(n, placement);
        bool want = oracle::sigma_model_exists(n, c);
        ++cases;
        if (part.has_value() == want)
          ++agree;
        else if (first.empty())
          first = " first disagreement n=" + std::to_string(n);
        if (part) {
          try {
            check_partition(n, placement, *part);
          } catch (Error const &) {
            ++bad_partition;
          }
        }
        return;
      }
      for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k) {
        c[i] = k;
        rec(i + 1);
      }
      c[i] = 0;
    };
    rec(0);
  }
  bool pass = agree == cases && bad_partition == 0 && cases <= 500;
  return {pass, "sigma_feasible vs small-model search " + std::to_string(agree) +
                  "/" + std::to_string(cases) + " agree, " +
                  std::to_string(bad_partition) + " invalid partitions" + first};
}

Outcome omega_density()
{
  omega_run = campaign("omega-kn", 2, 50, 1005, 2);
  return {omega_run.passed == 50,
          "omega-kn density witness n=2 |Σ|=2 " +
            std::to_string(omega_run.passed) +
            "/50 verifier-confirmed with |Σ| chains" + first_failure(omega_run)};
}

Outcome piccard()
{
  std::size_t checked = 0, discrepancies = 0;
  std::set<std::string> none;
  for (int n = 1; n <= 5; ++n) {
    auto perms = all_perms(n);
    for (auto const &a : perms) {
      if (a.is_identity())
        continue;
      ++checked;
      bool exists = false;
      for (auto const &b : perms)
        exists = exists || oracle::closure_order({a.images(), b.images()}, n) ==
                             oracle::factorial(n);
      auto b = piccard_partner(a);
      bool partner_ok =
        b && oracle::closure_order({a.images(), b->images()}, n) ==
               oracle::factorial(n);
      if (b.has_value() != exists || (b && !partner_ok))
        ++discrepancies;
      if (!b)
        none.insert(a.to_string());
    }
  }
  std::set<std::string> exceptional{"(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)"};
  bool pass = discrepancies == 0 && none == exceptional;
  std::string listed;
  for (auto const &s : none)
    listed += " " + s;
  return {pass, "piccard n<=5 " + std::to_string(checked) +
                  " non-identity elements, " + std::to_string(discrepancies) +
                  " discrepancies, no partner for" + listed};
}

Outcome nk_pipeline()
{
  auto two = campaign("nk-build", 2, 50, 1007);
  auto three = campaign("nk-build", 3, 50, 1007);
  return {two.passed == 50 && three.passed == 50,
          "main_build check_S n=2 " + std::to_string(two.passed) + "/50, n=3 " +
            std::to_string(three.passed) + "/50" + first_failure(two) +
            first_failure(three)};
}

Outcome nk_density()
{
  nk_run = campaign("nkomega", 3, 50, 1008);
  return {nk_run.passed == 50,
          "nkomega density witness n=3 " + std::to_string(nk_run.passed) +
            "/50, engine and verifier products identical" +
            first_failure(nk_run)};
}

Outcome word_oracle()
{
  gen::Gen g(1009);
  std::size_t agree = 0;
  for (int t = 0; t < 10000; ++t) {
    auto p = g.table(12, 8), ft = g.table(12, 10);
    auto w = g.word_with_alpha(6);
    FiniteTruncation f(PartialIso::unchecked(ft));
    auto lib = evaluate(w, PartialIso::unchecked(p), f);
    auto ref = brute_force_word_eval(
      w, {p.begin(), p.end()}, {ft.begin(), ft.end()});
    std::map<Vertex, Vertex> refm(ref.begin(), ref.end());
    if (refm.size() == ref.size() && lib.map() == refm)
      ++agree;
  }
  return {agree == 10000, "evaluate vs brute_force_word_eval " +
                            std::to_string(agree) + "/10000"};
}

Outcome determinism()
{
  n2_run = campaign("n2", 2, 20, 1010);
  std::size_t compared = 0, same = 0;
  auto rerun = [&](CampaignSummary const &first, std::string const &family,
                   int n, std::size_t trials, std::uint64_t seed,
                   std::size_t sigma = 0) {
    auto again = campaign(family, n, trials, seed, sigma);
    for (std::size_t i = 0; i < first.trials.size(); ++i) {
      ++compared;
      if (i < again.trials.size() &&
          first.trials[i].certificate == again.trials[i].certificate &&
          !first.trials[i].certificate.empty())
        ++same;
    }
  };
  rerun(henson_run, "henson", 3, 100, 1002);
  rerun(omega_run, "omega-kn", 2, 50, 1005, 2);
  rerun(nk_run, "nkomega", 3, 50, 1008);
  rerun(n2_run, "n2", 2, 20, 1010);
  return {compared > 0 && same == compared,
          "same-seed reruns " + std::to_string(same) + "/" +
            std::to_string(compared) + " certificates byte-identical"};
}

} // namespace

int main()
{
  std::vector<std::pair<int, std::function<Outcome()>>> criteria{
    {1, henson_conjugator}, {2, henson_density}, {3, henson_kn_free},
    {4, sigma_partition},   {5, omega_density},  {6, piccard},
    {7, nk_pipeline},       {8, nk_density},     {9, word_oracle},
    {10, determinism}};
  int failed = 0;
  for (auto &[id, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (std::exception const &e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %d: %s  %s\n", id, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
