#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rrk/errors.hpp"
#include "rrk/verifier.hpp"

using namespace rrk;

namespace {

CheckOptions small(std::size_t n, std::uint64_t seed = 1) {
  CheckOptions o;
  o.samples = n;
  o.seed = seed;
  o.threads = 2;
  return o;
}

}  // namespace

TEST_CASE("sample draws are reproducible and binary apart from Q") {
  const DrawnSample a = draw_sample(Form::Hod, 77, 5);
  const DrawnSample b = draw_sample(Form::Hod, 77, 5);
  CHECK(a.seed == b.seed);
  CHECK(a.joint.table() == b.joint.table());
  CHECK(draw_sample(Form::Hod, 77, 6).joint.table() != a.joint.table());
  for (const auto& v : a.joint.variables()) {
    if (v.var == Var::Q)
      CHECK((v.size == 1 || v.size == 2));
    else
      CHECK(v.size == 2);
  }
  const DrawnSample w = draw_sample(Form::Hod, 77, 5, {{Var::X1, 3}});
  CHECK(w.joint.variables()[w.joint.position(Var::X1)].size == 3);
  CHECK(validate_factorization(a.joint, with_channel(factorization(Form::Hod))).valid);
}

TEST_CASE("parallel_for visits every index once and propagates errors") {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 7) throw ModelError("boom");
                  }),
                  ModelError);
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("reports are deterministic across runs and thread counts") {
  CheckOptions o = small(12, 9);
  const std::string first = check_corollary1(o).to_json().dump();
  o.threads = 1;
  CHECK(check_corollary1(o).to_json().dump() == first);
  CHECK(run_check("corollary1", small(12, 9)).to_json().dump() == first);
  const nlohmann::json j = nlohmann::json::parse(first);
  CHECK(j["check"] == "corollary1");
  CHECK(j["pass"] == true);
  CHECK(j["verdicts"].size() == 12);
}

TEST_CASE("collapse on the baseline forms") {
  for (std::size_t i = 0; i < 10; ++i) {
    const DrawnSample hk = draw_sample(Form::HanKobayashi, 2, i);
    CHECK(collapse(hk.joint, Family::Hod, 1e-9).holds);
    const DrawnSample cm = draw_sample(Form::ChongMotaniGarg, 2, i);
    CHECK(collapse(cm.joint, Family::Hod1, 1e-9).holds);
  }
}

TEST_CASE("a correlated input breaks the collapse and names the term") {
  const DrawnSample s = draw_sample(Form::Hod, 2, 0);
  const CollapseResult r = collapse(s.joint, Family::Hod, 1e-9);
  CHECK_FALSE(r.holds);
  REQUIRE_FALSE(r.violations.empty());
  CHECK(r.max_addon > 1e-9);
  const CollapseTerm& t = r.violations.front();
  CHECK_FALSE(t.constant.empty());
  CHECK(t.term.find("I(") != std::string::npos);
  CHECK(t.role != "core");
}

TEST_CASE("fault injection turns a passing check into a failing one") {
  CheckOptions o = small(10);
  const RegionReport clean = check_corollary2_and_4(o);
  CHECK(clean.pass);
  o.perturb["D1"] = 1e-3;
  const RegionReport bad = check_corollary2_and_4(o);
  CHECK_FALSE(bad.pass);
  CHECK(bad.failures > 0);
  CHECK(bad.max_deviation > o.tol_identity);
  CHECK(bad.human_summary().find("FAIL") != std::string::npos);
}

TEST_CASE("perturbation offsets only the listed constants") {
  const DrawnSample s = draw_sample(Form::Hod, 3, 1);
  BoundConstants c = hod_constants(s.joint);
  const double a = c.at("A1");
  const double b = c.at("B1");
  apply_perturbation(c, {{"A1", 0.25}});
  CHECK(c.at("A1") == doctest::Approx(a + 0.25));
  CHECK(c.at("B1") == b);
  // Labels of other families are skipped, so one map can serve both sides.
  apply_perturbation(c, {{"d2", 1.0}});
  CHECK(c.at("A1") == doctest::Approx(a + 0.25));
}

TEST_CASE("binning derivation holds on a small campaign") {
  const RegionReport r = check_binning_derivation(small(8));
  CHECK(r.pass);
  CHECK(r.failures == 0);
}

TEST_CASE("duality on the superposition group is exact") {
  const RegionReport r = check_eq14_duality(small(6));
  CHECK(r.pass);
  for (const auto& v : r.verdicts)
    if (v.group == "superposition") CHECK(v.deviation <= 1e-12);
}

TEST_CASE("split-carrier relations other than the first private bound hold") {
  for (std::size_t i = 0; i < 10; ++i) {
    const DrawnSample s = draw_sample(Form::Rtd, 4, i);
    for (const auto& row : rtd_relations(rtd_constants(s.joint), s.joint))
      if (row.name != "S1") CHECK(row.deviation <= 1e-12);
  }
}

TEST_CASE("rederived cognitive identities hold") {
  for (std::size_t i = 0; i < 10; ++i) {
    const DrawnSample s = draw_sample(Form::Dmt, 4, i);
    const BoundConstants dmt = dmt_constants(s.joint);
    const BoundConstants hod = hod_constants(s.joint);
    for (const auto& row : dmt_identities_rederived(dmt, hod, s.joint)) CHECK(row.deviation <= 1e-12);
  }
}

TEST_CASE("unknown check names are usage errors") {
  CHECK_THROWS_AS(run_check("thm99", small(1)), UsageError);
  CHECK(check_names().size() == 9);
}
