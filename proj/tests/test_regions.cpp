#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rrk/errors.hpp"
#include "rrk/regions.hpp"
#include "rrk/verifier.hpp"

using namespace rrk;

namespace {

ChannelModel identity_channel() {
  std::vector<double> k(16, 0.0);
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2) k[((x1 * 2 + x2) * 2 + x1) * 2 + x2] = 1.0;
  return ChannelModel(2, 2, 2, 2, k);
}

// |Q| = 1, U1 = W1 = X1 a uniform bit, W2 U2 X2 independent uniform bits,
// noiseless outputs.
JointDistribution aligned_hod() {
  const FactorizationSpec spec = encoder_factorization(Form::Hod);
  AlphabetSizes sizes;
  for (Var v : spec.variables()) sizes[v] = v == Var::Q ? 1 : 2;
  std::vector<ConditionalTable> f = sample_factors(spec, sizes, 1);
  f[0].table = {1.0};
  f[1].table = {0.5, 0.5};
  f[2].table = {1, 0, 0, 1};
  f[3].table.assign(8, 0.5);
  f[4].table.assign(16, 0.5);
  f[5].table = {1, 0, 1, 0, 0, 1, 0, 1};  // x1 = u1
  f[6].table.assign(8, 0.5);
  return embed_channel(compose(f, spec), identity_channel());
}

}  // namespace

TEST_CASE("definition tables have the expected shape") {
  CHECK(constant_definitions(Family::Hod).size() == 14);
  CHECK(constant_definitions(Family::Dmt).size() == 14);
  CHECK(constant_definitions(Family::Rtd).size() == 8);
  CHECK(constant_definition(Family::Hod, "A1").row == "10-1");
  CHECK(constant_definition(Family::Hod, "G2").row == "10-14");
  CHECK_THROWS_AS(constant_definition(Family::Hod, "Z9"), ModelError);
  for (Family f : {Family::Hod, Family::Dmt, Family::Rtd, Family::Hod1})
    for (const auto& d : constant_definitions(f)) CHECK(d.roles.size() == d.expr.size());
  CHECK(parse_family("dmt") == Family::Dmt);
  CHECK_THROWS_AS(parse_family("xyz"), UsageError);
}

TEST_CASE("term roles of the general constants") {
  const ConstantDef& d2 = constant_definition(Family::Hod, "D2");
  REQUIRE(d2.roles.size() == 5);
  CHECK(d2.roles[0] == TermRole::Correlation);
  CHECK(d2.roles[1] == TermRole::Interference);
  CHECK(d2.roles[2] == TermRole::Core);
  CHECK(d2.roles[3] == TermRole::Binning);
  CHECK(d2.roles[4] == TermRole::Binning);
  CHECK(to_string(core_expr(d2)) == "+I(Y2;U2W2|QW1)");
}

TEST_CASE("hand-computed constants on an aligned input") {
  const JointDistribution d = aligned_hod();
  const BoundConstants c = hod_constants(d);
  CHECK(c.at("C1") == doctest::Approx(1.0));
  CHECK(c.at("D1") == doctest::Approx(1.0));
  CHECK(c.at("G1") == doctest::Approx(entropy(d, {Var::X1}, {Var::Q})));
  CHECK(c.at("G1") == doctest::Approx(1.0));
  CHECK(std::fabs(c.at("E1")) <= 1e-12);  // W1 fixes Y1
  CHECK(std::fabs(c.at("D2")) <= 1e-12);  // X2 ignores (U2, W2)
  CHECK_THROWS_AS(c.at("Q7"), ModelError);
}

TEST_CASE("constants equal their definitions evaluated term by term") {
  for (std::size_t i = 0; i < 10; ++i) {
    const DrawnSample s = draw_sample(Form::Hod, 21, i);
    const BoundConstants c = hod_constants(s.joint);
    for (const auto& def : constant_definitions(Family::Hod)) {
      double sum = 0.0;
      for (const auto& t : def.expr) sum += eval_term(s.joint, t);
      CHECK(std::fabs(c.at(def.label) - sum) <= 1e-12);
    }
  }
}

TEST_CASE("evaluation rejects a distribution outside the family") {
  // A generic hod9 draw correlates W2 with (U1, W1), which hk3 forbids.
  const DrawnSample s = draw_sample(Form::Hod, 4, 0);
  CHECK_THROWS_AS(dmt_constants(s.joint), ModelError);
  CHECK_NOTHROW(evaluate_unchecked(Family::Dmt, s.joint));
}

TEST_CASE("system builders produce the listed rows") {
  const DrawnSample s = draw_sample(Form::Hod, 8, 3);
  const BoundConstants c = hod_constants(s.joint);
  const InequalitySystem q = build_system(c, SystemKind::Thm3Quadruple);
  CHECK(q.size() == 14);
  CHECK(q.all_rows().size() == 18);
  CHECK(q.row("10-5").bound == doctest::Approx(c.at("E1")));
  const InequalitySystem r = build_system(c, SystemKind::Thm4RatePair);
  CHECK(r.size() == 20);
  CHECK(row_labels(SystemKind::Thm4RatePair).size() == 20);
  CHECK(r.row("11-17").coefficients == std::vector<Rational>{2, 1});
  CHECK(r.row("11-17").bound == doctest::Approx(c.at("G1") + c.at("E2") + c.at("A1")));
  CHECK(build_system(c, SystemKind::TransitionList).size() == 37);
  const DrawnSample cm = draw_sample(Form::ChongMotaniGarg, 8, 3);
  const BoundConstants c1 = hod1_constants(cm.joint);
  CHECK(build_system(c1, SystemKind::Thm6RatePair).size() == 11);
  CHECK(build_system(c1, SystemKind::Thm5Quadruple).size() == 8);
  CHECK_THROWS_AS(build_system(c, SystemKind::DmtQuadruple), IncompatibleError);
  CHECK_THROWS_AS(build_system(c, SystemKind::Thm6RatePair), IncompatibleError);
}

TEST_CASE("rate-pair projection keeps only R1, R2") {
  const DrawnSample s = draw_sample(Form::Hod, 8, 1);
  const InequalitySystem p = project_rate_pair(build_system(hod_constants(s.joint), SystemKind::Thm3Quadruple));
  CHECK(p.variables() == std::vector<std::string>{"R1", "R2"});
  CHECK(remove_redundant(p).size() <= 20);
  const DrawnSample r = draw_sample(Form::Rtd, 8, 1);
  const InequalitySystem pr = project_rate_pair(build_system(rtd_constants(r.joint), SystemKind::RtdQuintuple));
  CHECK(pr.variables() == std::vector<std::string>{"R1", "R2"});
}

TEST_CASE("binning budgets project onto the receiver-2 rows") {
  for (std::size_t i = 0; i < 5; ++i) {
    const DrawnSample s = draw_sample(Form::Hod, 30, i);
    const BoundConstants c = hod_constants(s.joint);
    InequalitySystem b = fm_eliminate(fm_eliminate(binning_budget_system(s.joint), "s2"), "t2");
    b = remove_redundant(b);
    const InequalitySystem q = build_system(c, SystemKind::Thm3Quadruple);
    // Each target row must be implied by the projected budgets.
    for (const auto& label : binning_target_rows()) {
      InequalitySystem one(b.variables());
      const Halfspace& h = q.row(label);
      LinearExpr lhs;
      for (const auto& v : {"S2", "T2", "T1"}) lhs.push_back({v, h.coefficients[q.index_of(v)]});
      CHECK(h.coefficients[q.index_of("S1")] == Rational(0));
      one.add_row(lhs, h.bound, label);
      CHECK(contains(one, b).holds);
    }
  }
  const DrawnSample other = draw_sample(Form::Rtd, 30, 0);
  CHECK_THROWS_AS(binning_budget_system(other.joint), ModelError);
}

TEST_CASE("split-carrier merge feeds the general definitions") {
  const DrawnSample r = draw_sample(Form::Rtd, 5, 2);
  const JointDistribution m = merge_split_carrier(r.joint);
  CHECK(m.has(Var::U1));
  CHECK(m.has(Var::Q));
  CHECK_FALSE(m.has(Var::U1a));
  CHECK(entropy(m, {Var::U1}) == doctest::Approx(entropy(r.joint, {Var::U1a, Var::U1b})));
}
