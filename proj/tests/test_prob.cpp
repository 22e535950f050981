#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "rrk/errors.hpp"
#include "rrk/info.hpp"
#include "rrk/prob.hpp"
#include "rrk/rng.hpp"

using namespace rrk;

namespace {

AlphabetSizes binary(const FactorizationSpec& spec) {
  AlphabetSizes s;
  for (Var v : spec.variables()) s[v] = 2;
  return s;
}

// Uniform conditional table for factor f under sizes.
ConditionalTable uniform_factor(const Factor& f, const AlphabetSizes& sizes) {
  ConditionalTable t;
  for (Var v : f.targets) t.targets.push_back({v, sizes.at(v)});
  for (Var v : f.given) t.given.push_back({v, sizes.at(v)});
  t.table.assign(t.slices() * t.slice_size(), 1.0 / static_cast<double>(t.slice_size()));
  return t;
}

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

std::size_t index_of(const JointDistribution& d, std::initializer_list<std::pair<Var, int>> cell) {
  std::size_t idx = 0;
  for (const auto& [v, x] : cell) idx += d.stride(d.position(v)) * static_cast<std::size_t>(x);
  return idx;
}

}  // namespace

TEST_CASE("variable names parse and print") {
  CHECK(var_name(Var::U1b) == "U1b");
  CHECK(parse_var("W2") == Var::W2);
  CHECK_THROWS_AS(parse_var("V7"), Error);
  CHECK(format_vars({Var::U1, Var::W1}) == "U1W1");
}

TEST_CASE("joint distribution validates its table") {
  CHECK_THROWS_AS(JointDistribution({{Var::X1, 2}}, {0.5, 0.6}), ModelError);
  CHECK_THROWS_AS(JointDistribution({{Var::X1, 2}}, {1.5, -0.5}), ModelError);
  CHECK_THROWS_AS(JointDistribution({{Var::X1, 2}}, {1.0}), ModelError);
  CHECK_THROWS_AS(JointDistribution({{Var::X1, 2}, {Var::X1, 2}}, {0.25, 0.25, 0.25, 0.25}), ModelError);
  CHECK_THROWS_AS(JointDistribution({{Var::X1, 0}}, {}), ModelError);
  const JointDistribution d({{Var::X1, 2}, {Var::X2, 3}}, {0.1, 0.1, 0.1, 0.2, 0.2, 0.3});
  const int cell[] = {1, 2};
  CHECK(d.at(cell) == doctest::Approx(0.3));
  CHECK(d.alphabet(Var::X2) == 3);
}

TEST_CASE("every form chain-composes") {
  for (Form f : {Form::IcGeneral, Form::CrcGeneral, Form::HanKobayashi, Form::ChongMotaniGarg, Form::Dmt, Form::Rtd,
                 Form::Hod, Form::HodSuperposition}) {
    CAPTURE(form_id(f));
    CHECK_NOTHROW(check_spec(factorization(f)));
    CHECK_NOTHROW(check_spec(with_channel(encoder_factorization(f))));
    CHECK(parse_form(form_id(f)) == f);
  }
  FactorizationSpec broken = factorization(Form::Hod);
  broken.factors.pop_back();
  broken.factors.push_back({{Var::X2}, {Var::Y1}});
  CHECK_THROWS_AS(check_spec(broken), ModelError);
}

TEST_CASE("compose of uniform factors is uniform over 2^9 cells") {
  const FactorizationSpec spec = with_channel(encoder_factorization(Form::Hod));
  const AlphabetSizes sizes = binary(spec);
  std::vector<ConditionalTable> f;
  for (const auto& fac : spec.factors) f.push_back(uniform_factor(fac, sizes));
  const JointDistribution d = compose(f, spec);
  REQUIRE(d.cells() == 512);
  for (double p : d.table()) CHECK(p == doctest::Approx(1.0 / 512).epsilon(1e-12));
  CHECK(validate_factorization(d, spec).valid);
}

TEST_CASE("compose with a point-mass time-sharing factor") {
  const FactorizationSpec spec = encoder_factorization(Form::Hod);
  AlphabetSizes sizes = binary(spec);
  std::vector<ConditionalTable> f = sample_factors(spec, sizes, 99);
  f[0].table = {1.0, 0.0};
  const JointDistribution q = marginalize(compose(f, spec), {Var::Q});
  CHECK(q.table()[0] == doctest::Approx(1.0));
  CHECK(q.table()[1] == 0.0);
}

TEST_CASE("identity couplings along the chain give p(u1 = w1 = q) = p(q)") {
  const FactorizationSpec spec = encoder_factorization(Form::Hod);
  const AlphabetSizes sizes = binary(spec);
  std::vector<ConditionalTable> f = sample_factors(spec, sizes, 5);
  f[0].table = {0.3, 0.7};
  f[1].table = {1, 0, 0, 1};              // p(w1|q) = [w1 == q]
  f[2].table = {1, 0, 0, 1, 1, 0, 0, 1};  // p(u1|q w1) = [u1 == w1]
  const JointDistribution m = marginalize(compose(f, spec), {Var::Q, Var::W1, Var::U1});
  CHECK(m.table()[index_of(m, {{Var::Q, 0}, {Var::W1, 0}, {Var::U1, 0}})] == doctest::Approx(0.3));
  CHECK(m.table()[index_of(m, {{Var::Q, 1}, {Var::W1, 1}, {Var::U1, 1}})] == doctest::Approx(0.7));
  double off = 0.0;
  for (std::size_t i = 0; i < m.cells(); ++i) off += m.table()[i];
  CHECK(off == doctest::Approx(1.0));
}

TEST_CASE("compose rejects malformed factors") {
  const FactorizationSpec spec = encoder_factorization(Form::HanKobayashi);
  const AlphabetSizes sizes = binary(spec);
  std::vector<ConditionalTable> f = sample_factors(spec, sizes, 1);
  SUBCASE("slice not summing to one") {
    f[1].table[0] += 0.25;
    CHECK_THROWS_AS(compose(f, spec), ModelError);
  }
  SUBCASE("dimension mismatch") {
    f[1].table.push_back(0.0);
    CHECK_THROWS_AS(compose(f, spec), ModelError);
  }
  SUBCASE("missing factor") {
    f.pop_back();
    CHECK_THROWS_AS(compose(f, spec), ModelError);
  }
}

TEST_CASE("marginalize") {
  const JointDistribution bits({{Var::X1, 2}, {Var::X2, 2}, {Var::Y1, 2}}, std::vector<double>(8, 0.125));
  const JointDistribution one = marginalize(bits, {Var::X1});
  CHECK(one.table() == std::vector<double>{0.5, 0.5});
  const JointDistribution all = marginalize(bits, {Var::X1, Var::X2, Var::Y1});
  CHECK(all.table() == bits.table());
  CHECK_THROWS_AS(marginalize(bits, {Var::Q}), ModelError);

  SUBCASE("sum over w1 done by hand") {
    const FactorizationSpec spec = encoder_factorization(Form::Hod);
    const auto f = sample_factors(spec, binary(spec), 17);
    const JointDistribution m = marginalize(compose(f, spec), {Var::Q, Var::U1});
    for (int q = 0; q < 2; ++q)
      for (int u = 0; u < 2; ++u) {
        double direct = 0.0;
        for (int w = 0; w < 2; ++w) direct += f[0].table[q] * f[1].table[2 * q + w] * f[2].table[4 * q + 2 * w + u];
        CHECK(m.table()[index_of(m, {{Var::Q, q}, {Var::U1, u}})] == doctest::Approx(direct).epsilon(1e-12));
      }
  }

  SUBCASE("marginalizing in two steps equals one step") {
    const JointDistribution d = sample_distribution(with_channel(encoder_factorization(Form::Dmt)),
                                                    binary(with_channel(encoder_factorization(Form::Dmt))), 3);
    const JointDistribution a = marginalize(marginalize(d, {Var::Q, Var::U1, Var::W2, Var::Y1}), {Var::U1, Var::Y1});
    const JointDistribution b = marginalize(d, {Var::U1, Var::Y1});
    for (std::size_t i = 0; i < a.cells(); ++i) CHECK(std::fabs(a.table()[i] - b.table()[i]) <= 1e-12);
  }
}

TEST_CASE("condition") {
  const JointDistribution indep({{Var::X1, 2}, {Var::X2, 2}}, {0.3 * 0.6, 0.3 * 0.4, 0.7 * 0.6, 0.7 * 0.4});
  const JointDistribution c = condition(indep, {{Var::X1, 0}});
  REQUIRE(c.variables().size() == 1);
  CHECK(c.table()[0] == doctest::Approx(0.6));
  CHECK(c.table()[1] == doctest::Approx(0.4));

  const JointDistribution corr({{Var::X1, 2}, {Var::X2, 2}}, {0.5, 0.0, 0.0, 0.5});
  const JointDistribution pm = condition(corr, {{Var::X1, 1}});
  CHECK(pm.table() == std::vector<double>{0.0, 1.0});

  const JointDistribution zero({{Var::X1, 2}, {Var::X2, 2}}, {0.5, 0.5, 0.0, 0.0});
  CHECK_THROWS_AS(condition(zero, {{Var::X1, 1}}), ModelError);
  CHECK_THROWS_AS(condition(zero, {{Var::X1, 2}}), ModelError);
}

TEST_CASE("validate_factorization separates forms") {
  const FactorizationSpec hk = encoder_factorization(Form::HanKobayashi);
  const FactorizationSpec hod = encoder_factorization(Form::Hod);
  SUBCASE("independent uniforms satisfy the independent-auxiliary form") {
    const JointDistribution d = compose(
        [&] {
          std::vector<ConditionalTable> f;
          for (const auto& fac : hk.factors) f.push_back(uniform_factor(fac, binary(hk)));
          return f;
        }(),
        hk);
    CHECK(validate_factorization(d, hk).valid);
    CHECK(validate_factorization(d, hod).valid);
  }
  SUBCASE("U1 depending on W1 breaks only the independent form") {
    auto f = sample_factors(hod, binary(hod), 8);
    f[2].table = {0.9, 0.1, 0.2, 0.8, 0.9, 0.1, 0.2, 0.8};  // p(u1 | q w1)
    const JointDistribution d = compose(f, hod);
    REQUIRE(cmi(d, {Var::U1}, {Var::W1}, {Var::Q}) > 1e-3);
    const FactorizationCheck c = validate_factorization(d, hk);
    CHECK_FALSE(c.valid);
    CHECK(c.max_violation > 1e-3);
    CHECK_FALSE(c.worst_factor.empty());
    CHECK(validate_factorization(d, hod).valid);
  }
}

TEST_CASE("sampling is deterministic and respects the form") {
  const FactorizationSpec hod = with_channel(encoder_factorization(Form::Hod));
  const FactorizationSpec hk = with_channel(encoder_factorization(Form::HanKobayashi));
  CHECK(sample_distribution(hod, binary(hod), 123).table() == sample_distribution(hod, binary(hod), 123).table());
  CHECK(sample_distribution(hod, binary(hod), 123).table() != sample_distribution(hod, binary(hod), 124).table());
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const JointDistribution d = sample_distribution(hod, binary(hod), derive_seed(77, s));
    const FactorizationCheck c = validate_factorization(d, hod, 1e-9);
    REQUIRE(c.valid);
    const JointDistribution e = sample_distribution(hk, binary(hk), derive_seed(78, s));
    worst = std::max(worst, cmi(e, {Var::U1}, {Var::W1}, {Var::Q}));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("conditional slices lie on the simplex") {
  CounterRng rng(4);
  const ConditionalTable t = sample_conditional({{Var::X1}, {Var::Q, Var::W1}}, {{Var::X1, 3}, {Var::Q, 2}, {Var::W1, 2}}, rng);
  REQUIRE(t.slices() == 4);
  REQUIRE(t.slice_size() == 3);
  for (std::size_t s = 0; s < 4; ++s) {
    const double sum = std::accumulate(t.table.begin() + 3 * s, t.table.begin() + 3 * s + 3, 0.0);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (double p : t.table) CHECK(p >= 0.0);
}

TEST_CASE("embed_channel") {
  const JointDistribution inputs({{Var::X1, 2}, {Var::X2, 2}}, {0.1, 0.2, 0.3, 0.4});
  SUBCASE("identity channel") {
    const JointDistribution d = embed_channel(inputs, ChannelModel(2, 2, 2, 2, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1}));
    CHECK(cmi(d, {Var::Y1}, {Var::X1}) == doctest::Approx(entropy(d, {Var::X1})).epsilon(1e-12));
  }
  SUBCASE("constant channel") {
    const JointDistribution d = embed_channel(inputs, ChannelModel(2, 2, 2, 2, std::vector<double>(16, 0.25)));
    CHECK(std::fabs(cmi(d, {Var::Y1}, {Var::X1, Var::X2})) <= 1e-12);
  }
  SUBCASE("crossover 0.1 on Y1 with Y2 = X2") {
    std::vector<double> k;
    for (int x1 = 0; x1 < 2; ++x1)
      for (int x2 = 0; x2 < 2; ++x2)
        for (int y1 = 0; y1 < 2; ++y1)
          for (int y2 = 0; y2 < 2; ++y2) k.push_back((y1 == x1 ? 0.9 : 0.1) * (y2 == x2 ? 1.0 : 0.0));
    const JointDistribution d = embed_channel(inputs, ChannelModel(2, 2, 2, 2, k));
    CHECK(entropy(d, {Var::Y1}, {Var::X1}) == doctest::Approx(h2(0.1)).epsilon(1e-12));
    CHECK(entropy(d, {Var::Y1}, {Var::X1}) == doctest::Approx(0.468996).epsilon(1e-6));
    const JointDistribution back = marginalize(d, {Var::X1, Var::X2});
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::fabs(back.table()[i] - inputs.table()[i]) <= 1e-12);
  }
  SUBCASE("alphabet mismatch") {
    CHECK_THROWS_AS(embed_channel(inputs, ChannelModel(3, 2, 2, 2, std::vector<double>(24, 0.25))), ModelError);
  }
  CHECK_THROWS_AS(ChannelModel(2, 2, 2, 2, std::vector<double>(16, 0.3)), ModelError);
}

TEST_CASE("relabeling an alphabet permutes the table and keeps every measure") {
  const FactorizationSpec spec = with_channel(encoder_factorization(Form::Hod));
  const JointDistribution d = sample_distribution(spec, binary(spec), 31);
  // Swap the two symbols of U2.
  std::vector<double> t(d.cells());
  const std::size_t st = d.stride(d.position(Var::U2));
  for (std::size_t i = 0; i < d.cells(); ++i) {
    const bool one = (i / st) % 2 == 1;
    t[one ? i - st : i + st] = d.table()[i];
  }
  const JointDistribution p(d.variables(), t);
  CHECK(validate_factorization(p, spec).valid);
  CHECK(cmi(p, {Var::Y2}, {Var::U2}, {Var::Q, Var::W2}) ==
        doctest::Approx(cmi(d, {Var::Y2}, {Var::U2}, {Var::Q, Var::W2})).epsilon(1e-12));
}

TEST_CASE("merge_variables and add_constant_variable") {
  const JointDistribution d({{Var::U1a, 2}, {Var::U1b, 3}, {Var::W1, 2}}, std::vector<double>(12, 1.0 / 12));
  const JointDistribution m = merge_variables(d, {Var::U1a, Var::U1b}, Var::U1);
  CHECK(m.alphabet(Var::U1) == 6);
  CHECK(m.position(Var::U1) == 0);
  CHECK(entropy(m, {Var::U1}) == doctest::Approx(std::log2(6.0)));
  const JointDistribution q = add_constant_variable(m, Var::Q);
  CHECK(q.alphabet(Var::Q) == 1);
  CHECK(q.position(Var::Q) == 0);
  CHECK(entropy(q, {Var::Q}) == 0.0);
}
