// Exercises the library through rrk.h alone.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>

#include "rrk/rrk.h"

namespace {

std::string scenario_path(const char* file) { return std::string(RRK_SCENARIOS) + "/" + file; }

rrk_scenario* load(const char* file) {
  rrk_scenario* sc = nullptr;
  REQUIRE(rrk_scenario_load(scenario_path(file).c_str(), &sc) == RRK_OK);
  return sc;
}

}  // namespace

TEST_CASE("version and check names") {
  CHECK(std::strlen(rrk_version()) > 0);
  REQUIRE(rrk_check_count() == 9);
  CHECK(std::string(rrk_check_name(0)) == "thm4");
  CHECK(rrk_check_name(99) == nullptr);
}

TEST_CASE("scenario loading reports errors with positions") {
  rrk_scenario* sc = nullptr;
  CHECK(rrk_scenario_parse("{\"form\": \"hod9\",\n \"channel\": [1,,]}", "inline", &sc) == RRK_ERR_USAGE);
  CHECK(sc == nullptr);
  CHECK(rrk_last_error_line() == 2);
  CHECK(rrk_last_error_column() > 0);
  CHECK(std::strlen(rrk_last_error()) > 0);
  CHECK(rrk_scenario_load("/no/such/file.json", &sc) == RRK_ERR_USAGE);
  CHECK(rrk_scenario_load(nullptr, &sc) == RRK_ERR_USAGE);
  sc = load("identity_hod9.json");
  CHECK(std::string(rrk_scenario_form(sc)) == "hod9");
  rrk_scenario_destroy(sc);
}

TEST_CASE("options validate their values") {
  rrk_options* o = nullptr;
  REQUIRE(rrk_options_create(&o) == RRK_OK);
  CHECK(rrk_options_set_tol_polytope(o, 1e-9) == RRK_OK);
  CHECK(rrk_options_set_tol_polytope(o, -1.0) == RRK_ERR_USAGE);
  CHECK(rrk_options_set_tol_identity(o, std::nan("")) == RRK_ERR_USAGE);
  CHECK(rrk_options_set_samples(o, 4) == RRK_OK);
  CHECK(rrk_options_set_seed(o, 3) == RRK_OK);
  CHECK(rrk_options_set_threads(o, 1) == RRK_OK);
  CHECK(rrk_options_add_perturbation(o, "A1", 0.1) == RRK_OK);
  CHECK(rrk_options_add_perturbation(o, nullptr, 0.1) == RRK_ERR_USAGE);
  rrk_options_destroy(o);
}

TEST_CASE("commands return results with artifacts") {
  rrk_scenario* sc = load("additive_hk3.json");
  rrk_result* r = nullptr;
  REQUIRE(rrk_project(sc, "hod", nullptr, &r) == RRK_OK);
  CHECK(rrk_result_status(r) == 0);
  CHECK(std::string(rrk_result_json(r)).find("\"type\": \"region\"") != std::string::npos);
  CHECK(std::string(rrk_result_csv(r)).rfind("R1,R2", 0) == 0);
  CHECK(std::strlen(rrk_result_text(r)) > 0);
  const std::string region = rrk_result_json(r);
  rrk_result_destroy(r);

  CHECK(rrk_project(sc, "bogus", nullptr, &r) == RRK_ERR_USAGE);
  rrk_scenario* rtd = load("split_rtd7.json");
  CHECK(rrk_eval(rtd, "hod", nullptr, &r) == RRK_ERR_MODEL);
  CHECK(rrk_compare(rtd, "rtd", sc, "hod", 0, nullptr, &r) == RRK_ERR_INCOMPATIBLE);
  REQUIRE(rrk_compare(sc, "hod", sc, "hod", 1, nullptr, &r) == RRK_OK);
  CHECK(std::string(rrk_result_json(r)).find("\"equal\"") != std::string::npos);
  rrk_result_destroy(r);
  rrk_scenario_destroy(rtd);

  rrk_options* o = nullptr;
  rrk_options_create(&o);
  rrk_options_set_samples(o, 5);
  REQUIRE(rrk_union(sc, "hod", o, &r) == RRK_OK);
  CHECK(std::string(rrk_result_svg(r)).find("</svg>") != std::string::npos);
  rrk_result_destroy(r);

  const char* names[] = {"one.json"};
  const char* contents[] = {region.c_str()};
  REQUIRE(rrk_plot(names, contents, 1, &r) == RRK_OK);
  CHECK(std::string(rrk_result_svg(r)).find("one.json") != std::string::npos);
  rrk_result_destroy(r);
  CHECK(rrk_plot(names, contents, 0, &r) == RRK_ERR_USAGE);

  REQUIRE(rrk_verify("corollary3", o, &r) == RRK_OK);
  CHECK(rrk_result_status(r) == 0);
  rrk_result_destroy(r);
  rrk_options_add_perturbation(o, "d1", 1e-3);
  REQUIRE(rrk_verify("corollary5", o, &r) == RRK_OK);
  CHECK(rrk_result_status(r) == RRK_CHECK_FAILED);
  rrk_result_destroy(r);
  CHECK(rrk_verify("nope", o, &r) == RRK_ERR_USAGE);
  rrk_options_destroy(o);
  rrk_scenario_destroy(sc);
}

TEST_CASE("distributions, constants and systems") {
  rrk_scenario* sc = load("identity_hod9.json");
  rrk_distribution* d = nullptr;
  REQUIRE(rrk_scenario_distribution(sc, 0, 7, &d) == RRK_OK);
  double h = 0.0, i = 0.0;
  REQUIRE(rrk_info(d, "H(Y1|Q)", &h) == RRK_OK);
  REQUIRE(rrk_info(d, "H(X1|Q)", &i) == RRK_OK);
  CHECK(std::fabs(h - i) <= 1e-12);  // noiseless receiver
  CHECK(rrk_info(d, "I(Y1;", &h) == RRK_ERR_USAGE);

  rrk_constants* c = nullptr;
  REQUIRE(rrk_constants_evaluate(d, "hod", &c) == RRK_OK);
  REQUIRE(rrk_constants_count(c) == 14);
  CHECK(std::string(rrk_constants_label(c, 6)) == "G1");
  double g1 = 0.0;
  REQUIRE(rrk_info(d, "I(Y1;U1W1W2|Q)", &g1) == RRK_OK);
  CHECK(std::fabs(rrk_constants_value(c, 6) - g1) <= 1e-12);
  CHECK(rrk_constants_set(c, "Z0", 1.0) == RRK_ERR_MODEL);

  rrk_system *quad = nullptr, *proj = nullptr, *red = nullptr, *stated = nullptr;
  REQUIRE(rrk_system_build(c, "thm3", &quad) == RRK_OK);
  CHECK(rrk_system_rows(quad) == 14);
  CHECK(rrk_system_dimension(quad) == 4);
  REQUIRE(rrk_system_project(quad, &proj) == RRK_OK);
  CHECK(rrk_system_dimension(proj) == 2);
  REQUIRE(rrk_system_reduce(proj, 1e-9, &red) == RRK_OK);
  CHECK(rrk_system_rows(red) <= rrk_system_rows(proj));
  REQUIRE(rrk_system_build(c, "thm4", &stated) == RRK_OK);
  CHECK(rrk_system_rows(stated) == 20);
  int holds = 0;
  REQUIRE(rrk_system_contains(red, proj, 1e-9, &holds) == RRK_OK);
  CHECK(holds == 1);
  CHECK(rrk_system_contains(quad, proj, 1e-9, &holds) == RRK_ERR_INCOMPATIBLE);
  rrk_system* wrong = nullptr;
  CHECK(rrk_system_build(c, "dmt", &wrong) == RRK_ERR_INCOMPATIBLE);
  CHECK(wrong == nullptr);
  size_t n = 0;
  REQUIRE(rrk_system_vertices(red, 1e-9, nullptr, 0, &n) == RRK_OK);
  double xy[64];
  REQUIRE(n <= 32);
  REQUIRE(rrk_system_vertices(red, 1e-9, xy, 32, &n) == RRK_OK);
  for (size_t k = 0; k < 2 * n; ++k) CHECK(xy[k] >= -1e-9);
  CHECK(std::string(rrk_system_json(red)).find("\"variables\"") != std::string::npos);
  CHECK(rrk_system_vertices(quad, 1e-9, xy, 32, &n) == RRK_ERR_INCOMPATIBLE);

  rrk_system_destroy(stated);
  rrk_system_destroy(red);
  rrk_system_destroy(proj);
  rrk_system_destroy(quad);
  rrk_constants_destroy(c);
  rrk_distribution_destroy(d);
  rrk_scenario_destroy(sc);
}
