#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "rrk/errors.hpp"
#include "rrk/polytope.hpp"
#include "rrk/regions.hpp"
#include "rrk/rng.hpp"
#include "rrk/verifier.hpp"

using namespace rrk;

namespace {

InequalitySystem box(double x, double y) {
  InequalitySystem s({"R1", "R2"});
  s.add_row({{"R1", 1}}, x, "r1");
  s.add_row({{"R2", 1}}, y, "r2");
  s.set_nonnegative("R1");
  s.set_nonnegative("R2");
  return s;
}

std::vector<oracle::Row> dense(const InequalitySystem& sys) {
  std::vector<oracle::Row> out;
  for (const auto& h : sys.all_rows()) {
    oracle::Row r{{}, h.bound};
    for (const auto& a : h.coefficients) r.a.push_back(a.to_double());
    out.push_back(std::move(r));
  }
  return out;
}

bool has_vertex(const Polytope2D& p, double r1, double r2) {
  return std::any_of(p.vertices.begin(), p.vertices.end(),
                     [&](const Point2& v) { return std::fabs(v.r1 - r1) < 1e-9 && std::fabs(v.r2 - r2) < 1e-9; });
}

}  // namespace

TEST_CASE("system construction checks its input") {
  CHECK_THROWS_AS(InequalitySystem({"R1", "R1"}), ModelError);
  InequalitySystem s({"R1", "R2"});
  CHECK_THROWS(s.add_row({{"T1", 1}}, 1.0, "bad"));
  CHECK_THROWS(s.add_row({{"R1", 1}}, std::nan(""), "nan"));
  s.add_row({{"R1", 1}, {"R2", Rational(1, 2)}}, 2.0, "x");
  CHECK(s.format_row(s.rows()[0]).find("R1 + 1/2 R2 <= 2") == 0);
  CHECK(s.row("x").bound == 2.0);
  CHECK_THROWS(s.row("missing"));
  CHECK_THROWS_AS(s.reordered({"R2", "T1"}), IncompatibleError);
}

TEST_CASE("single Fourier-Motzkin step") {
  // {T <= 2, R - T <= 1, T >= 0} minus T is {R <= 3}.
  InequalitySystem s({"R", "T"});
  s.add_row({{"T", 1}}, 2.0, "a");
  s.add_row({{"R", 1}, {"T", -1}}, 1.0, "b");
  s.add_row({{"T", -1}}, 0.0, "c");
  const InequalitySystem p = fm_eliminate(s, "T");
  REQUIRE(p.variables() == std::vector<std::string>{"R"});
  InequalitySystem expect({"R"});
  expect.add_row({{"R", 1}}, 3.0, "R<=3");
  CHECK(contains(p, expect).holds);
  CHECK(contains(expect, p).holds);
  bool parent_labels = false;
  for (const auto& h : p.rows()) parent_labels |= h.label == "a&b";
  CHECK(parent_labels);
}

TEST_CASE("eliminating an absent variable is the identity with a warning") {
  const InequalitySystem s = box(1, 2);
  std::string warning;
  const InequalitySystem p = fm_eliminate(s, "T9", &warning);
  CHECK_FALSE(warning.empty());
  CHECK(p.str() == s.str());
}

TEST_CASE("derived rows are primitive integers and duplicates keep the tighter bound") {
  InequalitySystem s({"x", "y", "t"});
  s.add_row({{"x", Rational(1, 2)}, {"t", Rational(1, 3)}}, 1.0, "u");
  s.add_row({{"y", 2}, {"t", -1}}, 4.0, "l");
  s.add_row({{"x", 3}, {"y", 4}}, 100.0, "loose");
  const InequalitySystem p = fm_eliminate(s, "t");
  // (1/2 x + 1/3 t <= 1) * 3 + (2y - t <= 4): 3/2 x + 2 y <= 7 -> 3x + 4y <= 14.
  REQUIRE(p.size() == 1);
  CHECK(p.rows()[0].coefficients == std::vector<Rational>{3, 4});
  CHECK(p.rows()[0].bound == doctest::Approx(14.0));
}

TEST_CASE("substitution") {
  InequalitySystem s({"T1", "S1"});
  s.add_row({{"S1", 1}}, 0.7, "10-1");
  s.set_nonnegative("S1");
  const InequalitySystem r = substitute(s, "S1", {{"R1", 1}, {"T1", -1}});
  CHECK(r.has_variable("R1"));
  CHECK_FALSE(r.has_variable("S1"));
  const Halfspace& h = r.row("10-1");
  CHECK(h.coefficients[r.index_of("R1")] == Rational(1));
  CHECK(h.coefficients[r.index_of("T1")] == Rational(-1));
  // S1 >= 0 becomes T1 - R1 <= 0.
  const Halfspace& flag = r.row("S1>=0");
  CHECK(flag.coefficients[r.index_of("T1")] == Rational(1));
  CHECK(flag.coefficients[r.index_of("R1")] == Rational(-1));
  CHECK(flag.bound == 0.0);
  const InequalitySystem same = substitute(s, "S1", {{"S1", 1}});
  CHECK(same.str() == s.str());
}

TEST_CASE("feasibility") {
  const double origin[] = {0.0, 0.0};
  CHECK(lp_feasible(box(1, 1), origin));
  const double out[] = {1.5, 0.0};
  CHECK_FALSE(lp_feasible(box(1, 1), out));
  CHECK(lp_feasible(box(1, 1)).feasible);
  InequalitySystem bad({"x"});
  bad.add_row({{"x", 1}}, 1.0, "le");
  bad.add_row({{"x", -1}}, -2.0, "ge");
  const Feasibility f = lp_feasible(bad);
  CHECK_FALSE(f.feasible);
  CHECK(f.worst_residual < -0.5);
  const Feasibility g = lp_feasible(box(2, 3));
  REQUIRE(g.feasible);
  CHECK(lp_feasible(box(2, 3), g.witness));
}

TEST_CASE("support function") {
  InequalitySystem s = box(1, 2);
  s.add_row({{"R1", 1}, {"R2", 1}}, 2.5, "sum");
  const Rational d1[] = {1, 1};
  const Support sup = support(s, d1);
  CHECK(sup.status == Support::Status::Bounded);
  CHECK(sup.value == doctest::Approx(2.5));
  InequalitySystem open({"x"});
  open.add_row({{"x", -1}}, 0.0, "x>=0");
  const Rational d2[] = {1};
  CHECK(support(open, d2).status == Support::Status::Unbounded);
}

TEST_CASE("redundancy removal") {
  InequalitySystem s({"x"});
  s.add_row({{"x", 1}}, 1.0, "tight");
  s.add_row({{"x", 1}}, 2.0, "loose");
  const InequalitySystem r = remove_redundant(s);
  REQUIRE(r.size() == 1);
  CHECK(r.rows()[0].label == "tight");

  InequalitySystem d({"x", "y"});
  d.add_row({{"x", 1}, {"y", 1}}, 1.0, "first");
  d.add_row({{"x", 1}, {"y", 1}}, 1.0, "second");
  d.set_nonnegative("x");
  d.set_nonnegative("y");
  CHECK(remove_redundant(d).size() == 1);

  InequalitySystem implied = box(1, 1);
  implied.add_row({{"R1", 1}, {"R2", 1}}, 2.0, "corner");
  const InequalitySystem ri = remove_redundant(implied);
  CHECK(ri.size() == 2);
  CHECK(contains(ri, implied).holds);
  CHECK(contains(implied, ri).holds);

  InequalitySystem empty({"x"});
  empty.add_row({{"x", 1}}, -1.0, "neg");
  empty.set_nonnegative("x");
  const InequalitySystem re = remove_redundant(empty);
  CHECK(re.flagged_infeasible());
  CHECK_FALSE(lp_feasible(re).feasible);
}

TEST_CASE("containment") {
  CHECK(contains(box(1, 1), box(1, 1)).holds);
  CHECK(contains(box(1, 1), box(0.5, 0.5)).holds);
  const Containment c = contains(box(0.5, 0.5), box(1, 1));
  CHECK_FALSE(c.holds);
  CHECK(c.excess == doctest::Approx(0.5));
  REQUIRE(c.witness.size() == 2);
  CHECK(lp_feasible(box(1, 1), c.witness));
  CHECK_FALSE(lp_feasible(box(0.5, 0.5), c.witness));
  // Variable order does not matter; variable sets do.
  CHECK(contains(box(1, 1).reordered({"R2", "R1"}), box(1, 1)).holds);
  InequalitySystem other({"R1", "T2"});
  CHECK_THROWS_AS(contains(box(1, 1), other), IncompatibleError);
}

TEST_CASE("planar vertices") {
  const Polytope2D sq = vertices2d(box(1, 1));
  CHECK(sq.shape == Polytope2D::Shape::Polygon);
  CHECK(sq.vertices.size() == 4);
  CHECK(has_vertex(sq, 1, 1));
  InequalitySystem tri = box(1, 1);
  tri.add_row({{"R1", 1}, {"R2", 1}}, 1.0, "sum");
  const Polytope2D t = vertices2d(tri);
  CHECK(t.vertices.size() == 3);
  CHECK(has_vertex(t, 0, 0));
  CHECK(has_vertex(t, 1, 0));
  CHECK(has_vertex(t, 0, 1));
  // Counterclockwise: positive signed area.
  double area = 0.0;
  for (std::size_t i = 0; i < t.vertices.size(); ++i) {
    const auto& a = t.vertices[i];
    const auto& b = t.vertices[(i + 1) % t.vertices.size()];
    area += a.r1 * b.r2 - a.r2 * b.r1;
  }
  CHECK(area == doctest::Approx(1.0));

  CHECK(vertices2d(box(0, 0)).shape == Polytope2D::Shape::Point);
  CHECK(vertices2d(box(1, 0)).shape == Polytope2D::Shape::Segment);
  InequalitySystem none = box(1, 1);
  none.add_row({{"R1", -1}}, -2.0, "far");
  CHECK(vertices2d(none).shape == Polytope2D::Shape::Empty);
  InequalitySystem open({"R1", "R2"});
  open.set_nonnegative("R1");
  open.set_nonnegative("R2");
  open.add_row({{"R1", 1}}, 1.0, "r1");
  CHECK_THROWS_AS(vertices2d(open), ModelError);
  CHECK_THROWS_AS(vertices2d(InequalitySystem({"a", "b", "c"})), IncompatibleError);
}

TEST_CASE("hull helpers") {
  const std::vector<Point2> h = convex_hull({{0, 0}, {1, 0}, {0.5, 0.2}, {1, 1}, {0, 1}, {0.5, 0.5}});
  CHECK(h.size() == 4);
  CHECK(hull_contains(h, {0.5, 0.5}));
  CHECK_FALSE(hull_contains(h, {1.5, 0.5}));
}

TEST_CASE("rate-pair projection of sampled quadruple systems matches a lifted planar oracle") {
  // Nonempty samples only; each point checked against the (T1, T2) slice.
  std::size_t checked_systems = 0, checked_points = 0;
  for (std::size_t i = 0; checked_systems < 8 && i < 4000; ++i) {
    const DrawnSample s = draw_sample(Form::HanKobayashi, 12, i);
    const InequalitySystem quad = build_system(hod_constants(s.joint), SystemKind::Thm3Quadruple);
    const InequalitySystem proj = project_rate_pair(quad);
    if (!lp_feasible(proj).feasible) continue;
    ++checked_systems;
    // Quadruple variables (T1, S1, T2, S2); S_i = R_i - T_i brings rows to (T1, T2).
    std::vector<oracle::Row> lifted;
    for (const auto& r : dense(quad)) lifted.push_back({{r.a[0] - r.a[1], r.a[2] - r.a[3], r.a[1], r.a[3]}, r.b});
    CounterRng rng(i);
    const Polytope2D poly = vertices2d(proj);
    double m1 = 0.0, m2 = 0.0;
    for (const auto& v : poly.vertices) {
      m1 = std::max(m1, v.r1);
      m2 = std::max(m2, v.r2);
    }
    for (int k = 0; k < 300; ++k) {
      const double p[2] = {(rng.uniform() * 1.4 - 0.2) * m1, (rng.uniform() * 1.4 - 0.2) * m2};
      if (facet_distance(proj, p) < 1e-7) continue;
      ++checked_points;
      const bool lib = lp_feasible(proj, p);
      const bool ref = oracle::lifted_feasible(lifted, {2, 3}, {p[0], p[1]}, 0, 1);
      CHECK(lib == ref);
    }
  }
  CHECK(checked_systems == 8);
  CHECK(checked_points > 1500);
}

TEST_CASE("elimination order does not change the solution set") {
  for (std::size_t i = 0; i < 20; ++i) {
    const DrawnSample s = draw_sample(Form::Hod, 3, i);
    InequalitySystem q = build_system(hod_constants(s.joint), SystemKind::Thm3Quadruple);
    q = substitute(q, "S1", {{"R1", 1}, {"T1", -1}});
    q = substitute(q, "S2", {{"R2", 1}, {"T2", -1}});
    const InequalitySystem a = fm_eliminate(fm_eliminate(q, "T1"), "T2").reordered({"R1", "R2"});
    const InequalitySystem b = fm_eliminate(fm_eliminate(q, "T2"), "T1").reordered({"R1", "R2"});
    CHECK(contains(a, b).holds);
    CHECK(contains(b, a).holds);
    const InequalitySystem r = remove_redundant(a);
    CHECK(contains(a, r).holds);
    CHECK(contains(r, a).holds);
    CHECK(r.size() <= 20);
  }
}
