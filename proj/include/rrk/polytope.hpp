#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rrk/rational.hpp"

namespace rrk {

inline constexpr double kFacetTolerance = 1e-9;

// Symbolic right-hand side, e.g. {A1: 1, C2: 1} for "A1 + C2".
using BoundTerms = std::map<std::string, Rational>;
// Linear expression over named variables, in the order given.
using LinearExpr = std::vector<std::pair<std::string, Rational>>;

// coefficients . x <= bound
struct Halfspace {
  std::vector<Rational> coefficients;
  double bound = 0.0;
  std::string label;
  BoundTerms terms;

  bool is_constant() const;
};

std::string format_terms(const BoundTerms& terms);

// Linear inequalities over named rate variables. Coefficients are exact;
// bounds are reals. Per-variable nonnegativity is kept as a flag so that row
// counts match the way the regions are written; all_rows() materializes it.
class InequalitySystem {
 public:
  InequalitySystem() = default;
  explicit InequalitySystem(std::vector<std::string> variables);

  const std::vector<std::string>& variables() const noexcept { return vars_; }
  std::size_t dimension() const noexcept { return vars_.size(); }
  bool has_variable(std::string_view name) const noexcept;
  std::size_t index_of(std::string_view name) const;

  const std::vector<Halfspace>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  const Halfspace& row(std::string_view label) const;

  void add_row(Halfspace h);
  // Sparse form: {{"R1", 1}, {"R2", 2}}.
  void add_row(const LinearExpr& coefficients, double bound, std::string label, BoundTerms terms = {});

  void set_nonnegative(std::string_view var, bool value = true);
  bool nonnegative(std::size_t index) const { return nonneg_.at(index); }
  const std::vector<bool>& nonnegativity() const noexcept { return nonneg_; }

  bool flagged_infeasible() const noexcept { return infeasible_; }
  void flag_infeasible(bool value = true) { infeasible_ = value; }

  // rows() followed by one "-x <= 0" row per nonnegativity flag.
  std::vector<Halfspace> all_rows() const;

  // Same system with variables reordered to `order` (a permutation).
  InequalitySystem reordered(const std::vector<std::string>& order) const;

  std::string format_row(const Halfspace& h) const;
  std::string str() const;

 private:
  std::vector<std::string> vars_;
  std::vector<bool> nonneg_;
  std::vector<Halfspace> rows_;
  bool infeasible_ = false;
};

// One Fourier-Motzkin step. Pairs every upper bound on `var` with every lower
// bound, carries the rows free of `var`, scales derived rows to primitive
// integer coefficients, and merges rows with identical coefficient vectors
// (keeping the tighter bound). Eliminating an absent variable returns the
// system unchanged and sets *warning.
InequalitySystem fm_eliminate(const InequalitySystem& sys, std::string_view var, std::string* warning = nullptr);

// Rewrites var := expr in every row. When expr does not mention var, the
// variable is removed and its nonnegativity flag becomes the row -expr <= 0.
InequalitySystem substitute(const InequalitySystem& sys, std::string_view var, const LinearExpr& expr);

bool lp_feasible(const InequalitySystem& sys, std::span<const double> point, double tol = kFacetTolerance);

struct Feasibility {
  bool feasible = false;
  std::vector<double> witness;  // a point of the system when feasible
  double worst_residual = 0.0;  // most negative constant after full elimination
};

// Exact-coefficient feasibility: eliminates every variable and checks the
// remaining constant rows against -tol.
Feasibility lp_feasible(const InequalitySystem& sys, double tol = kFacetTolerance);

struct Support {
  enum class Status { Empty, Bounded, Unbounded };
  Status status = Status::Empty;
  double value = 0.0;
};

// sup { direction . x : x in sys }, by eliminating x from sys + {z <= direction . x}.
Support support(const InequalitySystem& sys, std::span<const Rational> direction, double tol = kFacetTolerance);

struct Implication {
  bool implied = false;
  double excess = 0.0;          // sup(a . x) - bound when not implied (inf if unbounded)
  std::vector<double> witness;  // point of sys violating the row by more than tol
};

// Whether every point of sys satisfies row within tol, i.e. sys together
// with a . x >= bound + tol is infeasible.
Implication implies(const InequalitySystem& sys, const Halfspace& row, double tol = kFacetTolerance);

// Drops, in input order, each row implied by the rows still kept. An
// infeasible system collapses to a single contradictory constant row.
InequalitySystem remove_redundant(const InequalitySystem& sys, double tol = kFacetTolerance);

struct Containment {
  bool holds = true;
  std::string violated_label;
  double excess = 0.0;
  std::vector<double> witness;  // in inner, outside outer; ordered as inner.variables()
};

// True iff every row (and nonnegativity flag) of outer is implied by inner.
// Throws IncompatibleError when the variable sets differ.
Containment contains(const InequalitySystem& outer, const InequalitySystem& inner, double tol = kFacetTolerance);

// Smallest |a.x - b| / ||a|| over non-constant rows.
double facet_distance(const InequalitySystem& sys, std::span<const double> point);

struct Point2 {
  double r1 = 0.0;
  double r2 = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Polytope2D {
  enum class Shape { Empty, Point, Segment, Polygon };
  Shape shape = Shape::Empty;
  std::vector<Point2> vertices;  // counterclockwise
};

std::string_view shape_name(Polytope2D::Shape s);

// Vertices of a bounded two-variable system. Throws ModelError when the
// feasible set is unbounded.
Polytope2D vertices2d(const InequalitySystem& sys, double tol = kFacetTolerance);

// Counterclockwise hull without collinear points, starting at the
// lexicographically smallest point.
std::vector<Point2> convex_hull(std::vector<Point2> points);

// Whether p lies in the convex polygon (ccw hull) within tol.
bool hull_contains(const std::vector<Point2>& hull, Point2 p, double tol = kFacetTolerance);

}  // namespace rrk
