#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rrk/info.hpp"
#include "rrk/polytope.hpp"
#include "rrk/prob.hpp"

namespace rrk {

// Constant families. Hod: quadruple region with binning and general input
// correlation; Dmt, Rtd: the two cognitive baselines; Hod1: the superposition
// simplification written over (Q, W1, X1, W2, X2).
enum class Family { Hod, Dmt, Rtd, Hod1 };

std::string_view family_id(Family f);
Family parse_family(std::string_view id);
Form family_form(Family f);

// How a term contributes to a constant of the general region relative to
// the interference-channel baseline.
enum class TermRole { Core, Correlation, Interference, Binning };
std::string_view role_name(TermRole r);

struct ConstantDef {
  std::string label;  // "A1", "d2", "8-3", ...
  std::string row;    // row label of the inequality the constant bounds
  InfoExpr expr;
  std::vector<TermRole> roles;  // one per term of expr
};

// Definitions for a family, in row order.
const std::vector<ConstantDef>& constant_definitions(Family f);
const ConstantDef& constant_definition(Family f, std::string_view label);

// Core-only part of a definition (all non-core terms dropped).
InfoExpr core_expr(const ConstantDef& def);

class BoundConstants {
 public:
  BoundConstants(Family family, std::vector<std::string> labels, std::map<std::string, double> values);

  Family family() const noexcept { return family_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::map<std::string, double>& values() const noexcept { return values_; }
  double at(std::string_view label) const;
  bool has(std::string_view label) const;
  void set(std::string_view label, double value);

 private:
  Family family_;
  std::vector<std::string> labels_;
  std::map<std::string, double> values_;
};

inline constexpr double kFactorizationRejectTolerance = 1e-6;

// Each evaluates the family's definitions on d after checking that d has the
// family's factorization (with channel) to within 1e-6; ModelError otherwise.
BoundConstants hod_constants(const JointDistribution& d);
BoundConstants dmt_constants(const JointDistribution& d);
BoundConstants rtd_constants(const JointDistribution& d);
BoundConstants hod1_constants(const JointDistribution& d);
BoundConstants evaluate_constants(Family f, const JointDistribution& d);
// Evaluation without the factorization check.
BoundConstants evaluate_unchecked(Family f, const JointDistribution& d);

// Distribution seen by the Hod definitions for a split-carrier joint:
// U1 := (U1a, U1b) and a one-letter Q.
JointDistribution merge_split_carrier(const JointDistribution& rtd_joint);

enum class SystemKind {
  Thm3Quadruple,  // (T1,S1,T2,S2), rows 10-1 .. 10-14
  Thm4RatePair,   // (R1,R2), rows 11-1 .. 11-20
  Thm5Quadruple,  // (T1,S1,T2,S2), rows 13-1 .. 13-8
  Thm6RatePair,   // (R1,R2), rows 15-1 .. 15-11
  DmtQuadruple,   // (T1,S1,T2,S2), rows 6-1 .. 6-14
  RtdQuintuple,   // (T1,S1a,S1b,T2,S2), rows 8-1 .. 8-8
  TransitionList  // (R1,R2), the 37 intermediate rows B-1 .. B-37
};

std::string_view system_id(SystemKind k);
SystemKind parse_system(std::string_view id);
// Family whose constants the system is written in.
Family system_family(SystemKind k);
bool is_rate_pair(SystemKind k);

InequalitySystem build_system(const BoundConstants& c, SystemKind kind);

// Rows of a rate-pair system, by label, for reports.
std::vector<std::string> row_labels(SystemKind kind);

// Receiver-2 decoding constraints over pre-binning budgets (s2, t2) plus the
// two binning budgets; variables (S2, T2, s2, t2, T1).
InequalitySystem binning_budget_system(const JointDistribution& d);
// Labels of the rows the budget system must reproduce once s2, t2 are gone.
std::vector<std::string> binning_target_rows();

// R_i = S_i + T_i for a quadruple or quintuple system, then eliminates every
// non-(R1,R2) variable. The result is the raw (unreduced) projection.
InequalitySystem project_rate_pair(const InequalitySystem& sys);

// Quadruple/quintuple system a family's rate-pair region is projected from.
SystemKind quadruple_of(Family f);
// Stated rate-pair system of a family, when one exists.
bool has_stated_rate_pair(Family f);
SystemKind stated_rate_pair(Family f);

}  // namespace rrk
