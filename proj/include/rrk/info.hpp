#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rrk/prob.hpp"
#include "rrk/rational.hpp"

namespace rrk {

// All measures are in bits. 0 log 0 = 0.
double entropy(const JointDistribution& d, const VarList& vars, const VarList& given = {});

// I(A; B | C) = H(A|C) + H(B|C) - H(AB|C). Throws ModelError when A or B is
// empty or the three sets overlap.
double cmi(const JointDistribution& d, const VarList& a, const VarList& b, const VarList& c = {});

// Round-off in [-1e-12, 0) is reported as 0; anything else passes through.
double clamp_for_report(double bits);

struct InfoTerm {
  enum class Kind { Entropy, MutualInformation };

  Kind kind = Kind::MutualInformation;
  VarList left;
  VarList right;  // unused for entropy
  VarList given;
  int sign = 1;
  Rational coefficient = 1;

  // "+I(W2;U1W1|Q)", "-2H(X1|Q)"
  std::string str() const;
};

using InfoExpr = std::vector<InfoTerm>;

InfoTerm mi(VarList a, VarList b, VarList c = {}, int sign = 1);

double eval_term(const JointDistribution& d, const InfoTerm& t);
double eval(const JointDistribution& d, const InfoExpr& e);

// Parses sums such as "I(W2;U1W1|Q) + I(Y1;U1|QW1W2) - 2 H(X1)".
InfoExpr parse_expr(std::string_view text);
std::string to_string(const InfoExpr& e);

// Replaces every occurrence of `from` by `to` (dropping duplicates inside a set).
InfoExpr substitute_vars(const InfoExpr& e, Var from, Var to);

}  // namespace rrk
