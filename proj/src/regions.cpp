#include "rrk/regions.hpp"

#include <algorithm>
#include <cctype>

#include "rrk/errors.hpp"

namespace rrk {

std::string_view family_id(Family f) {
  switch (f) {
    case Family::Hod:
      return "hod";
    case Family::Dmt:
      return "dmt";
    case Family::Rtd:
      return "rtd";
    case Family::Hod1:
      return "hod1";
  }
  return "?";
}

Family parse_family(std::string_view id) {
  for (Family f : {Family::Hod, Family::Dmt, Family::Rtd, Family::Hod1})
    if (family_id(f) == id) return f;
  throw UsageError("unknown region family '" + std::string(id) + "' (expected hod, dmt, rtd or hod1)");
}

Form family_form(Family f) {
  switch (f) {
    case Family::Hod:
      return Form::Hod;
    case Family::Dmt:
      return Form::Dmt;
    case Family::Rtd:
      return Form::Rtd;
    case Family::Hod1:
      return Form::HodSuperposition;
  }
  return Form::Hod;
}

std::string_view role_name(TermRole r) {
  switch (r) {
    case TermRole::Core:
      return "core";
    case TermRole::Correlation:
      return "correlation";
    case TermRole::Interference:
      return "interference";
    case TermRole::Binning:
      return "binning";
  }
  return "?";
}

namespace {

bool mentions_output(const InfoTerm& t) {
  for (const auto* l : {&t.left, &t.right, &t.given})
    for (Var v : *l)
      if (v == Var::Y1 || v == Var::Y2) return true;
  return false;
}

bool same_set(VarList a, VarList b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

// Channel terms are the core; subtracted terms pay for binning; a positive
// I(U_i; W_i) is the input correlation; any other positive auxiliary term is
// the input-dependent interference.
TermRole classify(const InfoTerm& t) {
  if (mentions_output(t)) return TermRole::Core;
  if (t.sign < 0) return TermRole::Binning;
  for (auto [u, w] : {std::pair{Var::U1, Var::W1}, std::pair{Var::U2, Var::W2}}) {
    if ((same_set(t.left, {u}) && same_set(t.right, {w})) || (same_set(t.left, {w}) && same_set(t.right, {u})))
      return TermRole::Correlation;
  }
  return TermRole::Interference;
}

ConstantDef def(std::string label, std::string row, std::string_view text) {
  ConstantDef d{std::move(label), std::move(row), parse_expr(text), {}};
  for (const auto& t : d.expr) d.roles.push_back(classify(t));
  return d;
}

std::vector<ConstantDef> make_hod() {
  return {
      def("A1", "10-1", "I(W2;U1W1|Q) + I(Y1;U1|QW1W2)"),
      def("B1", "10-2", "I(U1;W1|Q) + I(W2;U1W1|Q) + I(Y1;W1|QW2U1)"),
      def("C1", "10-3", "I(U1;W1|Q) + I(Y1;W2|QU1W1)"),
      def("D1", "10-4", "I(W2;W1U1|Q) + I(Y1;U1W1|QW2)"),
      def("E1", "10-5", "I(Y1;U1W2|QW1)"),
      def("F1", "10-6", "I(U1;W1|Q) + I(Y1;W1W2|QU1)"),
      def("G1", "10-7", "I(Y1;U1W1W2|Q)"),
      def("A2", "10-8", "I(U2;W2|Q) + I(W2U2;W1|Q) + I(Y2;U2|QW1W2) - I(U2;U1W1W2|Q)"),
      def("B2", "10-9", "I(U2;W2|Q) + I(W2U2;W1|Q) + I(Y2;W2|QW1U2) - I(W2;W1U1|Q)"),
      def("C2", "10-10", "I(U2;W2|Q) + I(W2U2;W1|Q) + I(Y2;W1|QW2U2)"),
      def("D2", "10-11", "I(U2;W2|Q) + I(W2U2;W1|Q) + I(Y2;U2W2|QW1) - I(W2;U1W1|Q) - I(U2;U1W1W2|Q)"),
      def("E2", "10-12", "I(U2;W2|Q) + I(W2U2;W1|Q) + I(Y2;U2W1|QW2) - I(U2;U1W1W2|Q)"),
      def("F2", "10-13", "I(U2;W2|Q) + I(W2U2;W1|Q) + I(Y2;W1W2|QU2) - I(W2;U1W1|Q)"),
      def("G2", "10-14", "I(U2;W2|Q) + I(W2U2;W1|Q) + I(Y2;U2W1W2|Q) - I(W2;W1U1|Q) - I(U2;U1W1W2|Q)"),
  };
}

std::vector<ConstantDef> make_dmt() {
  return {
      def("a1", "6-1", "I(W1W2;U1|Q) + I(Y1;U1|QW1W2)"),
      def("b1", "6-2", "I(U1W2;W1|Q) + I(Y1;W1|QW2U1)"),
      def("c1", "6-3", "I(Y1;W2|QU1W1)"),
      def("d1", "6-4", "I(W2;W1U1|Q) + I(Y1;U1W1|QW2)"),
      def("e1", "6-5", "I(Y1;U1W2|QW1) + I(U1W2;W1|Q) - I(W2;W1U1|Q)"),
      def("f1", "6-6", "I(W1W2;U1|Q) + I(Y1;W1W2|QU1) - I(W2;W1U1|Q)"),
      def("g1", "6-7", "I(Y1;U1W1W2|Q) - I(W2;W1U1|Q)"),
      def("a2", "6-8", "I(U2;W1W2|Q) + I(Y2;U2|QW1W2) - I(U2;U1W1|Q)"),
      def("b2", "6-9", "I(W2;W1U2|Q) + I(Y2;W2|QW1U2) - I(W2;W1U1|Q)"),
      def("c2", "6-10", "I(W2U2;W1|Q) + I(Y2;W1|QW2U2)"),
      def("d2", "6-11", "I(W2U2;W1|Q) + I(Y2;U2W2|QW1) - I(W2;U1W1|Q)"),
      def("e2", "6-12", "I(W1U2;W2|Q) + I(Y2;U2W1|QW2) - I(U2;U1W1|Q)"),
      def("f2", "6-13", "I(U2;W1W2|Q) + I(Y2;W1W2|QU2) - I(W2;U1W1|Q)"),
      def("g2", "6-14", "I(Y2;U2W1W2|Q) - I(W2;W1U1|Q) - I(U2;U1W1|Q)"),
  };
}

std::vector<ConstantDef> make_rtd() {
  return {
      def("8-1", "8-1", "I(Y1;W2W1U1aU1b) - I(U2;U1b|W1W2U1a)"),
      def("8-2", "8-2", "I(Y1;W2U1aU1b|W1) - I(U2;U1b|W1W2U1a)"),
      def("8-3", "8-3", "I(Y1;U1aU1b|W1W2) + I(W2;U1a|W1) - I(U2;U1b|W1W2U1a)"),
      def("8-4", "8-4", "I(Y1;W2U1b|W1U1a) - I(U2;U1b|W1W2U1a)"),
      def("8-5", "8-5", "I(Y1;U1b|W1W2U1a) + I(W2;U1a|W1) - I(U2;U1b|W1W2U1a)"),
      def("8-6", "8-6", "I(Y2;W1W2U2) - I(W2;U1a|W1) - I(U2;U1a|W1W2)"),
      def("8-7", "8-7", "I(Y2;W2U2|W1) - I(W2;U1a|W1) - I(U2;U1a|W1W2)"),
      def("8-8", "8-8", "I(Y2;U2|W1W2) - I(U2;U1a|W1W2)"),
  };
}

std::vector<ConstantDef> make_hod1() {
  return {
      def("A1", "13-1", "I(Y1;X1|W1W2Q) + I(W2;X1|Q)"),
      def("D1", "13-2", "I(Y1;X1|W2Q) + I(W2;X1|Q)"),
      def("E1", "13-3", "I(Y1;X1W2|W1Q)"),
      def("G1", "13-4", "I(Y1;X1W2|Q)"),
      def("A2", "13-5", "I(X2;W1|Q) + I(Y2;X2|W1W2Q) - I(X2;X1|QW2)"),
      def("D2", "13-6", "I(Y2;X2|W1Q) - I(W2;X1|Q) - I(X2;X1|QW2) + I(X2;W1|Q)"),
      def("E2", "13-7", "I(X2;W1|Q) + I(Y2;X2W1|QW2) - I(X2;X1|QW2)"),
      def("G2", "13-8", "I(Y2;X2W1|Q) - I(W2;X1|Q) - I(X2;X1|QW2) + I(X2;W1|Q)"),
  };
}

}  // namespace

const std::vector<ConstantDef>& constant_definitions(Family f) {
  static const std::vector<ConstantDef> hod = make_hod();
  static const std::vector<ConstantDef> dmt = make_dmt();
  static const std::vector<ConstantDef> rtd = make_rtd();
  static const std::vector<ConstantDef> hod1 = make_hod1();
  switch (f) {
    case Family::Hod:
      return hod;
    case Family::Dmt:
      return dmt;
    case Family::Rtd:
      return rtd;
    case Family::Hod1:
      return hod1;
  }
  return hod;
}

const ConstantDef& constant_definition(Family f, std::string_view label) {
  for (const auto& d : constant_definitions(f))
    if (d.label == label) return d;
  throw ModelError("family " + std::string(family_id(f)) + " has no constant " + std::string(label));
}

InfoExpr core_expr(const ConstantDef& def) {
  InfoExpr out;
  for (std::size_t i = 0; i < def.expr.size(); ++i)
    if (def.roles[i] == TermRole::Core) out.push_back(def.expr[i]);
  return out;
}

BoundConstants::BoundConstants(Family family, std::vector<std::string> labels, std::map<std::string, double> values)
    : family_(family), labels_(std::move(labels)), values_(std::move(values)) {
  for (const auto& l : labels_)
    if (!values_.count(l)) throw ModelError("constant " + l + " has no value");
}

double BoundConstants::at(std::string_view label) const {
  auto it = values_.find(std::string(label));
  if (it == values_.end()) throw ModelError("no constant " + std::string(label));
  return it->second;
}

bool BoundConstants::has(std::string_view label) const { return values_.count(std::string(label)) != 0; }

void BoundConstants::set(std::string_view label, double value) {
  auto it = values_.find(std::string(label));
  if (it == values_.end()) throw ModelError("no constant " + std::string(label));
  it->second = value;
}

BoundConstants evaluate_unchecked(Family f, const JointDistribution& d) {
  std::vector<std::string> labels;
  std::map<std::string, double> values;
  for (const auto& def : constant_definitions(f)) {
    labels.push_back(def.label);
    values[def.label] = eval(d, def.expr);
  }
  return BoundConstants(f, std::move(labels), std::move(values));
}

BoundConstants evaluate_constants(Family f, const JointDistribution& d) {
  const FactorizationSpec spec = with_channel(factorization(family_form(f)));
  const FactorizationCheck check = validate_factorization(d, spec, kFactorizationRejectTolerance);
  if (!check.valid)
    throw ModelError("distribution violates form " + std::string(form_id(spec.form)) + " at " + check.worst_factor +
                     " by " + std::to_string(check.max_violation));
  return evaluate_unchecked(f, d);
}

BoundConstants hod_constants(const JointDistribution& d) { return evaluate_constants(Family::Hod, d); }
BoundConstants dmt_constants(const JointDistribution& d) { return evaluate_constants(Family::Dmt, d); }
BoundConstants rtd_constants(const JointDistribution& d) { return evaluate_constants(Family::Rtd, d); }
BoundConstants hod1_constants(const JointDistribution& d) { return evaluate_constants(Family::Hod1, d); }

JointDistribution merge_split_carrier(const JointDistribution& rtd_joint) {
  JointDistribution merged = merge_variables(rtd_joint, {Var::U1a, Var::U1b}, Var::U1);
  return merged.has(Var::Q) ? merged : add_constant_variable(merged, Var::Q);
}

// ---------------------------------------------------------------------------
// Systems

std::string_view system_id(SystemKind k) {
  switch (k) {
    case SystemKind::Thm3Quadruple:
      return "thm3";
    case SystemKind::Thm4RatePair:
      return "thm4";
    case SystemKind::Thm5Quadruple:
      return "thm5";
    case SystemKind::Thm6RatePair:
      return "thm6";
    case SystemKind::DmtQuadruple:
      return "dmt";
    case SystemKind::RtdQuintuple:
      return "rtd";
    case SystemKind::TransitionList:
      return "list37";
  }
  return "?";
}

SystemKind parse_system(std::string_view id) {
  for (SystemKind k : {SystemKind::Thm3Quadruple, SystemKind::Thm4RatePair, SystemKind::Thm5Quadruple,
                       SystemKind::Thm6RatePair, SystemKind::DmtQuadruple, SystemKind::RtdQuintuple,
                       SystemKind::TransitionList})
    if (system_id(k) == id) return k;
  throw UsageError("unknown system '" + std::string(id) + "'");
}

Family system_family(SystemKind k) {
  switch (k) {
    case SystemKind::Thm3Quadruple:
    case SystemKind::Thm4RatePair:
    case SystemKind::TransitionList:
      return Family::Hod;
    case SystemKind::Thm5Quadruple:
    case SystemKind::Thm6RatePair:
      return Family::Hod1;
    case SystemKind::DmtQuadruple:
      return Family::Dmt;
    case SystemKind::RtdQuintuple:
      return Family::Rtd;
  }
  return Family::Hod;
}

bool is_rate_pair(SystemKind k) {
  return k == SystemKind::Thm4RatePair || k == SystemKind::Thm6RatePair || k == SystemKind::TransitionList;
}

namespace {

struct RowSpec {
  const char* label;
  LinearExpr lhs;
  const char* rhs;  // "A1 + C2", "2A1 + E2"
};

BoundTerms parse_terms(std::string_view text) {
  BoundTerms out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '+')) ++i;
    if (i >= text.size()) break;
    std::int64_t k = 0;
    bool has_k = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      k = k * 10 + (text[i++] - '0');
      has_k = true;
    }
    std::size_t start = i;
    while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
    while (i < text.size() && text[i] == '-' && i + 1 < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
      ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    }
    out[std::string(text.substr(start, i - start))] += Rational(has_k ? k : 1);
  }
  return out;
}

double value_of(const BoundConstants& c, const BoundTerms& terms) {
  double v = 0.0;
  for (const auto& [name, k] : terms) v += k.to_double() * c.at(name);
  return v;
}

const LinearExpr kR1{{"R1", 1}};
const LinearExpr kR2{{"R2", 1}};
const LinearExpr kR12{{"R1", 1}, {"R2", 1}};
const LinearExpr k2R1R2{{"R1", 2}, {"R2", 1}};
const LinearExpr kR1_2R2{{"R1", 1}, {"R2", 2}};

// Left-hand sides shared by the two quadruple regions, receiver 1 then
// receiver 2: S_i, T_i, T_j, S_i+T_i, S_i+T_j, T_i+T_j, S_i+T_i+T_j.
const std::vector<LinearExpr>& quadruple_pattern() {
  static const std::vector<LinearExpr> rows = {
      {{"S1", 1}},
      {{"T1", 1}},
      {{"T2", 1}},
      {{"S1", 1}, {"T1", 1}},
      {{"S1", 1}, {"T2", 1}},
      {{"T1", 1}, {"T2", 1}},
      {{"S1", 1}, {"T1", 1}, {"T2", 1}},
      {{"S2", 1}},
      {{"T2", 1}},
      {{"T1", 1}},
      {{"S2", 1}, {"T2", 1}},
      {{"S2", 1}, {"T1", 1}},
      {{"T1", 1}, {"T2", 1}},
      {{"S2", 1}, {"T1", 1}, {"T2", 1}},
  };
  return rows;
}

void add_rows(InequalitySystem& sys, const BoundConstants& c, const std::vector<RowSpec>& rows) {
  for (const auto& r : rows) {
    BoundTerms t = parse_terms(r.rhs);
    const double b = value_of(c, t);
    sys.add_row(r.lhs, b, r.label, std::move(t));
  }
}

const std::vector<RowSpec>& thm4_rows() {
  static const std::vector<RowSpec> rows = {
      {"11-1", kR1, "D1"},
      {"11-2", kR1, "A1 + C2"},
      {"11-3", kR1, "G1"},
      {"11-4", kR1, "F2 + A1"},
      {"11-5", kR1, "C2 + E1"},
      {"11-6", kR1, "B1 + E1"},
      {"11-7", kR1, "E2 + A1"},
      {"11-8", kR1, "F2 + E1"},
      {"11-9", kR2, "D2"},
      {"11-10", kR2, "A2 + C1"},
      {"11-11", kR2, "E1 + A2"},
      {"11-12", kR12, "E1 + E2"},
      {"11-13", kR12, "G2 + A1"},
      {"11-14", kR12, "G1 + A2"},
      {"11-15", kR12, "B1 + E1 + A2"},
      {"11-16", kR12, "E1 + G2"},
      {"11-17", k2R1R2, "G1 + E2 + A1"},
      {"11-18", k2R1R2, "F2 + E2 + 2A1"},
      {"11-19", kR1_2R2, "F1 + E1 + 2A2"},
      {"11-20", kR1_2R2, "E1 + G2 + A2"},
  };
  return rows;
}

const std::vector<RowSpec>& thm6_rows() {
  static const std::vector<RowSpec> rows = {
      {"15-1", kR1, "D1"},
      {"15-2", kR1, "A1 + E2"},
      {"15-3", kR1, "G1"},
      {"15-4", kR2, "D2"},
      {"15-5", kR2, "A2 + E1"},
      {"15-6", kR12, "A1 + G2"},
      {"15-7", kR12, "A2 + G1"},
      {"15-8", kR12, "E1 + E2"},
      {"15-9", kR12, "E1 + G2"},
      {"15-10", k2R1R2, "A1 + G1 + E2"},
      {"15-11", kR1_2R2, "A2 + G2 + E1"},
  };
  return rows;
}

const std::vector<RowSpec>& transition_rows() {
  static const LinearExpr k3R1_2R2{{"R1", 3}, {"R2", 2}};
  static const LinearExpr k2R1_2R2{{"R1", 2}, {"R2", 2}};
  static const std::vector<RowSpec> rows = {
      {"B-1", kR1, "D1"},
      {"B-2", kR1, "C2 + A1"},
      {"B-3", kR1, "A1 + B1"},
      {"B-4", kR1, "G1"},
      {"B-5", kR1, "F2 + A1"},
      {"B-6", kR1, "C2 + E1"},
      {"B-7", kR1, "B1 + E1"},
      {"B-8", kR1, "F1 + A1"},
      {"B-9", kR1, "F1 + E1"},
      {"B-10", kR1, "E2 + A1"},
      {"B-11", kR1, "F2 + E1"},
      {"B-12", kR2, "D2"},
      {"B-13", kR2, "A2 + C1"},
      {"B-14", kR2, "A2 + B2"},
      {"B-15", kR2, "A2 + E1"},
      {"B-16", kR12, "E2 + E1"},
      {"B-17", kR12, "G2 + A1"},
      {"B-18", kR12, "E2 + A1 + C1"},
      {"B-19", kR12, "E2 + A1 + B2"},
      {"B-20", kR12, "E2 + A1 + E1"},
      {"B-21", kR12, "G1 + A2"},
      {"B-22", kR12, "C2 + E1 + A2"},
      {"B-23", kR12, "F2 + A1 + A2"},
      {"B-24", kR12, "B1 + E1 + A2"},
      {"B-25", kR12, "F1 + A1 + A2"},
      {"B-26", kR12, "G2 + E1"},
      {"B-27", k2R1R2, "E2 + A1 + G1"},
      {"B-28", k2R1R2, "E2 + A1 + C2 + E1"},
      {"B-29", k2R1R2, "E2 + F2 + 2A1"},
      {"B-30", k2R1R2, "E2 + A1 + B1 + E1"},
      {"B-31", k2R1R2, "E2 + F1 + 2A1"},
      {"B-32", kR1_2R2, "F1 + E1 + 2A2"},
      {"B-33", kR1_2R2, "A2 + G2 + E1"},
      {"B-34", kR1_2R2, "F2 + E1 + 2A2"},
      {"B-35", k3R1_2R2, "F1 + E1 + 2E2 + 2A1"},
      {"B-36", k3R1_2R2, "F2 + E1 + 2E2 + 2A1"},
      {"B-37", k2R1_2R2, "G2 + E1 + E2 + A1"},
  };
  return rows;
}

void add_quadruple_pattern(InequalitySystem& sys, const BoundConstants& c) {
  const auto& pattern = quadruple_pattern();
  const auto& defs = constant_definitions(c.family());
  for (std::size_t i = 0; i < defs.size(); ++i)
    sys.add_row(pattern[i], c.at(defs[i].label), defs[i].row, {{defs[i].label, Rational(1)}});
}

void flag_all(InequalitySystem& sys) {
  for (const auto& v : sys.variables()) sys.set_nonnegative(v);
}

void require_family(const BoundConstants& c, SystemKind kind) {
  if (c.family() != system_family(kind))
    throw IncompatibleError("system " + std::string(system_id(kind)) + " needs " +
                            std::string(family_id(system_family(kind))) + " constants, got " +
                            std::string(family_id(c.family())));
}

}  // namespace

InequalitySystem build_system(const BoundConstants& c, SystemKind kind) {
  require_family(c, kind);
  switch (kind) {
    case SystemKind::Thm3Quadruple:
    case SystemKind::DmtQuadruple: {
      InequalitySystem sys({"T1", "S1", "T2", "S2"});
      add_quadruple_pattern(sys, c);
      flag_all(sys);
      return sys;
    }
    case SystemKind::Thm5Quadruple: {
      InequalitySystem sys({"T1", "S1", "T2", "S2"});
      const std::vector<RowSpec> rows = {
          {"13-1", {{"S1", 1}}, "A1"},
          {"13-2", {{"S1", 1}, {"T1", 1}}, "D1"},
          {"13-3", {{"S1", 1}, {"T2", 1}}, "E1"},
          {"13-4", {{"S1", 1}, {"T1", 1}, {"T2", 1}}, "G1"},
          {"13-5", {{"S2", 1}}, "A2"},
          {"13-6", {{"S2", 1}, {"T2", 1}}, "D2"},
          {"13-7", {{"S2", 1}, {"T1", 1}}, "E2"},
          {"13-8", {{"S2", 1}, {"T2", 1}, {"T1", 1}}, "G2"},
      };
      add_rows(sys, c, rows);
      flag_all(sys);
      return sys;
    }
    case SystemKind::RtdQuintuple: {
      InequalitySystem sys({"T1", "S1a", "S1b", "T2", "S2"});
      const LinearExpr lhs[8] = {
          {{"T1", 1}, {"T2", 1}, {"S1a", 1}, {"S1b", 1}},
          {{"T2", 1}, {"S1a", 1}, {"S1b", 1}},
          {{"S1a", 1}, {"S1b", 1}},
          {{"T2", 1}, {"S1b", 1}},
          {{"S1b", 1}},
          {{"T1", 1}, {"T2", 1}, {"S2", 1}},
          {{"T2", 1}, {"S2", 1}},
          {{"S2", 1}},
      };
      const auto& defs = constant_definitions(Family::Rtd);
      for (std::size_t i = 0; i < defs.size(); ++i)
        sys.add_row(lhs[i], c.at(defs[i].label), defs[i].row, {{defs[i].label, Rational(1)}});
      flag_all(sys);
      return sys;
    }
    case SystemKind::Thm4RatePair:
    case SystemKind::Thm6RatePair:
    case SystemKind::TransitionList: {
      InequalitySystem sys({"R1", "R2"});
      add_rows(sys, c,
               kind == SystemKind::Thm4RatePair   ? thm4_rows()
               : kind == SystemKind::Thm6RatePair ? thm6_rows()
                                                  : transition_rows());
      flag_all(sys);
      return sys;
    }
  }
  throw ModelError("unknown system kind");
}

std::vector<std::string> row_labels(SystemKind kind) {
  std::vector<std::string> out;
  switch (kind) {
    case SystemKind::Thm4RatePair:
      for (const auto& r : thm4_rows()) out.emplace_back(r.label);
      break;
    case SystemKind::Thm6RatePair:
      for (const auto& r : thm6_rows()) out.emplace_back(r.label);
      break;
    case SystemKind::TransitionList:
      for (const auto& r : transition_rows()) out.emplace_back(r.label);
      break;
    case SystemKind::Thm5Quadruple:
      for (int i = 1; i <= 8; ++i) out.push_back("13-" + std::to_string(i));
      break;
    default:
      for (const auto& d : constant_definitions(system_family(kind))) out.push_back(d.row);
  }
  return out;
}

InequalitySystem binning_budget_system(const JointDistribution& d) {
  if (!validate_factorization(d, with_channel(factorization(Form::Hod)), kFactorizationRejectTolerance).valid)
    throw ModelError("binning budget needs a distribution of form hod9");
  // Common offset of every receiver-2 constraint.
  const InfoExpr base = parse_expr("I(U2;W2|Q) + I(W1;W2U2|Q)");
  auto k = [&](std::string_view channel_term) {
    InfoExpr e = base;
    for (const auto& t : parse_expr(channel_term)) e.push_back(t);
    return eval(d, e);
  };
  const double pen_w = eval(d, parse_expr("I(W2;W1U1|Q)"));
  const double pen_u = eval(d, parse_expr("I(U2;U1W1W2|Q)"));

  InequalitySystem sys({"S2", "T2", "s2", "t2", "T1"});
  sys.add_row({{"s2", 1}}, k("I(Y2;U2|QW1W2)"), "A-s2", {{"K.s2", 1}});
  sys.add_row({{"T1", 1}}, k("I(Y2;W1|QU2W2)"), "A-T1", {{"K.T1", 1}});
  sys.add_row({{"t2", 1}}, k("I(Y2;W2|QW1U2)"), "A-t2", {{"K.t2", 1}});
  sys.add_row({{"s2", 1}, {"T1", 1}}, k("I(Y2;U2W1|QW2)"), "A-s2T1", {{"K.s2T1", 1}});
  sys.add_row({{"s2", 1}, {"t2", 1}}, k("I(Y2;U2W2|QW1)"), "A-s2t2", {{"K.s2t2", 1}});
  sys.add_row({{"T1", 1}, {"t2", 1}}, k("I(Y2;W1W2|QU2)"), "A-T1t2", {{"K.T1t2", 1}});
  sys.add_row({{"T1", 1}, {"s2", 1}, {"t2", 1}}, k("I(Y2;U2W1W2|Q)"), "A-T1s2t2", {{"K.T1s2t2", 1}});
  sys.add_row({{"T2", 1}, {"t2", -1}}, -pen_w, "bin-w2", {{"P.w2", -1}});
  sys.add_row({{"S2", 1}, {"s2", -1}}, -pen_u, "bin-u2", {{"P.u2", -1}});
  sys.set_nonnegative("S2");
  sys.set_nonnegative("T2");
  sys.set_nonnegative("T1");
  return sys;
}

std::vector<std::string> binning_target_rows() {
  return {"10-8", "10-9", "10-10", "10-11", "10-12", "10-13", "10-14"};
}

InequalitySystem project_rate_pair(const InequalitySystem& sys) {
  InequalitySystem cur = sys;
  std::vector<std::string> eliminate;
  if (cur.has_variable("S1a")) {
    cur = substitute(cur, "S1a", {{"R1", 1}, {"T1", -1}, {"S1b", -1}});
    eliminate = {"T1", "S1b"};
  } else {
    cur = substitute(cur, "S1", {{"R1", 1}, {"T1", -1}});
    eliminate = {"T1"};
  }
  cur = substitute(cur, "S2", {{"R2", 1}, {"T2", -1}});
  eliminate.push_back("T2");
  for (const auto& v : eliminate) cur = fm_eliminate(cur, v);
  return cur.reordered({"R1", "R2"});
}

SystemKind quadruple_of(Family f) {
  switch (f) {
    case Family::Hod:
      return SystemKind::Thm3Quadruple;
    case Family::Dmt:
      return SystemKind::DmtQuadruple;
    case Family::Rtd:
      return SystemKind::RtdQuintuple;
    case Family::Hod1:
      return SystemKind::Thm5Quadruple;
  }
  return SystemKind::Thm3Quadruple;
}

bool has_stated_rate_pair(Family f) { return f == Family::Hod || f == Family::Hod1; }

SystemKind stated_rate_pair(Family f) {
  if (f == Family::Hod) return SystemKind::Thm4RatePair;
  if (f == Family::Hod1) return SystemKind::Thm6RatePair;
  throw ModelError("family " + std::string(family_id(f)) + " has no stated rate-pair system");
}

}  // namespace rrk
