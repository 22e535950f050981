#include "rrk/info.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "rrk/errors.hpp"

namespace rrk {

namespace {

bool has(const VarList& l, Var v) { return std::find(l.begin(), l.end(), v) != l.end(); }

VarList unite(const VarList& a, const VarList& b) {
  VarList out = a;
  for (Var v : b)
    if (!has(out, v)) out.push_back(v);
  return out;
}

double joint_entropy(const JointDistribution& d, const VarList& vars) {
  if (vars.empty()) return 0.0;
  const JointDistribution m = marginalize(d, vars);
  double h = 0.0;
  for (double p : m.table())
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

}  // namespace

double entropy(const JointDistribution& d, const VarList& vars, const VarList& given) {
  if (vars.empty()) throw ModelError("entropy of an empty variable set");
  for (Var v : unite(vars, given)) (void)d.position(v);
  return joint_entropy(d, unite(vars, given)) - joint_entropy(d, given);
}

double cmi(const JointDistribution& d, const VarList& a, const VarList& b, const VarList& c) {
  if (a.empty() || b.empty()) throw ModelError("mutual information needs two nonempty sets");
  for (Var v : a)
    if (has(b, v) || has(c, v)) throw ModelError("mutual information sets overlap");
  for (Var v : b)
    if (has(c, v)) throw ModelError("mutual information sets overlap");
  return joint_entropy(d, unite(a, c)) + joint_entropy(d, unite(b, c)) - joint_entropy(d, unite(unite(a, b), c)) -
         joint_entropy(d, c);
}

double clamp_for_report(double bits) { return (bits < 0.0 && bits >= -1e-12) ? 0.0 : bits; }

std::string InfoTerm::str() const {
  std::string out = sign < 0 ? "-" : "+";
  if (coefficient != Rational(1)) out += coefficient.str();
  if (kind == Kind::Entropy)
    out += "H(" + format_vars(left);
  else
    out += "I(" + format_vars(left) + ";" + format_vars(right);
  if (!given.empty()) out += "|" + format_vars(given);
  return out + ")";
}

InfoTerm mi(VarList a, VarList b, VarList c, int sign) {
  InfoTerm t;
  t.left = std::move(a);
  t.right = std::move(b);
  t.given = std::move(c);
  t.sign = sign;
  return t;
}

double eval_term(const JointDistribution& d, const InfoTerm& t) {
  const double base = t.kind == InfoTerm::Kind::Entropy ? entropy(d, t.left, t.given) : cmi(d, t.left, t.right, t.given);
  return t.sign * t.coefficient.to_double() * base;
}

double eval(const JointDistribution& d, const InfoExpr& e) {
  double sum = 0.0;
  for (const auto& t : e) sum += eval_term(d, t);
  return sum;
}

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  InfoExpr parse() {
    InfoExpr out;
    skip();
    if (pos_ == s_.size()) return out;
    bool first = true;
    while (pos_ < s_.size()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      out.push_back(term(sign));
      first = false;
      skip();
    }
    return out;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("information expression '" + std::string(s_) + "': " + msg + " at offset " +
                     std::to_string(pos_));
  }
  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  InfoTerm term(int sign) {
    InfoTerm t;
    t.sign = sign;
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/')) ++pos_;
    if (pos_ > start) t.coefficient = Rational::parse(std::string(s_.substr(start, pos_ - start)));
    skip();
    if (peek() == 'I')
      t.kind = InfoTerm::Kind::MutualInformation;
    else if (peek() == 'H')
      t.kind = InfoTerm::Kind::Entropy;
    else
      fail("expected I(...) or H(...)");
    ++pos_;
    expect('(');
    t.left = vars();
    if (t.kind == InfoTerm::Kind::MutualInformation) {
      expect(';');
      t.right = vars();
    }
    skip();
    if (peek() == '|') {
      ++pos_;
      t.given = vars();
    }
    expect(')');
    const VarList* sets[] = {&t.left, &t.right, &t.given};
    for (int i = 0; i < 3; ++i)
      for (std::size_t k = 0; k < sets[i]->size(); ++k)
        for (int j = i; j < 3; ++j)
          for (std::size_t m = (i == j ? k + 1 : 0); m < sets[j]->size(); ++m)
            if ((*sets[i])[k] == (*sets[j])[m]) fail("variable " + std::string(var_name((*sets[i])[k])) + " repeated");
    return t;
  }

  VarList vars() {
    static constexpr std::string_view names[] = {"U1a", "U1b", "Q", "U1", "W1", "U2", "W2", "X1", "X2", "Y1", "Y2"};
    VarList out;
    skip();
    while (pos_ < s_.size()) {
      bool matched = false;
      for (auto n : names) {
        if (s_.substr(pos_, n.size()) == n) {
          out.push_back(parse_var(n));
          pos_ += n.size();
          matched = true;
          break;
        }
      }
      if (!matched) break;
      skip();
    }
    if (out.empty()) fail("expected variable names");
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

VarList replace_in(const VarList& l, Var from, Var to) {
  VarList out;
  for (Var v : l) {
    Var w = v == from ? to : v;
    if (!has(out, w)) out.push_back(w);
  }
  return out;
}

}  // namespace

InfoExpr parse_expr(std::string_view text) { return ExprParser(text).parse(); }

std::string to_string(const InfoExpr& e) {
  std::string out;
  for (const auto& t : e) {
    if (!out.empty()) out += " ";
    out += t.str();
  }
  return out.empty() ? "0" : out;
}

InfoExpr substitute_vars(const InfoExpr& e, Var from, Var to) {
  InfoExpr out = e;
  for (auto& t : out) {
    t.left = replace_in(t.left, from, to);
    t.right = replace_in(t.right, from, to);
    t.given = replace_in(t.given, from, to);
  }
  return out;
}

}  // namespace rrk
