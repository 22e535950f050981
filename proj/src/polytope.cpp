#include "rrk/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iterator>
#include <limits>
#include <numeric>
#include <sstream>

#include "rrk/errors.hpp"

namespace rrk {

bool Halfspace::is_constant() const {
  return std::all_of(coefficients.begin(), coefficients.end(), [](const Rational& r) { return r.is_zero(); });
}

std::string format_terms(const BoundTerms& terms) {
  std::string out;
  for (const auto& [name, c] : terms) {
    if (c.is_zero()) continue;
    const bool neg = c.sign() < 0;
    if (out.empty())
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    const Rational m = abs(c);
    if (m != Rational(1)) out += m.str() + " ";
    out += name;
  }
  return out.empty() ? "0" : out;
}

InequalitySystem::InequalitySystem(std::vector<std::string> variables)
    : vars_(std::move(variables)), nonneg_(vars_.size(), false) {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    for (std::size_t j = i + 1; j < vars_.size(); ++j)
      if (vars_[i] == vars_[j]) throw ModelError("duplicate rate variable " + vars_[i]);
}

bool InequalitySystem::has_variable(std::string_view name) const noexcept {
  return std::find(vars_.begin(), vars_.end(), name) != vars_.end();
}

std::size_t InequalitySystem::index_of(std::string_view name) const {
  auto it = std::find(vars_.begin(), vars_.end(), name);
  if (it == vars_.end()) throw ModelError("unknown rate variable " + std::string(name));
  return static_cast<std::size_t>(it - vars_.begin());
}

const Halfspace& InequalitySystem::row(std::string_view label) const {
  for (const auto& h : rows_)
    if (h.label == label) return h;
  throw ModelError("no row labelled " + std::string(label));
}

void InequalitySystem::add_row(Halfspace h) {
  if (h.coefficients.size() != vars_.size()) throw ModelError("row width does not match the variable count");
  if (!std::isfinite(h.bound)) throw ModelError("row " + h.label + " has a non-finite bound");
  rows_.push_back(std::move(h));
}

void InequalitySystem::add_row(const LinearExpr& coefficients, double bound, std::string label, BoundTerms terms) {
  Halfspace h;
  h.coefficients.assign(vars_.size(), Rational(0));
  for (const auto& [name, c] : coefficients) h.coefficients[index_of(name)] += c;
  h.bound = bound;
  h.label = std::move(label);
  h.terms = std::move(terms);
  add_row(std::move(h));
}

void InequalitySystem::set_nonnegative(std::string_view var, bool value) { nonneg_[index_of(var)] = value; }

std::vector<Halfspace> InequalitySystem::all_rows() const {
  std::vector<Halfspace> out = rows_;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (!nonneg_[i]) continue;
    Halfspace h;
    h.coefficients.assign(vars_.size(), Rational(0));
    h.coefficients[i] = Rational(-1);
    h.label = vars_[i] + ">=0";
    out.push_back(std::move(h));
  }
  return out;
}

InequalitySystem InequalitySystem::reordered(const std::vector<std::string>& order) const {
  if (order.size() != vars_.size()) throw IncompatibleError("variable sets differ");
  std::vector<std::size_t> from(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!has_variable(order[i])) throw IncompatibleError("variable sets differ: " + order[i]);
    from[i] = index_of(order[i]);
  }
  InequalitySystem out(order);
  for (std::size_t i = 0; i < order.size(); ++i) out.nonneg_[i] = nonneg_[from[i]];
  for (const auto& h : rows_) {
    Halfspace g = h;
    for (std::size_t i = 0; i < order.size(); ++i) g.coefficients[i] = h.coefficients[from[i]];
    out.rows_.push_back(std::move(g));
  }
  out.infeasible_ = infeasible_;
  return out;
}

std::string InequalitySystem::format_row(const Halfspace& h) const {
  std::string lhs;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const Rational& c = h.coefficients[i];
    if (c.is_zero()) continue;
    const bool neg = c.sign() < 0;
    if (lhs.empty())
      lhs += neg ? "-" : "";
    else
      lhs += neg ? " - " : " + ";
    const Rational m = abs(c);
    if (m != Rational(1)) lhs += m.str() + " ";
    lhs += vars_[i];
  }
  if (lhs.empty()) lhs = "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", h.bound);
  std::string out = lhs + " <= " + buf;
  if (!h.terms.empty()) out += "  [" + format_terms(h.terms) + "]";
  return out;
}

std::string InequalitySystem::str() const {
  std::ostringstream os;
  for (const auto& h : rows_) os << (h.label.empty() ? "-" : h.label) << ": " << format_row(h) << "\n";
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (nonneg_[i]) os << vars_[i] << " >= 0\n";
  if (infeasible_) os << "(infeasible)\n";
  return os.str();
}

namespace {

// Positive scale that turns the coefficient vector into coprime integers.
Rational primitive_scale(const std::vector<Rational>& a) {
  std::int64_t l = 1;
  for (const auto& c : a) {
    if (c.is_zero()) continue;
    const std::int64_t g = std::gcd(l, c.den());
    l = (Rational(l / g) * Rational(c.den())).num();
  }
  std::int64_t g = 0;
  for (const auto& c : a) {
    if (c.is_zero()) continue;
    g = std::gcd(g, (Rational(c.num()) * Rational(l / c.den())).num());
  }
  if (g == 0) return Rational(1);
  return Rational(l, g < 0 ? -g : g);
}

void scale_row(Halfspace& h, const Rational& s) {
  if (s == Rational(1)) return;
  for (auto& c : h.coefficients) c *= s;
  h.bound *= s.to_double();
  for (auto& [k, v] : h.terms) v *= s;
}

BoundTerms combine_terms(const BoundTerms& a, const Rational& sa, const BoundTerms& b, const Rational& sb) {
  BoundTerms out;
  for (const auto& [k, v] : a) out[k] += v * sa;
  for (const auto& [k, v] : b) out[k] += v * sb;
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

// Merges rows with equal coefficients, keeping the first position and the
// smaller bound.
std::vector<Halfspace> merge_duplicates(std::vector<Halfspace> rows) {
  std::vector<Halfspace> out;
  std::map<std::vector<Rational>, std::size_t> seen;
  for (auto& h : rows) {
    auto [it, fresh] = seen.emplace(h.coefficients, out.size());
    if (fresh) {
      out.push_back(std::move(h));
    } else if (h.bound < out[it->second].bound) {
      out[it->second] = std::move(h);
    }
  }
  return out;
}

// ---- full elimination oracle -------------------------------------------

struct Work {
  std::vector<Rational> a;
  double b = 0.0;
  std::vector<std::uint32_t> hist;  // sorted indices of the source rows
};

struct Elimination {
  std::vector<std::size_t> order;
  std::vector<std::vector<Work>> stages;  // stages[k]: rows mentioning order[k] before it is eliminated
  std::vector<Work> rest;                 // rows left once every column is gone
  double min_constant = std::numeric_limits<double>::infinity();
};

bool zero_in(const Work& w, const std::vector<std::size_t>& cols) {
  return std::all_of(cols.begin(), cols.end(), [&](std::size_t c) { return w.a[c].is_zero(); });
}

void normalize(Work& w) {
  const Rational s = primitive_scale(w.a);
  if (s == Rational(1)) return;
  for (auto& c : w.a) c *= s;
  w.b *= s.to_double();
}

std::vector<std::uint32_t> union_hist(const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& y) {
  std::vector<std::uint32_t> out;
  out.reserve(x.size() + y.size());
  std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

// Eliminates `cols` (greedy order) with Chernikov's history rule; rows that
// lose all of `cols` and every other column become constants or go to rest.
Elimination eliminate_columns(std::vector<Work> rows, std::vector<std::size_t> cols) {
  Elimination el;
  std::vector<std::size_t> remaining = cols;
  auto settle = [&](std::vector<Work>& rs) {
    std::vector<Work> keep;
    for (auto& w : rs) {
      if (zero_in(w, remaining)) {
        const bool constant = std::all_of(w.a.begin(), w.a.end(), [](const Rational& r) { return r.is_zero(); });
        if (constant)
          el.min_constant = std::min(el.min_constant, w.b);
        else
          el.rest.push_back(std::move(w));
      } else {
        keep.push_back(std::move(w));
      }
    }
    rs = std::move(keep);
  };
  settle(rows);
  std::size_t eliminated = 0;
  while (!remaining.empty()) {
    std::size_t best = 0;
    long long best_cost = std::numeric_limits<long long>::max();
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      long long pos = 0, neg = 0;
      for (const auto& w : rows) {
        const int s = w.a[remaining[k]].sign();
        pos += s > 0;
        neg += s < 0;
      }
      const long long cost = pos * neg - pos - neg;
      if (cost < best_cost) {
        best_cost = cost;
        best = k;
      }
    }
    const std::size_t col = remaining[best];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    ++eliminated;

    std::vector<const Work*> up, down;
    std::vector<Work> next;
    for (const auto& w : rows) {
      const int s = w.a[col].sign();
      if (s > 0)
        up.push_back(&w);
      else if (s < 0)
        down.push_back(&w);
      else
        next.push_back(w);
    }
    for (const Work* p : up) {
      const Rational sp = Rational(1) / p->a[col];
      for (const Work* n : down) {
        std::vector<std::uint32_t> h = union_hist(p->hist, n->hist);
        if (h.size() > eliminated + 1) continue;
        const Rational sn = Rational(1) / (-n->a[col]);
        Work w;
        w.a.resize(p->a.size());
        for (std::size_t j = 0; j < w.a.size(); ++j) w.a[j] = p->a[j] * sp + n->a[j] * sn;
        w.a[col] = Rational(0);
        w.b = p->b * sp.to_double() + n->b * sn.to_double();
        w.hist = std::move(h);
        normalize(w);
        next.push_back(std::move(w));
      }
    }
    std::vector<Work> merged;
    std::map<std::vector<Rational>, std::size_t> seen;
    for (auto& w : next) {
      auto [it, fresh] = seen.emplace(w.a, merged.size());
      if (fresh) {
        merged.push_back(std::move(w));
      } else {
        Work& o = merged[it->second];
        if (w.b < o.b || (w.b == o.b && w.hist.size() < o.hist.size())) o = std::move(w);
      }
    }
    el.order.push_back(col);
    el.stages.push_back(std::move(rows));
    rows = std::move(merged);
    settle(rows);
  }
  for (auto& w : rows) el.rest.push_back(std::move(w));
  return el;
}

// Picks values for the eliminated columns, latest first, given values for
// every column that was not eliminated.
void back_substitute(const Elimination& el, std::vector<double>& x) {
  for (std::size_t k = el.order.size(); k-- > 0;) {
    const std::size_t col = el.order[k];
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& w : el.stages[k]) {
      const double a = w.a[col].to_double();
      if (a == 0.0) continue;
      double r = w.b;
      for (std::size_t j = 0; j < w.a.size(); ++j)
        if (j != col && !w.a[j].is_zero()) r -= w.a[j].to_double() * x[j];
      if (a > 0)
        hi = std::min(hi, r / a);
      else
        lo = std::max(lo, r / a);
    }
    double v = 0.0;
    if (lo <= hi)
      v = std::clamp(0.0, lo, hi);
    else if (std::isfinite(lo) && std::isfinite(hi))
      v = 0.5 * (lo + hi);
    else
      v = std::isfinite(lo) ? lo : hi;
    x[col] = v;
  }
}

std::vector<Work> to_work(const std::vector<Halfspace>& rows, std::size_t width) {
  std::vector<Work> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Work w;
    w.a = rows[i].coefficients;
    w.a.resize(width, Rational(0));
    w.b = rows[i].bound;
    w.hist = {static_cast<std::uint32_t>(i)};
    normalize(w);
    out.push_back(std::move(w));
  }
  return out;
}

struct SupportResult {
  Support support;
  std::vector<double> witness;
};

SupportResult support_with_witness(const InequalitySystem& sys, std::span<const Rational> d, double tol,
                                   double unbounded_target) {
  const std::size_t n = sys.dimension();
  if (d.size() != n) throw ModelError("direction has the wrong dimension");
  std::vector<Work> rows = to_work(sys.all_rows(), n + 1);
  Work z;
  z.a.assign(n + 1, Rational(0));
  for (std::size_t j = 0; j < n; ++j) z.a[j] = -d[j];
  z.a[n] = Rational(1);
  z.b = 0.0;
  z.hist = {static_cast<std::uint32_t>(rows.size())};
  rows.push_back(std::move(z));
  std::vector<std::size_t> cols(n);
  std::iota(cols.begin(), cols.end(), 0);
  const Elimination el = eliminate_columns(std::move(rows), cols);

  SupportResult res;
  if (el.min_constant < -tol) {
    res.support.status = Support::Status::Empty;
    return res;
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& w : el.rest) {
    const double a = w.a[n].to_double();
    if (a > 0) best = std::min(best, w.b / a);
  }
  std::vector<double> x(n + 1, 0.0);
  if (std::isfinite(best)) {
    res.support = {Support::Status::Bounded, best};
    x[n] = best;
  } else {
    res.support = {Support::Status::Unbounded, best};
    x[n] = unbounded_target;
  }
  back_substitute(el, x);
  x.resize(n);
  res.witness = std::move(x);
  return res;
}

double row_scale(const Halfspace& h) {
  double s = 0.0;
  for (const auto& c : h.coefficients) s += c.to_double() * c.to_double();
  return std::sqrt(s);
}

}  // namespace

InequalitySystem fm_eliminate(const InequalitySystem& sys, std::string_view var, std::string* warning) {
  if (!sys.has_variable(var)) {
    if (warning) *warning = "variable " + std::string(var) + " does not occur; system unchanged";
    return sys;
  }
  const std::size_t col = sys.index_of(var);
  std::vector<Halfspace> rows = sys.rows();
  if (sys.nonnegative(col)) {
    Halfspace h;
    h.coefficients.assign(sys.dimension(), Rational(0));
    h.coefficients[col] = Rational(-1);
    h.label = std::string(var) + ">=0";
    rows.push_back(std::move(h));
  }

  std::vector<Halfspace> out;
  std::vector<const Halfspace*> up, down;
  for (const auto& h : rows) {
    const int s = h.coefficients[col].sign();
    if (s > 0)
      up.push_back(&h);
    else if (s < 0)
      down.push_back(&h);
    else
      out.push_back(h);
  }
  for (const Halfspace* p : up) {
    const Rational sp = Rational(1) / p->coefficients[col];
    for (const Halfspace* n : down) {
      const Rational sn = Rational(1) / (-n->coefficients[col]);
      Halfspace h;
      h.coefficients.resize(sys.dimension());
      for (std::size_t j = 0; j < h.coefficients.size(); ++j)
        h.coefficients[j] = p->coefficients[j] * sp + n->coefficients[j] * sn;
      h.coefficients[col] = Rational(0);
      h.bound = p->bound * sp.to_double() + n->bound * sn.to_double();
      h.terms = combine_terms(p->terms, sp, n->terms, sn);
      h.label = p->label + "&" + n->label;
      scale_row(h, primitive_scale(h.coefficients));
      out.push_back(std::move(h));
    }
  }

  std::vector<std::string> vars = sys.variables();
  vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(col));
  InequalitySystem res(vars);
  for (std::size_t i = 0, k = 0; i < sys.dimension(); ++i) {
    if (i == col) continue;
    res.set_nonnegative(vars[k++], sys.nonnegative(i));
  }
  bool infeasible = sys.flagged_infeasible();
  for (auto& h : merge_duplicates(std::move(out))) {
    h.coefficients.erase(h.coefficients.begin() + static_cast<std::ptrdiff_t>(col));
    if (h.is_constant() && h.bound < -kFacetTolerance) infeasible = true;
    res.add_row(std::move(h));
  }
  res.flag_infeasible(infeasible);
  return res;
}

InequalitySystem substitute(const InequalitySystem& sys, std::string_view var, const LinearExpr& expr) {
  const std::size_t col = sys.index_of(var);
  const bool keeps_var =
      std::any_of(expr.begin(), expr.end(), [&](const auto& t) { return t.first == var && !t.second.is_zero(); });

  std::vector<std::string> vars;
  for (std::size_t i = 0; i < sys.dimension(); ++i)
    if (i != col || keeps_var) vars.push_back(sys.variables()[i]);
  for (const auto& [name, c] : expr)
    if (std::find(vars.begin(), vars.end(), name) == vars.end()) vars.push_back(name);

  InequalitySystem res(vars);
  for (std::size_t i = 0; i < sys.dimension(); ++i)
    if ((i != col || keeps_var) && sys.nonnegative(i)) res.set_nonnegative(sys.variables()[i]);

  auto rewrite = [&](const Halfspace& h) {
    Halfspace g;
    g.coefficients.assign(vars.size(), Rational(0));
    for (std::size_t i = 0; i < sys.dimension(); ++i)
      if (i != col) g.coefficients[res.index_of(sys.variables()[i])] += h.coefficients[i];
    for (const auto& [name, c] : expr) g.coefficients[res.index_of(name)] += h.coefficients[col] * c;
    g.bound = h.bound;
    g.label = h.label;
    g.terms = h.terms;
    return g;
  };
  for (const auto& h : sys.rows()) res.add_row(rewrite(h));
  if (sys.nonnegative(col) && !keeps_var) {
    Halfspace h;
    h.coefficients.assign(sys.dimension(), Rational(0));
    h.coefficients[col] = Rational(-1);
    h.label = std::string(var) + ">=0";
    res.add_row(rewrite(h));
  }
  res.flag_infeasible(sys.flagged_infeasible());
  return res;
}

bool lp_feasible(const InequalitySystem& sys, std::span<const double> point, double tol) {
  if (point.size() != sys.dimension()) throw ModelError("point has the wrong dimension");
  for (const auto& h : sys.all_rows()) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < point.size(); ++j) lhs += h.coefficients[j].to_double() * point[j];
    if (lhs - h.bound > tol * std::max(1.0, row_scale(h))) return false;
  }
  return true;
}

Feasibility lp_feasible(const InequalitySystem& sys, double tol) {
  const std::size_t n = sys.dimension();
  std::vector<std::size_t> cols(n);
  std::iota(cols.begin(), cols.end(), 0);
  const Elimination el = eliminate_columns(to_work(sys.all_rows(), n), cols);
  Feasibility f;
  f.worst_residual = std::isfinite(el.min_constant) ? std::min(0.0, el.min_constant) : 0.0;
  f.feasible = !(el.min_constant < -tol);
  if (f.feasible) {
    f.witness.assign(n, 0.0);
    back_substitute(el, f.witness);
  }
  return f;
}

Support support(const InequalitySystem& sys, std::span<const Rational> direction, double tol) {
  return support_with_witness(sys, direction, tol, 0.0).support;
}

Implication implies(const InequalitySystem& sys, const Halfspace& row, double tol) {
  if (row.coefficients.size() != sys.dimension()) throw ModelError("row has the wrong dimension");
  Implication imp;
  // A row of the system that is a positive multiple of the query settles it.
  const Rational qs = primitive_scale(row.coefficients);
  std::vector<Rational> qa = row.coefficients;
  for (auto& c : qa) c *= qs;
  if (!row.is_constant()) {
    for (const auto& h : sys.all_rows()) {
      const Rational hs = primitive_scale(h.coefficients);
      std::vector<Rational> ha = h.coefficients;
      for (auto& c : ha) c *= hs;
      if (ha == qa && h.bound * hs.to_double() <= row.bound * qs.to_double() + tol) {
        imp.implied = true;
        return imp;
      }
    }
  }
  const SupportResult s = support_with_witness(sys, row.coefficients, tol, row.bound + 1.0 + std::fabs(row.bound));
  switch (s.support.status) {
    case Support::Status::Empty:
      imp.implied = true;
      break;
    case Support::Status::Bounded:
      imp.excess = s.support.value - row.bound;
      imp.implied = imp.excess <= tol;
      break;
    case Support::Status::Unbounded:
      imp.excess = std::numeric_limits<double>::infinity();
      imp.implied = false;
      break;
  }
  if (!imp.implied) imp.witness = s.witness;
  return imp;
}

InequalitySystem remove_redundant(const InequalitySystem& sys, double tol) {
  const Feasibility f = lp_feasible(sys, tol);
  if (sys.flagged_infeasible() || !f.feasible) {
    InequalitySystem out(sys.variables());
    for (std::size_t i = 0; i < sys.dimension(); ++i) out.set_nonnegative(sys.variables()[i], sys.nonnegative(i));
    Halfspace h;
    h.coefficients.assign(sys.dimension(), Rational(0));
    h.bound = std::min(f.worst_residual, -1.0);
    h.label = "infeasible";
    out.add_row(std::move(h));
    out.flag_infeasible();
    return out;
  }
  std::vector<bool> kept(sys.size(), true);
  for (std::size_t i = 0; i < sys.size(); ++i) {
    InequalitySystem others(sys.variables());
    for (std::size_t v = 0; v < sys.dimension(); ++v) others.set_nonnegative(sys.variables()[v], sys.nonnegative(v));
    for (std::size_t j = 0; j < sys.size(); ++j)
      if (j != i && kept[j]) others.add_row(sys.rows()[j]);
    if (implies(others, sys.rows()[i], tol).implied) kept[i] = false;
  }
  InequalitySystem out(sys.variables());
  for (std::size_t v = 0; v < sys.dimension(); ++v) out.set_nonnegative(sys.variables()[v], sys.nonnegative(v));
  for (std::size_t i = 0; i < sys.size(); ++i)
    if (kept[i]) out.add_row(sys.rows()[i]);
  return out;
}

Containment contains(const InequalitySystem& outer, const InequalitySystem& inner, double tol) {
  const InequalitySystem o = outer.reordered(inner.variables());
  Containment c;
  for (const auto& h : o.all_rows()) {
    Implication imp = implies(inner, h, tol);
    if (!imp.implied && (c.holds || imp.excess > c.excess)) {
      c.holds = false;
      c.violated_label = h.label;
      c.excess = imp.excess;
      c.witness = std::move(imp.witness);
    }
  }
  return c;
}

double facet_distance(const InequalitySystem& sys, std::span<const double> point) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& h : sys.all_rows()) {
    const double s = row_scale(h);
    if (s == 0.0) continue;
    double lhs = 0.0;
    for (std::size_t j = 0; j < point.size(); ++j) lhs += h.coefficients[j].to_double() * point[j];
    best = std::min(best, std::fabs(lhs - h.bound) / s);
  }
  return best;
}

std::string_view shape_name(Polytope2D::Shape s) {
  switch (s) {
    case Polytope2D::Shape::Empty:
      return "empty";
    case Polytope2D::Shape::Point:
      return "point";
    case Polytope2D::Shape::Segment:
      return "segment";
    case Polytope2D::Shape::Polygon:
      return "polygon";
  }
  return "?";
}

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1);
}

}  // namespace

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.r1 < b.r1 || (a.r1 == b.r1 && a.r2 < b.r2);
  });
  std::vector<Point2> uniq;
  for (const auto& p : pts) {
    if (!uniq.empty() && std::fabs(uniq.back().r1 - p.r1) <= 1e-12 && std::fabs(uniq.back().r2 - p.r2) <= 1e-12)
      continue;
    uniq.push_back(p);
  }
  if (uniq.size() < 3) return uniq;
  // Collinearity threshold relative to the extent of the point set.
  double extent = 0.0;
  for (const auto& p : uniq) extent = std::max({extent, std::fabs(p.r1), std::fabs(p.r2)});
  const double eps = 1e-12 * std::max(1.0, extent * extent);
  std::vector<Point2> hull(2 * uniq.size());
  std::size_t k = 0;
  for (const auto& p : uniq) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= eps) --k;
    hull[k++] = p;
  }
  for (std::size_t i = uniq.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], uniq[i]) <= eps) --k;
    hull[k++] = uniq[i];
  }
  hull.resize(k - 1);
  return hull;
}

bool hull_contains(const std::vector<Point2>& hull, Point2 p, double tol) {
  if (hull.empty()) return false;
  if (hull.size() == 1) return std::hypot(p.r1 - hull[0].r1, p.r2 - hull[0].r2) <= tol;
  if (hull.size() == 2) {
    const Point2 &a = hull[0], &b = hull[1];
    const double len = std::hypot(b.r1 - a.r1, b.r2 - a.r2);
    if (std::fabs(cross(a, b, p)) > tol * std::max(len, 1.0)) return false;
    const double t = ((p.r1 - a.r1) * (b.r1 - a.r1) + (p.r2 - a.r2) * (b.r2 - a.r2)) / (len * len);
    return t >= -tol && t <= 1.0 + tol;
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2& a = hull[i];
    const Point2& b = hull[(i + 1) % hull.size()];
    const double len = std::hypot(b.r1 - a.r1, b.r2 - a.r2);
    if (cross(a, b, p) < -tol * std::max(len, 1.0)) return false;
  }
  return true;
}

Polytope2D vertices2d(const InequalitySystem& sys, double tol) {
  if (sys.dimension() != 2) throw IncompatibleError("vertex enumeration needs exactly two variables");
  Polytope2D out;
  if (sys.flagged_infeasible() || !lp_feasible(sys, tol).feasible) return out;
  const Rational dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const auto& d : dirs)
    if (support(sys, d, tol).status == Support::Status::Unbounded)
      throw ModelError("rate region is unbounded; cannot enumerate vertices");

  const std::vector<Halfspace> rows = sys.all_rows();
  std::vector<Point2> candidates;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double a1 = rows[i].coefficients[0].to_double(), b1 = rows[i].coefficients[1].to_double();
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const double a2 = rows[j].coefficients[0].to_double(), b2 = rows[j].coefficients[1].to_double();
      const double det = a1 * b2 - a2 * b1;
      if (std::fabs(det) < 1e-14) continue;
      const Point2 p{(rows[i].bound * b2 - rows[j].bound * b1) / det, (a1 * rows[j].bound - a2 * rows[i].bound) / det};
      const double xy[2] = {p.r1, p.r2};
      if (lp_feasible(sys, xy, tol)) candidates.push_back(p);
    }
  }
  // A feasible, bounded system whose rows never cross is a single point that
  // only the elimination witness can find (e.g. x = y = 0 written with flags).
  if (candidates.empty()) {
    const Feasibility f = lp_feasible(sys, tol);
    candidates.push_back({f.witness[0], f.witness[1]});
  }
  out.vertices = convex_hull(std::move(candidates));
  out.shape = out.vertices.size() == 1   ? Polytope2D::Shape::Point
              : out.vertices.size() == 2 ? Polytope2D::Shape::Segment
                                         : Polytope2D::Shape::Polygon;
  return out;
}

}  // namespace rrk
