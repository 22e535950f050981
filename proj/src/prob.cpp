#include "rrk/prob.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "rrk/errors.hpp"
#include "rrk/rng.hpp"

namespace rrk {

namespace {

constexpr double kSumTolerance = 1e-12;

constexpr std::array<std::pair<Var, std::string_view>, 11> kVarNames{{
    {Var::Q, "Q"},
    {Var::U1, "U1"},
    {Var::W1, "W1"},
    {Var::U2, "U2"},
    {Var::W2, "W2"},
    {Var::X1, "X1"},
    {Var::X2, "X2"},
    {Var::Y1, "Y1"},
    {Var::Y2, "Y2"},
    {Var::U1a, "U1a"},
    {Var::U1b, "U1b"},
}};

constexpr std::array<std::pair<Form, std::string_view>, 8> kFormIds{{
    {Form::IcGeneral, "ic1"},
    {Form::CrcGeneral, "crc2"},
    {Form::HanKobayashi, "hk3"},
    {Form::ChongMotaniGarg, "cmg4"},
    {Form::Dmt, "dmt5"},
    {Form::Rtd, "rtd7"},
    {Form::Hod, "hod9"},
    {Form::HodSuperposition, "hod12"},
}};

bool contains_var(const VarList& list, Var v) { return std::find(list.begin(), list.end(), v) != list.end(); }

std::vector<std::size_t> row_major_strides(const std::vector<VariableId>& vars) {
  std::vector<std::size_t> strides(vars.size(), 1);
  for (std::size_t i = vars.size(); i-- > 1;) strides[i - 1] = strides[i] * static_cast<std::size_t>(vars[i].size);
  return strides;
}

std::size_t product_of_sizes(const std::vector<VariableId>& vars) {
  std::size_t n = 1;
  for (const auto& v : vars) n *= static_cast<std::size_t>(v.size);
  return n;
}

// Visits every cell of a row-major table in order, maintaining the digit
// vector incrementally.
template <typename F>
void for_each_cell(const std::vector<VariableId>& vars, F&& f) {
  const std::size_t n = product_of_sizes(vars);
  std::vector<int> digits(vars.size(), 0);
  for (std::size_t cell = 0; cell < n; ++cell) {
    f(cell, std::as_const(digits));
    for (std::size_t i = vars.size(); i-- > 0;) {
      if (++digits[i] < vars[i].size) break;
      digits[i] = 0;
    }
  }
}

void check_slices(const ConditionalTable& t, const std::string& what) {
  const std::size_t width = t.slice_size();
  if (t.table.size() != width * t.slices())
    throw ModelError(what + ": table has " + std::to_string(t.table.size()) + " entries, expected " +
                     std::to_string(width * t.slices()));
  for (std::size_t s = 0; s < t.slices(); ++s) {
    double sum = 0.0;
    for (std::size_t k = 0; k < width; ++k) {
      double p = t.table[s * width + k];
      if (!(p >= 0.0) || !std::isfinite(p)) throw ModelError(what + ": negative or non-finite entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
      throw ModelError(what + ": conditional slice " + std::to_string(s) + " sums to " + std::to_string(sum));
  }
}

}  // namespace

std::string_view var_name(Var v) {
  for (const auto& [var, name] : kVarNames)
    if (var == v) return name;
  return "?";
}

Var parse_var(std::string_view name) {
  for (const auto& [var, n] : kVarNames)
    if (n == name) return var;
  throw ModelError("unknown variable '" + std::string(name) + "'");
}

std::string format_vars(const VarList& vars) {
  std::string out;
  for (Var v : vars) out += var_name(v);
  return out;
}

// ---------------------------------------------------------------------------
// JointDistribution

JointDistribution::JointDistribution(std::vector<VariableId> variables, std::vector<double> table)
    : vars_(std::move(variables)), table_(std::move(table)) {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].size < 1) throw ModelError("alphabet of " + std::string(var_name(vars_[i].var)) + " is empty");
    for (std::size_t j = 0; j < i; ++j)
      if (vars_[j].var == vars_[i].var)
        throw ModelError("variable " + std::string(var_name(vars_[i].var)) + " appears twice");
  }
  if (table_.size() != product_of_sizes(vars_))
    throw ModelError("joint table has " + std::to_string(table_.size()) + " cells, expected " +
                     std::to_string(product_of_sizes(vars_)));
  double sum = 0.0;
  for (double p : table_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ModelError("joint table has a negative or non-finite entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) throw ModelError("joint table sums to " + std::to_string(sum));
  strides_ = row_major_strides(vars_);
}

VarList JointDistribution::names() const {
  VarList out;
  out.reserve(vars_.size());
  for (const auto& v : vars_) out.push_back(v.var);
  return out;
}

bool JointDistribution::has(Var v) const noexcept {
  return std::any_of(vars_.begin(), vars_.end(), [v](const VariableId& id) { return id.var == v; });
}

std::size_t JointDistribution::position(Var v) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].var == v) return i;
  throw ModelError("distribution has no variable " + std::string(var_name(v)));
}

int JointDistribution::alphabet(Var v) const { return vars_[position(v)].size; }

double JointDistribution::at(std::span<const int> assignment) const {
  if (assignment.size() != vars_.size()) throw ModelError("assignment arity mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (assignment[i] < 0 || assignment[i] >= vars_[i].size) throw ModelError("assignment out of range");
    idx += static_cast<std::size_t>(assignment[i]) * strides_[i];
  }
  return table_[idx];
}

std::size_t ConditionalTable::slice_size() const { return product_of_sizes(targets); }
std::size_t ConditionalTable::slices() const { return product_of_sizes(given); }

// ---------------------------------------------------------------------------
// Factorization families

std::string_view form_id(Form f) {
  for (const auto& [form, id] : kFormIds)
    if (form == f) return id;
  return "?";
}

Form parse_form(std::string_view id) {
  for (const auto& [form, fid] : kFormIds)
    if (fid == id) return form;
  throw UsageError("unknown factorization form '" + std::string(id) + "'");
}

VarList FactorizationSpec::variables() const {
  VarList out;
  for (const auto& f : factors) out.insert(out.end(), f.targets.begin(), f.targets.end());
  return out;
}

bool FactorizationSpec::has_channel() const {
  return std::any_of(factors.begin(), factors.end(),
                     [](const Factor& f) { return contains_var(f.targets, Var::Y1); });
}

FactorizationSpec factorization(Form form) {
  using V = Var;
  const VarList aux{V::Q, V::U1, V::W1, V::U2, V::W2};
  std::vector<Factor> f;
  switch (form) {
    case Form::IcGeneral:
      f = {{{V::Q}, {}}, {{V::U1, V::W1}, {V::Q}}, {{V::U2, V::W2}, {V::Q}}, {{V::X1, V::X2}, aux}};
      break;
    case Form::CrcGeneral:
      f = {{{V::Q}, {}}, {{V::U1, V::W1}, {V::Q}}, {{V::U2, V::W2}, {V::Q, V::U1, V::W1}}, {{V::X1, V::X2}, aux}};
      break;
    case Form::HanKobayashi:
      f = {{{V::Q}, {}},     {{V::U1}, {V::Q}}, {{V::W1}, {V::Q}},
           {{V::U2}, {V::Q}}, {{V::W2}, {V::Q}}, {{V::X1, V::X2}, aux}};
      break;
    case Form::ChongMotaniGarg:
      f = {{{V::Q}, {}}, {{V::W1}, {V::Q}}, {{V::X1}, {V::Q, V::W1}}, {{V::W2}, {V::Q}}, {{V::X2}, {V::Q, V::W2}}};
      break;
    case Form::Dmt:
      f = {{{V::Q}, {}},
           {{V::W1}, {V::Q}},
           {{V::U1}, {V::Q}},
           {{V::W2}, {V::Q, V::U1, V::W1}},
           {{V::U2}, {V::Q, V::U1, V::W1}},
           {{V::X1, V::X2}, aux}};
      break;
    case Form::Rtd:
      f = {{{V::W1}, {}},
           {{V::U1a}, {V::W1}},
           {{V::W2}, {V::W1, V::U1a}},
           {{V::U2}, {V::W1, V::W2, V::U1a}},
           {{V::U1b}, {V::W1, V::W2, V::U1a, V::U2}},
           {{V::X1}, {V::U1a, V::W1}},
           {{V::X2}, {V::W1, V::W2, V::U1a, V::U1b, V::U2}}};
      break;
    case Form::Hod:
      f = {{{V::Q}, {}},
           {{V::W1}, {V::Q}},
           {{V::U1}, {V::Q, V::W1}},
           {{V::W2}, {V::Q, V::U1, V::W1}},
           {{V::U2}, {V::Q, V::U1, V::W1, V::W2}},
           {{V::X1, V::X2}, aux}};
      break;
    case Form::HodSuperposition:
      f = {{{V::Q}, {}},
           {{V::W1}, {V::Q}},
           {{V::X1}, {V::Q, V::W1}},
           {{V::W2}, {V::Q, V::W1, V::X1}},
           {{V::X2}, {V::Q, V::W2, V::W1, V::X1}}};
      break;
  }
  return {form, std::move(f)};
}

FactorizationSpec encoder_factorization(Form form) {
  FactorizationSpec spec = factorization(form);
  std::vector<Factor> out;
  for (auto& f : spec.factors) {
    if (f.targets == VarList{Var::X1, Var::X2}) {
      out.push_back({{Var::X1}, {Var::Q, Var::U1, Var::W1}});
      out.push_back({{Var::X2}, {Var::Q, Var::U2, Var::W2}});
    } else {
      out.push_back(std::move(f));
    }
  }
  spec.factors = std::move(out);
  return spec;
}

FactorizationSpec with_channel(FactorizationSpec spec) {
  if (!spec.has_channel()) spec.factors.push_back({{Var::Y1, Var::Y2}, {Var::X1, Var::X2}});
  return spec;
}

void check_spec(const FactorizationSpec& spec) {
  VarList seen;
  for (const auto& f : spec.factors) {
    if (f.targets.empty()) throw ModelError("factor without targets");
    for (Var g : f.given)
      if (!contains_var(seen, g))
        throw ModelError("factor " + describe(f) + " conditions on " + std::string(var_name(g)) +
                         " before it is generated");
    for (Var t : f.targets) {
      if (contains_var(seen, t) || contains_var(f.given, t))
        throw ModelError("variable " + std::string(var_name(t)) + " is a target more than once");
      seen.push_back(t);
    }
  }
}

std::string describe(const Factor& f) {
  std::string out = "p(" + format_vars(f.targets);
  if (!f.given.empty()) out += "|" + format_vars(f.given);
  return out + ")";
}

// ---------------------------------------------------------------------------
// Channel

ChannelModel::ChannelModel(int x1, int x2, int y1, int y2, std::vector<double> kernel)
    : x1_(x1), x2_(x2), y1_(y1), y2_(y2), kernel_(std::move(kernel)) {
  if (x1 < 1 || x2 < 1 || y1 < 1 || y2 < 1) throw ModelError("channel alphabets must be nonempty");
  ConditionalTable t{{{Var::Y1, y1}, {Var::Y2, y2}}, {{Var::X1, x1}, {Var::X2, x2}}, kernel_};
  check_slices(t, "channel kernel");
}

double ChannelModel::p(int y1, int y2, int x1, int x2) const {
  return kernel_[((static_cast<std::size_t>(x1) * x2_ + x2) * y1_ + y1) * y2_ + y2];
}

// ---------------------------------------------------------------------------
// Operations

JointDistribution compose(const std::vector<ConditionalTable>& factors, const FactorizationSpec& spec) {
  check_spec(spec);
  if (factors.size() != spec.factors.size())
    throw ModelError("expected " + std::to_string(spec.factors.size()) + " factors, got " +
                     std::to_string(factors.size()));
  std::map<Var, int> sizes;
  auto note_size = [&](const VariableId& id) {
    auto [it, inserted] = sizes.emplace(id.var, id.size);
    if (!inserted && it->second != id.size)
      throw ModelError("inconsistent alphabet size for " + std::string(var_name(id.var)));
  };
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& t = factors[i];
    const auto& f = spec.factors[i];
    auto names = [](const std::vector<VariableId>& ids) {
      VarList out;
      for (const auto& id : ids) out.push_back(id.var);
      return out;
    };
    if (names(t.targets) != f.targets || names(t.given) != f.given)
      throw ModelError("factor " + std::to_string(i) + " does not match " + describe(f));
    for (const auto& id : t.targets) note_size(id);
    for (const auto& id : t.given) note_size(id);
    check_slices(t, describe(f));
  }

  std::vector<VariableId> vars;
  for (Var v : spec.variables()) vars.push_back({v, sizes.at(v)});
  const auto joint_pos = [&](Var v) {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i].var == v) return i;
    return vars.size();
  };

  // For each factor, the joint positions of its given+target digits and the
  // corresponding row-major strides inside the factor table.
  struct Map {
    std::vector<std::size_t> pos;
    std::vector<std::size_t> stride;
  };
  std::vector<Map> maps;
  for (const auto& t : factors) {
    std::vector<VariableId> order = t.given;
    order.insert(order.end(), t.targets.begin(), t.targets.end());
    Map m;
    m.stride = row_major_strides(order);
    for (const auto& id : order) m.pos.push_back(joint_pos(id.var));
    maps.push_back(std::move(m));
  }

  std::vector<double> table(product_of_sizes(vars));
  for_each_cell(vars, [&](std::size_t cell, const std::vector<int>& digits) {
    double p = 1.0;
    for (std::size_t k = 0; k < factors.size() && p != 0.0; ++k) {
      std::size_t idx = 0;
      for (std::size_t j = 0; j < maps[k].pos.size(); ++j)
        idx += static_cast<std::size_t>(digits[maps[k].pos[j]]) * maps[k].stride[j];
      p *= factors[k].table[idx];
    }
    table[cell] = p;
  });
  return JointDistribution(std::move(vars), std::move(table));
}

JointDistribution marginalize(const JointDistribution& d, const VarList& keep) {
  std::vector<VariableId> out_vars;
  for (Var v : keep) {
    for (const auto& o : out_vars)
      if (o.var == v) throw ModelError("variable listed twice in marginal");
    out_vars.push_back({v, d.alphabet(v)});
  }
  const auto out_strides = row_major_strides(out_vars);
  std::vector<std::size_t> stride_of(d.variables().size(), 0);
  for (std::size_t k = 0; k < keep.size(); ++k) stride_of[d.position(keep[k])] = out_strides[k];

  std::vector<double> out(product_of_sizes(out_vars), 0.0);
  const auto& table = d.table();
  for_each_cell(d.variables(), [&](std::size_t cell, const std::vector<int>& digits) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) idx += static_cast<std::size_t>(digits[i]) * stride_of[i];
    out[idx] += table[cell];
  });
  return JointDistribution(std::move(out_vars), std::move(out));
}

JointDistribution condition(const JointDistribution& d, const Assignment& given) {
  std::vector<int> fixed(d.variables().size(), -1);
  for (const auto& [v, value] : given) {
    std::size_t pos = d.position(v);
    if (value < 0 || value >= d.variables()[pos].size)
      throw ModelError("value " + std::to_string(value) + " outside the alphabet of " + std::string(var_name(v)));
    fixed[pos] = value;
  }
  std::vector<VariableId> rest;
  for (std::size_t i = 0; i < fixed.size(); ++i)
    if (fixed[i] < 0) rest.push_back(d.variables()[i]);
  const auto rest_strides = row_major_strides(rest);
  std::vector<double> out(product_of_sizes(rest), 0.0);
  double mass = 0.0;
  for_each_cell(d.variables(), [&](std::size_t cell, const std::vector<int>& digits) {
    std::size_t idx = 0, r = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (fixed[i] >= 0) {
        if (digits[i] != fixed[i]) return;
      } else {
        idx += static_cast<std::size_t>(digits[i]) * rest_strides[r++];
      }
    }
    out[idx] += d.table()[cell];
    mass += d.table()[cell];
  });
  if (!(mass > 0.0)) throw ModelError("conditioning event has probability zero");
  for (double& p : out) p /= mass;
  return JointDistribution(std::move(rest), std::move(out));
}

FactorizationCheck validate_factorization(const JointDistribution& d, const FactorizationSpec& spec,
                                          double tolerance) {
  check_spec(spec);
  const JointDistribution m = marginalize(d, spec.variables());
  FactorizationCheck result;
  VarList earlier;
  for (const auto& f : spec.factors) {
    VarList others;
    for (Var e : earlier)
      if (!contains_var(f.given, e)) others.push_back(e);
    if (!others.empty()) {
      // Layout [given | others | targets] so each (given) block is contiguous.
      VarList order = f.given;
      order.insert(order.end(), others.begin(), others.end());
      order.insert(order.end(), f.targets.begin(), f.targets.end());
      const JointDistribution sub = marginalize(m, order);
      std::size_t ng = 1, no = 1, nt = 1;
      for (Var v : f.given) ng *= static_cast<std::size_t>(sub.alphabet(v));
      for (Var v : others) no *= static_cast<std::size_t>(sub.alphabet(v));
      for (Var v : f.targets) nt *= static_cast<std::size_t>(sub.alphabet(v));
      const auto& t = sub.table();
      double worst = 0.0;
      for (std::size_t g = 0; g < ng; ++g) {
        double pg = 0.0;
        std::vector<double> pgt(nt, 0.0), pgo(no, 0.0);
        for (std::size_t o = 0; o < no; ++o)
          for (std::size_t k = 0; k < nt; ++k) {
            double p = t[(g * no + o) * nt + k];
            pg += p;
            pgt[k] += p;
            pgo[o] += p;
          }
        if (pg <= 0.0) continue;
        for (std::size_t o = 0; o < no; ++o)
          for (std::size_t k = 0; k < nt; ++k)
            worst = std::max(worst, std::abs(t[(g * no + o) * nt + k] - pgt[k] * pgo[o] / pg));
      }
      if (worst > result.max_violation) {
        result.max_violation = worst;
        result.worst_factor = describe(f);
      }
    }
    earlier.insert(earlier.end(), f.targets.begin(), f.targets.end());
  }
  result.valid = result.max_violation <= tolerance;
  return result;
}

ConditionalTable sample_conditional(const Factor& factor, const AlphabetSizes& sizes, CounterRng& rng) {
  auto ids = [&](const VarList& vars) {
    std::vector<VariableId> out;
    for (Var v : vars) {
      auto it = sizes.find(v);
      if (it == sizes.end()) throw ModelError("no alphabet size for " + std::string(var_name(v)));
      if (it->second < 1) throw ModelError("alphabet size of " + std::string(var_name(v)) + " must be >= 1");
      out.push_back({v, it->second});
    }
    return out;
  };
  ConditionalTable t{ids(factor.targets), ids(factor.given), {}};
  const std::size_t width = t.slice_size();
  t.table.resize(width * t.slices());
  for (std::size_t s = 0; s < t.slices(); ++s) {
    double sum = 0.0;
    for (std::size_t k = 0; k < width; ++k) sum += (t.table[s * width + k] = rng.exponential());
    for (std::size_t k = 0; k < width; ++k) t.table[s * width + k] /= sum;
  }
  return t;
}

std::vector<ConditionalTable> sample_factors(const FactorizationSpec& spec, const AlphabetSizes& sizes,
                                             std::uint64_t seed) {
  check_spec(spec);
  CounterRng rng(seed);
  std::vector<ConditionalTable> out;
  for (const auto& f : spec.factors) out.push_back(sample_conditional(f, sizes, rng));
  return out;
}

JointDistribution sample_distribution(const FactorizationSpec& spec, const AlphabetSizes& sizes,
                                      std::uint64_t seed) {
  return compose(sample_factors(spec, sizes, seed), spec);
}

ChannelModel sample_channel(int x1, int x2, int y1, int y2, CounterRng& rng) {
  AlphabetSizes sizes{{Var::X1, x1}, {Var::X2, x2}, {Var::Y1, y1}, {Var::Y2, y2}};
  ConditionalTable t = sample_conditional({{Var::Y1, Var::Y2}, {Var::X1, Var::X2}}, sizes, rng);
  return ChannelModel(x1, x2, y1, y2, std::move(t.table));
}

JointDistribution embed_channel(const JointDistribution& d, const ChannelModel& channel) {
  if (d.has(Var::Y1) || d.has(Var::Y2)) throw ModelError("distribution already contains channel outputs");
  const std::size_t px1 = d.position(Var::X1), px2 = d.position(Var::X2);
  if (d.variables()[px1].size != channel.x1() || d.variables()[px2].size != channel.x2())
    throw ModelError("channel input alphabets do not match the distribution");
  std::vector<VariableId> vars = d.variables();
  vars.push_back({Var::Y1, channel.y1()});
  vars.push_back({Var::Y2, channel.y2()});
  const std::size_t ny = static_cast<std::size_t>(channel.y1()) * channel.y2();
  std::vector<double> table(d.cells() * ny);
  for_each_cell(d.variables(), [&](std::size_t cell, const std::vector<int>& digits) {
    for (int y1 = 0; y1 < channel.y1(); ++y1)
      for (int y2 = 0; y2 < channel.y2(); ++y2)
        table[cell * ny + static_cast<std::size_t>(y1) * channel.y2() + y2] =
            d.table()[cell] * channel.p(y1, y2, digits[px1], digits[px2]);
  });
  return JointDistribution(std::move(vars), std::move(table));
}

JointDistribution merge_variables(const JointDistribution& d, const VarList& parts, Var merged) {
  if (parts.empty()) throw ModelError("nothing to merge");
  std::vector<std::size_t> part_pos;
  int merged_size = 1;
  for (Var p : parts) {
    part_pos.push_back(d.position(p));
    merged_size *= d.alphabet(p);
  }
  if (d.has(merged) && !contains_var(parts, merged))
    throw ModelError("merged variable " + std::string(var_name(merged)) + " already exists");
  const std::size_t anchor = part_pos.front();
  std::vector<VariableId> vars;
  std::vector<std::size_t> source;  // source position per output slot (npos = merged)
  for (std::size_t i = 0; i < d.variables().size(); ++i) {
    if (i == anchor) {
      vars.push_back({merged, merged_size});
      source.push_back(SIZE_MAX);
    } else if (std::find(part_pos.begin(), part_pos.end(), i) == part_pos.end()) {
      vars.push_back(d.variables()[i]);
      source.push_back(i);
    }
  }
  const auto strides = row_major_strides(vars);
  std::vector<double> table(product_of_sizes(vars), 0.0);
  for_each_cell(d.variables(), [&](std::size_t cell, const std::vector<int>& digits) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      std::size_t value;
      if (source[k] == SIZE_MAX) {
        value = 0;
        for (std::size_t p : part_pos) value = value * static_cast<std::size_t>(d.variables()[p].size) + digits[p];
      } else {
        value = static_cast<std::size_t>(digits[source[k]]);
      }
      idx += value * strides[k];
    }
    table[idx] += d.table()[cell];
  });
  return JointDistribution(std::move(vars), std::move(table));
}

JointDistribution add_constant_variable(const JointDistribution& d, Var v) {
  if (d.has(v)) throw ModelError("variable " + std::string(var_name(v)) + " already present");
  std::vector<VariableId> vars{{v, 1}};
  vars.insert(vars.end(), d.variables().begin(), d.variables().end());
  return JointDistribution(std::move(vars), d.table());
}

}  // namespace rrk
