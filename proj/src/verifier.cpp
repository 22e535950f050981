#include "rrk/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "rrk/errors.hpp"
#include "rrk/info.hpp"
#include "rrk/rng.hpp"

namespace rrk {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Campaign plumbing

DrawnSample draw_sample(Form form, std::uint64_t campaign_seed, std::size_t index, const AlphabetSizes& sizes) {
  const std::uint64_t seed = derive_seed(campaign_seed, index);
  CounterRng rng(seed);
  FactorizationSpec spec = with_channel(encoder_factorization(form));
  AlphabetSizes all;
  for (Var v : spec.variables()) all[v] = 2;
  if (all.count(Var::Q)) all[Var::Q] = 1 + static_cast<int>(rng.below(2));
  for (const auto& [v, n] : sizes) all[v] = n;
  std::vector<ConditionalTable> factors = sample_factors(spec, all, derive_seed(seed, 1));
  JointDistribution joint = compose(factors, spec);
  return DrawnSample{index, seed, std::move(spec), std::move(factors), std::move(joint)};
}

json factors_json(const std::vector<ConditionalTable>& factors, const FactorizationSpec& spec) {
  json out = json::array();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    json f;
    f["factor"] = describe(spec.factors.at(i));
    auto ids = [](const std::vector<VariableId>& v) {
      json a = json::array();
      for (const auto& id : v) a.push_back({{"name", std::string(var_name(id.var))}, {"size", id.size}});
      return a;
    };
    f["targets"] = ids(factors[i].targets);
    f["given"] = ids(factors[i].given);
    f["table"] = factors[i].table;
    out.push_back(std::move(f));
  }
  return out;
}

json constants_json(const BoundConstants& c) {
  json out = json::object();
  for (const auto& l : c.labels()) out[l] = clamp_for_report(c.at(l));
  return out;
}

unsigned resolve_threads(unsigned requested) {
  unsigned n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("RRK_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v > 0) n = static_cast<unsigned>(v);
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void apply_perturbation(BoundConstants& c, const std::map<std::string, double>& perturb) {
  for (const auto& [label, delta] : perturb)
    if (c.has(label)) c.set(label, c.at(label) + delta);
}

json RegionReport::to_json() const {
  json j;
  j["check"] = check;
  j["pass"] = pass;
  j["samples"] = options.samples;
  j["seed"] = options.seed;
  j["tolerances"] = {{"polytope", options.tol_polytope}, {"identity", options.tol_identity}};
  if (!options.perturb.empty()) j["perturb"] = options.perturb;
  j["failures"] = failures;
  j["max_deviation"] = max_deviation;
  j["summary"] = summary;
  json vs = json::array();
  for (const auto& v : verdicts) {
    json e;
    if (!v.group.empty()) e["group"] = v.group;
    e["index"] = v.index;
    e["seed"] = v.seed;
    e["pass"] = v.pass;
    if (!v.counted) e["counted"] = false;
    e["deviation"] = v.deviation;
    if (!v.detail.is_null())
      for (auto it = v.detail.begin(); it != v.detail.end(); ++it) e[it.key()] = it.value();
    vs.push_back(std::move(e));
  }
  j["verdicts"] = std::move(vs);
  return j;
}

std::string RegionReport::human_summary() const {
  std::ostringstream os;
  char dev[32];
  std::snprintf(dev, sizeof dev, "%.3g", max_deviation);
  std::size_t counted = 0;
  for (const auto& v : verdicts) counted += v.counted;
  os << check << ": " << (pass ? "PASS" : "FAIL") << " (" << counted << " counted samples, " << failures
     << " failing, max deviation " << dev << " bits)\n";
  for (auto it = summary.begin(); it != summary.end(); ++it) os << "  " << it.key() << ": " << it.value().dump() << "\n";
  return os.str();
}

namespace {

double finite_or_max(double x) { return std::isfinite(x) ? x : std::numeric_limits<double>::max(); }

json point_json(const std::vector<double>& x, const std::vector<std::string>& vars) {
  json p = json::object();
  for (std::size_t i = 0; i < x.size() && i < vars.size(); ++i) p[vars[i]] = x[i];
  return p;
}

json rows_json(const InequalitySystem& sys) {
  json a = json::array();
  for (const auto& h : sys.rows()) a.push_back({{"label", h.label}, {"row", sys.format_row(h)}});
  return a;
}

json identity_json(const std::vector<IdentityRow>& rows) {
  json a = json::array();
  for (const auto& r : rows)
    a.push_back({{"name", r.name}, {"relation", r.relation}, {"left", r.left}, {"right", r.right},
                 {"deviation", r.deviation}});
  return a;
}

double expr_value(const JointDistribution& d, std::string_view text) { return eval(d, parse_expr(text)); }

RegionReport finalize(std::string name, const CheckOptions& opt, std::vector<SampleVerdict> verdicts, json summary) {
  RegionReport r;
  r.check = std::move(name);
  r.options = opt;
  for (const auto& v : verdicts) {
    if (!v.counted) continue;
    if (!v.pass) ++r.failures;
    r.max_deviation = std::max(r.max_deviation, finite_or_max(v.deviation));
  }
  r.pass = r.failures == 0;
  r.verdicts = std::move(verdicts);
  r.summary = std::move(summary);
  return r;
}

void attach_replay(SampleVerdict& v, const DrawnSample& s) {
  v.detail["factors"] = factors_json(s.factors, s.spec);
  v.detail["form"] = std::string(form_id(s.spec.form));
}

// Runs `one` per sample of `form`, in parallel, results by index.
std::vector<SampleVerdict> campaign(const CheckOptions& opt, std::size_t count, const std::string& group, Form form,
                                    const AlphabetSizes& sizes, std::uint64_t seed_offset,
                                    const std::function<void(const DrawnSample&, SampleVerdict&)>& one) {
  std::vector<SampleVerdict> out(count);
  const std::uint64_t campaign_seed = seed_offset == 0 ? opt.seed : derive_seed(opt.seed, ~seed_offset);
  parallel_for(count, resolve_threads(opt.threads), [&](std::size_t i) {
    const DrawnSample s = draw_sample(form, campaign_seed, i, sizes);
    SampleVerdict& v = out[i];
    v.group = group;
    v.index = i;
    v.seed = s.seed;
    v.detail = json::object();
    one(s, v);
    if (!v.pass && v.counted) attach_replay(v, s);
  });
  return out;
}

json containment_failure(const char* direction, const Containment& c, const std::vector<std::string>& vars) {
  return {{"direction", direction},
          {"row", c.violated_label},
          {"excess", finite_or_max(c.excess)},
          {"witness", point_json(c.witness, vars)}};
}

RegionReport equivalence_check(const std::string& name, Form form, Family fam, SystemKind quad, SystemKind stated_kind,
                               bool with_list, const CheckOptions& opt) {
  auto verdicts = campaign(opt, opt.samples, "", form, {}, 0, [&](const DrawnSample& s, SampleVerdict& v) {
    const BoundConstants c = evaluate_constants(fam, s.joint);
    BoundConstants cp = c;
    apply_perturbation(cp, opt.perturb);
    const InequalitySystem raw = project_rate_pair(build_system(c, quad));
    const InequalitySystem stated = build_system(cp, stated_kind);
    const bool raw_nonempty = lp_feasible(raw, opt.tol_polytope).feasible;
    const bool stated_nonempty = lp_feasible(stated, opt.tol_polytope).feasible;
    v.detail["projection_nonempty"] = raw_nonempty;
    v.detail["stated_nonempty"] = stated_nonempty;
    v.detail["raw_rows"] = raw.size();
    const InequalitySystem reduced = remove_redundant(raw, opt.tol_polytope);
    json kept = json::array();
    for (const auto& h : reduced.rows()) kept.push_back(h.label);
    v.detail["reduced_rows"] = kept;

    json failures = json::array();
    const Containment a = contains(stated, raw, opt.tol_polytope);
    if (!a.holds) failures.push_back(containment_failure("projection-outside-stated", a, raw.variables()));
    const Containment b = contains(raw, stated, opt.tol_polytope);
    if (!b.holds) failures.push_back(containment_failure("stated-outside-projection", b, raw.variables()));
    double dev = std::max(a.holds ? 0.0 : a.excess, b.holds ? 0.0 : b.excess);
    if (with_list) {
      const InequalitySystem list = build_system(cp, SystemKind::TransitionList);
      const Containment la = contains(list, raw, opt.tol_polytope);
      if (!la.holds) failures.push_back(containment_failure("projection-outside-list", la, raw.variables()));
      const Containment lb = contains(raw, list, opt.tol_polytope);
      if (!lb.holds) failures.push_back(containment_failure("list-outside-projection", lb, raw.variables()));
      dev = std::max({dev, la.holds ? 0.0 : la.excess, lb.holds ? 0.0 : lb.excess});
    }
    v.deviation = dev;
    v.pass = failures.empty();
    if (!v.pass) {
      v.detail["failures"] = failures;
      v.detail["constants"] = constants_json(c);
      v.detail["projection"] = rows_json(raw);
      v.detail["kind"] = !raw_nonempty && stated_nonempty ? "empty-projection" : "one-sided";
    }
  });
  std::size_t nonempty = 0, stated_nonempty = 0, empty_proj = 0, one_sided = 0;
  for (const auto& v : verdicts) {
    nonempty += v.detail["projection_nonempty"].get<bool>();
    stated_nonempty += v.detail["stated_nonempty"].get<bool>();
    if (!v.pass) (v.detail["kind"] == "empty-projection" ? empty_proj : one_sided)++;
  }
  json summary = {{"projection_nonempty", nonempty},
                  {"stated_nonempty", stated_nonempty},
                  {"failures_empty_projection", empty_proj},
                  {"failures_other", one_sided}};
  return finalize(name, opt, std::move(verdicts), std::move(summary));
}

CollapseResult collapse_with(const JointDistribution& d, Family f, double tol, const BoundConstants* perturbed) {
  CollapseResult r;
  for (const auto& def : constant_definitions(f)) {
    double core = 0.0, total = 0.0;
    for (std::size_t i = 0; i < def.expr.size(); ++i) {
      const double x = eval_term(d, def.expr[i]);
      total += x;
      if (def.roles[i] == TermRole::Core) {
        core += x;
        continue;
      }
      const double mag = std::fabs(x);
      r.max_addon = std::max(r.max_addon, mag);
      if (mag > tol) {
        r.holds = false;
        r.violations.push_back({def.label, def.expr[i].str(), std::string(role_name(def.roles[i])), x});
      }
    }
    if (perturbed) total = perturbed->at(def.label);
    const double gap = std::fabs(total - core);
    r.max_gap = std::max(r.max_gap, gap);
    if (gap > tol) {
      r.holds = false;
      r.violations.push_back({def.label, "constant minus core", "gap", gap});
    }
  }
  return r;
}

json collapse_json(const CollapseResult& c) {
  json a = json::array();
  for (const auto& t : c.violations)
    a.push_back({{"constant", t.constant}, {"term", t.term}, {"role", t.role}, {"value", t.value}});
  return a;
}

RegionReport collapse_check(const std::string& name, Form form, Family fam, const CheckOptions& opt) {
  const double tol = 1e-9;
  auto verdicts = campaign(opt, opt.samples, "", form, {}, 0, [&](const DrawnSample& s, SampleVerdict& v) {
    BoundConstants c = evaluate_constants(fam, s.joint);
    apply_perturbation(c, opt.perturb);
    const CollapseResult r = collapse_with(s.joint, fam, tol, &c);
    v.pass = r.holds;
    v.deviation = std::max(r.max_addon, r.max_gap);
    v.detail["max_addon"] = r.max_addon;
    v.detail["max_gap"] = r.max_gap;
    if (!r.holds) v.detail["violations"] = collapse_json(r);
  });
  json summary = {{"addon_tolerance", tol}, {"family", std::string(family_id(fam))}};
  return finalize(name, opt, std::move(verdicts), std::move(summary));
}

// Rows of `sys` that are implied by the others (flags kept).
std::vector<std::string> implied_rows(const InequalitySystem& sys, const std::vector<std::string>& candidates,
                                      double tol, std::vector<std::string>* not_implied) {
  std::vector<std::string> out;
  for (const auto& label : candidates) {
    InequalitySystem others(sys.variables());
    for (std::size_t i = 0; i < sys.dimension(); ++i)
      if (sys.nonnegative(i)) others.set_nonnegative(sys.variables()[i]);
    for (const auto& h : sys.rows())
      if (h.label != label) others.add_row(h);
    if (implies(others, sys.row(label), tol).implied)
      out.push_back(label);
    else if (not_implied)
      not_implied->push_back(label);
  }
  return out;
}

}  // namespace

CollapseResult collapse(const JointDistribution& d, Family f, double tol) { return collapse_with(d, f, tol, nullptr); }

// ---------------------------------------------------------------------------
// Identity tables

std::vector<IdentityRow> dmt_identities(const BoundConstants& dmt, const BoundConstants& hod,
                                        const JointDistribution& d) {
  struct Entry {
    const char* dmt;
    const char* hod;
    const char* correction;
  };
  static const Entry table[] = {
      {"a1", "A1", "I(W2;W1|Q)"},  {"b1", "B1", "I(W2;U1|Q)"},
      {"c1", "C1", "I(U1;W1|Q)"},  {"d1", "D1", ""},
      {"e1", "E1", "I(W2;U1|Q)"},  {"f1", "F1", "I(W2;U1|Q)"},
      {"g1", "G1", "I(W2;U1W1|Q)"}, {"a2", "A2", "I(W2;W1|Q)"},
      {"b2", "B2", "I(W1;U2|Q)"},  {"c2", "C2", "I(U2;W2|Q)"},
      {"d2", "D2", "I(U2;W2|Q) + I(W1;U2|Q)"},
      {"e2", "E2", "I(W1;U2|Q)"},  {"f2", "F2", "I(W1;W2|Q)"},
      {"g2", "G2", "I(U2;W2|Q) + I(W1;W2U2|Q)"},
  };
  std::vector<IdentityRow> out;
  for (const auto& e : table) {
    IdentityRow r;
    r.name = e.dmt;
    r.relation = std::string(e.dmt) + " = " + e.hod + (*e.correction ? std::string(" - (") + e.correction + ")" : "");
    r.left = dmt.at(e.dmt);
    r.right = hod.at(e.hod) - (*e.correction ? expr_value(d, e.correction) : 0.0);
    r.deviation = std::fabs(r.left - r.right);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<IdentityRow> dmt_identities_rederived(const BoundConstants& dmt, const BoundConstants& hod,
                                                  const JointDistribution& d) {
  std::vector<IdentityRow> out;
  IdentityRow f1{"f1", "f1 = F1 - I(W2;W1|Q)", dmt.at("f1"), hod.at("F1") - expr_value(d, "I(W2;W1|Q)"), 0.0};
  IdentityRow d2{"d2", "d2 = D2 - I(U2;W2|Q) + I(U2;U1W1W2|Q)", dmt.at("d2"),
                 hod.at("D2") - expr_value(d, "I(U2;W2|Q) - I(U2;U1W1W2|Q)"), 0.0};
  for (auto* r : {&f1, &d2}) {
    r->deviation = std::fabs(r->left - r->right);
    out.push_back(*r);
  }
  return out;
}

namespace {

struct SplitTerms {
  double p, w, wb, uwb, e1b, a1b;
};

SplitTerms split_terms(const JointDistribution& d) {
  return {expr_value(d, "I(U2;U1b|W1W2U1a)"),
          expr_value(d, "I(W2;W1)"),
          expr_value(d, "I(W2;U1b|W1U1a)"),
          expr_value(d, "I(U2W2;U1b|W1U1a)"),
          expr_value(d, "I(Y1;U1bW2|W1U1a)"),
          expr_value(d, "I(W2;U1bW1U1a) + I(Y1;U1b|W1U1aW2)")};
}

}  // namespace

std::vector<IdentityRow> rtd_relations(const BoundConstants& rtd, const JointDistribution& rtd_joint) {
  const BoundConstants hod = hod_constants(merge_split_carrier(rtd_joint));
  const SplitTerms t = split_terms(rtd_joint);
  struct Entry {
    const char* name;
    const char* rtd;
    const char* relation;
    double expected;
  };
  const Entry table[] = {
      {"S1+T1+T2", "8-1", "8-1 = G1 - I(U2;U1b|W1W2U1a)", hod.at("G1") - t.p},
      {"S1", "8-3", "8-3 = A1 - I(W2;W1) - I(W2;U1b|W1U1a)", hod.at("A1") - t.w - t.wb},
      {"S1+T2", "8-2", "8-2 = E1 - I(U2;U1b|W1W2U1a)", hod.at("E1") - t.p},
      {"S1b+T2", "8-4", "8-4 = I(Y1;U1bW2|W1U1a) - I(U2;U1b|W1W2U1a)", t.e1b - t.p},
      {"S1b", "8-5", "8-5 = [I(W2;U1bW1U1a) + I(Y1;U1b|W1U1aW2)] - I(W2;W1) - I(U2W2;U1b|W1U1a)", t.a1b - t.w - t.uwb},
      {"S2+T1+T2", "8-6", "G2 = 8-6 - I(W2U2;U1b|W1U1a)", hod.at("G2") + t.uwb},
      {"S2+T2", "8-7", "D2 = 8-7 - I(W2U2;U1b|W1U1a)", hod.at("D2") + t.uwb},
      {"S2", "8-8", "A2 = 8-8 + I(W2;W1) - I(U2;U1b|W1W2U1a)", hod.at("A2") - t.w + t.p},
  };
  std::vector<IdentityRow> out;
  for (const auto& e : table) {
    const double left = rtd.at(e.rtd);
    out.push_back({e.name, e.relation, left, e.expected, std::fabs(left - e.expected)});
  }
  return out;
}

std::vector<IdentityRow> rtd_dominance(const BoundConstants& rtd, const JointDistribution& rtd_joint) {
  const BoundConstants hod = hod_constants(merge_split_carrier(rtd_joint));
  const SplitTerms t = split_terms(rtd_joint);
  const std::pair<const char*, std::pair<const char*, double>> table[] = {
      {"8-1", {"8-1 <= G1", hod.at("G1")}},
      {"8-3", {"8-3 <= A1", hod.at("A1")}},
      {"8-2", {"8-2 <= E1", hod.at("E1")}},
      {"8-4", {"8-4 <= I(Y1;U1bW2|W1U1a)", t.e1b}},
      {"8-5", {"8-5 <= I(W2;U1bW1U1a) + I(Y1;U1b|W1U1aW2)", t.a1b}},
      {"8-6", {"8-6 <= G2", hod.at("G2")}},
      {"8-7", {"8-7 <= D2", hod.at("D2")}},
      {"8-8", {"8-8 <= A2", hod.at("A2")}},
  };
  std::vector<IdentityRow> out;
  for (const auto& [label, rel] : table) {
    const double left = rtd.at(label);
    out.push_back({label, rel.first, left, rel.second, std::max(0.0, left - rel.second)});
  }
  return out;
}

std::vector<IdentityRow> duality_rows(const JointDistribution& d) {
  std::vector<IdentityRow> out;
  for (const auto& def : constant_definitions(Family::Hod1)) {
    const InfoExpr u_form =
        substitute_vars(substitute_vars(constant_definition(Family::Hod, def.label).expr, Var::U1, Var::X1), Var::U2,
                        Var::X2);
    IdentityRow r;
    r.name = def.label;
    r.relation = to_string(def.expr) + " = " + to_string(u_form);
    r.left = eval(d, def.expr);
    r.right = eval(d, u_form);
    r.deviation = std::fabs(r.left - r.right);
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checks

RegionReport check_thm4_equivalence(const CheckOptions& opt) {
  return equivalence_check("thm4", Form::Hod, Family::Hod, SystemKind::Thm3Quadruple, SystemKind::Thm4RatePair, true,
                           opt);
}

RegionReport check_thm6_equivalence(const CheckOptions& opt) {
  return equivalence_check("thm6", Form::HodSuperposition, Family::Hod1, SystemKind::Thm5Quadruple,
                           SystemKind::Thm6RatePair, false, opt);
}

RegionReport check_corollary1(const CheckOptions& opt) { return collapse_check("corollary1", Form::HanKobayashi, Family::Hod, opt); }

RegionReport check_corollary3(const CheckOptions& opt) {
  return collapse_check("corollary3", Form::ChongMotaniGarg, Family::Hod1, opt);
}

RegionReport check_corollary2_and_4(const CheckOptions& opt) {
  static const std::vector<std::string> listed = {"11-3", "11-4", "11-5",  "11-6",  "11-7", "11-8",
                                                  "11-11", "11-15", "11-16", "11-18", "11-19"};
  static const std::vector<std::string> cmg_listed = {"15-3", "15-9"};

  auto hk_part = [&](const DrawnSample& s, SampleVerdict& v) {
    BoundConstants c = hod_constants(s.joint);
    apply_perturbation(c, opt.perturb);
    const InequalitySystem t4 = build_system(c, SystemKind::Thm4RatePair);
    std::vector<std::string> missing;
    const auto redundant = implied_rows(t4, listed, opt.tol_polytope, &missing);
    v.detail["redundant"] = redundant;
    v.detail["not_redundant"] = missing;
    v.pass = missing.empty();
    v.deviation = 0.0;
  };
  auto groups = campaign(opt, opt.samples, "hk-redundancy", Form::HanKobayashi, {}, 0, hk_part);
  auto noncollapse = campaign(opt, opt.samples, "hod9-redundancy", Form::Hod, {}, 2, hk_part);
  for (auto& v : noncollapse) {
    v.counted = false;
    if (!v.pass) v.detail["note"] = "expected non-collapse outside the independent-input family";
  }
  auto cmg = campaign(opt, opt.samples, "cmg-orderings", Form::ChongMotaniGarg, {}, 4,
                      [&](const DrawnSample& s, SampleVerdict& v) {
                        BoundConstants c = hod1_constants(s.joint);
                        apply_perturbation(c, opt.perturb);
                        const double o1 = c.at("D1") - c.at("G1");
                        const double o2 = c.at("E2") - c.at("G2");
                        const InequalitySystem t6 = build_system(c, SystemKind::Thm6RatePair);
                        std::vector<std::string> missing;
                        const auto redundant = implied_rows(t6, cmg_listed, opt.tol_polytope, &missing);
                        v.detail["D1_minus_G1"] = o1;
                        v.detail["E2_minus_G2"] = o2;
                        v.detail["redundant"] = redundant;
                        v.detail["not_redundant"] = missing;
                        v.deviation = std::max({0.0, o1, o2});
                        v.pass = o1 <= opt.tol_identity && o2 <= opt.tol_identity && missing.empty();
                      });

  std::size_t hk_full = 0, hod9_full = 0;
  std::map<std::string, std::size_t> hk_kept;
  for (const auto& v : groups) {
    hk_full += v.pass;
    for (const auto& l : v.detail["not_redundant"]) hk_kept[l.get<std::string>()]++;
  }
  for (const auto& v : noncollapse) hod9_full += v.pass;
  json summary = {{"hk_samples_all_listed_redundant", hk_full},
                  {"hk_listed_rows_not_redundant", hk_kept},
                  {"hod9_samples_all_listed_redundant", hod9_full}};
  std::vector<SampleVerdict> all = std::move(groups);
  all.insert(all.end(), std::make_move_iterator(noncollapse.begin()), std::make_move_iterator(noncollapse.end()));
  all.insert(all.end(), std::make_move_iterator(cmg.begin()), std::make_move_iterator(cmg.end()));
  return finalize("corollary2_4", opt, std::move(all), std::move(summary));
}

RegionReport check_corollary5(const CheckOptions& opt) {
  auto verdicts = campaign(opt, opt.samples, "", Form::Dmt, {}, 0, [&](const DrawnSample& s, SampleVerdict& v) {
    BoundConstants dmt = dmt_constants(s.joint);
    const BoundConstants hod = hod_constants(s.joint);
    apply_perturbation(dmt, opt.perturb);
    const auto ids = dmt_identities(dmt, hod, s.joint);
    double worst = 0.0;
    json failed = json::array();
    for (const auto& r : ids) {
      worst = std::max(worst, r.deviation);
      if (r.deviation > opt.tol_identity) failed.push_back(r.name);
    }
    double dominance = 0.0;
    json not_dominated = json::array();
    const auto& dl = dmt.labels();
    const auto& hl = hod.labels();
    for (std::size_t i = 0; i < dl.size(); ++i) {
      const double gap = dmt.at(dl[i]) - hod.at(hl[i]);
      dominance = std::max(dominance, gap);
      if (gap > opt.tol_identity) not_dominated.push_back(dl[i]);
    }
    const InequalitySystem hod_pair = project_rate_pair(build_system(hod, SystemKind::Thm3Quadruple));
    const InequalitySystem dmt_pair = project_rate_pair(build_system(dmt, SystemKind::DmtQuadruple));
    const Containment inc = contains(hod_pair, dmt_pair, opt.tol_polytope);

    v.detail["identity_max_deviation"] = worst;
    v.detail["identities_failed"] = failed;
    v.detail["dominance_max_gap"] = dominance;
    v.detail["not_dominated"] = not_dominated;
    v.detail["inclusion"] = inc.holds;
    v.detail["dmt_nonempty"] = lp_feasible(dmt_pair, opt.tol_polytope).feasible;
    v.detail["rederived"] = identity_json(dmt_identities_rederived(dmt, hod, s.joint));
    if (!inc.holds) v.detail["inclusion_failure"] = containment_failure("dmt-outside-hod", inc, dmt_pair.variables());
    v.pass = failed.empty() && not_dominated.empty() && inc.holds;
    v.deviation = std::max({worst, dominance, inc.holds ? 0.0 : inc.excess});
    if (!v.pass) {
      v.detail["identities"] = identity_json(ids);
      v.detail["constants_dmt"] = constants_json(dmt);
      v.detail["constants_hod"] = constants_json(hod);
    }
  });
  std::map<std::string, std::size_t> failing;
  std::size_t inclusion_ok = 0, identities_ok = 0, dmt_nonempty = 0;
  double rederived_worst = 0.0;
  for (const auto& v : verdicts) {
    for (const auto& n : v.detail["identities_failed"]) failing[n.get<std::string>()]++;
    inclusion_ok += v.detail["inclusion"].get<bool>();
    identities_ok += v.detail["identities_failed"].empty();
    dmt_nonempty += v.detail["dmt_nonempty"].get<bool>();
    for (const auto& r : v.detail["rederived"]) rederived_worst = std::max(rederived_worst, r["deviation"].get<double>());
  }
  json summary = {{"samples_all_identities", identities_ok},
                  {"identity_failures_by_constant", failing},
                  {"samples_inclusion_holds", inclusion_ok},
                  {"dmt_region_nonempty", dmt_nonempty},
                  {"rederived_f1_d2_max_deviation", rederived_worst}};
  return finalize("corollary5", opt, std::move(verdicts), std::move(summary));
}

RegionReport check_corollary6(const CheckOptions& opt) {
  auto identity = campaign(opt, opt.samples, "identity", Form::Rtd, {}, 0, [&](const DrawnSample& s, SampleVerdict& v) {
    BoundConstants rtd = rtd_constants(s.joint);
    apply_perturbation(rtd, opt.perturb);
    const auto rows = rtd_relations(rtd, s.joint);
    json failed = json::array();
    for (const auto& r : rows) {
      v.deviation = std::max(v.deviation, r.deviation);
      if (r.deviation > opt.tol_identity) failed.push_back(r.name);
    }
    v.pass = failed.empty();
    v.detail["failed"] = failed;
    if (!v.pass) v.detail["relations"] = identity_json(rows);
  });
  auto degenerate =
      campaign(opt, opt.samples, "degenerate-u1b", Form::Rtd, {{Var::U1b, 1}}, 6, [&](const DrawnSample& s, SampleVerdict& v) {
        BoundConstants rtd = rtd_constants(s.joint);
        apply_perturbation(rtd, opt.perturb);
        const auto rows = rtd_dominance(rtd, s.joint);
        json failed = json::array();
        for (const auto& r : rows) {
          v.deviation = std::max(v.deviation, r.deviation);
          if (r.deviation > opt.tol_identity) failed.push_back(r.name);
        }
        v.pass = failed.empty();
        v.detail["failed"] = failed;
        if (!v.pass) v.detail["relations"] = identity_json(rows);
      });
  std::map<std::string, std::size_t> by_relation;
  std::map<std::string, std::size_t> deg_by_relation;
  double worst_by_name = 0.0;
  for (const auto& v : identity)
    for (const auto& n : v.detail["failed"]) by_relation[n.get<std::string>()]++;
  for (const auto& v : degenerate)
    for (const auto& n : v.detail["failed"]) deg_by_relation[n.get<std::string>()]++;
  (void)worst_by_name;
  json summary = {{"identity_failures_by_relation", by_relation}, {"dominance_failures_by_bound", deg_by_relation}};
  std::vector<SampleVerdict> all = std::move(identity);
  all.insert(all.end(), std::make_move_iterator(degenerate.begin()), std::make_move_iterator(degenerate.end()));
  return finalize("corollary6", opt, std::move(all), std::move(summary));
}

namespace {

// Zeroes p(target | given) wherever keep(given digits, target) is false and
// renormalizes each slice.
void mask_factor(ConditionalTable& t, const std::function<bool(const std::vector<int>&, int)>& keep) {
  const std::size_t width = t.slice_size();
  std::vector<int> g(t.given.size());
  for (std::size_t s = 0; s < t.slices(); ++s) {
    std::size_t rem = s;
    for (std::size_t k = t.given.size(); k-- > 0;) {
      g[k] = static_cast<int>(rem % static_cast<std::size_t>(t.given[k].size));
      rem /= static_cast<std::size_t>(t.given[k].size);
    }
    double sum = 0.0;
    for (std::size_t x = 0; x < width; ++x) {
      double& p = t.table[s * width + x];
      if (!keep(g, static_cast<int>(x))) p = 0.0;
      sum += p;
    }
    for (std::size_t x = 0; x < width; ++x) t.table[s * width + x] /= sum;
  }
}

int given_digit(const ConditionalTable& t, const std::vector<int>& g, Var v) {
  for (std::size_t k = 0; k < t.given.size(); ++k)
    if (t.given[k].var == v) return g[k];
  throw ModelError("factor does not condition on " + std::string(var_name(v)));
}

enum class Structure { Superposition, FirstOnly, Generic };

// Form-hod12 sample with |X_i| = 4. Superposition makes W_i the high bit of
// X_i for both users, FirstOnly only for user 1.
DrawnSample structured_sample(std::uint64_t campaign_seed, std::size_t index, Structure kind) {
  const AlphabetSizes sizes{{Var::X1, 4}, {Var::X2, 4}};
  DrawnSample s = draw_sample(Form::HodSuperposition, campaign_seed, index, sizes);
  if (kind == Structure::Generic) return s;
  for (std::size_t i = 0; i < s.spec.factors.size(); ++i) {
    ConditionalTable& t = s.factors[i];
    const Factor& f = s.spec.factors[i];
    if (f.targets == VarList{Var::X1})
      mask_factor(t, [&](const std::vector<int>& g, int x) { return (x >> 1) == given_digit(t, g, Var::W1); });
    if (f.targets == VarList{Var::X2} && kind == Structure::Superposition)
      mask_factor(t, [&](const std::vector<int>& g, int x) { return (x >> 1) == given_digit(t, g, Var::W2); });
  }
  s.joint = compose(s.factors, s.spec);
  return s;
}

}  // namespace

RegionReport check_eq14_duality(const CheckOptions& opt) {
  std::vector<SampleVerdict> all;
  const std::pair<Structure, const char*> groups[] = {{Structure::Superposition, "superposition"},
                                                       {Structure::FirstOnly, "w1-function"},
                                                       {Structure::Generic, "generic"}};
  json summary = json::object();
  for (std::size_t gi = 0; gi < 3; ++gi) {
    const auto [kind, name] = groups[gi];
    std::vector<SampleVerdict> vs(opt.samples);
    const std::uint64_t campaign_seed = gi == 0 ? opt.seed : derive_seed(opt.seed, ~static_cast<std::uint64_t>(8 + gi));
    parallel_for(opt.samples, resolve_threads(opt.threads), [&](std::size_t i) {
      const DrawnSample s = structured_sample(campaign_seed, i, kind);
      SampleVerdict& v = vs[i];
      v.group = name;
      v.index = i;
      v.seed = s.seed;
      v.counted = kind == Structure::Superposition;
      (void)hod1_constants(s.joint);
      auto rows = duality_rows(s.joint);
      for (auto& r : rows) {
        auto it = opt.perturb.find(r.name);
        if (it != opt.perturb.end()) {
          r.left += it->second;
          r.deviation = std::fabs(r.left - r.right);
        }
      }
      json dev = json::object();
      json failed = json::array();
      for (const auto& r : rows) {
        dev[r.name] = r.deviation;
        v.deviation = std::max(v.deviation, r.deviation);
        if (r.deviation > opt.tol_identity) failed.push_back(r.name);
      }
      v.detail = json::object();
      v.detail["deviations"] = dev;
      v.detail["differs"] = failed;
      v.detail["markov_residual_x1"] = clamp_for_report(expr_value(s.joint, "I(W2;W1|QX1)"));
      v.detail["markov_residual_x2"] = clamp_for_report(expr_value(s.joint, "I(W2;W1|QX2)"));
      v.detail["output_residual"] = clamp_for_report(expr_value(s.joint, "I(Y1;W1|QX1W2)"));
      v.pass = failed.empty();
      if (!v.pass && v.counted) attach_replay(v, s);
    });
    std::map<std::string, double> worst;
    std::size_t exact = 0;
    for (const auto& v : vs) {
      exact += v.pass;
      for (auto it = v.detail["deviations"].begin(); it != v.detail["deviations"].end(); ++it)
        worst[it.key()] = std::max(worst[it.key()], it.value().get<double>());
    }
    summary[name] = {{"samples_all_equal", exact}, {"max_deviation_by_constant", worst}};
    all.insert(all.end(), std::make_move_iterator(vs.begin()), std::make_move_iterator(vs.end()));
  }
  return finalize("eq14", opt, std::move(all), std::move(summary));
}

RegionReport check_binning_derivation(const CheckOptions& opt) {
  auto verdicts = campaign(opt, opt.samples, "", Form::Hod, {}, 0, [&](const DrawnSample& s, SampleVerdict& v) {
    InequalitySystem sys = binning_budget_system(s.joint);
    sys = fm_eliminate(fm_eliminate(sys, "s2"), "t2");
    BoundConstants c = hod_constants(s.joint);
    apply_perturbation(c, opt.perturb);
    const InequalitySystem thm3 = build_system(c, SystemKind::Thm3Quadruple);

    // Target rows over the projected variable order.
    std::map<std::vector<Rational>, std::pair<std::string, double>> target;
    for (const auto& label : binning_target_rows()) {
      const Halfspace& h = thm3.row(label);
      if (!h.coefficients[thm3.index_of("S1")].is_zero()) throw ModelError("target row mentions S1");
      std::vector<Rational> key;
      for (const auto& name : sys.variables()) key.push_back(h.coefficients[thm3.index_of(name)]);
      target[key] = {label, h.bound};
    }
    json matched = json::array();
    json unmatched = json::array();
    std::size_t hits = 0;
    double worst = 0.0;
    for (const auto& h : sys.rows()) {
      auto it = target.find(h.coefficients);
      if (it == target.end()) {
        unmatched.push_back({{"label", h.label}, {"row", sys.format_row(h)}});
        continue;
      }
      const double gap = std::fabs(h.bound - it->second.second);
      worst = std::max(worst, gap);
      ++hits;
      matched.push_back({{"target", it->second.first}, {"parents", h.label}, {"deviation", gap}});
    }
    v.deviation = worst;
    v.detail["matched"] = matched;
    v.pass = unmatched.empty() && hits == target.size() && sys.size() == target.size() && worst <= opt.tol_identity;
    if (!v.pass) {
      v.detail["unmatched"] = unmatched;
      v.detail["projection"] = rows_json(sys);
    }
  });
  json summary = {{"target_rows", binning_target_rows()}};
  return finalize("binning", opt, std::move(verdicts), std::move(summary));
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {"thm4",       "thm6",       "corollary1", "corollary2_4", "corollary3",
                                                 "corollary5", "corollary6", "eq14",       "binning"};
  return names;
}

RegionReport run_check(std::string_view name, const CheckOptions& opt) {
  if (opt.samples == 0) throw UsageError("a check needs at least one sample");
  if (name == "thm4") return check_thm4_equivalence(opt);
  if (name == "thm6") return check_thm6_equivalence(opt);
  if (name == "corollary1") return check_corollary1(opt);
  if (name == "corollary2_4") return check_corollary2_and_4(opt);
  if (name == "corollary3") return check_corollary3(opt);
  if (name == "corollary5") return check_corollary5(opt);
  if (name == "corollary6") return check_corollary6(opt);
  if (name == "eq14") return check_eq14_duality(opt);
  if (name == "binning") return check_binning_derivation(opt);
  throw UsageError("unknown check '" + std::string(name) + "'");
}

}  // namespace rrk
