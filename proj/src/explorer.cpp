#include "rrk/explorer.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "rrk/errors.hpp"
#include "rrk/info.hpp"
#include "rrk/rng.hpp"
#include "rrk/verifier.hpp"

namespace rrk {

using nlohmann::json;

namespace {

double clean(double x) { return x == 0.0 ? 0.0 : x; }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double tol_polytope(const Scenario& sc, const ExplorerOptions& opt) { return opt.tol_polytope.value_or(sc.tol_polytope); }
std::uint64_t stream_seed(const Scenario& sc, const ExplorerOptions& opt) { return opt.seed.value_or(sc.seed); }

json sample_json(const Scenario& sc, std::size_t index, std::uint64_t seed) {
  if (!sc.sampled()) return {{"explicit", true}};
  return {{"index", index}, {"stream_seed", seed}, {"seed", derive_seed(seed, index)}};
}

struct Evaluated {
  JointDistribution joint;
  BoundConstants constants;
};

Evaluated evaluate(const Scenario& sc, Family f, std::size_t index, std::uint64_t seed,
                   const std::map<std::string, double>& perturb = {}) {
  JointDistribution d = sc.distribution(index, seed);
  BoundConstants c = evaluate_constants(f, d);
  apply_perturbation(c, perturb);
  return {std::move(d), std::move(c)};
}

struct Projected {
  InequalitySystem quadruple;
  InequalitySystem raw;
  InequalitySystem reduced;
  Polytope2D region;
};

Projected project(const BoundConstants& c, Family f, double tol) {
  Projected p;
  p.quadruple = build_system(c, quadruple_of(f));
  p.raw = project_rate_pair(p.quadruple);
  p.reduced = remove_redundant(p.raw, tol);
  p.region = vertices2d(p.reduced, tol);
  return p;
}

json witness_json(const std::vector<double>& w, const std::vector<std::string>& vars) {
  json o = json::object();
  for (std::size_t i = 0; i < w.size() && i < vars.size(); ++i) o[vars[i]] = w[i];
  return o;
}

json containment_json(const Containment& c, const std::vector<std::string>& vars) {
  json o = {{"holds", c.holds}};
  if (!c.holds) {
    o["violated_row"] = c.violated_label;
    o["excess"] = std::isfinite(c.excess) ? c.excess : std::numeric_limits<double>::max();
    o["witness"] = witness_json(c.witness, vars);
  }
  return o;
}

std::string point_text(const std::vector<double>& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? ", " : "") + fmt("%.6g", clean(w[i]));
  return s + ")";
}

}  // namespace

Family default_family(Form form) {
  switch (form) {
    case Form::Dmt: return Family::Dmt;
    case Form::Rtd: return Family::Rtd;
    case Form::ChongMotaniGarg:
    case Form::HodSuperposition: return Family::Hod1;
    default: return Family::Hod;
  }
}

json system_json(const InequalitySystem& sys) {
  json rows = json::array();
  for (const auto& h : sys.rows()) {
    json coeffs = json::array();
    for (const auto& a : h.coefficients) coeffs.push_back(a.str());
    json terms = json::object();
    for (const auto& [k, v] : h.terms) terms[k] = v.str();
    rows.push_back({{"label", h.label}, {"coefficients", coeffs}, {"bound", h.bound}, {"terms", terms},
                    {"text", sys.format_row(h)}});
  }
  json nonneg = json::array();
  for (std::size_t i = 0; i < sys.dimension(); ++i)
    if (sys.nonnegative(i)) nonneg.push_back(sys.variables()[i]);
  json j = {{"variables", sys.variables()}, {"nonnegative", nonneg}, {"rows", rows}};
  if (sys.flagged_infeasible()) j["infeasible"] = true;
  return j;
}

InequalitySystem system_from_json(const json& j) {
  try {
    InequalitySystem sys(j.at("variables").get<std::vector<std::string>>());
    for (const auto& v : j.value("nonnegative", json::array())) sys.set_nonnegative(v.get<std::string>());
    for (const auto& r : j.at("rows")) {
      Halfspace h;
      for (const auto& a : r.at("coefficients")) h.coefficients.push_back(Rational::parse(a.get<std::string>()));
      h.bound = r.at("bound").get<double>();
      h.label = r.value("label", "");
      const json terms = r.value("terms", json::object());
      for (const auto& [k, v] : terms.items()) h.terms[k] = Rational::parse(v.get<std::string>());
      sys.add_row(std::move(h));
    }
    if (j.value("infeasible", false)) sys.flag_infeasible();
    return sys;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed inequality system: ") + e.what());
  }
}

std::string vertices_csv(const std::vector<Point2>& vertices) {
  std::string out = "R1,R2\n";
  char buf[80];
  for (const auto& p : vertices) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", clean(p.r1), clean(p.r2));
    out += buf;
  }
  return out;
}

json vertices_json(const std::vector<Point2>& vertices) {
  json a = json::array();
  for (const auto& p : vertices) a.push_back({clean(p.r1), clean(p.r2)});
  return a;
}

std::vector<Point2> vertices_from_json(const json& j) {
  std::vector<Point2> out;
  try {
    for (const auto& p : j) out.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed vertex list: ") + e.what());
  }
  return out;
}

PlotSeries series_from_json(const json& j, const std::string& name) {
  if (!j.is_object() || !j.contains("vertices")) throw ParseError(name + ": not a region file (no \"vertices\")");
  std::string legend = name;
  if (j.contains("family")) legend += " [" + j["family"].get<std::string>() + "]";
  return {legend, vertices_from_json(j["vertices"])};
}

CommandResult cmd_eval(const Scenario& sc, Family family, const ExplorerOptions& opt) {
  const std::uint64_t seed = stream_seed(sc, opt);
  const Evaluated e = evaluate(sc, family, 0, seed, opt.perturb);
  json constants = json::array();
  std::ostringstream text;
  text << "family " << family_id(family) << ", form " << form_id(sc.form) << "\n";
  text << "label   row     bits\n";
  for (const auto& def : constant_definitions(family)) {
    const double v = e.constants.at(def.label);
    constants.push_back({{"label", def.label}, {"row", def.row}, {"value", v}, {"definition", to_string(def.expr)}});
    char line[128];
    std::snprintf(line, sizeof line, "%-7s %-7s %.9f\n", def.label.c_str(), def.row.c_str(), clamp_for_report(v));
    text << line;
  }
  json j = {{"type", "constants"},
            {"family", std::string(family_id(family))},
            {"form", std::string(form_id(sc.form))},
            {"source", sc.name},
            {"sample", sample_json(sc, 0, seed)},
            {"constants", constants}};
  CommandResult r;
  r.json = j.dump(2) + "\n";
  r.text = text.str();
  return r;
}

CommandResult cmd_project(const Scenario& sc, Family family, const ExplorerOptions& opt) {
  const std::uint64_t seed = stream_seed(sc, opt);
  const double tol = tol_polytope(sc, opt);
  const Evaluated e = evaluate(sc, family, 0, seed, opt.perturb);
  const Projected p = project(e.constants, family, tol);

  json j = {{"type", "region"},
            {"family", std::string(family_id(family))},
            {"form", std::string(form_id(sc.form))},
            {"source", sc.name},
            {"sample", sample_json(sc, 0, seed)},
            {"tolerance", tol},
            {"constants", constants_json(e.constants)},
            {"system", std::string(system_id(quadruple_of(family)))},
            {"quadruple", system_json(p.quadruple)},
            {"raw", system_json(p.raw)},
            {"reduced", system_json(p.reduced)},
            {"shape", std::string(shape_name(p.region.shape))},
            {"vertices", vertices_json(p.region.vertices)}};

  std::ostringstream text;
  text << "family " << family_id(family) << ": " << p.quadruple.size() << " rows over (";
  for (std::size_t i = 0; i < p.quadruple.dimension(); ++i) text << (i ? "," : "") << p.quadruple.variables()[i];
  text << "), " << p.raw.size() << " after projection, " << p.reduced.size() << " irredundant\n";
  for (const auto& h : p.reduced.rows()) text << "  " << p.reduced.format_row(h) << "   {" << h.label << "}\n";
  if (has_stated_rate_pair(family)) {
    const SystemKind kind = stated_rate_pair(family);
    const InequalitySystem stated = build_system(e.constants, kind);
    const Containment a = contains(stated, p.raw, tol);
    const Containment b = contains(p.raw, stated, tol);
    j["stated"] = {{"system", std::string(system_id(kind))},
                    {"rows", stated.size()},
                    {"equivalent", a.holds && b.holds},
                    {"projection_in_stated", containment_json(a, p.raw.variables())},
                    {"stated_in_projection", containment_json(b, p.raw.variables())}};
    text << "stated " << system_id(kind) << " system (" << stated.size() << " rows): "
         << (a.holds && b.holds ? "equivalent" : "NOT equivalent") << "\n";
  }
  text << shape_name(p.region.shape) << " with " << p.region.vertices.size() << " vertices\n";
  for (const auto& v : p.region.vertices) text << "  " << point_text({v.r1, v.r2}) << "\n";

  CommandResult r;
  r.json = j.dump(2) + "\n";
  r.csv = vertices_csv(p.region.vertices);
  r.text = text.str();
  return r;
}

CommandResult cmd_compare(const Scenario& a, Family fa, const Scenario& b, Family fb, const ExplorerOptions& opt,
                          bool project_first) {
  const double tol = opt.tol_polytope.value_or(std::min(a.tol_polytope, b.tol_polytope));
  const Evaluated ea = evaluate(a, fa, 0, stream_seed(a, opt));
  const Evaluated eb = evaluate(b, fb, 0, stream_seed(b, opt));
  InequalitySystem sa = build_system(ea.constants, quadruple_of(fa));
  InequalitySystem sb = build_system(eb.constants, quadruple_of(fb));
  if (project_first) {
    sa = project_rate_pair(sa);
    sb = project_rate_pair(sb);
  }
  const Containment a_in_b = contains(sb, sa, tol);
  const Containment b_in_a = contains(sa, sb, tol);
  std::string verdict;
  if (a_in_b.holds && b_in_a.holds)
    verdict = "equal";
  else if (a_in_b.holds)
    verdict = "first-inside-second";
  else if (b_in_a.holds)
    verdict = "second-inside-first";
  else
    verdict = "incomparable";

  json j = {{"type", "comparison"},
            {"first", {{"family", std::string(family_id(fa))}, {"source", a.name}, {"sample", sample_json(a, 0, stream_seed(a, opt))}}},
            {"second", {{"family", std::string(family_id(fb))}, {"source", b.name}, {"sample", sample_json(b, 0, stream_seed(b, opt))}}},
            {"variables", sa.variables()},
            {"projected", project_first},
            {"tolerance", tol},
            {"first_in_second", containment_json(a_in_b, sa.variables())},
            {"second_in_first", containment_json(b_in_a, sb.variables())},
            {"verdict", verdict}};
  std::ostringstream text;
  text << family_id(fa) << " (" << a.name << ") vs " << family_id(fb) << " (" << b.name << "): " << verdict << "\n";
  if (!b_in_a.holds)
    text << "  point of " << family_id(fb) << " outside " << family_id(fa) << ": " << point_text(b_in_a.witness)
         << " violates " << b_in_a.violated_label << "\n";
  if (!a_in_b.holds)
    text << "  point of " << family_id(fa) << " outside " << family_id(fb) << ": " << point_text(a_in_b.witness)
         << " violates " << a_in_b.violated_label << "\n";
  CommandResult r;
  r.json = j.dump(2) + "\n";
  r.text = text.str();
  return r;
}

CommandResult cmd_verify(const std::string& check, const ExplorerOptions& opt) {
  CheckOptions co;
  if (opt.samples) co.samples = *opt.samples;
  if (opt.seed) co.seed = *opt.seed;
  if (opt.tol_polytope) co.tol_polytope = *opt.tol_polytope;
  if (opt.tol_identity) co.tol_identity = *opt.tol_identity;
  co.threads = opt.threads;
  co.perturb = opt.perturb;
  const RegionReport rep = run_check(check, co);
  CommandResult r;
  r.status = rep.pass ? 0 : 1;
  r.json = rep.to_json().dump(2) + "\n";
  std::ostringstream text;
  text << rep.human_summary();
  for (const auto& v : rep.verdicts) {
    if (v.pass || !v.counted) continue;
    text << "  first failure: " << (v.group.empty() ? "" : v.group + " ") << "sample " << v.index << " (seed " << v.seed
         << "), deviation " << fmt("%.3g", v.deviation) << "\n";
    if (v.detail.contains("failures")) {
      const auto& f = v.detail["failures"][0];
      text << "    " << f["direction"].get<std::string>() << ": row " << f["row"].get<std::string>() << ", witness "
           << f["witness"].dump() << "\n";
    } else if (v.detail.contains("inclusion_failure")) {
      text << "    witness " << v.detail["inclusion_failure"]["witness"].dump() << "\n";
    }
    break;
  }
  r.text = text.str();
  return r;
}

CommandResult cmd_union(const Scenario& sc, Family family, const ExplorerOptions& opt) {
  const std::uint64_t seed = stream_seed(sc, opt);
  const std::size_t n = opt.samples.value_or(sc.count);
  if (n == 0) throw UsageError("union needs at least one sample");
  const double tol = tol_polytope(sc, opt);
  std::vector<Polytope2D> regions(n);
  parallel_for(n, resolve_threads(opt.threads), [&](std::size_t i) {
    const Evaluated e = evaluate(sc, family, i, seed, opt.perturb);
    regions[i] = project(e.constants, family, tol).region;
  });
  std::vector<Point2> all;
  json per = json::array();
  std::size_t nonempty = 0;
  for (std::size_t i = 0; i < n; ++i) {
    all.insert(all.end(), regions[i].vertices.begin(), regions[i].vertices.end());
    nonempty += regions[i].shape != Polytope2D::Shape::Empty;
    json e = sample_json(sc, i, seed);
    e["shape"] = std::string(shape_name(regions[i].shape));
    e["vertices"] = vertices_json(regions[i].vertices);
    per.push_back(std::move(e));
  }
  const std::vector<Point2> hull = convex_hull(all);
  const char* shape = hull.empty() ? "Empty" : hull.size() == 1 ? "Point" : hull.size() == 2 ? "Segment" : "Polygon";
  json j = {{"type", "union"},
            {"family", std::string(family_id(family))},
            {"form", std::string(form_id(sc.form))},
            {"source", sc.name},
            {"stream_seed", seed},
            {"samples", n},
            {"nonempty_samples", nonempty},
            {"tolerance", tol},
            {"per_sample", per},
            {"shape", shape},
            {"vertices", vertices_json(hull)}};
  CommandResult r;
  r.json = j.dump(2) + "\n";
  r.csv = vertices_csv(hull);
  r.svg = render_svg({{std::string(family_id(family)) + " union, " + std::to_string(n) + " samples", hull}});
  std::ostringstream text;
  text << "union of " << n << " " << family_id(family) << " regions (" << nonempty << " nonempty): " << shape << " with "
       << hull.size() << " vertices\n";
  for (const auto& v : hull) text << "  " << point_text({v.r1, v.r2}) << "\n";
  r.text = text.str();
  return r;
}

CommandResult cmd_plot(const std::vector<std::pair<std::string, std::string>>& inputs) {
  if (inputs.empty()) throw UsageError("plot needs at least one region file");
  std::vector<PlotSeries> series;
  for (const auto& [name, text] : inputs) {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      int line = 1, col = 1;
      for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      throw ParseError(name + ": malformed region file", line, col);
    }
    series.push_back(series_from_json(j, name));
  }
  CommandResult r;
  r.svg = render_svg(series);
  r.text = "plotted " + std::to_string(series.size()) + " region(s)\n";
  return r;
}

}  // namespace rrk
