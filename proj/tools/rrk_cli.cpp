// rrk: command-line front end over the librrk C interface.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rrk/rrk.h"

namespace {

struct Handles {
  rrk_options* opt = nullptr;
  std::vector<rrk_scenario*> scenarios;
  rrk_result* result = nullptr;
  ~Handles() {
    rrk_result_destroy(result);
    for (auto* s : scenarios) rrk_scenario_destroy(s);
    rrk_options_destroy(opt);
  }
};

int report_error(rrk_status s) {
  std::cerr << "rrk: error: " << rrk_last_error() << "\n";
  return static_cast<int>(s);
}

bool write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
  out.close();
  if (!out) {
    std::cerr << "rrk: error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

bool read_file(const std::string& path, std::string& contents) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "rrk: error: cannot open " << path << "\n";
    return false;
  }
  std::ostringstream os;
  os << in.rdbuf();
  contents = os.str();
  return true;
}

// Emits artifacts: JSON to --out or stdout (--json), CSV/SVG when requested.
int emit(const rrk_result* r, const std::string& out, bool json_stdout, const std::string& csv, const std::string& svg) {
  if (json_stdout)
    std::cout << rrk_result_json(r);
  else
    std::cout << rrk_result_text(r);
  if (!out.empty() && !write_file(out, rrk_result_json(r))) return 2;
  if (!csv.empty() && !write_file(csv, rrk_result_csv(r))) return 2;
  if (!svg.empty() && !write_file(svg, rrk_result_svg(r))) return 2;
  return rrk_result_status(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Achievable rate regions for interference and cognitive radio channels"};
  app.require_subcommand(1);
  app.fallthrough();

  double tol_polytope = 0.0, tol_identity = 0.0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  unsigned threads = 0;
  std::string out;
  bool json_stdout = false;
  std::vector<std::string> perturb;
  auto* o_tolp = app.add_option("--tol-polytope", tol_polytope, "Polytope tolerance (default 1e-9)");
  auto* o_toli = app.add_option("--tol-identity", tol_identity, "Identity tolerance (default 1e-12)");
  auto* o_seed = app.add_option("--seed", seed, "Campaign or sample-stream seed");
  auto* o_samples = app.add_option("--samples", samples, "Number of sampled distributions");
  app.add_option("--threads", threads, "Worker threads (default: RRK_THREADS or all cores)");
  app.add_option("--out", out, "Write the JSON artifact (SVG for plot) to this file");
  app.add_flag("--json", json_stdout, "Print JSON instead of the text summary");
  app.add_option("--perturb", perturb, "LABEL=delta fault injection")->group("");

  std::string family, other_family;
  std::vector<std::string> scenario_paths;
  std::string csv, svg;

  auto* eval = app.add_subcommand("eval", "Evaluate the bound constants of a scenario");
  eval->add_option("scenario", scenario_paths, "Scenario JSON")->required()->expected(1);
  eval->add_option("--family", family, "hod, dmt, rtd or hod1 (default from the form)");

  auto* project = app.add_subcommand("project", "Project a family's system onto (R1, R2)");
  project->add_option("scenario", scenario_paths, "Scenario JSON")->required()->expected(1);
  project->add_option("--family", family, "Constant family");
  project->add_option("--csv", csv, "Write the vertices as CSV");

  bool unprojected = false;
  auto* compare = app.add_subcommand("compare", "Mutual containment of two regions");
  compare->add_option("scenarios", scenario_paths, "One or two scenario files")->required()->expected(1, 2);
  compare->add_option("--family", family, "Family of the first region");
  compare->add_option("--other-family", other_family, "Family of the second region (default: --family)");
  compare->add_flag("--no-project", unprojected, "Compare the systems before projection");

  std::string check;
  auto* verify = app.add_subcommand("verify", "Run a sampled verification campaign");
  verify->add_option("check", check, "Check name")->required();

  auto* uni = app.add_subcommand("union", "Convex hull of sampled rate-pair regions");
  uni->add_option("scenario", scenario_paths, "Scenario JSON")->required()->expected(1);
  uni->add_option("--family", family, "Constant family");
  uni->add_option("--csv", csv, "Write the hull vertices as CSV");
  uni->add_option("--svg", svg, "Write an SVG of the hull");

  std::vector<std::string> region_files;
  auto* plot = app.add_subcommand("plot", "Draw region or union JSON files as SVG");
  plot->add_option("regions", region_files, "Region files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Handles h;
  if (rrk_status s = rrk_options_create(&h.opt)) return report_error(s);
  rrk_status s = RRK_OK;
  if (*o_tolp && (s = rrk_options_set_tol_polytope(h.opt, tol_polytope))) return report_error(s);
  if (*o_toli && (s = rrk_options_set_tol_identity(h.opt, tol_identity))) return report_error(s);
  if (*o_seed && (s = rrk_options_set_seed(h.opt, seed))) return report_error(s);
  if (*o_samples && (s = rrk_options_set_samples(h.opt, samples))) return report_error(s);
  if ((s = rrk_options_set_threads(h.opt, threads))) return report_error(s);
  for (const auto& p : perturb) {
    const auto eq = p.find('=');
    char* end = nullptr;
    const double delta = eq == std::string::npos ? 0.0 : std::strtod(p.c_str() + eq + 1, &end);
    if (eq == std::string::npos || eq == 0 || !end || *end != '\0') {
      std::cerr << "rrk: error: --perturb expects LABEL=delta, got '" << p << "'\n";
      return 2;
    }
    if ((s = rrk_options_add_perturbation(h.opt, p.substr(0, eq).c_str(), delta))) return report_error(s);
  }
  for (const auto& path : scenario_paths) {
    rrk_scenario* sc = nullptr;
    if ((s = rrk_scenario_load(path.c_str(), &sc))) return report_error(s);
    h.scenarios.push_back(sc);
  }
  const char* fam = family.empty() ? nullptr : family.c_str();

  if (*eval) {
    if ((s = rrk_eval(h.scenarios[0], fam, h.opt, &h.result))) return report_error(s);
    return emit(h.result, out, json_stdout, "", "");
  }
  if (*project) {
    if ((s = rrk_project(h.scenarios[0], fam, h.opt, &h.result))) return report_error(s);
    return emit(h.result, out, json_stdout, csv, "");
  }
  if (*compare) {
    rrk_scenario* second = h.scenarios.size() > 1 ? h.scenarios[1] : h.scenarios[0];
    const char* fam_b = other_family.empty() ? fam : other_family.c_str();
    if ((s = rrk_compare(h.scenarios[0], fam, second, fam_b, unprojected ? 0 : 1, h.opt, &h.result)))
      return report_error(s);
    return emit(h.result, out, json_stdout, "", "");
  }
  if (*verify) {
    if ((s = rrk_verify(check.c_str(), h.opt, &h.result))) return report_error(s);
    const std::string report = out.empty() ? "verify-" + check + ".json" : out;
    const int rc = emit(h.result, report, json_stdout, "", "");
    if (!json_stdout) std::cout << "report written to " << report << "\n";
    return rc;
  }
  if (*uni) {
    if ((s = rrk_union(h.scenarios[0], fam, h.opt, &h.result))) return report_error(s);
    return emit(h.result, out, json_stdout, csv, svg);
  }
  if (*plot) {
    std::vector<std::string> contents(region_files.size());
    std::vector<const char*> names, texts;
    for (std::size_t i = 0; i < region_files.size(); ++i) {
      if (!read_file(region_files[i], contents[i])) return 2;
      names.push_back(region_files[i].c_str());
      texts.push_back(contents[i].c_str());
    }
    if ((s = rrk_plot(names.data(), texts.data(), names.size(), &h.result))) return report_error(s);
    if (out.empty()) {
      std::cout << rrk_result_svg(h.result);
      return 0;
    }
    if (!write_file(out, rrk_result_svg(h.result))) return 2;
    std::cout << rrk_result_text(h.result);
    return 0;
  }
  return 2;
}
