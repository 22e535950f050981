#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "rrk/polytope.hpp"
#include "rrk/regions.hpp"
#include "rrk/scenario.hpp"
#include "rrk/svg.hpp"

namespace rrk {

// Command-line overrides; unset fields fall back to the scenario file or the
// verifier defaults.
struct ExplorerOptions {
  std::optional<double> tol_polytope;
  std::optional<double> tol_identity;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  unsigned threads = 0;
  std::map<std::string, double> perturb;
};

// Artifacts of one command. `status` follows the CLI exit-code convention
// (0 pass, 1 verification failure); errors are thrown instead.
struct CommandResult {
  int status = 0;
  std::string json;
  std::string csv;
  std::string svg;
  std::string text;  // human-readable summary for standard output
};

// Family whose constants a scenario form is usually evaluated with.
Family default_family(Form form);

CommandResult cmd_eval(const Scenario& sc, Family family, const ExplorerOptions& opt);
CommandResult cmd_project(const Scenario& sc, Family family, const ExplorerOptions& opt);
// Compares the two rate-pair regions, or the unprojected systems when
// `project` is false (IncompatibleError if their variables differ).
CommandResult cmd_compare(const Scenario& a, Family fa, const Scenario& b, Family fb, const ExplorerOptions& opt,
                          bool project = true);
CommandResult cmd_verify(const std::string& check, const ExplorerOptions& opt);
CommandResult cmd_union(const Scenario& sc, Family family, const ExplorerOptions& opt);
// Inputs are (legend name, file contents) of region or union JSON files.
CommandResult cmd_plot(const std::vector<std::pair<std::string, std::string>>& inputs);

// ---- region files ----------------------------------------------------------

nlohmann::json system_json(const InequalitySystem& sys);
// Inverse of system_json: {"variables", "nonnegative", "rows"}.
InequalitySystem system_from_json(const nlohmann::json& j);
std::string vertices_csv(const std::vector<Point2>& vertices);
nlohmann::json vertices_json(const std::vector<Point2>& vertices);
std::vector<Point2> vertices_from_json(const nlohmann::json& j);
// Legend series of a region or union file.
PlotSeries series_from_json(const nlohmann::json& j, const std::string& name);

}  // namespace rrk
