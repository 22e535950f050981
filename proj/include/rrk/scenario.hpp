#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rrk/polytope.hpp"
#include "rrk/prob.hpp"

namespace rrk {

// A channel plus a recipe for distributions over the auxiliaries and inputs:
// explicit factor tables, an explicit joint, or a seeded sample stream.
//
//   {
//     "channel": {"x1": 2, "x2": 2, "y1": 2, "y2": 2, "kernel": [...]},
//     "form": "hod9",
//     "alphabets": {"Q": 2, "U1": 2},
//     "factors": [{"targets": ["Q"], "given": [], "table": [0.5, 0.5]}, ...],
//     "sampling": {"count": 50, "seed": 7},
//     "tol": {"polytope": 1e-9, "identity": 1e-12}
//   }
//
// "kernel" is p(y1 y2 | x1 x2) row-major over (x1, x2, y1, y2). Instead of a
// kernel the channel may name a preset: "identity", "symmetric" (independent
// symmetric channels with "crossover") or "additive" (Y_i a noisy copy of
// X1 + X2 mod |Y_i|). A "joint" object {"variables": [{"name", "size"}],
// "table": [...]} replaces "factors"; channel outputs are appended when absent.
struct Scenario {
  std::string name;
  ChannelModel channel{2, 2, 2, 2, std::vector<double>(16, 0.25)};
  Form form = Form::Hod;
  AlphabetSizes sizes;  // every variable of the form, channel alphabets included
  std::vector<ConditionalTable> factors;
  std::optional<JointDistribution> joint;
  std::size_t count = 50;
  std::uint64_t seed = 1;
  double tol_polytope = kFacetTolerance;
  double tol_identity = 1e-12;

  bool sampled() const noexcept { return factors.empty() && !joint; }
  // Distribution `index` of the stream started at `seed`. Explicit scenarios
  // return their single distribution for every index.
  JointDistribution distribution(std::size_t index, std::uint64_t stream_seed) const;
  JointDistribution distribution(std::size_t index) const { return distribution(index, seed); }
};

// Throws ParseError (with line and column for syntax errors) or ModelError.
Scenario parse_scenario(std::string_view text, std::string name = "scenario");
Scenario load_scenario(const std::string& path);

// Reads a whole file; UsageError if it cannot be opened.
std::string read_text_file(const std::string& path);

}  // namespace rrk
