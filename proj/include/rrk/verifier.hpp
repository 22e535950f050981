#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "rrk/prob.hpp"
#include "rrk/regions.hpp"

namespace rrk {

struct CheckOptions {
  std::size_t samples = 200;
  std::uint64_t seed = 1;
  double tol_polytope = kFacetTolerance;
  double tol_identity = 1e-12;
  unsigned threads = 0;  // 0: RRK_THREADS, else hardware concurrency
  // Fault injection: constant label -> offset added to the side of a check
  // that is being verified against the computed side.
  std::map<std::string, double> perturb;
};

struct SampleVerdict {
  std::string group;  // sub-campaign within a check ("", "superposition", ...)
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool pass = true;
  bool counted = true;  // false for measured-only groups
  double deviation = 0.0;
  nlohmann::json detail;
};

struct RegionReport {
  std::string check;
  CheckOptions options;
  bool pass = true;
  double max_deviation = 0.0;
  std::size_t failures = 0;
  std::vector<SampleVerdict> verdicts;
  nlohmann::json summary;

  nlohmann::json to_json() const;
  std::string human_summary() const;
};

// One sampled distribution of a campaign. Every alphabet is binary except
// |Q|, which each sample draws from {1, 2}; `sizes` overrides either.
struct DrawnSample {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  FactorizationSpec spec;
  std::vector<ConditionalTable> factors;
  JointDistribution joint;
};

DrawnSample draw_sample(Form form, std::uint64_t campaign_seed, std::size_t index, const AlphabetSizes& sizes = {});
nlohmann::json factors_json(const std::vector<ConditionalTable>& factors, const FactorizationSpec& spec);
nlohmann::json constants_json(const BoundConstants& c);

// Worker count from options (or RRK_THREADS), at least 1.
unsigned resolve_threads(unsigned requested);
// Runs body(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

void apply_perturbation(BoundConstants& c, const std::map<std::string, double>& perturb);

RegionReport check_thm4_equivalence(const CheckOptions& opt);
RegionReport check_thm6_equivalence(const CheckOptions& opt);
RegionReport check_corollary1(const CheckOptions& opt);
RegionReport check_corollary2_and_4(const CheckOptions& opt);
RegionReport check_corollary3(const CheckOptions& opt);
RegionReport check_corollary5(const CheckOptions& opt);
RegionReport check_corollary6(const CheckOptions& opt);
RegionReport check_eq14_duality(const CheckOptions& opt);
RegionReport check_binning_derivation(const CheckOptions& opt);

// Names accepted by run_check: thm4, thm6, corollary1, corollary2_4,
// corollary3, corollary5, corollary6, eq14, binning.
const std::vector<std::string>& check_names();
RegionReport run_check(std::string_view name, const CheckOptions& opt);

// ---- single-distribution pieces, shared with tests and the CLI ----------

struct CollapseTerm {
  std::string constant;
  std::string term;
  std::string role;
  double value = 0.0;
};

struct CollapseResult {
  bool holds = true;
  double max_addon = 0.0;
  double max_gap = 0.0;  // |constant - core part|
  std::vector<CollapseTerm> violations;
};

// Whether every non-core term of the family's constants vanishes on d.
CollapseResult collapse(const JointDistribution& d, Family f, double tol);

struct IdentityRow {
  std::string name;
  std::string relation;
  double left = 0.0;
  double right = 0.0;
  double deviation = 0.0;
};

// Each DMT constant against the Hod constant minus its tabulated correction,
// on a DMT-form distribution.
std::vector<IdentityRow> dmt_identities(const BoundConstants& dmt, const BoundConstants& hod,
                                        const JointDistribution& d);
// Corrections for f1 and d2 as they follow from the definitions.
std::vector<IdentityRow> dmt_identities_rederived(const BoundConstants& dmt, const BoundConstants& hod,
                                                  const JointDistribution& d);

// Split-carrier relations, RTD bound against the Hod-side expression.
std::vector<IdentityRow> rtd_relations(const BoundConstants& rtd, const JointDistribution& rtd_joint);
// Same pairing for the degenerate-U1b dominance test: left = RTD, right = Hod side.
std::vector<IdentityRow> rtd_dominance(const BoundConstants& rtd, const JointDistribution& rtd_joint);

// Both expressions of each simplified constant on a form-hod12 joint.
std::vector<IdentityRow> duality_rows(const JointDistribution& d);

}  // namespace rrk
