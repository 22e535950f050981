#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rrk {

class CounterRng;

// Random variables that appear in the channel models: time sharing Q, the
// private/public message carriers U_i/W_i, inputs X_i, outputs Y_i, and the
// two halves U1a/U1b of a split private carrier.
enum class Var : std::uint8_t { Q, U1, W1, U2, W2, X1, X2, Y1, Y2, U1a, U1b };

using VarList = std::vector<Var>;

std::string_view var_name(Var v);
Var parse_var(std::string_view name);
// Concatenated names, e.g. {U1, W1} -> "U1W1".
std::string format_vars(const VarList& vars);

struct VariableId {
  Var var;
  int size;  // alphabet size, >= 1

  friend bool operator==(const VariableId&, const VariableId&) = default;
};

// Dense probability table over the cartesian product of the variables'
// alphabets, row-major (last variable varies fastest).
class JointDistribution {
 public:
  JointDistribution(std::vector<VariableId> variables, std::vector<double> table);

  const std::vector<VariableId>& variables() const noexcept { return vars_; }
  const std::vector<double>& table() const noexcept { return table_; }
  std::size_t cells() const noexcept { return table_.size(); }
  VarList names() const;

  bool has(Var v) const noexcept;
  std::size_t position(Var v) const;
  int alphabet(Var v) const;
  std::size_t stride(std::size_t position) const { return strides_.at(position); }

  // Probability of one cell, assignment ordered as variables().
  double at(std::span<const int> assignment) const;

 private:
  std::vector<VariableId> vars_;
  std::vector<std::size_t> strides_;
  std::vector<double> table_;
};

// p(targets | given); given-major then targets, row-major.
struct ConditionalTable {
  std::vector<VariableId> targets;
  std::vector<VariableId> given;
  std::vector<double> table;

  std::size_t slice_size() const;
  std::size_t slices() const;
};

// Input-distribution families of the interference / cognitive radio models.
enum class Form {
  IcGeneral,        // ic1
  CrcGeneral,       // crc2
  HanKobayashi,     // hk3
  ChongMotaniGarg,  // cmg4
  Dmt,              // dmt5
  Rtd,              // rtd7
  Hod,              // hod9
  HodSuperposition  // hod12
};

std::string_view form_id(Form f);
Form parse_form(std::string_view id);

struct Factor {
  VarList targets;
  VarList given;

  friend bool operator==(const Factor&, const Factor&) = default;
};

struct FactorizationSpec {
  Form form;
  std::vector<Factor> factors;

  // All targets in factor order.
  VarList variables() const;
  bool has_channel() const;
};

// Factor list exactly as the family is defined, with p(x1 x2 | ...) kept as a
// single joint factor where the family conditions the inputs jointly.
FactorizationSpec factorization(Form form);
// Same family, with the joint input factor realized as two encoders
// p(x1 | q u1 w1) p(x2 | q u2 w2). Identical to factorization() for families
// that already specify separate input factors.
FactorizationSpec encoder_factorization(Form form);
// Appends the memoryless channel factor p(y1 y2 | x1 x2).
FactorizationSpec with_channel(FactorizationSpec spec);

// Throws ModelError unless every variable is a target exactly once and each
// factor conditions only on earlier targets.
void check_spec(const FactorizationSpec& spec);

std::string describe(const Factor& f);

// p(y1 y2 | x1 x2), flat row-major over (x1, x2, y1, y2).
class ChannelModel {
 public:
  ChannelModel(int x1, int x2, int y1, int y2, std::vector<double> kernel);

  int x1() const noexcept { return x1_; }
  int x2() const noexcept { return x2_; }
  int y1() const noexcept { return y1_; }
  int y2() const noexcept { return y2_; }
  const std::vector<double>& kernel() const noexcept { return kernel_; }
  double p(int y1, int y2, int x1, int x2) const;

 private:
  int x1_, x2_, y1_, y2_;
  std::vector<double> kernel_;
};

using AlphabetSizes = std::map<Var, int>;
using Assignment = std::vector<std::pair<Var, int>>;

JointDistribution compose(const std::vector<ConditionalTable>& factors, const FactorizationSpec& spec);

// Keeps `keep` (in that order), summing out everything else.
JointDistribution marginalize(const JointDistribution& d, const VarList& keep);

// Distribution of the remaining variables given the assignment.
JointDistribution condition(const JointDistribution& d, const Assignment& given);

struct FactorizationCheck {
  bool valid = true;
  // Largest |p(t, earlier) - p(t | given) p(earlier)| over all factors.
  double max_violation = 0.0;
  std::string worst_factor;
};

FactorizationCheck validate_factorization(const JointDistribution& d, const FactorizationSpec& spec,
                                          double tolerance = 1e-9);

// One conditional slice per assignment of `given`, each drawn uniformly from
// the probability simplex by normalizing independent exponentials.
ConditionalTable sample_conditional(const Factor& factor, const AlphabetSizes& sizes, CounterRng& rng);
std::vector<ConditionalTable> sample_factors(const FactorizationSpec& spec, const AlphabetSizes& sizes,
                                             std::uint64_t seed);
JointDistribution sample_distribution(const FactorizationSpec& spec, const AlphabetSizes& sizes,
                                      std::uint64_t seed);
ChannelModel sample_channel(int x1, int x2, int y1, int y2, CounterRng& rng);

JointDistribution embed_channel(const JointDistribution& d, const ChannelModel& channel);

// Replaces `parts` by one variable whose value is the mixed-radix code of the
// parts (first part most significant), placed where the first part was.
JointDistribution merge_variables(const JointDistribution& d, const VarList& parts, Var merged);

// Prepends a variable with a one-letter alphabet.
JointDistribution add_constant_variable(const JointDistribution& d, Var v);

}  // namespace rrk
