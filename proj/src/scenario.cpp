#include "rrk/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "rrk/errors.hpp"
#include "rrk/rng.hpp"

namespace rrk {

using nlohmann::json;

namespace {

void position_of(std::string_view text, std::size_t byte, int& line, int& column) {
  line = 1;
  column = 1;
  const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw ParseError("scenario " + where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing \"") + key + "\"");
  return *it;
}

int positive_int(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 64)
    schema_error(where, "expected an integer in [1, 64]");
  return v.get<int>();
}

std::vector<double> number_array(const json& v, const std::string& where) {
  if (!v.is_array()) schema_error(where, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) schema_error(where + "/" + std::to_string(i), "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

Var variable(const json& v, const std::string& where) {
  if (!v.is_string()) schema_error(where, "expected a variable name");
  try {
    return parse_var(v.get<std::string>());
  } catch (const Error&) {
    schema_error(where, "unknown variable \"" + v.get<std::string>() + "\"");
  }
}

std::vector<double> preset_kernel(const std::string& preset, const json& ch, int x1, int x2, int y1, int y2,
                                  const std::string& where) {
  double e = 0.0;
  if (auto it = ch.find("crossover"); it != ch.end()) {
    if (!it->is_number() || it->get<double>() < 0.0 || it->get<double>() > 1.0)
      schema_error(where + "/crossover", "expected a probability");
    e = it->get<double>();
  }
  // p(y | centre) with mass 1 - e on the centre, rest spread uniformly.
  auto noisy = [e](int y, int centre, int n) {
    if (n == 1) return 1.0;
    return y == centre ? 1.0 - e : e / (n - 1);
  };
  std::vector<double> k;
  k.reserve(static_cast<std::size_t>(x1) * x2 * y1 * y2);
  for (int a = 0; a < x1; ++a)
    for (int b = 0; b < x2; ++b)
      for (int c = 0; c < y1; ++c)
        for (int d = 0; d < y2; ++d) {
          if (preset == "identity") {
            if (y1 != x1 || y2 != x2) schema_error(where, "identity preset needs |Y_i| = |X_i|");
            k.push_back(c == a && d == b ? 1.0 : 0.0);
          } else if (preset == "symmetric") {
            if (y1 != x1 || y2 != x2) schema_error(where, "symmetric preset needs |Y_i| = |X_i|");
            k.push_back(noisy(c, a, y1) * noisy(d, b, y2));
          } else if (preset == "additive") {
            k.push_back(noisy(c, (a + b) % y1, y1) * noisy(d, (a + b) % y2, y2));
          } else {
            schema_error(where, "unknown preset \"" + preset + "\"");
          }
        }
  return k;
}

ChannelModel parse_channel(const json& ch) {
  const std::string where = "/channel";
  const int x1 = positive_int(require(ch, "x1", where), where + "/x1");
  const int x2 = positive_int(require(ch, "x2", where), where + "/x2");
  const int y1 = positive_int(require(ch, "y1", where), where + "/y1");
  const int y2 = positive_int(require(ch, "y2", where), where + "/y2");
  std::vector<double> kernel;
  if (ch.contains("kernel")) {
    kernel = number_array(ch["kernel"], where + "/kernel");
  } else if (ch.contains("preset")) {
    if (!ch["preset"].is_string()) schema_error(where + "/preset", "expected a string");
    kernel = preset_kernel(ch["preset"].get<std::string>(), ch, x1, x2, y1, y2, where);
  } else {
    schema_error(where, "needs \"kernel\" or \"preset\"");
  }
  return ChannelModel(x1, x2, y1, y2, std::move(kernel));
}

std::vector<VariableId> parse_ids(const json& v, const AlphabetSizes& sizes, const std::string& where) {
  if (!v.is_array()) schema_error(where, "expected an array of variable names");
  std::vector<VariableId> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Var var = variable(v[i], where + "/" + std::to_string(i));
    auto it = sizes.find(var);
    if (it == sizes.end()) schema_error(where, std::string(var_name(var)) + " is not a variable of the form");
    out.push_back({var, it->second});
  }
  return out;
}

ConditionalTable channel_factor(const ChannelModel& ch) {
  return ConditionalTable{{{Var::Y1, ch.y1()}, {Var::Y2, ch.y2()}}, {{Var::X1, ch.x1()}, {Var::X2, ch.x2()}},
                          ch.kernel()};
}

}  // namespace

JointDistribution Scenario::distribution(std::size_t index, std::uint64_t stream_seed) const {
  if (joint) return *joint;
  const FactorizationSpec spec = encoder_factorization(form);
  if (!factors.empty()) {
    std::vector<ConditionalTable> all = factors;
    all.push_back(channel_factor(channel));
    return compose(all, with_channel(spec));
  }
  const std::vector<ConditionalTable> drawn = sample_factors(spec, sizes, derive_seed(stream_seed, index));
  return embed_channel(compose(drawn, spec), channel);
}

Scenario parse_scenario(std::string_view text, std::string name) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    int line = 0, column = 0;
    position_of(text, e.byte, line, column);
    std::string msg = e.what();
    if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ParseError("malformed scenario: " + msg, line, column);
  }
  if (!doc.is_object()) schema_error("/", "top level must be an object");

  Scenario s;
  s.name = std::move(name);
  s.channel = parse_channel(require(doc, "channel", "/"));
  const json& form = require(doc, "form", "/");
  if (!form.is_string()) schema_error("/form", "expected a form id");
  try {
    s.form = parse_form(form.get<std::string>());
  } catch (const Error&) {
    schema_error("/form", "unknown form \"" + form.get<std::string>() + "\"");
  }

  const FactorizationSpec spec = encoder_factorization(s.form);
  for (Var v : spec.variables()) s.sizes[v] = 2;
  s.sizes[Var::X1] = s.channel.x1();
  s.sizes[Var::X2] = s.channel.x2();
  if (auto it = doc.find("alphabets"); it != doc.end()) {
    if (!it->is_object()) schema_error("/alphabets", "expected an object");
    for (const auto& [key, value] : it->items()) {
      const Var v = variable(json(key), "/alphabets");
      if (!s.sizes.count(v)) schema_error("/alphabets/" + key, "not a variable of the form");
      if (v == Var::X1 || v == Var::X2) schema_error("/alphabets/" + key, "input alphabets come from the channel");
      s.sizes[v] = positive_int(value, "/alphabets/" + key);
    }
  }
  s.sizes[Var::Y1] = s.channel.y1();
  s.sizes[Var::Y2] = s.channel.y2();

  if (doc.contains("factors") && doc.contains("joint")) schema_error("/", "give \"factors\" or \"joint\", not both");
  if (auto it = doc.find("factors"); it != doc.end()) {
    if (!it->is_array() || it->size() != spec.factors.size())
      schema_error("/factors", "expected " + std::to_string(spec.factors.size()) + " factor tables for form " +
                                 std::string(form_id(s.form)));
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string where = "/factors/" + std::to_string(i);
      const json& f = (*it)[i];
      ConditionalTable t;
      t.targets = parse_ids(require(f, "targets", where), s.sizes, where + "/targets");
      t.given = parse_ids(f.value("given", json::array()), s.sizes, where + "/given");
      t.table = number_array(require(f, "table", where), where + "/table");
      Factor expected = spec.factors[i];
      VarList tv, gv;
      for (const auto& id : t.targets) tv.push_back(id.var);
      for (const auto& id : t.given) gv.push_back(id.var);
      if (tv != expected.targets || gv != expected.given)
        schema_error(where, "expected factor " + describe(expected));
      if (t.table.size() != t.slices() * t.slice_size())
        throw ModelError("factor " + describe(expected) + " needs " + std::to_string(t.slices() * t.slice_size()) +
                         " entries, got " + std::to_string(t.table.size()));
      s.factors.push_back(std::move(t));
    }
    (void)s.distribution(0);  // surfaces slice-sum errors now
  }
  if (auto it = doc.find("joint"); it != doc.end()) {
    const json& vars = require(*it, "variables", "/joint");
    if (!vars.is_array()) schema_error("/joint/variables", "expected an array");
    std::vector<VariableId> ids;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const std::string where = "/joint/variables/" + std::to_string(i);
      ids.push_back({variable(require(vars[i], "name", where), where + "/name"),
                     positive_int(require(vars[i], "size", where), where + "/size")});
    }
    JointDistribution d(std::move(ids), number_array(require(*it, "table", "/joint"), "/joint/table"));
    if (!d.has(Var::Y1) && !d.has(Var::Y2)) d = embed_channel(d, s.channel);
    const FactorizationCheck fc = validate_factorization(d, with_channel(spec), 1e-9);
    if (!fc.valid) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3g", fc.max_violation);
      throw ModelError("joint violates the " + std::string(form_id(s.form)) + " factorization at factor " +
                       fc.worst_factor + " by " + buf);
    }
    s.joint = std::move(d);
  }

  if (auto it = doc.find("sampling"); it != doc.end()) {
    if (!it->is_object()) schema_error("/sampling", "expected an object");
    if (auto c = it->find("count"); c != it->end()) {
      if (!c->is_number_unsigned() || c->get<std::size_t>() == 0) schema_error("/sampling/count", "expected a positive integer");
      s.count = c->get<std::size_t>();
    }
    if (auto c = it->find("seed"); c != it->end()) {
      if (!c->is_number_unsigned()) schema_error("/sampling/seed", "expected a nonnegative integer");
      s.seed = c->get<std::uint64_t>();
    }
  }
  if (auto it = doc.find("tol"); it != doc.end()) {
    if (!it->is_object()) schema_error("/tol", "expected an object");
    auto tol = [&](const char* key, double& out) {
      if (auto c = it->find(key); c != it->end()) {
        if (!c->is_number() || !(c->get<double>() > 0.0)) schema_error(std::string("/tol/") + key, "expected a positive number");
        out = c->get<double>();
      }
    };
    tol("polytope", s.tol_polytope);
    tol("identity", s.tol_identity);
  }
  return s;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Scenario load_scenario(const std::string& path) { return parse_scenario(read_text_file(path), path); }

}  // namespace rrk
