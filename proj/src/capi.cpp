#include "rrk/rrk.h"

#include <exception>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>

#include "rrk/errors.hpp"
#include "rrk/explorer.hpp"
#include "rrk/info.hpp"
#include "rrk/verifier.hpp"

struct rrk_options {
  rrk::ExplorerOptions value;
};

struct rrk_scenario {
  rrk::Scenario value;
};

struct rrk_result {
  rrk::CommandResult value;
};

struct rrk_distribution {
  rrk::JointDistribution value;
};

struct rrk_constants {
  rrk::BoundConstants value;
};

struct rrk_system {
  rrk::InequalitySystem value;
  mutable std::optional<std::string> json;
};

namespace {

struct LastError {
  std::string message;
  int line = 0;
  int column = 0;
};

thread_local LastError last_error;

rrk_status fail(rrk_status s, std::string message, int line = 0, int column = 0) {
  last_error = {std::move(message), line, column};
  return s;
}

template <class F>
rrk_status guarded(F&& body) noexcept {
  try {
    body();
    return RRK_OK;
  } catch (const rrk::ParseError& e) {
    return fail(RRK_ERR_USAGE, e.what(), e.line(), e.column());
  } catch (const rrk::Error& e) {
    return fail(static_cast<rrk_status>(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RRK_ERR_INTERNAL, "out of memory");
  } catch (const std::overflow_error& e) {
    return fail(RRK_ERR_INTERNAL, std::string("exact arithmetic overflow: ") + e.what());
  } catch (const std::exception& e) {
    return fail(RRK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RRK_ERR_INTERNAL, "unknown error");
  }
}

#define RRK_REQUIRE(cond, what) \
  do {                          \
    if (!(cond)) return fail(RRK_ERR_USAGE, what); \
  } while (0)

rrk::Family family_or_default(const char* family, const rrk::Scenario& sc) {
  return family ? rrk::parse_family(family) : rrk::default_family(sc.form);
}

const rrk::ExplorerOptions& options_or_default(const rrk_options* opt) {
  static const rrk::ExplorerOptions defaults;
  return opt ? opt->value : defaults;
}

template <class Make>
rrk_status produce(rrk_result** out, Make&& make) {
  RRK_REQUIRE(out, "null output pointer");
  *out = nullptr;
  return guarded([&] { *out = new rrk_result{make()}; });
}

}  // namespace

extern "C" {

const char* rrk_version(void) { return "0.1.0"; }
const char* rrk_last_error(void) { return last_error.message.c_str(); }
int rrk_last_error_line(void) { return last_error.line; }
int rrk_last_error_column(void) { return last_error.column; }

rrk_status rrk_options_create(rrk_options** out) {
  RRK_REQUIRE(out, "null output pointer");
  return guarded([&] { *out = new rrk_options{}; });
}

void rrk_options_destroy(rrk_options* opt) { delete opt; }

rrk_status rrk_options_set_tol_polytope(rrk_options* opt, double tol) {
  RRK_REQUIRE(opt, "null options");
  RRK_REQUIRE(tol > 0.0, "polytope tolerance must be positive");
  opt->value.tol_polytope = tol;
  return RRK_OK;
}

rrk_status rrk_options_set_tol_identity(rrk_options* opt, double tol) {
  RRK_REQUIRE(opt, "null options");
  RRK_REQUIRE(tol > 0.0, "identity tolerance must be positive");
  opt->value.tol_identity = tol;
  return RRK_OK;
}

rrk_status rrk_options_set_seed(rrk_options* opt, uint64_t seed) {
  RRK_REQUIRE(opt, "null options");
  opt->value.seed = seed;
  return RRK_OK;
}

rrk_status rrk_options_set_samples(rrk_options* opt, size_t samples) {
  RRK_REQUIRE(opt, "null options");
  RRK_REQUIRE(samples > 0, "sample count must be positive");
  opt->value.samples = samples;
  return RRK_OK;
}

rrk_status rrk_options_set_threads(rrk_options* opt, unsigned threads) {
  RRK_REQUIRE(opt, "null options");
  opt->value.threads = threads;
  return RRK_OK;
}

rrk_status rrk_options_add_perturbation(rrk_options* opt, const char* label, double delta) {
  RRK_REQUIRE(opt && label, "null argument");
  return guarded([&] { opt->value.perturb[label] += delta; });
}

rrk_status rrk_scenario_load(const char* path, rrk_scenario** out) {
  RRK_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new rrk_scenario{rrk::load_scenario(path)}; });
}

rrk_status rrk_scenario_parse(const char* text, const char* name, rrk_scenario** out) {
  RRK_REQUIRE(text && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new rrk_scenario{rrk::parse_scenario(text, name ? name : "scenario")}; });
}

void rrk_scenario_destroy(rrk_scenario* sc) { delete sc; }

const char* rrk_scenario_form(const rrk_scenario* sc) { return sc ? rrk::form_id(sc->value.form).data() : ""; }

rrk_status rrk_eval(const rrk_scenario* sc, const char* family, const rrk_options* opt, rrk_result** out) {
  RRK_REQUIRE(sc, "null scenario");
  return produce(out, [&] {
    return rrk::cmd_eval(sc->value, family_or_default(family, sc->value), options_or_default(opt));
  });
}

rrk_status rrk_project(const rrk_scenario* sc, const char* family, const rrk_options* opt, rrk_result** out) {
  RRK_REQUIRE(sc, "null scenario");
  return produce(out, [&] {
    return rrk::cmd_project(sc->value, family_or_default(family, sc->value), options_or_default(opt));
  });
}

rrk_status rrk_compare(const rrk_scenario* a, const char* family_a, const rrk_scenario* b, const char* family_b,
                       int project, const rrk_options* opt, rrk_result** out) {
  RRK_REQUIRE(a && b, "null scenario");
  return produce(out, [&] {
    return rrk::cmd_compare(a->value, family_or_default(family_a, a->value), b->value,
                            family_or_default(family_b, b->value), options_or_default(opt), project != 0);
  });
}

rrk_status rrk_verify(const char* check, const rrk_options* opt, rrk_result** out) {
  RRK_REQUIRE(check, "null check name");
  return produce(out, [&] { return rrk::cmd_verify(check, options_or_default(opt)); });
}

rrk_status rrk_union(const rrk_scenario* sc, const char* family, const rrk_options* opt, rrk_result** out) {
  RRK_REQUIRE(sc, "null scenario");
  return produce(out, [&] {
    return rrk::cmd_union(sc->value, family_or_default(family, sc->value), options_or_default(opt));
  });
}

rrk_status rrk_plot(const char* const* names, const char* const* contents, size_t count, rrk_result** out) {
  RRK_REQUIRE(count == 0 || (names && contents), "null input arrays");
  return produce(out, [&] {
    std::vector<std::pair<std::string, std::string>> inputs;
    for (size_t i = 0; i < count; ++i) {
      if (!names[i] || !contents[i]) throw rrk::UsageError("null plot input");
      inputs.emplace_back(names[i], contents[i]);
    }
    return rrk::cmd_plot(inputs);
  });
}

size_t rrk_check_count(void) { return rrk::check_names().size(); }

const char* rrk_check_name(size_t index) {
  const auto& names = rrk::check_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

int rrk_result_status(const rrk_result* r) { return r ? r->value.status : 0; }
const char* rrk_result_json(const rrk_result* r) { return r ? r->value.json.c_str() : ""; }
const char* rrk_result_csv(const rrk_result* r) { return r ? r->value.csv.c_str() : ""; }
const char* rrk_result_svg(const rrk_result* r) { return r ? r->value.svg.c_str() : ""; }
const char* rrk_result_text(const rrk_result* r) { return r ? r->value.text.c_str() : ""; }
void rrk_result_destroy(rrk_result* r) { delete r; }

rrk_status rrk_scenario_distribution(const rrk_scenario* sc, size_t index, uint64_t seed, rrk_distribution** out) {
  RRK_REQUIRE(sc && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new rrk_distribution{sc->value.distribution(index, seed)}; });
}

void rrk_distribution_destroy(rrk_distribution* d) { delete d; }

rrk_status rrk_info(const rrk_distribution* d, const char* expr, double* bits) {
  RRK_REQUIRE(d && expr && bits, "null argument");
  return guarded([&] { *bits = rrk::eval(d->value, rrk::parse_expr(expr)); });
}

rrk_status rrk_constants_evaluate(const rrk_distribution* d, const char* family, rrk_constants** out) {
  RRK_REQUIRE(d && family && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new rrk_constants{rrk::evaluate_constants(rrk::parse_family(family), d->value)}; });
}

void rrk_constants_destroy(rrk_constants* c) { delete c; }
size_t rrk_constants_count(const rrk_constants* c) { return c ? c->value.labels().size() : 0; }

const char* rrk_constants_label(const rrk_constants* c, size_t index) {
  if (!c || index >= c->value.labels().size()) return nullptr;
  return c->value.labels()[index].c_str();
}

double rrk_constants_value(const rrk_constants* c, size_t index) {
  if (!c || index >= c->value.labels().size()) return 0.0;
  return c->value.at(c->value.labels()[index]);
}

rrk_status rrk_constants_set(rrk_constants* c, const char* label, double value) {
  RRK_REQUIRE(c && label, "null argument");
  return guarded([&] { c->value.set(label, value); });
}

rrk_status rrk_system_build(const rrk_constants* c, const char* kind, rrk_system** out) {
  RRK_REQUIRE(c && kind && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new rrk_system{rrk::build_system(c->value, rrk::parse_system(kind)), {}}; });
}

rrk_status rrk_system_project(const rrk_system* sys, rrk_system** out) {
  RRK_REQUIRE(sys && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new rrk_system{rrk::project_rate_pair(sys->value), {}}; });
}

rrk_status rrk_system_reduce(const rrk_system* sys, double tol, rrk_system** out) {
  RRK_REQUIRE(sys && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new rrk_system{rrk::remove_redundant(sys->value, tol), {}}; });
}

rrk_status rrk_system_contains(const rrk_system* outer, const rrk_system* inner, double tol, int* holds) {
  RRK_REQUIRE(outer && inner && holds, "null argument");
  return guarded([&] { *holds = rrk::contains(outer->value, inner->value, tol).holds ? 1 : 0; });
}

size_t rrk_system_rows(const rrk_system* sys) { return sys ? sys->value.size() : 0; }
size_t rrk_system_dimension(const rrk_system* sys) { return sys ? sys->value.dimension() : 0; }

rrk_status rrk_system_vertices(const rrk_system* sys, double tol, double* xy, size_t capacity, size_t* count) {
  RRK_REQUIRE(sys && count, "null argument");
  RRK_REQUIRE(capacity == 0 || xy, "null vertex buffer");
  return guarded([&] {
    const rrk::Polytope2D p = rrk::vertices2d(sys->value, tol);
    *count = p.vertices.size();
    for (size_t i = 0; i < p.vertices.size() && i < capacity; ++i) {
      xy[2 * i] = p.vertices[i].r1;
      xy[2 * i + 1] = p.vertices[i].r2;
    }
  });
}

const char* rrk_system_json(const rrk_system* sys) {
  if (!sys) return "";
  try {
    if (!sys->json) sys->json = rrk::system_json(sys->value).dump(2);
    return sys->json->c_str();
  } catch (...) {
    fail(RRK_ERR_INTERNAL, "could not serialize system");
    return "";
  }
}

void rrk_system_destroy(rrk_system* sys) { delete sys; }

}  // extern "C"
