#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "params.hpp"
#include "vfw/cli.hpp"

namespace vfw {

namespace cli_detail {

using nlohmann::json;

void schema_fail(const std::string& origin, const std::string& path, const std::string& what) {
  throw ScenarioError(origin + ": " + path + ": " + what);
}

ParamReader::ParamReader(const json& obj, std::string origin, std::string path)
    : obj_(&obj), origin_(std::move(origin)), path_(std::move(path)) {
  if (!obj.is_object()) schema_fail(origin_, path_, "expected a JSON object");
}

bool ParamReader::has(const std::string& key) const { return obj_->contains(key); }

void ParamReader::allow_only(std::initializer_list<const char*> keys) const {
  for (const auto& item : obj_->items()) {
    bool known = false;
    for (const char* k : keys) known = known || item.key() == k;
    if (!known) schema_fail(origin_, path_ + "." + item.key(), "unknown key");
  }
}

void ParamReader::fail(const std::string& key, const std::string& what) const {
  schema_fail(origin_, path_ + "." + key, what);
}

const json& ParamReader::at(const std::string& key) const {
  if (!obj_->contains(key)) fail(key, "required key is missing");
  return (*obj_)[key];
}

double ParamReader::as_number(const json& v, const std::string& key) const {
  if (!v.is_number()) fail(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(key, "expected a finite number");
  return x;
}

long ParamReader::as_integer(const json& v, const std::string& key) const {
  if (!v.is_number_integer() && !v.is_number_unsigned()) fail(key, "expected an integer");
  return v.get<long>();
}

double ParamReader::number(const std::string& key, double fallback) const {
  return has(key) ? as_number((*obj_)[key], key) : fallback;
}
double ParamReader::number_req(const std::string& key) const { return as_number(at(key), key); }

long ParamReader::integer(const std::string& key, long fallback) const {
  return has(key) ? as_integer((*obj_)[key], key) : fallback;
}
long ParamReader::integer_req(const std::string& key) const { return as_integer(at(key), key); }

std::string ParamReader::text(const std::string& key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  const json& v = (*obj_)[key];
  if (!v.is_string()) fail(key, "expected a string");
  return v.get<std::string>();
}
std::string ParamReader::text_req(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_string()) fail(key, "expected a string");
  return v.get<std::string>();
}

Vec3 ParamReader::vec3(const std::string& key, const Vec3& fallback) const {
  return has(key) ? vec3_req(key) : fallback;
}
Vec3 ParamReader::vec3_req(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_array() || v.size() != 3) fail(key, "expected an array of 3 numbers");
  return {as_number(v[0], key), as_number(v[1], key), as_number(v[2], key)};
}

std::vector<double> ParamReader::numbers_req(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_array()) fail(key, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(as_number(e, key));
  return out;
}

std::vector<Vec3> ParamReader::vec3_list_req(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of 3-vectors");
  std::vector<Vec3> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_array() || e.size() != 3) fail(key, "expected an array of 3-vectors");
    out.push_back({as_number(e[0], key), as_number(e[1], key), as_number(e[2], key)});
  }
  return out;
}

std::array<int, 3> ParamReader::int_triple_req(const std::string& key) const {
  const json& v = at(key);
  if (v.is_array()) {
    if (v.size() != 3) fail(key, "expected an integer or an array of 3 integers");
    return {static_cast<int>(as_integer(v[0], key)), static_cast<int>(as_integer(v[1], key)),
            static_cast<int>(as_integer(v[2], key))};
  }
  const int n = static_cast<int>(as_integer(v, key));
  return {n, n, n};
}

std::array<double, 3> ParamReader::number_triple_req(const std::string& key) const {
  const json& v = at(key);
  if (v.is_array()) {
    if (v.size() != 3) fail(key, "expected a number or an array of 3 numbers");
    return {as_number(v[0], key), as_number(v[1], key), as_number(v[2], key)};
  }
  const double h = as_number(v, key);
  return {h, h, h};
}

ParamReader ParamReader::object_req(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_object()) fail(key, "expected a JSON object");
  return ParamReader(v, origin_, path_ + "." + key);
}

namespace {

bool one_of(const std::string& value, std::initializer_list<const char*> options) {
  for (const char* o : options)
    if (value == o) return true;
  return false;
}

long checked_steps(const ParamReader& p, long cap) {
  const long steps = p.integer_req("steps");
  if (steps < 1 || steps > cap)
    p.fail("steps", "expected an integer in [1, " + std::to_string(cap) + "]");
  return steps;
}

void checked_record_every(const ParamReader& p, long steps) {
  const long every = p.integer("record_every", 0);
  if (every < 0 || every > steps)
    p.fail("record_every", "expected an integer in [0, steps] (0 = automatic)");
}

void validate_particle(const json& params, const std::string& origin) {
  ParamReader p(params, origin, "params");
  p.allow_only({"model", "scheme", "force", "source", "xi", "m0", "r0", "u0", "t0", "dtau",
                "steps", "record_every"});
  if (!one_of(p.text("model", "free"), {"free", "interaction", "dual"}))
    p.fail("model", "must be one of free | interaction | dual");
  if (!one_of(p.text("scheme", "rk4"), {"rk4", "implicit-midpoint"}))
    p.fail("scheme", "must be one of rk4 | implicit-midpoint");
  if (!one_of(p.text("force", "classical"), {"classical", "modified"}))
    p.fail("force", "must be one of classical | modified");

  ParamReader src = p.object_req("source");
  const std::string type = src.text_req("type");
  if (type == "uniform") {
    src.allow_only({"type", "wbar0", "u_f"});
    if (src.number_req("wbar0") == 0.0) src.fail("wbar0", "must be nonzero");
    if (norm(src.vec3("u_f", {})) >= 1.0) src.fail("u_f", "source speed must stay below c = 1");
  } else if (type == "coulomb") {
    src.allow_only({"type", "xi_f", "center"});
    if (src.number_req("xi_f") == 0.0) src.fail("xi_f", "must be nonzero");
    src.vec3("center", {});
  } else if (type == "moving-coulomb") {
    src.allow_only({"type", "xi_f", "r0", "u_f"});
    if (src.number_req("xi_f") == 0.0) src.fail("xi_f", "must be nonzero");
    src.vec3("r0", {});
    if (norm(src.vec3_req("u_f")) >= 1.0) src.fail("u_f", "source speed must stay below c = 1");
  } else {
    src.fail("type", "must be one of uniform | coulomb | moving-coulomb");
  }

  if (p.number("xi", 1.0) == 0.0) p.fail("xi", "must be nonzero");
  if (!(p.number("m0", 1.0) > 0.0)) p.fail("m0", "must be positive");
  p.vec3_req("r0");
  if (norm(p.vec3("u0", {})) >= 1.0) p.fail("u0", "initial speed must stay below c = 1");
  p.number("t0", 0.0);
  if (!(p.number("dtau", 0.0) >= 0.0)) p.fail("dtau", "must be >= 0 (0 = suggested step)");
  checked_record_every(p, checked_steps(p, 20000000));
}

void validate_fields(const json& params, const std::string& origin) {
  ParamReader p(params, origin, "params");
  p.allow_only({"n", "h", "initial", "mode", "amplitude", "omega", "scheme", "dt", "steps",
                "record_every"});
  const std::array<int, 3> n = p.int_triple_req("n");
  for (int a = 0; a < 3; ++a)
    if (n[a] < 4 || n[a] > 256) p.fail("n", "node counts must lie in [4, 256]");
  const std::array<double, 3> h = p.number_triple_req("h");
  for (int a = 0; a < 3; ++a)
    if (!(h[a] > 0.0)) p.fail("h", "spacings must be positive");

  const std::string initial = p.text("initial", "plane-wave");
  if (!one_of(initial, {"plane-wave", "static-charge", "sourced"}))
    p.fail("initial", "must be one of plane-wave | static-charge | sourced");
  const long mode = p.integer("mode", 1);
  if (initial == "plane-wave" && (mode < 1 || mode > n[0] / 2 - 1))
    p.fail("mode", "plane-wave mode must lie in [1, n_x/2 - 1]");
  p.number("amplitude", 1.0);
  p.number("omega", 0.9);
  if (!one_of(p.text("scheme", "rk4"), {"rk4", "verlet"}))
    p.fail("scheme", "must be one of rk4 | verlet");
  if (!(p.number("dt", 0.0) >= 0.0)) p.fail("dt", "must be >= 0 (0 = a quarter of the CFL bound)");
  checked_record_every(p, checked_steps(p, 1000000));
}

void validate_radiation(const json& params, const std::string& origin) {
  ParamReader p(params, origin, "params");
  p.allow_only({"shape", "a", "xi", "pairs", "trajectory", "order", "t0", "t1", "samples"});
  if (!one_of(p.text("shape", "shell"), {"shell", "ball"}))
    p.fail("shape", "must be one of shell | ball");
  if (!(p.number("a", 1.0) > 0.0)) p.fail("a", "must be positive");
  if (p.number("xi", 1.0) == 0.0) p.fail("xi", "must be nonzero");
  const long pairs = p.integer("pairs", 1000000);
  if (pairs < 100 || pairs > 20000000)
    p.fail("pairs", "expected an integer in [100, 20000000]");

  ParamReader traj = p.object_req("trajectory");
  const std::string type = traj.text_req("type");
  if (type == "harmonic") {
    traj.allow_only({"type", "amplitude", "omega", "phase"});
    traj.vec3_req("amplitude");
    if (!(traj.number_req("omega") > 0.0)) traj.fail("omega", "must be positive");
    traj.number("phase", 0.0);
  } else if (type == "polynomial") {
    traj.allow_only({"type", "coeffs", "t_lo", "t_hi"});
    if (traj.vec3_list_req("coeffs").size() > 8)
      traj.fail("coeffs", "velocity polynomial degree is capped at 7");
    if (!(traj.number_req("t_lo") < traj.number_req("t_hi")))
      traj.fail("t_lo", "validity window must satisfy t_lo < t_hi");
  } else {
    traj.fail("type", "must be one of harmonic | polynomial");
  }

  const long order = p.integer("order", 3);
  if (order < 0 || order > 6) p.fail("order", "expected an integer in [0, 6]");
  const long samples = p.integer("samples", 21);
  if (samples < 2 || samples > 10000) p.fail("samples", "expected an integer in [2, 10000]");
  if (!(p.number("t0", 0.0) < p.number("t1", 1.0)))
    p.fail("t1", "sampling window must satisfy t0 < t1");
}

void validate_brackets(const json& params, const std::string& origin) {
  ParamReader p(params, origin, "params");
  p.allow_only({"experiment", "points", "fd_step", "xi", "field"});
  const std::string experiment = p.text_req("experiment");
  if (!one_of(experiment, {"magnetic-jacobi", "minimal-shift", "su2"}))
    p.fail("experiment", "must be one of magnetic-jacobi | minimal-shift | su2");
  const long points = p.integer("points", 100);
  if (points < 1 || points > 10000) p.fail("points", "expected an integer in [1, 10000]");
  const double fd = p.number("fd_step", 1e-5);
  if (!(fd > 0.0 && fd <= 0.1)) p.fail("fd_step", "must lie in (0, 0.1]");
  if (p.number("xi", 1.0) == 0.0) p.fail("xi", "must be nonzero");
  if (p.has("field")) {
    if (experiment != "magnetic-jacobi")
      p.fail("field", "only meaningful for the magnetic-jacobi experiment");
    if (!one_of(p.text_req("field"), {"solenoidal", "divergent"}))
      p.fail("field", "must be one of solenoidal | divergent");
  }
}

void validate_fock(const json& params, const std::string& origin) {
  ParamReader p(params, origin, "params");
  p.allow_only({"system", "u0", "lambda", "truncation", "t1", "samples", "scheme"});
  const std::string system = p.text("system", "logistic");
  if (!one_of(system, {"logistic", "two-mode", "linear"}))
    p.fail("system", "must be one of logistic | two-mode | linear");

  std::size_t modes = 1;
  if (system == "logistic") {
    if (std::abs(p.number("u0", 0.1)) > 0.9) p.fail("u0", "|u0| must be <= 0.9");
  } else if (system == "two-mode") {
    modes = 2;
    const std::vector<double> u0 = p.numbers_req("u0");
    if (u0.size() != 2) p.fail("u0", "expected an array of 2 numbers");
    for (double u : u0)
      if (std::abs(u) > 0.9) p.fail("u0", "each |u0_j| must be <= 0.9");
  } else {
    const std::vector<double> lambda = p.numbers_req("lambda");
    if (lambda.empty() || lambda.size() > 4) p.fail("lambda", "expected 1 to 4 rate constants");
    for (double l : lambda)
      if (std::abs(l) > 5.0) p.fail("lambda", "each |lambda_j| must be <= 5");
    const std::vector<double> u0 = p.numbers_req("u0");
    if (u0.size() != lambda.size()) p.fail("u0", "must have one entry per lambda entry");
    for (double u : u0)
      if (std::abs(u) > 0.9) p.fail("u0", "each |u0_j| must be <= 0.9");
    modes = lambda.size();
  }
  if (system != "linear" && p.has("lambda"))
    p.fail("lambda", "only meaningful for the linear system");

  const long N = p.integer("truncation", 30);
  if (N < 1) p.fail("truncation", "must be a positive integer");
  // Basis size C(N+s, s); dense propagation wants it desk-sized.
  double size = 1.0;
  for (std::size_t j = 1; j <= modes; ++j)
    size *= static_cast<double>(N + static_cast<long>(j)) / static_cast<double>(j);
  if (size > 400.0) p.fail("truncation", "truncated basis exceeds 400 states");

  if (!(p.number("t1", 1.0) > 0.0)) p.fail("t1", "must be positive");
  const long samples = p.integer("samples", 11);
  if (samples < 2 || samples > 10000) p.fail("samples", "expected an integer in [2, 10000]");
  if (!one_of(p.text("scheme", "expm"), {"expm", "rk4"}))
    p.fail("scheme", "must be one of expm | rk4");
}

void validate_quantum(const json& params, const std::string& origin) {
  ParamReader p(params, origin, "params");
  p.allow_only({"variant", "n", "h", "x0", "mass", "xi", "hbar", "wbar", "A", "packet", "dtau",
                "steps", "record_every"});
  if (!one_of(p.text("variant", "free"), {"free", "minimal", "modified"}))
    p.fail("variant", "must be one of free | minimal | modified");
  const long n = p.integer("n", 256);
  if (n < 4 || n > 1024) p.fail("n", "expected an integer in [4, 1024]");
  const double h = p.number("h", 0.25);
  if (!(h > 0.0)) p.fail("h", "must be positive");
  p.number("x0", 0.0);
  if (!(p.number("mass", 1.0) > 0.0)) p.fail("mass", "must be positive");
  p.number("xi", 1.0);
  if (!(p.number("hbar", 1.0) > 0.0)) p.fail("hbar", "must be positive");

  if (p.has("wbar")) {
    ParamReader w = p.object_req("wbar");
    const std::string type = w.text_req("type");
    if (type == "constant") {
      w.allow_only({"type", "value"});
      w.number_req("value");
    } else if (type == "cosine") {
      w.allow_only({"type", "base", "amp"});
      w.number("base", 0.0);
      w.number_req("amp");
    } else {
      w.fail("type", "must be one of constant | cosine");
    }
  }
  if (p.has("A")) {
    ParamReader a = p.object_req("A");
    const std::string type = a.text_req("type");
    if (type == "zero") {
      a.allow_only({"type"});
    } else if (type == "cosine") {
      a.allow_only({"type", "base", "amp"});
      a.number("base", 0.0);
      a.number_req("amp");
    } else {
      a.fail("type", "must be one of zero | cosine");
    }
  }
  if (p.has("packet")) {
    ParamReader pk = p.object_req("packet");
    pk.allow_only({"xc", "sigma", "k"});
    if (!(pk.number("sigma", 1.0) > 0.0)) pk.fail("sigma", "must be positive");
    pk.number("xc", 0.0);
    pk.number("k", 0.0);
  }
  if (!(p.number("dtau", 0.01) > 0.0)) p.fail("dtau", "must be positive");
  checked_record_every(p, checked_steps(p, 200000));
}

}  // namespace

void validate_params(const std::string& kind, const json& params, const std::string& origin) {
  if (kind == "particle") return validate_particle(params, origin);
  if (kind == "fields") return validate_fields(params, origin);
  if (kind == "radiation") return validate_radiation(params, origin);
  if (kind == "brackets") return validate_brackets(params, origin);
  if (kind == "fock") return validate_fock(params, origin);
  if (kind == "quantum") return validate_quantum(params, origin);
  schema_fail(origin, "kind", "unknown experiment kind '" + kind + "'");
}

}  // namespace cli_detail

using cli_detail::schema_fail;
using nlohmann::json;

Scenario parse_scenario(const json& doc, const std::string& origin) {
  if (!doc.is_object()) schema_fail(origin, "$", "scenario document must be a JSON object");
  for (const auto& item : doc.items()) {
    const std::string& k = item.key();
    if (k != "name" && k != "kind" && k != "seed" && k != "output" && k != "params")
      schema_fail(origin, k, "unknown key");
  }

  Scenario sc;
  if (!doc.contains("name") || !doc["name"].is_string() ||
      doc["name"].get<std::string>().empty())
    schema_fail(origin, "name", "required non-empty string");
  sc.name = doc["name"].get<std::string>();

  if (!doc.contains("kind") || !doc["kind"].is_string())
    schema_fail(origin, "kind", "required string");
  sc.kind = doc["kind"].get<std::string>();

  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    const bool ok = s.is_number_unsigned() || (s.is_number_integer() && s.get<long long>() >= 0);
    if (!ok) schema_fail(origin, "seed", "expected a non-negative integer");
    sc.seed = s.get<std::uint64_t>();
  }

  sc.output = sc.name;
  if (doc.contains("output")) {
    if (!doc["output"].is_string() || doc["output"].get<std::string>().empty())
      schema_fail(origin, "output", "expected a non-empty string");
    sc.output = doc["output"].get<std::string>();
  }
  // The output directory is a single path component under the output root.
  for (char c : sc.output) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
                    c == '.';
    if (!ok || sc.output == "." || sc.output == "..")
      schema_fail(origin, "output", "may contain only letters, digits, '-', '_', '.'");
  }

  sc.params = doc.contains("params") ? doc["params"] : json::object();
  if (!sc.params.is_object()) schema_fail(origin, "params", "expected a JSON object");
  cli_detail::validate_params(sc.kind, sc.params, origin);

  sc.raw = doc;
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open scenario file");
  json doc;
  try {
    doc = json::parse(in);  // parse errors carry line/column positions
  } catch (const json::exception& e) {
    throw ScenarioError(path + ": " + e.what());
  }
  return parse_scenario(doc, path);
}

bool RunReport::all_pass() const {
  return std::all_of(invariants.begin(), invariants.end(),
                     [](const InvariantResult& r) { return r.pass; });
}

std::string output_root() {
  const char* env = std::getenv("VFW_OUTPUT_ROOT");
  return (env != nullptr && *env != '\0') ? std::string(env) : std::string("vfw-out");
}

std::string scenario_dir() {
  const char* env = std::getenv("VFW_SCENARIO_DIR");
  if (env != nullptr && *env != '\0') return std::string(env);
#ifdef VFW_BUNDLED_SCENARIO_DIR
  return VFW_BUNDLED_SCENARIO_DIR;
#else
  return "scenarios";
#endif
}

std::vector<std::string> bundled_scenarios() {
  namespace fs = std::filesystem;
  const std::string dir = scenario_dir();
  if (!fs::is_directory(dir))
    throw ScenarioError("scenario directory not found: " + dir +
                        " (set VFW_SCENARIO_DIR to override)");
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      out.push_back(entry.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace vfw
