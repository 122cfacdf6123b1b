#include "visc/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <random>
#include <sstream>

#include <json.hpp>

#include "visc/error.hpp"
#include "visc/projections.hpp"
#include "visc/trace_io.hpp"

namespace visc {

namespace {

using nlohmann::json;
using Defaults = std::vector<std::pair<std::string, std::string>>;

const std::vector<std::string> kOverrideKeys{"theta", "thetas",        "seed",     "seeds",
                                             "nmax",  "algorithm",     "stride",   "deterministic",
                                             "epsilons", "out"};

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(ErrorKind::Configuration, (path.empty() ? "/" : path) + ": " + message);
}

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }

void expect_object(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& item : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; })) {
      fail(child(path, item.key()), "unknown field");
    }
  }
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

std::uint64_t as_uint(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (v >= 0.0 && v == std::floor(v) && v < 1.8e19) return static_cast<std::uint64_t>(v);
  }
  fail(path, "expected a nonnegative integer");
}

std::size_t as_positive(const json& j, const std::string& path) {
  const std::uint64_t v = as_uint(j, path);
  if (v == 0) fail(path, "must be >= 1");
  return static_cast<std::size_t>(v);
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> as_numbers(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], child(path, std::to_string(i))));
  return out;
}

Vector as_vector(const json& j, const std::string& path, std::optional<std::size_t> dim = std::nullopt) {
  Vector v(as_numbers(j, path));
  if (dim && v.dim() != *dim) {
    fail(path, "expected " + std::to_string(*dim) + " entries, got " + std::to_string(v.dim()));
  }
  return v;
}

Matrix as_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  std::vector<double> data;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::vector<double> row = as_numbers(j[r], child(path, std::to_string(r)));
    if (r == 0) cols = row.size();
    if (row.size() != cols) fail(child(path, std::to_string(r)), "rows must have equal length");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(rows, cols, std::move(data));
}

/// Runs `build`, turning library validation errors into config errors at `path`.
template <typename F>
auto at_path(const std::string& path, F&& build) -> decltype(build()) {
  try {
    return build();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Configuration || e.kind() == ErrorKind::Io) throw;
    fail(path, e.what());
  }
}

/// obj[key], or `fallback` (recorded as a default) when absent.
json field(const json& obj, const char* key, const std::string& path, const json& fallback,
           Defaults& defaults) {
  if (obj.is_object() && obj.contains(key)) return obj.at(key);
  std::string name = child(path, key).substr(1);
  std::replace(name.begin(), name.end(), '/', '.');
  defaults.emplace_back(std::move(name), fallback.dump());
  return fallback;
}

std::string fmt_vector(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.dim(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s + ")";
}

// --- overrides --------------------------------------------------------------

json override_value(const std::string& key, const std::string& text) {
  const bool list = key == "thetas" || key == "seeds" || key == "epsilons";
  json v;
  try {
    v = json::parse(list && (text.empty() || text.front() != '[') ? "[" + text + "]" : text);
  } catch (const json::parse_error&) {
    if (key == "algorithm") return text;
    fail("override " + key, "cannot parse value '" + text + "'");
  }
  if (key == "algorithm") {
    if (!v.is_string()) fail("override " + key, "expected an algorithm name");
  } else if (key == "deterministic") {
    if (v.is_number_integer() && (v == 0 || v == 1)) v = v == 1;
    if (!v.is_boolean()) fail("override " + key, "expected true or false");
  } else if (list) {
    if (!v.is_array()) fail("override " + key, "expected a comma-separated list");
  } else if (!v.is_number()) {
    fail("override " + key, "expected a number");
  }
  return v;
}

void apply_override(json& root, const std::string& key, const std::string& text) {
  if (key == "out") return;
  const json v = override_value(key, text);
  auto block = [&](const char* name) -> json& {
    json& b = root[name];
    if (b.is_null()) b = json::object();
    if (!b.is_object()) fail(std::string("/") + name, "expected an object");
    return b;
  };
  if (key == "theta") {
    block("schedule")["alpha"] = {{"kind", "power"}, {"theta", v}};
    block("experiment")["thetas"] = json::array({v});
  } else if (key == "thetas") {
    block("experiment")["thetas"] = v;
  } else if (key == "seed") {
    json& p = block("perturbation");
    if (!p.contains("kind") || p["kind"] == "none") p["kind"] = "uniform_square_over_k2";
    p["seed"] = v;
    block("experiment")["seeds"] = json::array({v});
  } else if (key == "seeds") {
    block("experiment")["seeds"] = v;
  } else if (key == "nmax") {
    block("solver")["nmax"] = v;
    block("experiment")["nmax"] = v;
  } else if (key == "algorithm") {
    block("solver")["algorithm"] = v;
  } else if (key == "stride") {
    block("solver")["stride"] = v;
  } else if (key == "deterministic") {
    block("experiment")["deterministic"] = v;
    if (v.get<bool>()) root["perturbation"] = {{"kind", "none"}};
  } else if (key == "epsilons") {
    block("experiment")["epsilons"] = v;
  }
}

// --- problem ----------------------------------------------------------------

ConvexSet parse_set(const json& j, const std::string& path, std::size_t dim) {
  if (!j.is_object() || !j.contains("kind")) fail(path, "expected an object with a 'kind'");
  const std::string kind = as_string(j.at("kind"), child(path, "kind"));
  return at_path(path, [&]() -> ConvexSet {
    if (kind == "orthant") {
      expect_object(j, path, {"kind"});
      return ConvexSet::orthant(dim);
    }
    if (kind == "box") {
      expect_object(j, path, {"kind", "lo", "hi"});
      return ConvexSet::box(as_vector(j.at("lo"), child(path, "lo"), dim),
                            as_vector(j.at("hi"), child(path, "hi"), dim));
    }
    if (kind == "ball") {
      expect_object(j, path, {"kind", "center", "radius"});
      return ConvexSet::ball(as_vector(j.at("center"), child(path, "center"), dim),
                             as_number(j.at("radius"), child(path, "radius")));
    }
    if (kind == "halfspace" || kind == "hyperplane") {
      expect_object(j, path, {"kind", "normal", "offset"});
      Vector n = as_vector(j.at("normal"), child(path, "normal"), dim);
      const double c = as_number(j.at("offset"), child(path, "offset"));
      return kind == "halfspace" ? ConvexSet::halfspace(std::move(n), c)
                                 : ConvexSet::hyperplane(std::move(n), c);
    }
    if (kind == "simplex") {
      expect_object(j, path, {"kind", "a"});
      return ConvexSet::simplex(dim, as_number(j.at("a"), child(path, "a")));
    }
    fail(child(path, "kind"),
         "unknown set '" + kind + "' (orthant, box, ball, halfspace, hyperplane, simplex)");
  });
}

Mapping parse_mapping(const json& j, const std::string& path, std::size_t dim, MapRole role) {
  if (!j.is_object() || !j.contains("kind")) fail(path, "expected an object with a 'kind'");
  const std::string kind = as_string(j.at("kind"), child(path, "kind"));
  return at_path(path, [&]() -> Mapping {
    if (kind == "identity") {
      expect_object(j, path, {"kind"});
      return Mapping::identity(dim, role);
    }
    if (kind == "trig" && role == MapRole::Contraction) {
      expect_object(j, path, {"kind"});
      if (dim != 2) fail(path, "the trig contraction is two-dimensional");
      return Mapping::trig_contraction();
    }
    if (kind == "constant" && role == MapRole::Contraction) {
      expect_object(j, path, {"kind", "u"});
      return Mapping::constant(as_vector(j.at("u"), child(path, "u"), dim));
    }
    if (kind == "least_squares" && role == MapRole::InverseStronglyMonotone) {
      expect_object(j, path, {"kind", "B", "b"});
      Matrix B = as_matrix(j.at("B"), child(path, "B"));
      if (B.cols() != dim) fail(child(path, "B"), "column count must equal problem.dim");
      return Mapping::least_squares_gradient(std::move(B),
                                             as_vector(j.at("b"), child(path, "b"), B.rows()));
    }
    if (kind == "affine") {
      expect_object(j, path, {"kind", "M", "c", "modulus"});
      Matrix M = as_matrix(j.at("M"), child(path, "M"));
      if (M.rows() != dim || M.cols() != dim) fail(child(path, "M"), "must be dim x dim");
      if (!j.contains("modulus")) fail(child(path, "modulus"), "required for an affine map");
      return Mapping::affine(std::move(M), as_vector(j.at("c"), child(path, "c"), dim), role,
                             as_number(j.at("modulus"), child(path, "modulus")));
    }
    fail(child(path, "kind"), "kind '" + kind + "' is not available for a " + to_string(role) +
                                  " mapping");
  });
}

Problem parse_problem(const json& root, bool& benchmark, Defaults& defaults) {
  const json j = field(root, "problem", "", "benchmark", defaults);
  if (j.is_string() || (j.is_object() && j.contains("preset"))) {
    const std::string path = j.is_string() ? "/problem" : "/problem/preset";
    if (j.is_object()) expect_object(j, "/problem", {"preset"});
    const std::string name = as_string(j.is_string() ? j : j.at("preset"), path);
    if (name != "benchmark") fail(path, "unknown preset '" + name + "' (benchmark)");
    benchmark = true;
    return benchmark_problem();
  }
  expect_object(j, "/problem", {"dim", "set", "S", "A", "f", "omega"});
  for (const char* required : {"dim", "set", "A", "f"}) {
    if (!j.contains(required)) fail(child("/problem", required), "required for a custom problem");
  }
  const std::size_t dim = as_positive(j.at("dim"), "/problem/dim");
  ConvexSet Q = parse_set(j.at("set"), "/problem/set", dim);
  Mapping S = parse_mapping(field(j, "S", "/problem", {{"kind", "identity"}}, defaults),
                            "/problem/S", dim, MapRole::Nonexpansive);
  Mapping A = parse_mapping(j.at("A"), "/problem/A", dim, MapRole::InverseStronglyMonotone);
  Mapping f = parse_mapping(j.at("f"), "/problem/f", dim, MapRole::Contraction);
  std::optional<ConvexSet> omega;
  if (j.contains("omega")) omega = parse_set(j.at("omega"), "/problem/omega", dim);
  return at_path("/problem", [&] {
    return Problem(std::move(Q), std::move(S), std::move(A), std::move(f), std::move(omega));
  });
}

// --- schedule / perturbation -------------------------------------------------

ScheduleSpec parse_schedule(const json& root, double nu, Defaults& defaults) {
  const json j = root.contains("schedule") ? root.at("schedule") : json::object();
  expect_object(j, "/schedule", {"alpha", "lambda", "bounds"});
  const json a = field(j, "alpha", "/schedule", {{"kind", "power"}, {"theta", 0.9}}, defaults);
  AlphaRule alpha = PowerAlpha{1.0};
  if (!a.is_object() || !a.contains("kind")) fail("/schedule/alpha", "expected an object with a 'kind'");
  const std::string akind = as_string(a.at("kind"), "/schedule/alpha/kind");
  if (akind == "power") {
    expect_object(a, "/schedule/alpha", {"kind", "theta"});
    if (!a.contains("theta")) fail("/schedule/alpha/theta", "required for a power rule");
    alpha = PowerAlpha{as_number(a.at("theta"), "/schedule/alpha/theta")};
  } else if (akind == "table") {
    expect_object(a, "/schedule/alpha", {"kind", "values"});
    if (!a.contains("values")) fail("/schedule/alpha/values", "required for a table");
    alpha = TableValues{as_numbers(a.at("values"), "/schedule/alpha/values")};
  } else {
    fail("/schedule/alpha/kind", "unknown rule '" + akind + "' (power, table)");
  }

  const json l = field(j, "lambda", "/schedule", {{"kind", "constant"}, {"value", nu}}, defaults);
  LambdaRule lambda = ConstantValue{nu};
  if (l.is_number()) {
    lambda = ConstantValue{as_number(l, "/schedule/lambda")};
  } else {
    if (!l.is_object() || !l.contains("kind")) fail("/schedule/lambda", "expected a number or an object with a 'kind'");
    const std::string lkind = as_string(l.at("kind"), "/schedule/lambda/kind");
    if (lkind == "constant") {
      expect_object(l, "/schedule/lambda", {"kind", "value"});
      if (!l.contains("value")) fail("/schedule/lambda/value", "required for a constant rule");
      lambda = ConstantValue{as_number(l.at("value"), "/schedule/lambda/value")};
    } else if (lkind == "table") {
      expect_object(l, "/schedule/lambda", {"kind", "values"});
      if (!l.contains("values")) fail("/schedule/lambda/values", "required for a table");
      lambda = TableValues{as_numbers(l.at("values"), "/schedule/lambda/values")};
    } else {
      fail("/schedule/lambda/kind", "unknown rule '" + lkind + "' (constant, table)");
    }
  }

  std::optional<StepBounds> bounds;
  if (j.contains("bounds")) {
    const std::vector<double> ab = as_numbers(j.at("bounds"), "/schedule/bounds");
    if (ab.size() != 2) fail("/schedule/bounds", "expected [a, b]");
    bounds = StepBounds{ab[0], ab[1]};
  }
  return at_path("/schedule", [&] { return ScheduleSpec(alpha, lambda, bounds); });
}

PerturbationSpec parse_perturbation(const json& root, bool& generated, Defaults& defaults) {
  const json j = field(root, "perturbation", "", {{"kind", "none"}}, defaults);
  expect_object(j, "/perturbation", {"kind", "seed"});
  if (!j.contains("kind")) fail("/perturbation/kind", "required");
  const std::string kind = as_string(j.at("kind"), "/perturbation/kind");
  if (kind == "none") {
    if (j.contains("seed")) fail("/perturbation/seed", "not used by kind 'none'");
    return NoPerturbation{};
  }
  if (kind != "uniform_square_over_k2") {
    fail("/perturbation/kind", "unknown kind '" + kind + "' (none, uniform_square_over_k2)");
  }
  if (j.contains("seed")) return UniformSquareOverKsq{as_uint(j.at("seed"), "/perturbation/seed")};
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  generated = true;
  defaults.emplace_back("perturbation.seed", std::to_string(seed));
  return UniformSquareOverKsq{seed};
}

// --- solver -------------------------------------------------------------------

BetaRule parse_beta(const json& j, const std::string& path) {
  if (j.is_number()) return at_path(path, [&] { return validated_beta(ConstantValue{as_number(j, path)}); });
  return at_path(path, [&] { return validated_beta(TableValues{as_numbers(j, path)}); });
}

Algorithm parse_algorithm(const std::string& name, const json& s, const Problem& problem,
                          Defaults& defaults) {
  const std::string path = "/solver/algorithm";
  if (name == "explicit") return ExplicitViscosity{};
  if (name == "perturbed") return Perturbed{};
  if (name == "takahashi_toyoda") return TakahashiToyoda{};
  if (name != "halpern" && name != "yao_outer" && name != "yao_inner") {
    fail(path, "unknown algorithm '" + name +
                   "' (explicit, perturbed, takahashi_toyoda, halpern, yao_outer, yao_inner)");
  }
  if (!s.contains("anchor")) fail("/solver/anchor", "required for algorithm " + name);
  Vector anchor = as_vector(s.at("anchor"), "/solver/anchor", problem.dim());
  if (name == "halpern") {
    if (s.contains("beta")) fail("/solver/beta", "not used by algorithm halpern");
    return Halpern{std::move(anchor)};
  }
  const BetaRule beta = parse_beta(field(s, "beta", "/solver", 0.5, defaults), "/solver/beta");
  if (name == "yao_outer") return YaoOuter{std::move(anchor), beta};
  return YaoInner{std::move(anchor), beta};
}

}  // namespace

bool is_override_key(const std::string& key) {
  return std::find(kOverrideKeys.begin(), kOverrideKeys.end(), key) != kOverrideKeys.end();
}

std::pair<std::string, std::string> parse_override(const std::string& text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorKind::Configuration, "override '" + text + "' must have the form key=value");
  }
  std::string key = text.substr(0, eq);
  if (!is_override_key(key)) {
    std::string known;
    for (const auto& k : kOverrideKeys) known += (known.empty() ? "" : ", ") + k;
    throw Error(ErrorKind::Configuration, "unknown override key '" + key + "' (" + known + ")");
  }
  return {std::move(key), text.substr(eq + 1)};
}

ParsedConfig parse_config_text(const std::string& text, const Overrides& overrides,
                               const std::string& origin) {
  json root;
  try {
    root = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    std::size_t line = 1;
    std::size_t line_start = 0;
    for (std::size_t i = 0; i + 1 < byte; ++i) {
      if (text[i] == '\n') {
        ++line;
        line_start = i + 1;
      }
    }
    const std::size_t line_end = text.find('\n', line_start);
    std::ostringstream os;
    os << origin << ":" << line << ":" << (byte > line_start ? byte - line_start : 1)
       << ": JSON syntax error near '"
       << text.substr(line_start, line_end == std::string::npos ? std::string::npos
                                                                  : line_end - line_start)
       << "'";
    throw Error(ErrorKind::Configuration, os.str());
  }
  if (root.is_null()) root = json::object();
  expect_object(root, "", {"problem", "schedule", "perturbation", "solver", "implicit", "experiment"});

  std::optional<std::filesystem::path> out;
  for (const auto& [key, value] : overrides) {
    if (!is_override_key(key)) throw Error(ErrorKind::Configuration, "unknown override key '" + key + "'");
    if (key == "out") out = value;
    apply_override(root, key, value);
  }

  Defaults defaults;
  bool benchmark = false;
  Problem problem = parse_problem(root, benchmark, defaults);
  const std::size_t dim = problem.dim();
  const double nu = problem.nu();
  const std::optional<Vector> qstar =
      problem.omega() ? std::optional<Vector>(at_path("/problem/omega", [&] { return reference_qstar(problem); }))
                      : std::nullopt;

  ScheduleSpec schedule = parse_schedule(root, nu, defaults);
  bool generated = false;
  PerturbationSpec perturbation = parse_perturbation(root, generated, defaults);
  const bool has_noise = !std::holds_alternative<NoPerturbation>(perturbation);

  // solver
  const json s = root.contains("solver") ? root.at("solver") : json::object();
  expect_object(s, "/solver", {"algorithm", "x1", "nmax", "anchor", "beta", "rel_err_target", "stride",
                               "strict_schedule"});
  const std::string algo_name = as_string(
      field(s, "algorithm", "/solver", has_noise ? "perturbed" : "explicit", defaults), "/solver/algorithm");
  Algorithm algorithm = parse_algorithm(algo_name, s, problem, defaults);
  if (has_noise && !std::holds_alternative<Perturbed>(algorithm)) {
    fail("/perturbation", "a perturbation is only applied by algorithm perturbed (got " + algo_name + ")");
  }
  if (!std::holds_alternative<YaoOuter>(algorithm) && !std::holds_alternative<YaoInner>(algorithm) &&
      s.contains("beta")) {
    fail("/solver/beta", "only used by yao_outer and yao_inner");
  }
  if (std::holds_alternative<ExplicitViscosity>(algorithm) || std::holds_alternative<Perturbed>(algorithm) ||
      std::holds_alternative<TakahashiToyoda>(algorithm)) {
    if (s.contains("anchor")) fail("/solver/anchor", "not used by algorithm " + algo_name);
  }
  std::optional<Vector> x1;
  if (s.contains("x1")) {
    x1 = as_vector(s.at("x1"), "/solver/x1", dim);
  } else if (benchmark) {
    x1 = benchmark_start();
    defaults.emplace_back("solver.x1", "[2,3]");
  } else {
    fail("/solver/x1", "required for a custom problem");
  }
  if (!contains(problem.set(), *x1)) {
    fail("/solver/x1", "x1 = " + fmt_vector(*x1) + " is not in Q = " + problem.set().describe());
  }
  const std::size_t n_max = as_positive(field(s, "nmax", "/solver", 6000, defaults), "/solver/nmax");
  const std::size_t stride = as_positive(field(s, "stride", "/solver", 1, defaults), "/solver/stride");
  const bool strict = as_bool(field(s, "strict_schedule", "/solver", false, defaults), "/solver/strict_schedule");
  std::optional<StopRule> stop;
  if (s.contains("rel_err_target")) {
    if (!qstar) fail("/solver/rel_err_target", "needs problem.omega to compute the reference point");
    stop = StopRule{as_number(s.at("rel_err_target"), "/solver/rel_err_target"), *qstar};
  }
  SolverConfig solver{.algorithm = std::move(algorithm),
                      .problem = problem,
                      .schedule = std::move(schedule),
                      .perturbation = perturbation,
                      .x1 = *x1,
                      .n_max = n_max,
                      .reference = qstar,
                      .stop = std::move(stop),
                      .strict_schedule = strict};
  at_path("/solver", [&] { solver.validate(); });

  // implicit
  const json im = root.contains("implicit") ? root.at("implicit") : json::object();
  expect_object(im, "/implicit", {"t_values", "lambda", "bounds", "inner_tol", "inner_max_iter", "x1"});
  const std::vector<double> t_values = as_numbers(
      field(im, "t_values", "/implicit", {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5}, defaults), "/implicit/t_values");
  const double ilambda = as_number(field(im, "lambda", "/implicit", nu, defaults), "/implicit/lambda");
  double ia = ilambda;
  double ib = ilambda;
  if (im.contains("bounds")) {
    const std::vector<double> ab = as_numbers(im.at("bounds"), "/implicit/bounds");
    if (ab.size() != 2) fail("/implicit/bounds", "expected [a, b]");
    ia = ab[0];
    ib = ab[1];
  }
  Vector ix1 = im.contains("x1") ? as_vector(im.at("x1"), "/implicit/x1", dim) : *x1;
  ImplicitConfig implicit{
      .t_values = t_values,
      .lambda_of_t = [ilambda](double) { return ilambda; },
      .a = ia,
      .b = ib,
      .inner_tol = as_number(field(im, "inner_tol", "/implicit", 1e-10, defaults), "/implicit/inner_tol"),
      .inner_max_iter = as_positive(field(im, "inner_max_iter", "/implicit", 50'000'000, defaults),
                                    "/implicit/inner_max_iter"),
      .x1 = std::move(ix1)};
  at_path("/implicit", [&] { implicit.validate(problem); });

  // experiment
  const json ex = root.contains("experiment") ? root.at("experiment") : json::object();
  expect_object(ex, "/experiment", {"thetas", "seeds", "epsilons", "nmax", "deterministic", "lambda", "z1",
                                    "table_split"});
  ExperimentConfig experiment;
  experiment.problem = problem;
  experiment.thetas = as_numbers(field(ex, "thetas", "/experiment", default_thetas(), defaults), "/experiment/thetas");
  {
    const json seeds = field(ex, "seeds", "/experiment", default_seeds(), defaults);
    if (!seeds.is_array() || seeds.empty()) fail("/experiment/seeds", "expected a nonempty array of integers");
    experiment.seeds.clear();
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      experiment.seeds.push_back(as_uint(seeds[i], "/experiment/seeds/" + std::to_string(i)));
    }
  }
  experiment.epsilons =
      as_numbers(field(ex, "epsilons", "/experiment", default_epsilons(), defaults), "/experiment/epsilons");
  experiment.n_max = as_positive(field(ex, "nmax", "/experiment", 6000, defaults), "/experiment/nmax");
  experiment.deterministic =
      as_bool(field(ex, "deterministic", "/experiment", false, defaults), "/experiment/deterministic");
  experiment.lambda = as_number(field(ex, "lambda", "/experiment", nu, defaults), "/experiment/lambda");
  experiment.z1 = ex.contains("z1") ? as_vector(ex.at("z1"), "/experiment/z1", dim) : *x1;
  if (!contains(problem.set(), experiment.z1)) {
    fail("/experiment/z1", "z1 = " + fmt_vector(experiment.z1) + " is not in Q");
  }
  experiment.table_split =
      as_number(field(ex, "table_split", "/experiment", 0.5, defaults), "/experiment/table_split");
  for (double t : experiment.thetas) {
    if (!(t > 0.0 && t <= 1.0)) fail("/experiment/thetas", "thetas must lie in (0, 1]");
  }
  for (double e : experiment.epsilons) {
    if (!(e > 0.0)) fail("/experiment/epsilons", "epsilons must be positive");
  }

  return ParsedConfig{.source = std::nullopt,
                      .problem = std::move(problem),
                      .benchmark = benchmark,
                      .solver = std::move(solver),
                      .stride = stride,
                      .seed_generated = generated,
                      .implicit = std::move(implicit),
                      .implicit_lambda = ilambda,
                      .experiment = std::move(experiment),
                      .out = std::move(out),
                      .defaults = std::move(defaults)};
}

ParsedConfig parse_config(const std::filesystem::path& path, const Overrides& overrides) {
  ParsedConfig cfg = parse_config_text(read_text_file(path), overrides, path.string());
  cfg.source = path;
  return cfg;
}

bool is_informational_meta_key(const std::string& key) {
  static const std::vector<std::string> keys{"command",       "config_file", "config_digest", "config",
                                             "prng",          "qstar",       "iterations",    "stopped_early",
                                             "warning",       "generated_seed"};
  return key.rfind("default.", 0) == 0 || std::find(keys.begin(), keys.end(), key) != keys.end();
}

Overrides parse_meta_text(const std::string& text) {
  Overrides out;
  std::istringstream is(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorKind::Configuration, "metadata line " + std::to_string(n) + " is not key=value");
    }
    out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return out;
}

}  // namespace visc
