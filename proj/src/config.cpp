#include "foxh/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace foxh {

using json = nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& msg) {
  throw ParseError("config: " + where + ": " + msg);
}

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) schema_error(where, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) schema_error(where, "unknown key '" + k + "'");
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  return j.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j.at(key), where + "." + key) : fallback;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) schema_error(where, "expected an integer");
  return j.get<int>();
}

Complex complex_value(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  schema_error(where, "expected a number or [re, im]");
}

std::vector<HPair> pairs(const json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array of [shift, scale] pairs");
  std::vector<HPair> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& e = j[i];
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2) schema_error(w, "expected [shift, scale]");
    out.push_back({number(e[0], w), number(e[1], w)});
  }
  return out;
}

HParams template_params(const json& t, const std::string& where) {
  if (!t.is_object() || !t.contains("kind") || !t["kind"].is_string()) {
    schema_error(where, "expected {\"kind\": ...}");
  }
  const std::string kind = t["kind"].get<std::string>();
  if (kind == "exponential") {
    allow_keys(t, where, {"kind"});
    return exponential_template();
  }
  if (kind == "mittag-leffler") {
    allow_keys(t, where, {"kind", "alpha", "beta"});
    return mittag_leffler_template(number_or(t, "alpha", 1.0, where), number_or(t, "beta", 1.0, where));
  }
  if (kind == "lambda") {
    allow_keys(t, where, {"kind", "eta", "mu", "nu"});
    return lambda_template(number_or(t, "eta", 1.0, where), number_or(t, "mu", 0.0, where),
                           number_or(t, "nu", 0.0, where));
  }
  schema_error(where + ".kind", "unknown template '" + kind + "'");
}

HKernelOp parse_op(const json& j, const std::string& where, double base) {
  allow_keys(j, where, {"m", "n", "upper", "lower", "template", "w", "alpha", "beta", "a"});
  HKernelOp op;
  if (j.contains("template")) {
    for (const char* k : {"m", "n", "upper", "lower"}) {
      if (j.contains(k)) schema_error(where, std::string("'") + k + "' conflicts with 'template'");
    }
    op.h = template_params(j["template"], where + ".template");
  } else {
    for (const char* k : {"m", "n", "lower"}) {
      if (!j.contains(k)) schema_error(where, std::string("missing '") + k + "'");
    }
    op.h.m = integer(j["m"], where + ".m");
    op.h.n = integer(j["n"], where + ".n");
    if (j.contains("upper")) op.h.upper = pairs(j["upper"], where + ".upper");
    op.h.lower = pairs(j["lower"], where + ".lower");
  }
  if (j.contains("w")) op.w = complex_value(j["w"], where + ".w");
  op.alpha = number_or(j, "alpha", 1.0, where);
  if (j.contains("beta")) op.beta = complex_value(j["beta"], where + ".beta");
  op.a = number_or(j, "a", base, where);
  try {
    validate(op);
  } catch (const DomainError& e) {
    throw DomainError("config: " + where + ": " + e.what());
  }
  return op;
}

TestFunction parse_function(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string()) {
    schema_error(where, "expected an object with a string 'name'");
  }
  if (!j.contains("type") || !j["type"].is_string()) schema_error(where, "missing string 'type'");
  const std::string name = j["name"].get<std::string>();
  const std::string type = j["type"].get<std::string>();
  TestFunction f;
  if (type == "constant") {
    allow_keys(j, where, {"name", "type", "c"});
    f = TestFunction::constant(name, number_or(j, "c", 1.0, where));
  } else if (type == "power") {
    allow_keys(j, where, {"name", "type", "lambda", "center"});
    f = TestFunction::power(name, number_or(j, "lambda", 0.0, where));
    if (j.contains("center")) {
      f.centered_at_base = false;
      f.center = number(j["center"], where + ".center");
    }
  } else if (type == "exponential") {
    allow_keys(j, where, {"name", "type", "k"});
    f = TestFunction::exponential(name, number_or(j, "k", 1.0, where));
  } else if (type == "polynomial") {
    allow_keys(j, where, {"name", "type", "coeffs"});
    if (!j.contains("coeffs") || !j["coeffs"].is_array()) schema_error(where, "missing 'coeffs' array");
    std::vector<double> c;
    for (const auto& v : j["coeffs"]) c.push_back(number(v, where + ".coeffs"));
    f = TestFunction::polynomial(name, c);
  } else {
    schema_error(where + ".type", "unknown function type '" + type + "'");
  }
  f.validate();
  return f;
}

std::string location(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

json complex_json(Complex v) {
  if (v.imag() == 0.0) return v.real();
  return json::array({v.real(), v.imag()});
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (!(cfg.tol > 0) || !std::isfinite(cfg.tol)) throw DomainError("config: tol must be positive");
  if (cfg.grid.empty()) throw DomainError("config: grid is empty");
  std::set<std::string> names;
  for (const auto& f : cfg.functions) {
    if (!names.insert(f.name).second) throw DomainError("config: duplicate function name '" + f.name + "'");
  }
  for (const auto& [name, op] : cfg.ops) {
    for (double x : cfg.grid) {
      if (!std::isfinite(x) || !(x > op.a)) {
        throw DomainError("config: grid point " + dsl::format_order(x) + " does not exceed the base point of '" +
                          name + "'");
      }
    }
  }
}

RunConfig default_config() {
  RunConfig cfg;
  HKernelOp exp_op;
  exp_op.h = exponential_template();
  HKernelOp ml_op;
  ml_op.h = mittag_leffler_template(0.5, 1.0);
  ml_op.alpha = 0.5;
  HKernelOp lam_op;
  lam_op.h = lambda_template(2.0, 0.2, 0.1);
  lam_op.beta = 1.5;
  cfg.ops = {{"exp", exp_op}, {"ml", ml_op}, {"lam", lam_op}};
  cfg.functions = {TestFunction::constant("const1", 1.0), TestFunction::power("pow05", 0.5),
                   TestFunction::exponential("exp1", 1.0),
                   TestFunction::polynomial("poly", {1.0, -1.0, 0.5})};
  cfg.grid = {0.5, 1.0, 1.5};
  return cfg;
}

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("config: malformed JSON at " + location(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  allow_keys(j, "config", {"base", "ops", "functions", "grid", "tol", "params"});
  RunConfig cfg;
  cfg.base = number_or(j, "base", 0.0, "config");
  if (j.contains("ops")) {
    if (!j["ops"].is_object()) schema_error("ops", "expected an object");
    for (const auto& [name, v] : j["ops"].items()) cfg.ops.emplace(name, parse_op(v, "ops." + name, cfg.base));
  }
  if (j.contains("functions")) {
    if (!j["functions"].is_array()) schema_error("functions", "expected an array");
    for (std::size_t i = 0; i < j["functions"].size(); ++i) {
      cfg.functions.push_back(parse_function(j["functions"][i], "functions[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("grid")) {
    if (!j["grid"].is_array()) schema_error("grid", "expected an array");
    for (const auto& v : j["grid"]) cfg.grid.push_back(number(v, "grid"));
  } else {
    cfg.grid = default_config().grid;
  }
  cfg.tol = number_or(j, "tol", cfg.tol, "config");
  if (j.contains("params")) {
    const json& p = j["params"];
    allow_keys(p, "params", {"mu", "nu", "gamma"});
    cfg.orders.mu = number_or(p, "mu", cfg.orders.mu, "params");
    cfg.orders.nu = number_or(p, "nu", cfg.orders.nu, "params");
    cfg.orders.gamma = number_or(p, "gamma", cfg.orders.gamma, "params");
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["base"] = cfg.base;
  j["ops"] = nlohmann::ordered_json::object();
  for (const auto& [name, op] : cfg.ops) {
    nlohmann::ordered_json o;
    o["m"] = op.h.m;
    o["n"] = op.h.n;
    o["upper"] = nlohmann::ordered_json::array();
    for (const auto& p : op.h.upper) o["upper"].push_back({p.shift, p.scale});
    o["lower"] = nlohmann::ordered_json::array();
    for (const auto& p : op.h.lower) o["lower"].push_back({p.shift, p.scale});
    o["w"] = complex_json(op.w);
    o["alpha"] = op.alpha;
    o["beta"] = complex_json(op.beta);
    o["a"] = op.a;
    j["ops"][name] = o;
  }
  j["functions"] = nlohmann::ordered_json::array();
  for (const auto& f : cfg.functions) {
    nlohmann::ordered_json o;
    o["name"] = f.name;
    o["type"] = to_string(f.tag);
    switch (f.tag) {
      case TestFunction::Tag::Constant: o["c"] = f.c; break;
      case TestFunction::Tag::Power:
        o["lambda"] = f.lambda;
        if (!f.centered_at_base) o["center"] = f.center;
        break;
      case TestFunction::Tag::Exponential: o["k"] = f.k; break;
      case TestFunction::Tag::Polynomial: o["coeffs"] = f.coeffs; break;
    }
    j["functions"].push_back(o);
  }
  j["grid"] = cfg.grid;
  j["tol"] = cfg.tol;
  j["params"] = {{"mu", cfg.orders.mu}, {"nu", cfg.orders.nu}, {"gamma", cfg.orders.gamma}};
  return j.dump(2) + "\n";
}

dsl::Registry make_registry(const RunConfig& cfg) {
  dsl::Registry reg;
  reg.base = cfg.base;
  reg.ops = cfg.ops;
  for (const auto& f : cfg.functions) reg.functions.emplace(f.name, f);
  return reg;
}

}  // namespace foxh
