#pragma once

// JSON run configuration:
//   {"base": 0,
//    "ops": {name: {"m", "n", "upper": [[a, alpha], ...], "lower": [[b, beta], ...],
//                   "w", "alpha", "beta", "a"}},
//    "functions": [{"name", "type": "constant"|"power"|"exponential"|"polynomial", ...}],
//    "grid": [x, ...], "tol": t, "params": {"mu", "nu", "gamma"}}
// An op may give "template": {"kind": "exponential"|"mittag-leffler"|"lambda", ...}
// instead of m, n, upper and lower. Complex w or beta are written [re, im].

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "foxh/compose.hpp"
#include "foxh/opdsl.hpp"

namespace foxh {

struct RunConfig {
  double base = 0.0;
  std::map<std::string, HKernelOp> ops;
  std::vector<TestFunction> functions;
  std::vector<double> grid;
  double tol = 1e-4;
  IdentityOrders orders;
};

/// Throws DomainError when a name is duplicated, tol <= 0, the grid is empty
/// or a grid point does not exceed an operator's base point.
void validate(const RunConfig& cfg);

/// Built-in configuration (exponential, Mittag-Leffler and lambda kernels;
/// the four-function corpus; grid {0.5, 1, 1.5}).
RunConfig default_config();

/// Throws ParseError for malformed JSON or schema violations and DomainError
/// for invalid values.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::string& path);
std::string config_to_json(const RunConfig& cfg);

dsl::Registry make_registry(const RunConfig& cfg);

}  // namespace foxh
