#pragma once

// Operator-chain language.
//
//   chain := term ("." term)*
//   term  := "I[" num "]" | "IK[" num "," num "]" | "D[" num "]"
//          | "D[" num "," num "]" | "H[" ident "]" | "f:" ident
//
// Chains are written left to right and applied right to left: the rightmost
// operator acts first. "f:" may appear only as the last term. D[mu,nu] is the
// Hilfer derivative, IK[gamma,mu] the operator I^{gamma,mu}_{a+}.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "foxh/compose.hpp"

namespace foxh::dsl {

struct Span {
  int line = 1;
  int column = 1;
  int length = 0;
};

enum class NodeKind { I, IK, D, Hilfer, H };

struct Node {
  NodeKind kind = NodeKind::I;
  double p1 = 0.0;  // mu for I, D, Hilfer; gamma for IK
  double p2 = 0.0;  // mu for IK; nu for Hilfer
  std::string name; // H operator name
  Span span;

  /// Structural equality; spans are ignored.
  bool operator==(const Node& o) const {
    return kind == o.kind && p1 == o.p1 && p2 == o.p2 && name == o.name;
  }
};

struct OpChain {
  std::vector<Node> nodes;
  std::optional<std::string> function;
  Span function_span;

  bool operator==(const OpChain& o) const { return nodes == o.nodes && function == o.function; }
};

/// Named operators and test functions shared by a session. Every operator
/// in a chain is based at `base`.
struct Registry {
  double base = 0.0;
  std::map<std::string, HKernelOp> ops;
  std::map<std::string, TestFunction> functions;
};

/// Syntax only. Throws ParseError with line and column.
OpChain parse(std::string_view text);
/// Syntax plus name resolution and order ranges against the registry.
OpChain parse(std::string_view text, const Registry& registry);

/// Throws DomainError for out-of-range orders and ParseError (located at the
/// node) for names that are not registered.
void check(const OpChain& chain, const Registry& registry);

std::string pretty(const OpChain& chain);
std::string pretty(const Node& node);
/// Shortest decimal text that reads back to the same double.
std::string format_order(double v);

struct RewriteStep {
  std::string rule;    // rule label, e.g. "H-after-integral"
  std::string detail;  // order and beta bookkeeping
  std::string before;
  std::string after;
};

struct RewriteTrace {
  std::vector<RewriteStep> steps;
  /// Adjacent pairs left alone because they have only a kernel form.
  std::vector<std::string> notes;
};

struct Simplified {
  OpChain chain;
  RewriteTrace trace;
};

/// Rewrites adjacent pairs H.I, I.H, D.H, H.D, Hilfer.H and I.I until none
/// remains, rightmost pair first. Shifted operators are added to the
/// registry as "<root>#s<k>" (an existing equal operator is reused).
Simplified simplify(const OpChain& chain, Registry& registry);

/// Value of the chain applied to its test function at x.
Complex evaluate(const OpChain& chain, const Registry& registry, double x);

}  // namespace foxh::dsl
