#include "foxh/opdsl.hpp"

#include <charconv>
#include <cctype>
#include <cmath>

namespace foxh::dsl {

namespace {

class Scanner {
 public:
  explicit Scanner(std::string_view text) : s_(text) {}

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
  }
  bool done() {
    skip_space();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_space();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  Span here() const { return {line_, col_, 0}; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  void expect(char c) {
    if (peek() != c) {
      if (pos_ >= s_.size()) fail(std::string("expected '") + c + "' but the input ended");
      fail(std::string("expected '") + c + "' but found '" + s_[pos_] + "'");
    }
    advance();
  }

  std::string ident() {
    skip_space();
    const std::size_t start = pos_;
    if (pos_ >= s_.size() || !(std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      fail("expected an identifier");
    }
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                s_[pos_] == '#')) {
      advance();
    }
    return std::string(s_.substr(start, pos_ - start));
  }

  double number() {
    skip_space();
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t d0 = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) advance();
      return pos_ - d0;
    };
    if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) advance();
    std::size_t count = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      advance();
      count += digits();
    }
    if (count == 0) {
      pos_ = start;
      fail("expected a decimal number");
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      advance();
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) advance();
      if (digits() == 0) fail("malformed exponent");
    }
    std::string_view lit = s_.substr(start, pos_ - start);
    if (lit.front() == '+') lit.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(lit.data(), lit.data() + lit.size(), v);
    if (res.ec != std::errc() || res.ptr != lit.data() + lit.size() || !std::isfinite(v)) {
      fail("number out of range");
    }
    return v;
  }

  // Keyword: longest run of letters.
  std::string word() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) advance();
    return std::string(s_.substr(start, pos_ - start));
  }

 private:
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

bool is_derivative(NodeKind k) { return k == NodeKind::D || k == NodeKind::Hilfer; }

}  // namespace

OpChain parse(std::string_view text) {
  Scanner sc(text);
  OpChain chain;
  if (sc.done()) sc.fail("empty expression");
  while (true) {
    sc.skip_space();
    const Span start = sc.here();
    if (chain.function) sc.fail("the test function must be the last term");
    const std::string kw = sc.word();
    if (kw == "f") {
      sc.expect(':');
      chain.function = sc.ident();
      chain.function_span = start;
    } else {
      Node node;
      node.span = start;
      if (kw == "I") {
        sc.expect('[');
        node.kind = NodeKind::I;
        node.p1 = sc.number();
      } else if (kw == "IK") {
        sc.expect('[');
        node.kind = NodeKind::IK;
        node.p1 = sc.number();
        sc.expect(',');
        node.p2 = sc.number();
      } else if (kw == "D") {
        sc.expect('[');
        node.kind = NodeKind::D;
        node.p1 = sc.number();
        if (sc.peek() == ',') {
          sc.expect(',');
          node.kind = NodeKind::Hilfer;
          node.p2 = sc.number();
        }
      } else if (kw == "H") {
        sc.expect('[');
        node.kind = NodeKind::H;
        node.name = sc.ident();
      } else {
        throw ParseError(kw.empty() ? "expected an operator term" : "unknown term '" + kw + "'",
                         start.line, start.column);
      }
      sc.expect(']');
      chain.nodes.push_back(std::move(node));
    }
    if (sc.done()) break;
    sc.expect('.');
  }
  if (chain.nodes.empty() && !chain.function) sc.fail("empty expression");
  return chain;
}

void check(const OpChain& chain, const Registry& registry) {
  for (const auto& n : chain.nodes) {
    const std::string where = " (" + pretty(n) + ")";
    switch (n.kind) {
      case NodeKind::I:
      case NodeKind::D:
        if (!(n.p1 > 0)) throw DomainError("order must be positive" + where);
        break;
      case NodeKind::Hilfer:
        if (!(n.p1 > 0 && n.p1 < 1)) throw DomainError("Hilfer order requires 0 < mu < 1" + where);
        if (!(n.p2 >= 0 && n.p2 <= 1)) throw DomainError("Hilfer type requires 0 <= nu <= 1" + where);
        break;
      case NodeKind::IK:
        if (!(n.p1 > -1)) throw DomainError("IK requires gamma > -1" + where);
        if (!(n.p2 > 0)) throw DomainError("IK requires mu > 0" + where);
        break;
      case NodeKind::H: {
        auto it = registry.ops.find(n.name);
        if (it == registry.ops.end()) {
          throw ParseError("unknown H operator '" + n.name + "'", n.span.line, n.span.column);
        }
        if (it->second.a != registry.base) {
          throw DomainError("operator '" + n.name + "' is based at a different point than the chain");
        }
        break;
      }
    }
  }
  if (chain.function && !registry.functions.count(*chain.function)) {
    throw ParseError("unknown test function '" + *chain.function + "'", chain.function_span.line,
                     chain.function_span.column);
  }
}

OpChain parse(std::string_view text, const Registry& registry) {
  OpChain chain = parse(text);
  check(chain, registry);
  return chain;
}

std::string format_order(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string pretty(const Node& n) {
  switch (n.kind) {
    case NodeKind::I: return "I[" + format_order(n.p1) + "]";
    case NodeKind::IK: return "IK[" + format_order(n.p1) + "," + format_order(n.p2) + "]";
    case NodeKind::D: return "D[" + format_order(n.p1) + "]";
    case NodeKind::Hilfer: return "D[" + format_order(n.p1) + "," + format_order(n.p2) + "]";
    case NodeKind::H: return "H[" + n.name + "]";
  }
  return "?";
}

std::string pretty(const OpChain& chain) {
  std::string out;
  for (const auto& n : chain.nodes) {
    if (!out.empty()) out += " . ";
    out += pretty(n);
  }
  if (chain.function) {
    if (!out.empty()) out += " . ";
    out += "f:" + *chain.function;
  }
  return out;
}

// --- simplify ------------------------------------------------------------------

namespace {

std::string register_shifted(Registry& reg, const std::string& parent, const HKernelOp& op) {
  for (const auto& [name, existing] : reg.ops) {
    if (existing == op) return name;
  }
  const std::string root = parent.substr(0, parent.find('#'));
  for (int k = 1;; ++k) {
    const std::string name = root + "#s" + std::to_string(k);
    if (!reg.ops.count(name)) {
      reg.ops.emplace(name, op);
      return name;
    }
  }
}

std::optional<ShiftKind> rule_for(const Node& left, const Node& right) {
  using K = NodeKind;
  if (left.kind == K::H && right.kind == K::I) return ShiftKind::HAfterI;
  if (left.kind == K::I && right.kind == K::H) return ShiftKind::IAfterH;
  if (left.kind == K::D && right.kind == K::H) return ShiftKind::DAfterH;
  if (left.kind == K::H && right.kind == K::D) return ShiftKind::HAfterD;
  if (left.kind == K::Hilfer && right.kind == K::H) return ShiftKind::HilferAfterH;
  return std::nullopt;
}

}  // namespace

Simplified simplify(const OpChain& input, Registry& registry) {
  check(input, registry);
  Simplified out{input, {}};
  OpChain& c = out.chain;
  while (c.nodes.size() >= 2) {
    bool applied = false;
    for (std::size_t i = c.nodes.size() - 1; i-- > 0;) {
      const Node& l = c.nodes[i];
      const Node& r = c.nodes[i + 1];
      Node merged;
      merged.span = l.span;
      RewriteStep step;
      if (l.kind == NodeKind::I && r.kind == NodeKind::I) {
        merged.kind = NodeKind::I;
        merged.p1 = l.p1 + r.p1;
        step.rule = "integral-semigroup";
        step.detail = "I[" + format_order(l.p1) + "] I[" + format_order(r.p1) + "] = I[" +
                      format_order(merged.p1) + "]";
      } else if (auto kind = rule_for(l, r)) {
        const Node& h = l.kind == NodeKind::H ? l : r;
        const Node& other = l.kind == NodeKind::H ? r : l;
        const HKernelOp& op = registry.ops.at(h.name);
        const HKernelOp shifted = apply_shift(*kind, op, other.p1, other.p2);
        merged.kind = NodeKind::H;
        merged.name = register_shifted(registry, h.name, shifted);
        const ShiftRule& rule = shift_rule(*kind);
        step.rule = rule.label;
        step.detail = orders_string(op.h) + " -> " + orders_string(shifted.h) + ", beta " +
                      format_order(op.beta.real()) + " -> " + format_order(shifted.beta.real()) +
                      ", Mellin factor " + rule.gamma_ratio;
      } else {
        continue;
      }
      step.before = pretty(c);
      c.nodes[i] = merged;
      c.nodes.erase(c.nodes.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      step.after = pretty(c);
      out.trace.steps.push_back(std::move(step));
      applied = true;
      break;
    }
    if (!applied) break;
  }
  for (std::size_t i = 0; i + 1 < c.nodes.size(); ++i) {
    const Node& l = c.nodes[i];
    const Node& r = c.nodes[i + 1];
    if ((l.kind == NodeKind::IK && r.kind == NodeKind::H) || (l.kind == NodeKind::H && r.kind == NodeKind::IK)) {
      out.trace.notes.push_back(pretty(l) + " . " + pretty(r) + ": kernel-form only");
    }
  }
  return out;
}

// --- evaluate ------------------------------------------------------------------

namespace {

Complex apply_node(const Node& n, const Registry& reg, const Function& f, double t) {
  const double a = reg.base;
  switch (n.kind) {
    case NodeKind::I: return rl_integral(f, a, n.p1, t);
    case NodeKind::IK: return ik_integral(f, a, n.p1, n.p2, t);
    case NodeKind::D: return rl_derivative(f, a, n.p1, t);
    case NodeKind::Hilfer: return hilfer_derivative(f, a, n.p1, n.p2, t);
    case NodeKind::H: return h_kernel_apply(reg.ops.at(n.name), f, t);
  }
  throw Error("evaluate: unknown node");
}

double lead_after(const Node& n, const Registry& reg, const Function& f) {
  switch (n.kind) {
    case NodeKind::I: return f.lead() + n.p1;
    case NodeKind::IK: return reg.base == 0.0 ? f.lead() : f.lead() - n.p1;
    case NodeKind::D:
    case NodeKind::Hilfer: return f.lead() - n.p1;
    case NodeKind::H: return lead_after_h(reg.ops.at(n.name), f);
  }
  return f.lead();
}

}  // namespace

Complex evaluate(const OpChain& chain, const Registry& registry, double x) {
  check(chain, registry);
  if (!chain.function) throw DomainError("evaluate: the chain is not applied to a test function");
  const double a = registry.base;
  if (!std::isfinite(x) || !(x > a)) throw DomainError("evaluate: requires x > a");
  Function cur = registry.functions.at(*chain.function).bind(a);
  if (chain.nodes.empty()) return cur(x);
  // Derivative stages sample their input on [t - r, t + r], r = (t - a)/4.
  std::vector<double> reach(chain.nodes.size(), 1.0);
  for (std::size_t k = 1; k < chain.nodes.size(); ++k) {
    reach[k] = reach[k - 1] * (is_derivative(chain.nodes[k - 1].kind) ? 1.25 : 1.0);
  }
  for (std::size_t k = chain.nodes.size(); k-- > 1;) {
    const Node& n = chain.nodes[k];
    const Function prev = cur;
    const double top = a + reach[k] * (x - a);
    if (n.kind == NodeKind::Hilfer) {
      cur = hilfer_derivative_table(prev, a, n.p1, n.p2, top);
    } else {
      cur = tabulate([&](double t) { return apply_node(n, registry, prev, t); }, a, top,
                     lead_after(n, registry, prev));
    }
  }
  return apply_node(chain.nodes.front(), registry, cur, x);
}

}  // namespace foxh::dsl
