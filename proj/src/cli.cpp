#include "foxh/cli.hpp"

#include <cstdio>
#include <fstream>
#include <optional>

#include <set>

#include "CLI11.hpp"
#include "json.hpp"

#include "foxh/compose.hpp"
#include "foxh/config.hpp"
#include "foxh/opdsl.hpp"

namespace foxh {

std::string format_value(Complex v) {
  const double re = v.real() == 0.0 ? 0.0 : v.real();
  const double im = v.imag() == 0.0 ? 0.0 : v.imag();
  char buf[96];
  if (im == 0.0) {
    std::snprintf(buf, sizeof buf, "%.12f", re);
  } else {
    std::snprintf(buf, sizeof buf, "%.12f%+.12fi", re, im);
  }
  return buf;
}

namespace {

RunConfig config_from(const std::string& path) {
  return path.empty() ? default_config() : load_config(path);
}

std::string pairs_text(const std::vector<HPair>& ps) {
  std::string s = "[";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) s += ", ";
    s += "(" + dsl::format_order(ps[i].shift) + ", " + dsl::format_order(ps[i].scale) + ")";
  }
  return s + "]";
}

std::string complex_text(Complex v) {
  if (v.imag() == 0.0) return dsl::format_order(v.real());
  return "(" + dsl::format_order(v.real()) + ", " + dsl::format_order(v.imag()) + ")";
}

std::string describe_op(const HKernelOp& op) {
  return "orders " + orders_string(op.h) + ", upper " + pairs_text(op.h.upper) + ", lower " +
         pairs_text(op.h.lower) + ", w " + complex_text(op.w) + ", alpha " + dsl::format_order(op.alpha) +
         ", beta " + complex_text(op.beta) + ", a " + dsl::format_order(op.a);
}

bool has_lambda_kernel(const HKernelOp& op) {
  const auto red = reduce_to_known(op.h);
  return red && red->kind == KnownKind::Lambda;
}

std::string label_for(IdentityId id, const std::string& op_name, const std::string& fn,
                      const IdentityOrders& o) {
  std::string s(to_string(id));
  if (id != IdentityId::HilferReductions) s += "/op=" + op_name;
  s += "/f=" + fn;
  if (id == IdentityId::Thm1 || id == IdentityId::Thm2) s += "/gamma=" + dsl::format_order(o.gamma);
  s += "/mu=" + dsl::format_order(o.mu);
  if (id == IdentityId::Thm4) s += "/nu=" + dsl::format_order(o.nu);
  return s;
}

int cmd_eval(const std::string& expr, double x, const std::string& config, std::ostream& out,
             std::ostream& err) {
  RunConfig cfg;
  dsl::Registry reg;
  dsl::OpChain chain;
  try {
    cfg = config_from(config);
    reg = make_registry(cfg);
    chain = dsl::parse(expr, reg);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    out << format_value(dsl::evaluate(chain, reg, x)) << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitPass;
}

int cmd_simplify(const std::string& expr, bool trace, const std::string& config, std::ostream& out,
                 std::ostream& err) {
  RunConfig cfg;
  dsl::Registry reg;
  dsl::OpChain chain;
  try {
    cfg = config_from(config);
    reg = make_registry(cfg);
    chain = dsl::parse(expr, reg);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  dsl::Simplified s;
  try {
    s = dsl::simplify(chain, reg);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  out << dsl::pretty(s.chain) << "\n";
  std::set<std::string> shown;
  for (const auto& n : s.chain.nodes) {
    if (n.kind == dsl::NodeKind::H && !cfg.ops.count(n.name) && shown.insert(n.name).second) {
      out << "  " << n.name << ": " << describe_op(reg.ops.at(n.name)) << "\n";
    }
  }
  if (trace) {
    for (std::size_t i = 0; i < s.trace.steps.size(); ++i) {
      const auto& st = s.trace.steps[i];
      out << "step " << i + 1 << ": " << st.rule << " [" << st.detail << "]\n";
      out << "  " << st.before << "  =>  " << st.after << "\n";
    }
    for (const auto& note : s.trace.notes) out << "note: " << note << "\n";
    if (s.trace.steps.empty()) out << "no rule applies\n";
  }
  return kExitPass;
}

int cmd_verify(const std::string& identity, const std::string& config, const std::string& out_path,
               const std::string& json_path, std::optional<double> tol, std::ostream& out,
               std::ostream& err) {
  std::vector<IdentityId> ids;
  if (identity == "all") {
    ids = all_identities();
  } else if (auto id = parse_identity(identity)) {
    ids = {*id};
  } else {
    err << "error: unknown identity '" << identity << "' (expected all";
    for (auto i : all_identities()) err << ", " << to_string(i);
    err << ")\n";
    return kExitUsage;
  }
  RunConfig cfg;
  try {
    cfg = config_from(config);
    if (tol) cfg.tol = *tol;
    validate(cfg);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (cfg.ops.empty() || cfg.functions.empty()) {
    err << "error: the configuration needs at least one operator and one function\n";
    return kExitUsage;
  }

  std::vector<VerificationReport> reports;
  Verifier verifier;
  try {
    for (IdentityId id : ids) {
      if (id == IdentityId::HilferReductions) {
        const auto& [name, op] = *cfg.ops.begin();
        for (const auto& f : cfg.functions) {
          reports.push_back(verifier.run(id, op, f, cfg.grid, cfg.tol, cfg.orders,
                                         label_for(id, name, f.name, cfg.orders)));
        }
        continue;
      }
      bool any = false;
      for (const auto& [name, op] : cfg.ops) {
        if (requires_lambda_kernel(id) && !has_lambda_kernel(op)) continue;
        any = true;
        for (const auto& f : cfg.functions) {
          reports.push_back(verifier.run(id, op, f, cfg.grid, cfg.tol, cfg.orders,
                                         label_for(id, name, f.name, cfg.orders)));
        }
      }
      if (!any) {
        err << "error: " << to_string(id) << " needs an operator with a lambda-function kernel\n";
        return kExitUsage;
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }

  std::string csv = csv_header();
  for (const auto& r : reports) csv += to_csv_rows(r);
  std::ostream& summary = out_path.empty() ? err : out;
  if (out_path.empty()) {
    out << csv;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!(f << csv)) {
      err << "error: cannot write '" << out_path << "'\n";
      return kExitUsage;
    }
  }
  if (!json_path.empty()) {
    std::string body = "[\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      body += to_json(reports[i]);
      body += i + 1 < reports.size() ? ",\n" : "\n";
    }
    body += "]\n";
    std::ofstream f(json_path, std::ios::binary);
    if (!(f << body)) {
      err << "error: cannot write '" << json_path << "'\n";
      return kExitUsage;
    }
  }
  int passed = 0;
  for (const auto& r : reports) {
    passed += r.pass;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", r.max_rel_err);
    summary << (r.pass ? "PASS " : "FAIL ") << r.identity << " max_rel_err=" << buf;
    if (!r.target_orders.empty()) summary << " target=" << r.target_orders;
    summary << "\n";
  }
  summary << passed << " of " << reports.size() << " reports passed at tol "
          << dsl::format_order(cfg.tol) << "\n";
  return passed == static_cast<int>(reports.size()) ? kExitPass : kExitIdentityFail;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional operators with Fox H-function kernels", args.empty() ? "foxh" : args[0]};
  app.require_subcommand(1);

  std::string expr, config, identity, out_path, json_path;
  double x = 0.0;
  double tol_value = 0.0;
  bool trace = false;

  auto* eval = app.add_subcommand("eval", "Evaluate an operator chain at a point");
  eval->add_option("--expr", expr, "Operator chain, e.g. \"I[0.5] . f:const1\"")->required();
  eval->add_option("--x", x, "Evaluation point")->required();
  eval->add_option("--config", config, "JSON configuration");

  auto* verify = app.add_subcommand("verify", "Check composition identities on the configured grid");
  verify->add_option("--identity", identity, "Identity name or 'all'")->required();
  verify->add_option("--config", config, "JSON configuration");
  verify->add_option("--out", out_path, "CSV output path (default: standard output)");
  verify->add_option("--json", json_path, "JSON report path");
  auto* tol_opt = verify->add_option("--tol", tol_value, "Relative tolerance");

  auto* simp = app.add_subcommand("simplify", "Normalize an operator chain with the composition rules");
  simp->add_option("--expr", expr, "Operator chain")->required();
  simp->add_flag("--trace", trace, "Print each applied rule");
  simp->add_option("--config", config, "JSON configuration");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (eval->parsed()) return cmd_eval(expr, x, config, out, err);
  if (simp->parsed()) return cmd_simplify(expr, trace, config, out, err);
  std::optional<double> tol;
  if (tol_opt->count() > 0) tol = tol_value;
  return cmd_verify(identity, config, out_path, json_path, tol, out, err);
}

}  // namespace foxh
