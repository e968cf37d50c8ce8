#pragma once

// Composition rules for the H-kernel operator: parameter-shift maps, the
// kernels of the composites with I^{gamma,mu}_{a+}, and a numerical verifier
// that checks each composition identity on a grid.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "foxh/fracops.hpp"

namespace foxh {

enum class ShiftKind { HAfterI, IAfterH, DAfterH, HAfterD, HilferAfterH };

/// Static description of a shift map.
struct ShiftRule {
  ShiftKind kind;
  const char* name;       // "H_after_I", ...
  const char* label;      // human-readable rule name used in rewrite traces
  int dn, dp, dq;         // order increments
  int beta_sign;          // beta' = beta + beta_sign * mu
  const char* gamma_ratio;
};

const ShiftRule& shift_rule(ShiftKind kind);
const std::vector<ShiftRule>& shift_rules();

/// H o I^mu and I^mu o H: orders (m, n+1, p+1, q+1), beta' = beta + mu.
HKernelOp shift_H_after_I(const HKernelOp& op, double mu);
HKernelOp shift_I_after_H(const HKernelOp& op, double mu);
/// D^mu o H and H o D^mu: orders (m, n+2, p+2, q+2), beta' = beta - mu.
HKernelOp shift_D_after_H(const HKernelOp& op, double mu);
HKernelOp shift_H_after_D(const HKernelOp& op, double mu);
/// Hilfer D^{mu,nu} o H: orders (m, n+3, p+3, q+3), beta' = beta - mu.
HKernelOp shift_Hilfer_after_H(const HKernelOp& op, double mu, double nu);

/// Apply a rule by kind; nu is used only by the Hilfer rule.
HKernelOp apply_shift(ShiftKind kind, const HKernelOp& op, double mu, double nu = 0.0);

/// The declared factor theta_shifted(s) / theta_original(s):
/// Gamma(beta - alpha s) / Gamma(beta + mu - alpha s) for the integral rules,
/// Gamma(beta - alpha s) / Gamma(beta - mu - alpha s) for the derivative rules.
Complex declared_ratio(ShiftKind kind, const HKernelOp& op, double mu, Complex s);

// --- kernels of H o I^{gamma,mu} and I^{gamma,mu} o H ---------------------------

enum class KernelForm { HAfterIK, IKAfterH };
enum class KernelPath { Auto, Contour, Residue };

/// K(x, u) with (composite phi)(x) = int_a^x K(x, u) phi(u) du.
///
/// HAfterIK:
///   K = u^gamma (x-a)^(-mu-gamma) (x-u)^(mu+beta-1) J(x, u),
///   J = (1/2 pi i) int theta(s) (w (x-u)^alpha)^(-s) Gamma(beta - alpha s)/Gamma(mu + beta - alpha s)
///       2F1(mu + gamma, beta - alpha s; mu + beta - alpha s; (x-u)/(x-a)) ds.
/// IKAfterH:
///   K = x^gamma (x-a)^(-mu-gamma) (x-u)^(mu+beta-1) J(x, u) with the 2F1 replaced by
///       2F1(-gamma, mu; mu + beta - alpha s; (x-u)/x).
class CompositeKernel {
 public:
  CompositeKernel(KernelForm form, HKernelOp op, double gamma, double mu,
                  KernelPath path = KernelPath::Auto);

  Complex operator()(double x, double u) const;

  /// int_a^x K(x, u) f(u) du. Kernel values are cached per (x, u).
  Complex apply(const Function& f, double x) const;

  /// Exponent of (x - u) at u -> x.
  double right_exponent() const { return right_exponent_; }
  const HKernelOp& op() const { return op_; }

 private:
  // K / ((x-u)^right_exponent (u-a)^left_exponent).
  Complex reduced(double x, double from_left, double from_right) const;
  // The Mellin-Barnes factor J at tau = x - u with hypergeometric argument zeta.
  Complex mellin(double tau, double zeta) const;

  KernelForm form_;
  HKernelOp op_;
  double gamma_, mu_;
  KernelPath path_;
  std::shared_ptr<HFunction> h_;
  double abscissa_;
  double right_exponent_;
  double left_exponent_;
  mutable std::map<std::pair<double, double>, Complex> cache_;
};

Complex theorem1_kernel(const HKernelOp& op, double gamma, double mu, double x, double u);
Complex theorem2_kernel(const HKernelOp& op, double gamma, double mu, double x, double u);

// --- identity verification -----------------------------------------------------

enum class IdentityId {
  Cor1, Cor2, Cor3, Cor4, Cor5, Cor6, Thm1, Thm2, Thm3, Thm4, Remark2, HilferReductions
};

std::string_view to_string(IdentityId id);
std::optional<IdentityId> parse_identity(std::string_view name);
const std::vector<IdentityId>& all_identities();
/// Cor3 to Cor6 are stated for the lambda kernel.
bool requires_lambda_kernel(IdentityId id);

struct IdentityOrders {
  double mu = 0.5;
  double nu = 0.5;
  double gamma = 0.5;
};

struct VerificationRow {
  std::string identity;
  double x;
  Complex lhs, rhs;
  double abs_err, rel_err;
};

struct VerificationReport {
  std::string identity;
  std::vector<VerificationRow> rows;
  double tol = 0.0;
  double max_rel_err = 0.0;
  bool pass = true;
  /// Orders of the right-hand operator, "(m,n,p,q)", when it is an H-kernel operator.
  std::string target_orders;
};

/// Relative error |lhs - rhs| / |rhs| with 0/0 = 0.
double relative_error(Complex lhs, Complex rhs);

/// Evaluates identities with caches shared across calls (tabulated inner
/// results, composite kernels).
class Verifier {
 public:
  VerificationReport run(IdentityId id, const HKernelOp& op, const TestFunction& f,
                         const std::vector<double>& grid, double tol, const IdentityOrders& orders,
                         const std::string& label = {});

 private:
  const Function& inner(const std::string& key, const std::function<Function()>& make);
  const CompositeKernel& kernel(KernelForm form, const HKernelOp& op, double gamma, double mu);
  std::map<std::string, std::unique_ptr<Function>> tables_;
  std::map<std::string, std::unique_ptr<CompositeKernel>> kernels_;
};

VerificationReport verify_identity(IdentityId id, const HKernelOp& op, const IdentityOrders& orders,
                                   const TestFunction& f, const std::vector<double>& grid,
                                   double tol);

/// Stable text key of an operator's parameters.
std::string op_key(const HKernelOp& op);

/// "%.16e" formatting used in reports.
std::string format_number(double v);
std::string csv_header();
std::string to_csv_rows(const VerificationReport& r);
std::string to_json(const VerificationReport& r);

}  // namespace foxh
