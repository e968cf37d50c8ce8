#include "foxh/compose.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"

#include "foxh/quadrature.hpp"
#include "foxh/specfun.hpp"

namespace foxh {

// --- shift maps -----------------------------------------------------------------

const std::vector<ShiftRule>& shift_rules() {
  static const std::vector<ShiftRule> rules = {
      {ShiftKind::HAfterI, "H_after_I", "H-after-integral", 1, 1, 1, +1,
       "Gamma(beta - alpha s) / Gamma(beta + mu - alpha s)"},
      {ShiftKind::IAfterH, "I_after_H", "integral-after-H", 1, 1, 1, +1,
       "Gamma(beta - alpha s) / Gamma(beta + mu - alpha s)"},
      {ShiftKind::DAfterH, "D_after_H", "derivative-after-H", 2, 2, 2, -1,
       "Gamma(beta - alpha s) / Gamma(beta - mu - alpha s)"},
      {ShiftKind::HAfterD, "H_after_D", "H-after-derivative", 2, 2, 2, -1,
       "Gamma(beta - alpha s) / Gamma(beta - mu - alpha s)"},
      {ShiftKind::HilferAfterH, "Hilfer_after_H", "hilfer-after-H", 3, 3, 3, -1,
       "Gamma(beta - alpha s) / Gamma(beta - mu - alpha s)"},
  };
  return rules;
}

const ShiftRule& shift_rule(ShiftKind kind) {
  for (const auto& r : shift_rules()) {
    if (r.kind == kind) return r;
  }
  throw Error("shift_rule: unknown kind");
}

namespace {

double real_beta(const HKernelOp& op, const char* rule) {
  if (op.beta.imag() != 0.0) {
    throw DomainError(std::string(rule) + ": complex beta is not supported by the shift maps");
  }
  return op.beta.real();
}

// Inserts numerator pairs at the end of the first n upper pairs and
// denominator pairs at the end of the lower list.
HKernelOp insert_pairs(const HKernelOp& op, const std::vector<HPair>& upper,
                       const std::vector<HPair>& lower, double new_beta, const char* rule) {
  HKernelOp out = op;
  out.h.upper.insert(out.h.upper.begin() + op.h.n, upper.begin(), upper.end());
  out.h.lower.insert(out.h.lower.end(), lower.begin(), lower.end());
  out.h.n += static_cast<int>(upper.size());
  out.beta = new_beta;
  try {
    validate(out);
    if (!(kernel_exponent(out) > -1.0)) {
      throw DomainError("kernel not integrable at t = x");
    }
  } catch (const DomainError& e) {
    throw DomainError(std::string(rule) + ": shifted operator is invalid: " + e.what());
  }
  return out;
}

HKernelOp integral_shift(const HKernelOp& op, double mu, const char* rule) {
  validate(op);
  if (!(mu > 0)) throw DomainError(std::string(rule) + ": requires mu > 0");
  const double b = real_beta(op, rule);
  const double al = op.alpha;
  return insert_pairs(op, {{1.0 - b, al}}, {{1.0 - b - mu, al}}, b + mu, rule);
}

HKernelOp derivative_shift(const HKernelOp& op, double mu, const char* rule) {
  validate(op);
  if (!(mu > 0)) throw DomainError(std::string(rule) + ": requires mu > 0");
  const double b = real_beta(op, rule);
  const double al = op.alpha;
  const double n = std::floor(mu) + 1.0;
  return insert_pairs(op, {{1.0 - b, al}, {1.0 - b - n + mu, al}},
                      {{1.0 - b - n + mu, al}, {1.0 - b + mu, al}}, b - mu, rule);
}

}  // namespace

HKernelOp shift_H_after_I(const HKernelOp& op, double mu) { return integral_shift(op, mu, "H_after_I"); }
HKernelOp shift_I_after_H(const HKernelOp& op, double mu) { return integral_shift(op, mu, "I_after_H"); }
HKernelOp shift_D_after_H(const HKernelOp& op, double mu) { return derivative_shift(op, mu, "D_after_H"); }
HKernelOp shift_H_after_D(const HKernelOp& op, double mu) { return derivative_shift(op, mu, "H_after_D"); }

HKernelOp shift_Hilfer_after_H(const HKernelOp& op, double mu, double nu) {
  const char* rule = "Hilfer_after_H";
  validate(op);
  if (!(mu > 0 && mu < 1)) throw DomainError("Hilfer_after_H: requires 0 < mu < 1");
  if (!(nu >= 0 && nu <= 1)) throw DomainError("Hilfer_after_H: requires 0 <= nu <= 1");
  const double b = real_beta(op, rule);
  const double al = op.alpha;
  // D^{mu,nu} = I^{nu(1-mu)} D^{g} with g = mu + nu - mu nu.
  const double g = mu + nu - mu * nu;
  const double n = std::floor(g) + 1.0;
  return insert_pairs(op, {{1.0 - b, al}, {1.0 - b - n + g, al}, {1.0 - b + g, al}},
                      {{1.0 - b - n + g, al}, {1.0 - b + g, al}, {1.0 - b + mu, al}}, b - mu, rule);
}

HKernelOp apply_shift(ShiftKind kind, const HKernelOp& op, double mu, double nu) {
  switch (kind) {
    case ShiftKind::HAfterI: return shift_H_after_I(op, mu);
    case ShiftKind::IAfterH: return shift_I_after_H(op, mu);
    case ShiftKind::DAfterH: return shift_D_after_H(op, mu);
    case ShiftKind::HAfterD: return shift_H_after_D(op, mu);
    case ShiftKind::HilferAfterH: return shift_Hilfer_after_H(op, mu, nu);
  }
  throw Error("apply_shift: unknown kind");
}

Complex declared_ratio(ShiftKind kind, const HKernelOp& op, double mu, Complex s) {
  const Complex b = op.beta - op.alpha * s;
  const double sign = shift_rule(kind).beta_sign;
  return std::exp(specfun::ln_gamma(b) - specfun::ln_gamma(b + sign * mu));
}

// --- composite kernels ------------------------------------------------------------

CompositeKernel::CompositeKernel(KernelForm form, HKernelOp op, double gamma, double mu,
                                 KernelPath path)
    : form_(form), op_(std::move(op)), gamma_(gamma), mu_(mu), path_(path) {
  validate(op_);
  if (!(gamma > -1)) throw DomainError("composite kernel: requires gamma > -1");
  if (!(mu > 0)) throw DomainError("composite kernel: requires mu > 0");
  if (form_ == KernelForm::IKAfterH && op_.a < 0) {
    throw DomainError("composite kernel: I^{gamma,mu} after H requires a >= 0");
  }
  h_ = std::make_shared<HFunction>(op_.h);
  const double left = h_->left_pole_max();
  const double right = std::min(h_->right_pole_min(), op_.beta.real() / op_.alpha);
  if (!(left < right)) throw DomainError("composite kernel: pole families are not separable");
  abscissa_ = std::isfinite(left) ? left + std::min(1.0, 0.5 * (right - left)) : right - 1.0;
  const double lead = std::isfinite(left) ? -left : 0.0;
  right_exponent_ = mu_ + op_.beta.real() - 1.0 + op_.alpha * lead;
  left_exponent_ = (form_ == KernelForm::HAfterIK && op_.a != 0.0) ? -gamma_ : 0.0;
}

Complex CompositeKernel::mellin(double tau, double zeta) const {
  const Complex z = op_.w * std::pow(tau, op_.alpha);
  const Complex beta = op_.beta;
  const double al = op_.alpha, mu = mu_, g = gamma_;
  const bool first = form_ == KernelForm::HAfterIK;
  HFunction::MellinFactor extra = [=](Complex s) -> Complex {
    const Complex b = beta - al * s;
    const Complex ratio = std::exp(specfun::ln_gamma(b) - specfun::ln_gamma(mu + b));
    // Euler's transformation removes the (1 - zeta)^(-gamma) factor, which
    // the caller applies in closed form.
    const Complex f = first ? specfun::gauss_2f1(b - g, mu, mu + b, zeta)
                            : specfun::gauss_2f1(-g, mu, mu + b, zeta);
    return ratio * f;
  };
  bool residues = path_ == KernelPath::Residue;
  if (path_ == KernelPath::Auto) {
    residues = std::abs(z) <= 0.5 && h_->method(z) == HMethod::ResidueLeft;
  }
  if (residues) {
    try {
      return h_->by_residues(z, true, extra);
    } catch (const PoleError&) {
      if (path_ == KernelPath::Residue) throw;
    } catch (const ConvergenceError&) {
      if (path_ == KernelPath::Residue) throw;
    }
  }
  const bool symmetric = z.imag() == 0.0 && z.real() > 0.0 && beta.imag() == 0.0;
  return h_->by_contour(z, 1e-11, extra, abscissa_, symmetric);
}

Complex CompositeKernel::reduced(double x, double from_left, double from_right) const {
  const double tau = std::max(from_right, 1e-150);
  const double span = from_left + from_right;  // x - a
  // tau^(mu + beta - 1) / tau^right_exponent
  const Complex expo(mu_ + op_.beta.real() - 1.0 - right_exponent_, op_.beta.imag());
  const Complex scale = expo == 0.0 ? Complex(1.0) : std::pow(Complex(tau), expo);
  if (form_ == KernelForm::HAfterIK) {
    double zeta = from_right / span;
    if (zeta >= 1.0) zeta = std::nextafter(1.0, 0.0);
    Complex pre = std::pow(span, -mu_);
    if (op_.a != 0.0) pre *= std::pow(Complex(op_.a + from_left), gamma_);
    return pre * scale * mellin(tau, zeta);
  }
  double zeta = from_right / x;
  if (zeta >= 1.0) zeta = std::nextafter(1.0, 0.0);
  const Complex pre = std::pow(x, gamma_) * std::pow(span, -mu_ - gamma_);
  return pre * scale * mellin(tau, zeta);
}

Complex CompositeKernel::operator()(double x, double u) const {
  const double a = op_.a;
  if (!(a < u && u < x)) throw DomainError("composite kernel: requires a < u < x");
  if (form_ == KernelForm::IKAfterH && !(x > 0)) {
    throw DomainError("composite kernel: I^{gamma,mu} after H requires x > 0");
  }
  const double from_left = u - a, from_right = x - u;
  Complex k = reduced(x, from_left, from_right) * std::pow(from_right, right_exponent_);
  if (left_exponent_ != 0.0) k *= std::pow(from_left, left_exponent_);
  return k;
}

Complex CompositeKernel::apply(const Function& f, double x) const {
  const double a = op_.a;
  if (!(x >= a)) throw DomainError("composite kernel: requires x >= a");
  if (form_ == KernelForm::IKAfterH && !(x > 0)) {
    throw DomainError("composite kernel: I^{gamma,mu} after H requires x > 0");
  }
  if (x == a || f.is_zero()) return 0.0;
  const bool factored = f.base() == a && f.left_power() != 0.0;
  const double p = factored ? f.left_power() : 0.0;
  if (!(p + left_exponent_ > -1)) {
    throw DomainError("composite kernel: integrand not integrable at u = a");
  }
  auto integrand = [&](const quad::Abscissa& ab) -> Complex {
    const auto key = std::make_pair(ab.from_left, ab.from_right);
    auto it = cache_.find(key);
    Complex k;
    if (it != cache_.end()) {
      k = it->second;
    } else {
      k = reduced(x, ab.from_left, ab.from_right);
      cache_.emplace(key, k);
    }
    return k * (factored ? f.smooth(ab.t) : f(ab.t));
  };
  return quad::integrate_singular(quad::PreciseIntegrand(integrand), a, x,
                                  {p + left_exponent_, right_exponent_}, 1e-10);
}

Complex theorem1_kernel(const HKernelOp& op, double gamma, double mu, double x, double u) {
  return CompositeKernel(KernelForm::HAfterIK, op, gamma, mu)(x, u);
}

Complex theorem2_kernel(const HKernelOp& op, double gamma, double mu, double x, double u) {
  return CompositeKernel(KernelForm::IKAfterH, op, gamma, mu)(x, u);
}

// --- identities -----------------------------------------------------------------

namespace {

struct IdentityName {
  IdentityId id;
  const char* name;
};

constexpr IdentityName kIdentityNames[] = {
    {IdentityId::Cor1, "cor1"},       {IdentityId::Cor2, "cor2"},
    {IdentityId::Cor3, "cor3"},       {IdentityId::Cor4, "cor4"},
    {IdentityId::Cor5, "cor5"},       {IdentityId::Cor6, "cor6"},
    {IdentityId::Thm1, "thm1"},       {IdentityId::Thm2, "thm2"},
    {IdentityId::Thm3, "thm3"},       {IdentityId::Thm4, "thm4"},
    {IdentityId::Remark2, "remark2"}, {IdentityId::HilferReductions, "hilfer-reductions"},
};

std::string num_key(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(IdentityId id) {
  for (const auto& e : kIdentityNames) {
    if (e.id == id) return e.name;
  }
  return "unknown";
}

std::optional<IdentityId> parse_identity(std::string_view name) {
  for (const auto& e : kIdentityNames) {
    if (name == e.name) return e.id;
  }
  return std::nullopt;
}

const std::vector<IdentityId>& all_identities() {
  static const std::vector<IdentityId> ids = [] {
    std::vector<IdentityId> v;
    for (const auto& e : kIdentityNames) v.push_back(e.id);
    return v;
  }();
  return ids;
}

bool requires_lambda_kernel(IdentityId id) {
  return id == IdentityId::Cor3 || id == IdentityId::Cor4 || id == IdentityId::Cor5 ||
         id == IdentityId::Cor6;
}

double relative_error(Complex lhs, Complex rhs) {
  const double diff = std::abs(lhs - rhs);
  if (diff == 0.0) return 0.0;
  const double den = std::abs(rhs);
  return den == 0.0 ? std::numeric_limits<double>::infinity() : diff / den;
}

std::string op_key(const HKernelOp& op) {
  std::string k = "a=" + num_key(op.a) + ";w=" + num_key(op.w.real()) + "," + num_key(op.w.imag()) +
                  ";alpha=" + num_key(op.alpha) + ";beta=" + num_key(op.beta.real()) + "," +
                  num_key(op.beta.imag()) + ";m=" + std::to_string(op.h.m) +
                  ";n=" + std::to_string(op.h.n) + ";up=";
  for (const auto& pr : op.h.upper) k += num_key(pr.shift) + "/" + num_key(pr.scale) + ",";
  k += ";lo=";
  for (const auto& pr : op.h.lower) k += num_key(pr.shift) + "/" + num_key(pr.scale) + ",";
  return k;
}

namespace {

std::string function_key(const TestFunction& f) {
  std::string k = std::string(to_string(f.tag)) + ":" + num_key(f.c) + ":" + num_key(f.lambda) + ":" +
                  num_key(f.center) + ":" + (f.centered_at_base ? "b" : "c") + ":" + num_key(f.k) + ":";
  for (double c : f.coeffs) k += num_key(c) + ",";
  return k;
}

// phi' as an operand for I^{1-mu}: the Caputo form of the Hilfer derivative at nu = 1.
Function derivative_of(const TestFunction& f, double a) {
  if (f.is_zero() || f.tag == TestFunction::Tag::Constant) return Function::zero(a);
  if (f.tag == TestFunction::Tag::Power && (f.centered_at_base || f.center == a)) {
    if (f.lambda == 0.0) return Function::zero(a);
    const double lam = f.lambda;
    return Function(a, lam - 1.0, [lam](double) { return Complex(lam); }, {}, lam - 1.0);
  }
  TestFunction self = f;
  return Function(a, 0.0, [self](double t) { return self.derivative(t); });
}

}  // namespace

const Function& Verifier::inner(const std::string& key, const std::function<Function()>& make) {
  auto it = tables_.find(key);
  if (it == tables_.end()) it = tables_.emplace(key, std::make_unique<Function>(make())).first;
  return *it->second;
}

const CompositeKernel& Verifier::kernel(KernelForm form, const HKernelOp& op, double gamma, double mu) {
  const std::string key = std::string(form == KernelForm::HAfterIK ? "HIK|" : "IKH|") + op_key(op) +
                          "|" + num_key(gamma) + "|" + num_key(mu);
  auto it = kernels_.find(key);
  if (it == kernels_.end()) {
    it = kernels_.emplace(key, std::make_unique<CompositeKernel>(form, op, gamma, mu)).first;
  }
  return *it->second;
}

VerificationReport Verifier::run(IdentityId id, const HKernelOp& op, const TestFunction& f,
                                 const std::vector<double>& grid, double tol,
                                 const IdentityOrders& orders, const std::string& label) {
  validate(op);
  if (grid.empty()) throw DomainError("verify_identity: empty grid");
  if (!(tol > 0)) throw DomainError("verify_identity: tolerance must be positive");
  const double a = op.a;
  double top = a;
  for (double x : grid) {
    if (!(x > a)) throw DomainError("verify_identity: grid points must exceed the base point");
    top = std::max(top, x);
  }
  // Tables extend past the grid so that local derivative fits stay inside.
  const double table_top = a + 1.5 * (top - a);
  if (requires_lambda_kernel(id)) {
    const auto red = reduce_to_known(op.h);
    if (!red || red->kind != KnownKind::Lambda) {
      throw DomainError(std::string(to_string(id)) + ": requires a lambda-function kernel");
    }
  }

  const double mu = orders.mu, nu = orders.nu, gamma = orders.gamma;
  const Function phi = f.bind(a);
  const std::string fk = function_key(f);
  const std::string hk = "H|" + op_key(op) + "|" + fk;
  auto h_of_phi = [&]() -> const Function& {
    return inner(hk, [&] {
      return tabulate([&](double t) { return h_kernel_apply(op, phi, t); }, a, table_top,
                      lead_after_h(op, phi));
    });
  };

  VerificationReport rep;
  rep.identity = label.empty() ? std::string(to_string(id)) : label;
  rep.tol = tol;

  auto add = [&](const std::string& name, double x, Complex lhs, Complex rhs) {
    VerificationRow row{name, x, lhs, rhs, std::abs(lhs - rhs), relative_error(lhs, rhs)};
    rep.max_rel_err = std::max(rep.max_rel_err, row.rel_err);
    rep.rows.push_back(row);
  };

  switch (id) {
    case IdentityId::Cor1:
    case IdentityId::Cor4: {
      const HKernelOp rhs_op = shift_H_after_I(op, mu);
      rep.target_orders = orders_string(rhs_op.h);
      const Function& inner_fn = inner("I|" + num_key(mu) + "|" + num_key(a) + "|" + fk, [&] {
        return tabulate([&](double t) { return rl_integral(phi, a, mu, t); }, a, table_top,
                        lead_after_integral(phi, mu));
      });
      for (double x : grid) add(rep.identity, x, h_kernel_apply(op, inner_fn, x), h_kernel_apply(rhs_op, phi, x));
      break;
    }
    case IdentityId::Cor2:
    case IdentityId::Cor3: {
      const HKernelOp rhs_op = shift_I_after_H(op, mu);
      rep.target_orders = orders_string(rhs_op.h);
      const Function& hf = h_of_phi();
      for (double x : grid) add(rep.identity, x, rl_integral(hf, a, mu, x), h_kernel_apply(rhs_op, phi, x));
      break;
    }
    case IdentityId::Thm3:
    case IdentityId::Cor6: {
      const HKernelOp rhs_op = shift_D_after_H(op, mu);
      rep.target_orders = orders_string(rhs_op.h);
      const Function& hf = h_of_phi();
      for (double x : grid) add(rep.identity, x, rl_derivative(hf, a, mu, x), h_kernel_apply(rhs_op, phi, x));
      break;
    }
    case IdentityId::Remark2:
    case IdentityId::Cor5: {
      const HKernelOp rhs_op = shift_H_after_D(op, mu);
      rep.target_orders = orders_string(rhs_op.h);
      const Function& inner_fn = inner("D|" + num_key(mu) + "|" + num_key(a) + "|" + fk, [&] {
        return tabulate([&](double t) { return rl_derivative(phi, a, mu, t); }, a, table_top,
                        phi.lead() - mu);
      });
      for (double x : grid) add(rep.identity, x, h_kernel_apply(op, inner_fn, x), h_kernel_apply(rhs_op, phi, x));
      break;
    }
    case IdentityId::Thm4: {
      const HKernelOp rhs_op = shift_Hilfer_after_H(op, mu, nu);
      rep.target_orders = orders_string(rhs_op.h);
      const Function& hf = h_of_phi();
      for (double x : grid) {
        add(rep.identity, x, hilfer_derivative(hf, a, mu, nu, x), h_kernel_apply(rhs_op, phi, x));
      }
      break;
    }
    case IdentityId::Thm1: {
      const CompositeKernel& k = kernel(KernelForm::HAfterIK, op, gamma, mu);
      const double lead = phi.lead() + (a == 0.0 ? 0.0 : -gamma);
      const Function& inner_fn =
          inner("IK|" + num_key(gamma) + "|" + num_key(mu) + "|" + num_key(a) + "|" + fk, [&] {
            return tabulate([&](double t) { return ik_integral(phi, a, gamma, mu, t); }, a,
                            table_top, lead);
          });
      for (double x : grid) add(rep.identity, x, h_kernel_apply(op, inner_fn, x), k.apply(phi, x));
      break;
    }
    case IdentityId::Thm2: {
      const CompositeKernel& k = kernel(KernelForm::IKAfterH, op, gamma, mu);
      const Function& hf = h_of_phi();
      for (double x : grid) add(rep.identity, x, ik_integral(hf, a, gamma, mu, x), k.apply(phi, x));
      break;
    }
    case IdentityId::HilferReductions: {
      const Function dphi = derivative_of(f, a);
      for (double x : grid) {
        add(rep.identity + "/nu=0", x, hilfer_derivative(phi, a, mu, 0.0, x), rl_derivative(phi, a, mu, x));
      }
      for (double x : grid) {
        add(rep.identity + "/nu=1", x, hilfer_derivative(phi, a, mu, 1.0, x),
            rl_integral(dphi, a, 1.0 - mu, x));
      }
      break;
    }
  }
  rep.pass = rep.max_rel_err <= tol;
  return rep;
}

VerificationReport verify_identity(IdentityId id, const HKernelOp& op, const IdentityOrders& orders,
                                   const TestFunction& f, const std::vector<double>& grid,
                                   double tol) {
  Verifier v;
  return v.run(id, op, f, grid, tol, orders);
}

// --- serialization ----------------------------------------------------------------

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string csv_header() { return "identity,x,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err\n"; }

std::string to_csv_rows(const VerificationReport& r) {
  std::string out;
  for (const auto& row : r.rows) {
    out += row.identity;
    for (double v : {row.x, row.lhs.real(), row.lhs.imag(), row.rhs.real(), row.rhs.imag(),
                     row.abs_err, row.rel_err}) {
      out += ",";
      out += format_number(v);
    }
    out += "\n";
  }
  return out;
}

std::string to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["identity"] = r.identity;
  j["tol"] = r.tol;
  j["max_rel_err"] = std::isfinite(r.max_rel_err) ? nlohmann::ordered_json(r.max_rel_err)
                                                  : nlohmann::ordered_json(format_number(r.max_rel_err));
  j["pass"] = r.pass;
  if (!r.target_orders.empty()) j["target_orders"] = r.target_orders;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    j["rows"].push_back({{"identity", row.identity},
                         {"x", row.x},
                         {"lhs", {row.lhs.real(), row.lhs.imag()}},
                         {"rhs", {row.rhs.real(), row.rhs.imag()}},
                         {"abs_err", row.abs_err},
                         {"rel_err", std::isfinite(row.rel_err) ? nlohmann::ordered_json(row.rel_err)
                                                                : nlohmann::ordered_json(format_number(row.rel_err))}});
  }
  return j.dump(2);
}

}  // namespace foxh
