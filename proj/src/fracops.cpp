#include "foxh/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "foxh/chebyshev.hpp"
#include "foxh/quadrature.hpp"
#include "foxh/specfun.hpp"

namespace foxh {

// --- Function ---------------------------------------------------------------

Function::Function(double base, double p, Callable smooth, Callable derivative, double lead)
    : base_(base), p_(p), lead_(lead), g_(std::move(smooth)), dvalue_(std::move(derivative)) {
  if (!g_) throw DomainError("Function: missing callable");
}

Function Function::zero(double base) {
  Function f(base, 0.0, [](double) { return Complex(0.0); }, [](double) { return Complex(0.0); });
  f.zero_ = true;
  return f;
}

Complex Function::operator()(double t) const {
  if (zero_) return 0.0;
  if (p_ == 0.0) return g_(t);
  const double d = t - base_;
  if (d <= 0.0) {
    if (p_ > 0) return 0.0;
    throw DomainError("Function: singular at its base point");
  }
  return std::pow(d, p_) * g_(t);
}

Complex Function::derivative(double t) const {
  if (!dvalue_) throw DomainError("Function: derivative not available");
  return dvalue_(t);
}

// --- TestFunction -------------------------------------------------------------

TestFunction TestFunction::constant(std::string name, double c) {
  TestFunction f;
  f.name = std::move(name);
  f.tag = Tag::Constant;
  f.c = c;
  return f;
}

TestFunction TestFunction::power(std::string name, double lambda) {
  TestFunction f;
  f.name = std::move(name);
  f.tag = Tag::Power;
  f.lambda = lambda;
  f.validate();
  return f;
}

TestFunction TestFunction::exponential(std::string name, double k) {
  TestFunction f;
  f.name = std::move(name);
  f.tag = Tag::Exponential;
  f.k = k;
  return f;
}

TestFunction TestFunction::polynomial(std::string name, std::vector<double> coeffs) {
  TestFunction f;
  f.name = std::move(name);
  f.tag = Tag::Polynomial;
  f.coeffs = std::move(coeffs);
  return f;
}

const char* to_string(TestFunction::Tag tag) {
  switch (tag) {
    case TestFunction::Tag::Constant: return "constant";
    case TestFunction::Tag::Power: return "power";
    case TestFunction::Tag::Exponential: return "exponential";
    case TestFunction::Tag::Polynomial: return "polynomial";
  }
  return "unknown";
}

void TestFunction::validate() const {
  if (tag == Tag::Power && !(lambda > -1.0)) {
    throw DomainError("power test function: exponent must exceed -1");
  }
  if (tag == Tag::Polynomial && coeffs.empty()) {
    throw DomainError("polynomial test function: no coefficients");
  }
}

bool TestFunction::is_zero() const {
  switch (tag) {
    case Tag::Constant: return c == 0.0;
    case Tag::Polynomial:
      return std::all_of(coeffs.begin(), coeffs.end(), [](double v) { return v == 0.0; });
    default: return false;
  }
}

Complex TestFunction::value(double t) const {
  switch (tag) {
    case Tag::Constant: return c;
    case Tag::Power: return std::pow(t - center, lambda);
    case Tag::Exponential: return std::exp(k * t);
    case Tag::Polynomial: {
      double acc = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
      return acc;
    }
  }
  return 0.0;
}

Complex TestFunction::derivative(double t) const {
  switch (tag) {
    case Tag::Constant: return 0.0;
    case Tag::Power: return lambda == 0.0 ? 0.0 : lambda * std::pow(t - center, lambda - 1.0);
    case Tag::Exponential: return k * std::exp(k * t);
    case Tag::Polynomial: {
      double acc = 0.0;
      for (std::size_t j = coeffs.size(); j-- > 1;) acc = acc * t + j * coeffs[j];
      return acc;
    }
  }
  return 0.0;
}

Function TestFunction::bind(double a) const {
  validate();
  if (is_zero()) return Function::zero(a);
  if (tag == Tag::Power) {
    if (centered_at_base || center == a) {
      const double lam = lambda;
      return Function(
          a, lam, [](double) { return Complex(1.0); },
          [a, lam](double t) {
            return lam == 0.0 ? Complex(0.0) : Complex(lam * std::pow(t - a, lam - 1.0));
          },
          lam);
    }
    if (center > a) throw DomainError("power test function: centre lies inside the interval");
  }
  TestFunction self = *this;
  return Function(
      a, 0.0, [self](double t) { return self.value(t); },
      [self](double t) { return self.derivative(t); }, 0.0);
}

Function tabulate(const Function::Callable& values, double a, double top, double lead) {
  auto table = std::make_shared<cheb::GradedTable>(values, a, top, lead);
  return Function(
      a, 0.0, [table](double t) { return table->value(t); },
      [table](double t) { return table->derivative(t); }, lead);
}

// --- operators ----------------------------------------------------------------

namespace {

void require_interval(double a, double x, const char* who) {
  if (!std::isfinite(a) || !std::isfinite(x)) throw DomainError(std::string(who) + ": non-finite point");
  if (x < a) throw DomainError(std::string(who) + ": requires x >= a");
}

// Weight (t-a)^p and smooth factor for integrals based at a.
struct Split {
  double p;
  std::function<Complex(double)> g;
};

Split split_at(const Function& f, double a) {
  if (f.base() == a && f.left_power() != 0.0) {
    return {f.left_power(), [&f](double t) { return f.smooth(t); }};
  }
  return {0.0, [&f](double t) { return f(t); }};
}

}  // namespace

Complex rl_integral(const Function& f, double a, Complex mu, double x) {
  if (!(mu.real() > 0)) throw DomainError("rl_integral: requires Re(mu) > 0");
  require_interval(a, x, "rl_integral");
  if (x == a || f.is_zero()) return 0.0;
  const Split s = split_at(f, a);
  const double im = mu.imag();
  auto integrand = [&](const quad::Abscissa& ab) -> Complex {
    Complex v = s.g(ab.t);
    if (im != 0.0) v *= std::polar(1.0, im * std::log(ab.from_right));
    return v;
  };
  const Complex integral =
      quad::integrate_singular(quad::PreciseIntegrand(integrand), a, x, {s.p, mu.real() - 1.0},
                               kOperatorTol);
  return integral * specfun::rgamma(mu);
}

Complex rl_derivative(const Function& f, double a, Complex mu, double x) {
  if (!(mu.real() > 0)) throw DomainError("rl_derivative: requires Re(mu) > 0");
  require_interval(a, x, "rl_derivative");
  if (x == a) throw DomainError("rl_derivative: undefined at the base point");
  if (f.is_zero()) return 0.0;
  const int n = static_cast<int>(std::floor(mu.real())) + 1;
  const Complex order = static_cast<double>(n) - mu;
  const double r = 0.25 * (x - a);
  const auto series = cheb::Series::fit([&](double t) { return rl_integral(f, a, order, t); },
                                        x - r, x + r, 16);
  if (series.tail_ratio() > 1e-7) {
    throw ConvergenceError("rl_derivative: interpolation residual above 1e-7");
  }
  return series.derivative(x, n);
}

namespace {

void check_hilfer(double mu, double nu) {
  if (!(mu > 0 && mu < 1)) throw DomainError("hilfer_derivative: requires 0 < mu < 1");
  if (!(nu >= 0 && nu <= 1)) throw DomainError("hilfer_derivative: requires 0 <= nu <= 1");
}

// I^{(1-nu)(1-mu)} f on [a, top], or f itself when that order is zero.
Function hilfer_inner(const Function& f, double a, double mu, double nu, double top) {
  const double rho = (1.0 - nu) * (1.0 - mu);
  if (rho == 0.0) {
    if (f.has_derivative()) return f;
    return tabulate([&f](double t) { return f(t); }, a, top, f.lead());
  }
  const double lead = f.lead() + rho;
  if (lead < 0) throw DomainError("hilfer_derivative: I^rho f is unbounded at the base point");
  return tabulate([&](double t) { return rl_integral(f, a, rho, t); }, a, top, lead);
}

// I^kappa of the inner function's derivative at x; the derivative's
// (t-a)^(lead-1) endpoint behaviour is passed to the quadrature as a weight.
Complex hilfer_outer(const Function& inner, double a, double kappa, double x) {
  if (kappa == 0.0) return inner.derivative(x);
  const double lead = inner.lead();
  const double p = (lead > 0.0 && lead < 1.0) ? lead - 1.0 : 0.0;
  auto slope = [&](const quad::Abscissa& ab) -> Complex {
    if (p == 0.0) return inner.derivative(ab.t);
    const double t = std::max(ab.t, std::nextafter(a, INFINITY));
    return inner.derivative(t) * std::pow(t - a, -p);
  };
  const Complex integral =
      quad::integrate_singular(quad::PreciseIntegrand(slope), a, x, {p, kappa - 1.0}, kSlopeTol);
  return integral * specfun::rgamma(kappa);
}

}  // namespace

Complex hilfer_derivative(const Function& f, double a, double mu, double nu, double x) {
  check_hilfer(mu, nu);
  require_interval(a, x, "hilfer_derivative");
  if (x == a) throw DomainError("hilfer_derivative: undefined at the base point");
  if (f.is_zero()) return 0.0;
  const Function inner = hilfer_inner(f, a, mu, nu, x);
  return hilfer_outer(inner, a, nu * (1.0 - mu), x);
}

Function hilfer_derivative_table(const Function& f, double a, double mu, double nu, double top) {
  check_hilfer(mu, nu);
  require_interval(a, top, "hilfer_derivative");
  if (f.is_zero()) return Function::zero(a);
  // I^kappa D g = D I^kappa g - g(a+) (x-a)^(kappa-1) / Gamma(kappa) with g = I^rho f.
  const double kappa = nu * (1.0 - mu);
  const double rho = (1.0 - nu) * (1.0 - mu);
  const double lead_g = f.lead() + rho;
  if (lead_g < 0) throw DomainError("hilfer_derivative: I^rho f is unbounded at the base point");
  Complex g0 = 0.0;
  if (kappa > 0 && lead_g == 0.0) {
    if (rho > 0) throw DomainError("hilfer_derivative: I^rho f has an unsupported finite limit at the base point");
    g0 = f(a);
  }
  const Complex c = g0 * specfun::rgamma(kappa);
  return tabulate(
      [&](double t) {
        Complex v = rl_derivative(f, a, mu, t);
        if (c != 0.0) v -= c * std::pow(t - a, kappa - 1.0);
        return v;
      },
      a, top, f.lead() - mu);
}

Complex ik_integral(const Function& f, double a, double gamma, double mu, double x) {
  if (!(gamma > -1)) throw DomainError("ik_integral: requires Re(gamma) > -1");
  if (!(mu > 0)) throw DomainError("ik_integral: requires Re(mu) > 0");
  require_interval(a, x, "ik_integral");
  if (x == a || f.is_zero()) return 0.0;
  Complex integral;
  if (a == 0.0) {
    const Split s = split_at(f, a);
    if (!(s.p + gamma > -1)) throw DomainError("ik_integral: non-integrable at the base point");
    integral = quad::integrate_singular(s.g, a, x, {s.p + gamma, mu - 1.0}, kOperatorTol);
  } else {
    const Split s = split_at(f, a);
    auto integrand = [&](double t) { return std::pow(Complex(t), gamma) * s.g(t); };
    integral = quad::integrate_singular(integrand, a, x, {s.p, mu - 1.0}, kOperatorTol);
  }
  return integral * std::pow(x - a, -mu - gamma) * specfun::rgamma(mu);
}

// --- H-kernel operator ----------------------------------------------------------

void validate(const HKernelOp& op) {
  validate(op.h);
  if (op.w == 0.0 || !std::isfinite(std::abs(op.w))) throw DomainError("HKernelOp: w must be nonzero");
  if (!(op.alpha > 0)) throw DomainError("HKernelOp: alpha must be positive");
  if (!(op.beta.real() > 0)) throw DomainError("HKernelOp: Re(beta) must be positive");
  if (!std::isfinite(op.a)) throw DomainError("HKernelOp: base point must be finite");
  double lowest = std::numeric_limits<double>::infinity();
  for (int j = 0; j < op.h.m; ++j) lowest = std::min(lowest, op.h.lower[j].shift / op.h.lower[j].scale);
  if (!(op.beta.real() + op.alpha * lowest > 0)) {
    throw DomainError("HKernelOp: Re(beta) + min alpha b_j/beta_j must be positive");
  }
}

double kernel_exponent(const HKernelOp& op) {
  return op.beta.real() - 1.0 + op.alpha * HFunction(op.h).leading_exponent();
}

Complex kernel_value(const HKernelOp& op, const HFunction& h, double tau) {
  return std::pow(Complex(tau), op.beta - 1.0) * h(op.w * std::pow(tau, op.alpha));
}

Complex h_kernel_apply(const HKernelOp& op, const Function& f, double x) {
  validate(op);
  require_interval(op.a, x, "h_kernel_apply");
  if (x == op.a || f.is_zero()) return 0.0;
  const HFunction h(op.h);
  const double lead = h.leading_exponent();
  const double expo = op.beta.real() - 1.0 + op.alpha * lead;
  if (!(expo > -1)) throw DomainError("h_kernel_apply: kernel not integrable at t = x");
  const Complex residual_power(-op.alpha * lead, op.beta.imag());
  const Split s = split_at(f, op.a);
  auto integrand = [&](const quad::Abscissa& ab) -> Complex {
    const double tau = std::max(ab.from_right, 1e-150);
    const Complex k = h(op.w * std::pow(tau, op.alpha));
    const Complex scale = residual_power == 0.0 ? Complex(1.0) : std::pow(Complex(tau), residual_power);
    return k * scale * s.g(ab.t);
  };
  return quad::integrate_singular(quad::PreciseIntegrand(integrand), op.a, x, {s.p, expo},
                                  kOperatorTol);
}

double lead_after_integral(const Function& f, double mu) { return f.lead() + mu; }

double lead_after_h(const HKernelOp& op, const Function& f) {
  return f.lead() + op.beta.real() + op.alpha * HFunction(op.h).leading_exponent();
}

}  // namespace foxh
