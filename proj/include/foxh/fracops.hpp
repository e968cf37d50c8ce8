#pragma once

// Fractional operators based at a: Riemann-Liouville integral and derivative,
// Hilfer derivative, the operator I^{gamma,mu}_{a+} and the H-kernel operator.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "foxh/error.hpp"
#include "foxh/hfunction.hpp"

namespace foxh {

/// A function on (base, inf) written as (t - base)^p g(t) with g bounded near
/// the base point. `lead` is the exponent of the leading behaviour at the
/// base point; it equals p for factored functions.
class Function {
 public:
  using Callable = std::function<Complex(double)>;

  Function(double base, double p, Callable smooth, Callable derivative = {},
           double lead = 0.0);

  static Function zero(double base);

  double base() const { return base_; }
  double left_power() const { return p_; }
  double lead() const { return lead_; }
  bool is_zero() const { return zero_; }
  bool has_derivative() const { return static_cast<bool>(dvalue_); }

  Complex operator()(double t) const;
  Complex smooth(double t) const { return g_(t); }
  /// d/dt of the full value. Throws DomainError when no derivative is known.
  Complex derivative(double t) const;

 private:
  double base_;
  double p_;
  double lead_;
  Callable g_;
  Callable dvalue_;
  bool zero_ = false;
};

/// Fixed corpus element with an analytic derivative.
struct TestFunction {
  enum class Tag { Constant, Power, Exponential, Polynomial };

  std::string name;
  Tag tag = Tag::Constant;
  double c = 1.0;                    // constant value
  double lambda = 0.0;               // power exponent (> -1)
  double center = 0.0;               // power centre; ignored when centred at the base
  bool centered_at_base = true;
  double k = 1.0;                    // exponential rate
  std::vector<double> coeffs;        // polynomial coefficients in t, ascending

  static TestFunction constant(std::string name, double c);
  static TestFunction power(std::string name, double lambda);
  static TestFunction exponential(std::string name, double k);
  static TestFunction polynomial(std::string name, std::vector<double> coeffs);

  void validate() const;
  Complex value(double t) const;
  Complex derivative(double t) const;
  bool is_zero() const;
  /// The function as seen by operators based at a.
  Function bind(double a) const;
};

const char* to_string(TestFunction::Tag tag);

/// Tabulate an operator result on [a, top] with a graded Chebyshev table.
Function tabulate(const Function::Callable& values, double a, double top, double lead);

/// Tolerances (relative) for the inner quadratures.
inline constexpr double kOperatorTol = 1e-11;
/// Tolerance for integrals of a tabulated derivative, which is accurate to about 1e-10.
inline constexpr double kSlopeTol = 1e-9;

Complex rl_integral(const Function& f, double a, Complex mu, double x);
Complex rl_derivative(const Function& f, double a, Complex mu, double x);
Complex hilfer_derivative(const Function& f, double a, double mu, double nu, double x);
Complex ik_integral(const Function& f, double a, double gamma, double mu, double x);

/// The Hilfer derivative tabulated on (a, top], built from the RL derivative
/// and the initial-value term g(a+) (x-a)^(kappa-1) / Gamma(kappa).
Function hilfer_derivative_table(const Function& f, double a, double mu, double nu, double top);

inline Complex rl_integral(const TestFunction& f, double a, Complex mu, double x) {
  return rl_integral(f.bind(a), a, mu, x);
}
inline Complex rl_derivative(const TestFunction& f, double a, Complex mu, double x) {
  return rl_derivative(f.bind(a), a, mu, x);
}
inline Complex hilfer_derivative(const TestFunction& f, double a, double mu, double nu, double x) {
  return hilfer_derivative(f.bind(a), a, mu, nu, x);
}
inline Complex ik_integral(const TestFunction& f, double a, double gamma, double mu, double x) {
  return ik_integral(f.bind(a), a, gamma, mu, x);
}

/// Operator with kernel (x-t)^(beta-1) H^{m,n}_{p,q}[w (x-t)^alpha] based at a.
struct HKernelOp {
  double a = 0.0;
  Complex w{1.0, 0.0};
  double alpha = 1.0;
  Complex beta{1.0, 0.0};
  HParams h;

  bool operator==(const HKernelOp&) const = default;
};

/// Throws DomainError unless w != 0, alpha > 0, Re(beta) > 0 and
/// Re(beta) + min_{j<=m} alpha b_j / beta_j > 0.
void validate(const HKernelOp& op);

/// Exponent of (x-t) at t -> x in the kernel: Re(beta) - 1 + alpha min_j b_j/beta_j.
double kernel_exponent(const HKernelOp& op);

/// Kernel (x-t)^(beta-1) H[w (x-t)^alpha] as a function of tau = x - t > 0.
Complex kernel_value(const HKernelOp& op, const HFunction& h, double tau);

Complex h_kernel_apply(const HKernelOp& op, const Function& f, double x);
inline Complex h_kernel_apply(const HKernelOp& op, const TestFunction& f, double x) {
  return h_kernel_apply(op, f.bind(op.a), x);
}

/// Leading exponent at the base point of the operator outputs, used when
/// tabulating them.
double lead_after_integral(const Function& f, double mu);
double lead_after_h(const HKernelOp& op, const Function& f);

}  // namespace foxh
