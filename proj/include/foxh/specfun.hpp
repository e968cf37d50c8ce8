#pragma once

// Complex special functions: log-gamma, beta, Gauss 2F1, Mittag-Leffler and
// the generalized Macdonald function lambda^(eta)_{mu,nu}.

#include "foxh/error.hpp"

namespace foxh::specfun {

/// Log-gamma on the branch that is continuous for Re(z) >= 0.5 (Lanczos). For
/// Re(z) < 0.5 it is continued by reflection, so the imaginary part there is
/// only defined modulo 2*pi. Throws PoleError at non-positive integers.
Complex ln_gamma(Complex z);

/// Gamma(z). Throws PoleError at non-positive integers.
Complex gamma(Complex z);

/// 1/Gamma(z); entire, zero at non-positive integers.
Complex rgamma(Complex z);

/// Real log|Gamma(x)| together with the sign of Gamma(x). Thread safe.
/// At poles returns +inf with sign 0.
double ln_gamma_abs(double x, int* sign);

/// True when x is within `tol` of a non-positive integer.
bool near_gamma_pole(double x, double tol = 0.0);

/// B(a,b) = Gamma(a)Gamma(b)/Gamma(a+b), computed from log-gamma so that
/// beta(a,b) == beta(b,a) bit for bit.
Complex beta(Complex a, Complex b);

/// psi(z) = Gamma'(z)/Gamma(z). Throws PoleError at non-positive integers.
Complex digamma(Complex z);

/// Gauss hypergeometric function 2F1(a,b;c;z) off the cut [1, inf).
/// Direct series on |z| <= 0.8, Pfaff transformation, the 1-z connection
/// formula, and analytic continuation of the hypergeometric ODE otherwise.
Complex gauss_2f1(Complex a, Complex b, Complex c, Complex z);

/// Mittag-Leffler function E_{alpha,beta}(z) by its power series. The series
/// is only used on |z| <= 5; larger arguments raise DomainError. When the
/// largest term exceeds the sum by more than kMaxCancellation (small alpha,
/// z near -5) the result would be inaccurate and ConvergenceError is raised.
Complex mittag_leffler(double alpha, double beta, Complex z);

struct LambdaParams {
  double eta = 1.0;
  double mu = 1.0;
  double nu = 0.0;
  Complex z{1.0, 0.0};
};

/// Throws DomainError unless eta > 0, mu > 1/eta - 1 and Re(z) > 0.
void validate(const LambdaParams& p);

/// lambda^(eta)_{mu,nu}(z) = eta / Gamma(mu + 1 - 1/eta)
///     * int_1^inf (t^eta - 1)^(mu - 1/eta) t^nu exp(-z t) dt.
Complex lambda_fn(const LambdaParams& p);

inline constexpr int kSeriesTermCap = 10000;
inline constexpr double kMaxCancellation = 1e7;

}  // namespace foxh::specfun
