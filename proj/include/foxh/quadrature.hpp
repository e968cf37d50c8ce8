#pragma once

// Real-line and vertical-contour integration.

#include <functional>

#include "foxh/error.hpp"

namespace foxh::quad {

using RealIntegrand = std::function<Complex(double)>;
using LineIntegrand = std::function<Complex(Complex)>;

/// Endpoint weight (t-a)^left_exponent (b-t)^right_exponent.
struct SingularWeight {
  double left_exponent = 0.0;
  double right_exponent = 0.0;
};

/// A quadrature node together with its distances to both interval ends,
/// each computed without cancellation. Integrands that contain factors
/// such as (x - t) near t = x should use these distances instead of t.
struct Abscissa {
  double t;
  double from_left;
  double from_right;
};

using PreciseIntegrand = std::function<Complex(const Abscissa&)>;

/// Adaptive Gauss-Kronrod (7/15) quadrature with global error control.
/// Throws ConvergenceError when the subdivision cap is hit.
Complex integrate_adaptive(const RealIntegrand& f, double a, double b, double tol);

/// Double-exponential (tanh-sinh) rule for the weighted integral
///   int_a^b (t-a)^p (b-t)^q f(t) dt.
/// The weight is evaluated in log form from the exact endpoint distances, so
/// integrable singularities of any strength are handled. `tol` is a relative
/// tolerance with an absolute floor near machine precision of the L1 norm.
Complex integrate_singular(const RealIntegrand& f, double a, double b, SingularWeight w,
                           double tol);

/// Same as integrate_singular with the node distances exposed to `f`.
Complex integrate_singular(const PreciseIntegrand& f, double a, double b, SingularWeight w,
                           double tol);

/// Discretization of the vertical line Re(s) = abscissa, |Im(s)| <= half_height.
struct ContourSpec {
  double abscissa = 0.0;
  double half_height = 40.0;
  int nodes = 257;
};

/// Throws DomainError unless half_height > 0 and nodes is odd and >= 33.
void validate(const ContourSpec& spec);

struct ContourOptions {
  double tol = 1e-10;
  double max_half_height = 640.0;
  int max_nodes = 8193;
  /// Set when g(conj(s)) == conj(g(s)); only the upper half line is sampled
  /// and the result is real.
  bool conjugate_symmetric = false;
};

/// (1/(2 pi i)) int_{c - i inf}^{c + i inf} g(s) ds by the trapezoid rule.
/// The node spacing is halved until two estimates agree to tol (relative to
/// the larger of the estimate and the integrand peak); the line is extended
/// until g is negligible at the ends. Throws ConvergenceError when either
/// cap in `opt` is exceeded.
Complex integrate_contour(const LineIntegrand& g, const ContourSpec& spec,
                          const ContourOptions& opt = {});

}  // namespace foxh::quad
