#pragma once

// Chebyshev interpolation on an interval and on geometrically graded panels.

#include <functional>
#include <vector>

#include "foxh/error.hpp"

namespace foxh::cheb {

using Sampler = std::function<Complex(double)>;

/// Interpolant through the first-kind Chebyshev points of [lo, hi].
class Series {
 public:
  Series() = default;
  static Series fit(const Sampler& f, double lo, double hi, int degree);

  Complex operator()(double x) const;
  /// k-th derivative of the interpolant at x.
  Complex derivative(double x, int k = 1) const;
  /// Coefficient series of the derivative.
  Series differentiate() const;
  /// Largest magnitude among the last three coefficients relative to the
  /// largest coefficient; a proxy for the interpolation error.
  double tail_ratio() const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<Complex>& coefficients() const { return c_; }

 private:
  double lo_ = 0.0, hi_ = 1.0;
  std::vector<Complex> c_;
};

/// Piecewise interpolant of a function on [a, top] that may behave like a
/// fractional power of (t - a). Panels halve in width towards a; below the
/// finest panel the function is continued as c (t-a)^lead from the finest
/// panel's left end.
class GradedTable {
 public:
  GradedTable(const Sampler& f, double a, double top, double lead, int panels = 34,
              int degree = 16);

  Complex value(double t) const;
  Complex derivative(double t) const;

  double base() const { return a_; }
  double top() const { return top_; }
  /// Worst tail_ratio over all panels.
  double worst_tail() const;

 private:
  int panel_of(double t) const;

  double a_, top_, lead_;
  double floor_;  // left end of the finest panel
  Complex floor_value_;
  std::vector<Series> panels_;
  std::vector<Series> slopes_;
};

}  // namespace foxh::cheb
