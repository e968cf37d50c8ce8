#include "foxh/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace foxh::cheb {

Series Series::fit(const Sampler& f, double lo, double hi, int degree) {
  if (!(hi > lo)) throw DomainError("chebyshev fit: empty interval");
  if (degree < 1) throw DomainError("chebyshev fit: degree must be positive");
  const int n = degree + 1;
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::vector<Complex> values(n);
  for (int k = 0; k < n; ++k) {
    values[k] = f(mid + half * std::cos(std::numbers::pi * (k + 0.5) / n));
  }
  Series s;
  s.lo_ = lo;
  s.hi_ = hi;
  s.c_.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    Complex acc = 0.0;
    for (int k = 0; k < n; ++k) acc += values[k] * std::cos(std::numbers::pi * j * (k + 0.5) / n);
    s.c_[j] = acc * (2.0 / n);
  }
  s.c_[0] *= 0.5;
  return s;
}

Complex Series::operator()(double x) const {
  const double y = (2.0 * x - lo_ - hi_) / (hi_ - lo_);
  Complex b1 = 0.0, b2 = 0.0;
  for (int j = static_cast<int>(c_.size()) - 1; j >= 1; --j) {
    const Complex b0 = c_[j] + 2.0 * y * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c_.empty() ? Complex(0.0) : c_[0] + y * b1 - b2;
}

Series Series::differentiate() const {
  Series d;
  d.lo_ = lo_;
  d.hi_ = hi_;
  const int n = static_cast<int>(c_.size());
  if (n <= 1) {
    d.c_.assign(1, 0.0);
    return d;
  }
  d.c_.assign(n - 1, 0.0);
  Complex next2 = 0.0, next1 = 0.0;  // d_{j+1}, d_{j+2}
  for (int j = n - 1; j >= 1; --j) {
    const Complex dj = next1 + 2.0 * j * c_[j];  // d_{j-1}
    d.c_[j - 1] = dj;
    next1 = next2;
    next2 = dj;
  }
  d.c_[0] *= 0.5;
  const double scale = 2.0 / (hi_ - lo_);
  for (auto& v : d.c_) v *= scale;
  return d;
}

Complex Series::derivative(double x, int k) const {
  if (k == 0) return (*this)(x);
  Series d = differentiate();
  for (int i = 1; i < k; ++i) d = d.differentiate();
  return d(x);
}

double Series::tail_ratio() const {
  double peak = 0.0;
  for (const auto& v : c_) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  double tail = 0.0;
  const int n = static_cast<int>(c_.size());
  for (int j = std::max(0, n - 3); j < n; ++j) tail = std::max(tail, std::abs(c_[j]));
  return tail / peak;
}

GradedTable::GradedTable(const Sampler& f, double a, double top, double lead, int panels,
                         int degree)
    : a_(a), top_(top), lead_(lead) {
  if (!(top > a)) throw DomainError("graded table: top must exceed the base point");
  if (panels < 1) throw DomainError("graded table: need at least one panel");
  const double len = top - a;
  // Panels narrower than about 1e6 ulps of a resolve t - a too coarsely.
  const double min_width = 1e6 * std::numeric_limits<double>::epsilon() * std::abs(a);
  while (panels > 1 && std::ldexp(len, -panels) < min_width) --panels;
  panels_.reserve(panels);
  slopes_.reserve(panels);
  for (int j = 0; j < panels; ++j) {
    const double hi = a + std::ldexp(len, -j);
    const double lo = a + std::ldexp(len, -j - 1);
    panels_.push_back(Series::fit(f, lo, hi, degree));
    slopes_.push_back(panels_.back().differentiate());
  }
  floor_ = a + std::ldexp(len, -panels);
  floor_value_ = panels_.back()(floor_);
}

int GradedTable::panel_of(double t) const {
  int e = 0;
  std::frexp((t - a_) / (top_ - a_), &e);
  return std::clamp(-e, 0, static_cast<int>(panels_.size()) - 1);
}

Complex GradedTable::value(double t) const {
  if (t > top_ + 1e-12 * (top_ - a_)) {
    throw DomainError("graded table: evaluation point " + std::to_string(t) + " beyond range");
  }
  if (t <= a_) return lead_ > 0 ? Complex(0.0) : (lead_ == 0 ? floor_value_ : Complex(INFINITY));
  if (t < floor_) return floor_value_ * std::pow((t - a_) / (floor_ - a_), lead_);
  return panels_[panel_of(t)](t);
}

Complex GradedTable::derivative(double t) const {
  if (t > top_ + 1e-12 * (top_ - a_)) throw DomainError("graded table: derivative beyond range");
  if (t < floor_) {
    if (lead_ == 0 || t <= a_) return 0.0;
    return floor_value_ * lead_ * std::pow((t - a_) / (floor_ - a_), lead_ - 1) / (floor_ - a_);
  }
  return slopes_[panel_of(t)](t);
}

double GradedTable::worst_tail() const {
  double w = 0.0;
  for (const auto& p : panels_) w = std::max(w, p.tail_ratio());
  return w;
}

}  // namespace foxh::cheb
