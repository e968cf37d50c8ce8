#include "foxh/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

namespace foxh::quad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the nodes kXgk[1], kXgk[3], kXgk[5], kXgk[7].
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  Complex value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const RealIntegrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  const Complex fc = f(c);
  Complex kron = fc * kWgk[7];
  Complex gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = r * kXgk[j];
    const Complex s = f(c - dx) + f(c + dx);
    kron += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  kron *= r;
  gauss *= r;
  return {a, b, kron, std::abs(kron - gauss)};
}

void check_finite(const Complex& v, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw ConvergenceError(std::string(what) + ": integrand produced a non-finite value");
  }
}

}  // namespace

Complex integrate_adaptive(const RealIntegrand& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  if (!(a < b)) throw DomainError("integrate_adaptive: requires a < b");
  if (!(tol > 0)) throw DomainError("integrate_adaptive: tolerance must be positive");
  constexpr int kMaxSegments = 2000;

  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  Complex total = first.value;
  double error = first.error;
  heap.push(first);
  int segments = 1;
  while (error > std::max(tol, 50 * kEps * std::abs(total))) {
    if (segments >= kMaxSegments) {
      throw ConvergenceError("integrate_adaptive: subdivision cap reached");
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
  }
  // Re-sum to drop the rounding accumulated by incremental updates.
  Complex sum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    heap.pop();
  }
  check_finite(sum, "integrate_adaptive");
  return sum;
}

Complex integrate_singular(const RealIntegrand& f, double a, double b, SingularWeight w,
                           double tol) {
  return integrate_singular(PreciseIntegrand([&f](const Abscissa& s) { return f(s.t); }), a, b,
                            w, tol);
}

Complex integrate_singular(const PreciseIntegrand& f, double a, double b, SingularWeight w,
                           double tol) {
  if (!(w.left_exponent > -1.0) || !(w.right_exponent > -1.0)) {
    throw DomainError("integrate_singular: endpoint exponents must exceed -1");
  }
  if (a == b) return 0.0;
  if (!(a < b)) throw DomainError("integrate_singular: requires a < b");
  if (!(tol > 0)) throw DomainError("integrate_singular: tolerance must be positive");

  const double len = b - a;
  const double log_len = std::log(len);
  const double log_floor = std::log(1e-300);
  const double pl = w.left_exponent + 1.0;
  const double pr = w.right_exponent + 1.0;

  // Node x maps to u = (pi/2) sinh x; the distances to the ends are
  // len/(1+exp(-2u)) and len/(1+exp(2u)).
  auto term = [&](double x) -> Complex {
    const double u = 0.5 * std::numbers::pi * std::sinh(x);
    const double e = std::exp(-2.0 * std::abs(u));
    const double log_near = log_len - 2.0 * std::abs(u) - std::log1p(e);
    const double log_far = log_len - std::log1p(e);
    if (log_near - log_len < log_floor) return 0.0;
    const double log_dl = u >= 0 ? log_far : log_near;
    const double log_dr = u >= 0 ? log_near : log_far;
    const double log_weight = pl * log_dl + pr * log_dr + std::log(std::numbers::pi * std::cosh(x)) -
                              log_len;
    if (log_weight < -745.0) return 0.0;
    const double dl = std::exp(log_dl);
    const double dr = std::exp(log_dr);
    const double t = dl <= dr ? a + dl : b - dr;
    const Complex v = f(Abscissa{t, dl, dr});
    if (v == 0.0) return 0.0;
    return std::exp(log_weight) * v;
  };

  constexpr double kMaxX = 8.0;
  constexpr int kMinLevel = 3;
  constexpr int kMaxLevel = 10;

  // Level 0 (unit spacing) fixes the truncation on each side.
  Complex sum = term(0.0);
  double l1 = std::abs(sum);
  double peak = l1;
  double x_hi[2] = {0.0, 0.0};
  for (int side = 0; side < 2; ++side) {
    const double sign = side == 0 ? 1.0 : -1.0;
    int quiet = 0;
    for (int k = 1; k <= static_cast<int>(kMaxX); ++k) {
      const Complex v = term(sign * k);
      sum += v;
      l1 += std::abs(v);
      peak = std::max(peak, std::abs(v));
      x_hi[side] = k;
      if (std::abs(v) <= 1e-19 * peak) {
        if (++quiet >= 2) break;
      } else {
        quiet = 0;
      }
    }
  }
  check_finite(sum, "integrate_singular");

  double h = 1.0;
  Complex estimate = sum;
  for (int level = 1; level <= kMaxLevel; ++level) {
    h *= 0.5;
    Complex fresh = 0.0;
    double fresh_l1 = 0.0;
    for (int side = 0; side < 2; ++side) {
      const double sign = side == 0 ? 1.0 : -1.0;
      for (double x = h; x < x_hi[side]; x += 2 * h) {
        const Complex v = term(sign * x);
        fresh += v;
        fresh_l1 += std::abs(v);
      }
    }
    sum += fresh;
    l1 += fresh_l1;
    const Complex next = sum * h;
    check_finite(next, "integrate_singular");
    const double diff = std::abs(next - estimate);
    estimate = next;
    if (level >= kMinLevel && diff <= std::max(tol * std::abs(next), 64 * kEps * l1 * h)) {
      return next;
    }
  }
  throw ConvergenceError("integrate_singular: refinement cap reached");
}

void validate(const ContourSpec& spec) {
  if (!(spec.half_height > 0)) throw DomainError("ContourSpec: half_height must be positive");
  if (spec.nodes < 33 || spec.nodes % 2 == 0) {
    throw DomainError("ContourSpec: nodes must be odd and at least 33");
  }
  if (!std::isfinite(spec.abscissa)) throw DomainError("ContourSpec: abscissa must be finite");
}

Complex integrate_contour(const LineIntegrand& g, const ContourSpec& spec,
                          const ContourOptions& opt) {
  validate(spec);
  const double c = spec.abscissa;
  double h = 2.0 * spec.half_height / (spec.nodes - 1);
  auto at = [&](double y) {
    const Complex v = g(Complex(c, y));
    check_finite(v, "integrate_contour");
    return v;
  };

  // Coarse pass: walk outwards until the integrand is negligible against its
  // peak, extending past the initial half height when needed.
  const Complex centre = at(0.0);
  double peak = std::abs(centre);
  std::vector<double> ys;  // sampled ordinates except 0, both signs
  Complex raw = opt.conjugate_symmetric ? Complex(centre.real(), 0.0) : centre;
  double l1 = std::abs(centre);
  double reach[2] = {0.0, 0.0};
  const int sides = opt.conjugate_symmetric ? 1 : 2;
  for (int side = 0; side < sides; ++side) {
    const double sign = side == 0 ? 1.0 : -1.0;
    int quiet = 0;
    for (int k = 1;; ++k) {
      const double y = k * h;
      if (y > opt.max_half_height) {
        throw ConvergenceError("integrate_contour: integrand not negligible at truncation");
      }
      const Complex v = at(sign * y);
      raw += opt.conjugate_symmetric ? Complex(2.0 * v.real(), 0.0) : v;
      l1 += opt.conjugate_symmetric ? 2.0 * std::abs(v) : std::abs(v);
      peak = std::max(peak, std::abs(v));
      reach[side] = y;
      if (std::abs(v) <= 1e-3 * opt.tol * peak) {
        if (++quiet >= 4) break;
      } else {
        quiet = 0;
      }
    }
  }
  if (opt.conjugate_symmetric) reach[1] = 0.0;

  const double scale = 1.0 / (2.0 * std::numbers::pi);
  Complex estimate = raw * h * scale;
  int nodes = 1 + static_cast<int>(std::lround(reach[0] / h)) +
              static_cast<int>(std::lround(reach[1] / h));
  while (true) {
    if (2 * nodes - 1 > opt.max_nodes) {
      throw ConvergenceError("integrate_contour: node cap reached before convergence");
    }
    const double half = 0.5 * h;
    for (int side = 0; side < sides; ++side) {
      const double sign = side == 0 ? 1.0 : -1.0;
      for (double y = half; y < reach[side]; y += h) {
        const Complex v = at(sign * y);
        raw += opt.conjugate_symmetric ? Complex(2.0 * v.real(), 0.0) : v;
        l1 += opt.conjugate_symmetric ? 2.0 * std::abs(v) : std::abs(v);
      }
    }
    nodes = 2 * nodes - 1;
    h = half;
    const Complex next = raw * h * scale;
    const double diff = std::abs(next - estimate);
    estimate = next;
    if (diff <= std::max(opt.tol * std::abs(next), 32 * kEps * l1 * h * scale)) return next;
  }
}

}  // namespace foxh::quad
