#include "foxh/hfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "foxh/quadrature.hpp"
#include "foxh/specfun.hpp"

namespace foxh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kPoleCap = 500;
constexpr double kCollision = 1e-9;

bool at_pole(double arg, double scale) {
  if (arg > 0.5) return false;
  return std::abs(arg - std::round(arg)) <= kCollision * std::max(1.0, std::abs(scale));
}

}  // namespace

void validate(const HParams& h) {
  if (h.q() < 1 || h.m < 1 || h.m > h.q()) throw DomainError("HParams: requires 1 <= m <= q");
  if (h.n < 0 || h.n > h.p()) throw DomainError("HParams: requires 0 <= n <= p");
  for (const auto* list : {&h.upper, &h.lower}) {
    for (const auto& pr : *list) {
      if (!std::isfinite(pr.shift) || !std::isfinite(pr.scale)) {
        throw DomainError("HParams: parameters must be finite");
      }
      if (!(pr.scale > 0)) throw DomainError("HParams: alpha_j and beta_j must be positive");
    }
  }
}

std::string orders_string(const HParams& h) {
  std::ostringstream os;
  os << "(" << h.m << "," << h.n << "," << h.p() << "," << h.q() << ")";
  return os.str();
}

Complex mellin_theta(const HParams& h, Complex s) {
  validate(h);
  Complex log_sum = 0.0;
  auto num = [&](Complex arg) {
    if (arg.imag() == 0.0 && arg.real() <= 0.0 && arg.real() == std::floor(arg.real())) {
      throw PoleError("mellin_theta: s is a pole of a numerator gamma factor");
    }
    log_sum += specfun::ln_gamma(arg);
  };
  bool zero = false;
  auto den = [&](Complex arg) {
    if (arg.imag() == 0.0 && arg.real() <= 0.0 && arg.real() == std::floor(arg.real())) {
      zero = true;
      return;
    }
    log_sum -= specfun::ln_gamma(arg);
  };
  for (int j = 0; j < h.q(); ++j) {
    const auto& b = h.lower[j];
    if (j < h.m) num(b.shift + b.scale * s);
    else den(1.0 - b.shift - b.scale * s);
  }
  for (int j = 0; j < h.p(); ++j) {
    const auto& a = h.upper[j];
    if (j < h.n) num(1.0 - a.shift - a.scale * s);
    else den(a.shift + a.scale * s);
  }
  if (zero) return 0.0;
  return std::exp(log_sum);
}

const char* to_string(HMethod m) {
  switch (m) {
    case HMethod::ResidueLeft: return "residue-series-left";
    case HMethod::ResidueRight: return "residue-series-right";
    case HMethod::ContourOnly: return "contour-only";
    case HMethod::Divergent: return "divergent";
  }
  return "unknown";
}

HCharacteristics characteristics(const HParams& h) {
  HCharacteristics c{0.0, 1.0, 0.0};
  double log_delta = 0.0;
  for (int j = 0; j < h.p(); ++j) {
    const double al = h.upper[j].scale;
    c.Delta -= al;
    log_delta -= al * std::log(al);
    c.aperture += j < h.n ? al : -al;
  }
  for (int j = 0; j < h.q(); ++j) {
    const double be = h.lower[j].scale;
    c.Delta += be;
    log_delta += be * std::log(be);
    c.aperture += j < h.m ? be : -be;
  }
  c.delta = std::exp(log_delta);
  return c;
}

HMethod check_convergence(const HParams& h, Complex z) { return HFunction(h).method(z); }

HFunction::HFunction(HParams h) : h_(std::move(h)) {
  validate(h_);
  ch_ = characteristics(h_);
  for (int j = 0; j < h_.q(); ++j) {
    const auto& b = h_.lower[j];
    if (j < h_.m) num_.push_back({b.shift, b.scale});
    else den_.push_back({1.0 - b.shift, -b.scale});
  }
  for (int j = 0; j < h_.p(); ++j) {
    const auto& a = h_.upper[j];
    if (j < h_.n) num_.push_back({1.0 - a.shift, -a.scale});
    else den_.push_back({a.shift, a.scale});
  }
  // Cancel identical gamma factors; they contribute nothing to theta.
  for (auto it = num_.begin(); it != num_.end();) {
    auto hit = std::find_if(den_.begin(), den_.end(),
                            [&](const Factor& d) { return d.c0 == it->c0 && d.c1 == it->c1; });
    if (hit != den_.end()) {
      den_.erase(hit);
      it = num_.erase(it);
    } else {
      ++it;
    }
  }
  left_max_ = -kInf;
  right_min_ = kInf;
  for (const auto& f : num_) {
    const double pole = -f.c0 / f.c1;
    if (f.c1 > 0) left_max_ = std::max(left_max_, pole);
    else right_min_ = std::min(right_min_, pole);
  }
}

Complex HFunction::theta(Complex s) const {
  Complex log_sum = 0.0;
  for (const auto& f : num_) {
    const Complex arg = f.c0 + f.c1 * s;
    if (arg.imag() == 0.0 && arg.real() <= 0.0 && arg.real() == std::floor(arg.real())) {
      throw PoleError("theta: s is a pole of a numerator gamma factor");
    }
    log_sum += specfun::ln_gamma(arg);
  }
  for (const auto& f : den_) {
    const Complex arg = f.c0 + f.c1 * s;
    if (arg.imag() == 0.0 && arg.real() <= 0.0 && arg.real() == std::floor(arg.real())) return 0.0;
    log_sum -= specfun::ln_gamma(arg);
  }
  return std::exp(log_sum);
}

bool HFunction::contour_allowed(Complex z) const {
  if (!contour_available() || z == 0.0) return false;
  return ch_.aperture > 0 && std::abs(std::arg(z)) < 0.5 * ch_.aperture * std::numbers::pi;
}

HMethod HFunction::method(Complex z) const {
  if (z == 0.0 || !std::isfinite(std::abs(z))) return HMethod::Divergent;
  const bool has_right = right_min_ < kInf;
  if (ch_.Delta > 1e-12) return HMethod::ResidueLeft;
  if (ch_.Delta < -1e-12) {
    if (has_right) return HMethod::ResidueRight;
  } else {
    const double r = std::abs(z) / ch_.delta;
    if (r < 0.9) return HMethod::ResidueLeft;
    if (r > 1.1 && has_right) return HMethod::ResidueRight;
  }
  return contour_allowed(z) ? HMethod::ContourOnly : HMethod::Divergent;
}

double HFunction::contour_abscissa() const {
  if (!contour_available()) throw DomainError("H-function: pole families are not separable");
  if (left_max_ == -kInf) return right_min_ - 1.0;
  if (right_min_ == kInf) return left_max_ + 1.0;
  return left_max_ + std::min(1.0, 0.5 * (right_min_ - left_max_));
}

Complex HFunction::residue_sum(Complex z, bool left, const MellinFactor* extra,
                                double* cancellation) const {
  const double log_abs_z = std::log(std::abs(z));
  const double arg_z = std::arg(z);
  Complex total = 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < num_.size(); ++i) {
    const Factor& fi = num_[i];
    if ((fi.c1 > 0) != left) continue;
    int small = 0;
    Complex family = 0.0;
    for (int k = 0;; ++k) {
      if (k >= kPoleCap) throw ConvergenceError("H-function: residue series pole cap reached");
      const double s = -(fi.c0 + k) / fi.c1;
      int extra_num = 0, den_poles = 0;
      double log_mag = -std::lgamma(k + 1.0) - std::log(std::abs(fi.c1)) - s * log_abs_z;
      int sign = (k % 2 == 0) ? 1 : -1;
      for (std::size_t j = 0; j < num_.size(); ++j) {
        if (j == i) continue;
        const double arg = num_[j].c0 + num_[j].c1 * s;
        if (at_pole(arg, num_[j].c1)) {
          ++extra_num;
          continue;
        }
        int sg = 0;
        log_mag += specfun::ln_gamma_abs(arg, &sg);
        sign *= sg;
      }
      for (const auto& d : den_) {
        const double arg = d.c0 + d.c1 * s;
        if (at_pole(arg, d.c1)) {
          ++den_poles;
          continue;
        }
        int sg = 0;
        log_mag -= specfun::ln_gamma_abs(arg, &sg);
        sign *= sg;
      }
      Complex term = 0.0;
      if (extra_num > 0 && den_poles < extra_num + 1) {
        throw PoleError("H-function: coincident poles (logarithmic case)");
      }
      if (den_poles == 0) {
        term = static_cast<double>(sign) * std::exp(log_mag) * std::polar(1.0, -s * arg_z);
        if (extra) term *= (*extra)(Complex(s, 0.0));
      }
      family += term;
      total += term;
      peak = std::max(peak, std::abs(term));
      const double mag = std::abs(term);
      if (mag <= 1e-14 * std::max(std::abs(total), 1e-3 * peak) && (mag > 0 || std::abs(total) > 0)) {
        if (++small >= 3) break;
      } else {
        small = 0;
      }
      if (!std::isfinite(mag)) throw ConvergenceError("H-function: residue term overflow");
    }
  }
  *cancellation = std::abs(total) > 0 ? peak / std::abs(total) : (peak > 0 ? kInf : 0.0);
  return total;
}

Complex HFunction::by_residues(Complex z, bool left) const {
  if (z == 0.0) throw DomainError("H-function: z = 0");
  double cancellation = 0.0;
  return residue_sum(z, left, nullptr, &cancellation);
}

Complex HFunction::by_residues(Complex z, bool left, const MellinFactor& extra) const {
  if (z == 0.0) throw DomainError("H-function: z = 0");
  double cancellation = 0.0;
  return residue_sum(z, left, &extra, &cancellation);
}

Complex HFunction::by_contour(Complex z, double tol) const {
  return by_contour(z, tol, nullptr, contour_abscissa(), z.imag() == 0.0 && z.real() > 0.0);
}

Complex HFunction::by_contour(Complex z, double tol, const MellinFactor& extra, double abscissa,
                              bool conjugate_symmetric) const {
  if (z == 0.0) throw DomainError("H-function: z = 0");
  const Complex log_z = std::log(z);
  auto g = [&](Complex s) -> Complex {
    Complex log_sum = -s * log_z;
    for (const auto& f : num_) log_sum += specfun::ln_gamma(f.c0 + f.c1 * s);
    for (const auto& f : den_) {
      const Complex arg = f.c0 + f.c1 * s;
      if (arg.imag() == 0.0 && arg.real() <= 0.0 && arg.real() == std::floor(arg.real())) return 0.0;
      log_sum -= specfun::ln_gamma(arg);
    }
    const Complex v = std::exp(log_sum);
    return extra ? v * extra(s) : v;
  };
  quad::ContourOptions opt;
  opt.tol = tol;
  opt.conjugate_symmetric = conjugate_symmetric;
  return quad::integrate_contour(g, {abscissa, 40.0, 257}, opt);
}

Complex HFunction::operator()(Complex z) const {
  const HMethod m = method(z);
  if (m == HMethod::Divergent) {
    throw DomainError("H-function: no convergent representation at this argument");
  }
  if (m == HMethod::ContourOnly) return by_contour(z);
  try {
    double cancellation = 0.0;
    const Complex v = residue_sum(z, m == HMethod::ResidueLeft, nullptr, &cancellation);
    if (cancellation > 1e5 && contour_allowed(z)) return by_contour(z);
    return v;
  } catch (const PoleError&) {
    if (contour_allowed(z)) return by_contour(z);
    throw;
  } catch (const ConvergenceError&) {
    if (contour_allowed(z)) return by_contour(z);
    throw;
  }
}

Complex eval_h(const HParams& h, Complex z) { return HFunction(h)(z); }

HParams exponential_template() { return HParams{1, 0, {}, {{0.0, 1.0}}}; }

HParams mittag_leffler_template(double alpha, double beta) {
  return HParams{1, 1, {{0.0, 1.0}}, {{0.0, 1.0}, {1.0 - beta, alpha}}};
}

HParams lambda_template(double eta, double mu, double nu) {
  return HParams{2, 0, {{1.0 - (nu + 1.0) / eta, 1.0 / eta}}, {{0.0, 1.0}, {-mu - nu / eta, 1.0 / eta}}};
}

namespace {

bool close(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); }

// Substitute s = (u - b)/beta so that the pair (b, beta) becomes (0, 1).
HPair normalize(const HPair& p, const HPair& pivot) {
  return {p.shift - p.scale * pivot.shift / pivot.scale, p.scale / pivot.scale};
}

}  // namespace

std::optional<Reduction> reduce_to_known(const HParams& h) {
  try {
    validate(h);
  } catch (const DomainError&) {
    return std::nullopt;
  }
  const int p = h.p(), q = h.q();
  if (h.m == 1 && h.n == 0 && p == 0 && q == 1) {
    const HPair& b = h.lower[0];
    return Reduction{KnownKind::Exponential, b.shift / b.scale, b.scale};
  }
  if (h.m == 1 && h.n == 1 && p == 1 && q == 2) {
    const HPair& piv = h.lower[0];
    const HPair up = normalize(h.upper[0], piv);
    const HPair lo = normalize(h.lower[1], piv);
    if (close(up.shift, 0.0) && close(up.scale, 1.0)) {
      return Reduction{KnownKind::MittagLeffler, piv.shift / piv.scale, piv.scale, lo.scale,
                       1.0 - lo.shift};
    }
    return std::nullopt;
  }
  if (h.m == 2 && h.n == 0 && p == 1 && q == 2) {
    for (int first = 0; first < 2; ++first) {
      const HPair& piv = h.lower[first];
      const HPair up = normalize(h.upper[0], piv);
      const HPair lo = normalize(h.lower[1 - first], piv);
      if (!close(up.scale, lo.scale)) continue;
      const double eta = 1.0 / up.scale;
      const double nu = (1.0 - up.shift) * eta - 1.0;
      const double mu = -lo.shift - nu / eta;
      if (!(mu > 1.0 / eta - 1.0)) continue;
      return Reduction{KnownKind::Lambda, piv.shift / piv.scale, piv.scale, eta, mu, nu};
    }
  }
  return std::nullopt;
}

std::string Reduction::describe() const {
  std::ostringstream os;
  os.precision(12);
  switch (kind) {
    case KnownKind::Exponential: os << "exponential"; break;
    case KnownKind::MittagLeffler: os << "mittag_leffler(" << p1 << "," << p2 << ")"; break;
    case KnownKind::Lambda: os << "lambda(" << p1 << "," << p2 << "," << p3 << ")"; break;
  }
  if (shift != 0.0 || scale != 1.0) os << " shift=" << shift << " scale=" << scale;
  return os.str();
}

Complex Reduction::evaluate(Complex z) const {
  const Complex y = scale == 1.0 ? z : std::pow(z, 1.0 / scale);
  Complex core;
  switch (kind) {
    case KnownKind::Exponential: core = std::exp(-y); break;
    case KnownKind::MittagLeffler: core = specfun::mittag_leffler(p1, p2, -y); break;
    case KnownKind::Lambda: core = specfun::lambda_fn({p1, p2, p3, y}); break;
  }
  const Complex pre = shift == 0.0 ? Complex(1.0) : std::pow(z, shift);
  return pre * core / scale;
}

}  // namespace foxh
