#include <cmath>
#include <random>

#include "check.hpp"
#include "foxh/chebyshev.hpp"
#include "foxh/quadrature.hpp"
#include "foxh/specfun.hpp"
#include "oracles.hpp"

using namespace foxh;
using namespace foxh::quad;

TEST_CASE("integrate_adaptive") {
  CHECK_REL(integrate_adaptive([](double t) { return Complex(t); }, 0, 1, 1e-12), Complex(0.5), 1e-13);
  CHECK_REL(integrate_adaptive([](double t) { return Complex(std::exp(t)); }, 0, 1, 1e-12),
            Complex(std::exp(1.0) - 1), 1e-13);
  CHECK(std::abs(integrate_adaptive([](double t) { return Complex(std::sin(t)); }, 0, M_PI, 1e-13) - 2.0) <
        1e-12);
}

TEST_CASE("integrate_singular endpoint weights") {
  auto one = [](double) { return Complex(1.0); };
  CHECK_REL(integrate_singular(one, 0, 1, {-0.5, 0}, 1e-12), Complex(2.0), 1e-12);
  CHECK_REL(integrate_singular(one, 0, 1, {-0.5, -0.5}, 1e-12), Complex(M_PI), 1e-12);
  CHECK_REL(integrate_singular([](double t) { return Complex(std::exp(t)); }, 0, 1, {0, -0.5}, 1e-12),
            oracle::kExpRightSqrt, 1e-12);
  // strong singularity near -1
  CHECK_REL(integrate_singular(one, 0, 1, {-0.9, 0.3}, 1e-12), specfun::beta(0.1, 1.3), 1e-10);
}

TEST_CASE("integrate_singular exposes exact endpoint distances") {
  const double a = 0.2, b = 1.0;
  const Complex got = integrate_singular(
      [&](const Abscissa& n) {
        CHECK(std::abs(n.from_left - (n.t - a)) <= 1e-15 * b);
        CHECK(std::abs(n.from_right - (b - n.t)) <= 1e-15 * b);
        return Complex(1.0);
      },
      a, b, {0, 0}, 1e-12);
  CHECK_REL(got, Complex(b - a), 1e-13);
}

TEST_CASE("singular with zero exponents matches adaptive on random smooth integrands") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const double c0 = u(rng), c1 = u(rng), c2 = u(rng), k = u(rng);
    auto f = [=](double t) { return Complex(c0 + c1 * t + c2 * std::cos(k * t), c1 * std::exp(k * t)); };
    const double tol = 1e-10;
    const Complex s = integrate_singular(f, -0.3, 1.7, {0, 0}, tol);
    const Complex g = integrate_adaptive(f, -0.3, 1.7, tol);
    CHECK(std::abs(s - g) <= 2 * tol * std::max(1.0, std::abs(g)));
  }
}

TEST_CASE("linearity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  auto f = [](double t) { return Complex(std::exp(-t) * std::sin(3 * t), t * t); };
  const Complex base = integrate_singular(f, 0, 2, {-0.3, -0.6}, 1e-12);
  for (int i = 0; i < 10; ++i) {
    const Complex c(u(rng), u(rng));
    const Complex scaled = integrate_singular([&](double t) { return c * f(t); }, 0, 2, {-0.3, -0.6}, 1e-12);
    CHECK_REL(scaled, c * base, 1e-11);
  }
}

TEST_CASE("integrate_contour on the Cahen-Mellin integrand") {
  auto cm = [](double z) {
    return [z](Complex s) { return specfun::gamma(s) * std::pow(Complex(z), -s); };
  };
  CHECK_REL(integrate_contour(cm(1.0), {1.0, 40, 257}), Complex(std::exp(-1.0)), 1e-10);
  CHECK_REL(integrate_contour(cm(2.0), {1.0, 40, 257}), Complex(std::exp(-2.0)), 1e-10);
  for (double c : {0.5, 1.0, 1.5}) {
    CHECK(std::abs(integrate_contour(cm(1.0), {c, 40, 257}) - std::exp(-1.0)) < 1e-8);
  }
  ContourOptions sym;
  sym.conjugate_symmetric = true;
  CHECK_REL(integrate_contour(cm(0.7), {0.8, 40, 257}, sym), Complex(std::exp(-0.7)), 1e-10);
  CHECK(integrate_contour([](Complex) { return Complex(0.0); }, {1.0, 40, 257}) == 0.0);
}

TEST_CASE("contour failures") {
  CHECK_THROWS_AS(validate(ContourSpec{0.0, 40, 256}), DomainError);
  CHECK_THROWS_AS(validate(ContourSpec{0.0, 40, 31}), DomainError);
  CHECK_THROWS_AS(validate(ContourSpec{0.0, -1, 257}), DomainError);
  // no decay along the line
  CHECK_THROWS_AS(integrate_contour([](Complex) { return Complex(1.0); }, {0.0, 40, 257}), ConvergenceError);
}

TEST_CASE("Chebyshev series and graded table") {
  auto f = [](double t) { return Complex(std::sin(2 * t), std::exp(t)); };
  const auto s = cheb::Series::fit(f, -1.0, 2.0, 24);
  for (double t : {-0.9, 0.1, 1.3, 2.0}) {
    CHECK(std::abs(s(t) - f(t)) < 1e-12);
    CHECK(std::abs(s.derivative(t) - Complex(2 * std::cos(2 * t), std::exp(t))) < 1e-9);
  }
  CHECK(s.tail_ratio() < 1e-12);
  // (t-a)^0.3 (1 + t) has a fractional power at the base
  auto g = [](double t) { return Complex(std::pow(t - 0.5, 0.3) * (1 + t)); };
  cheb::GradedTable tab(g, 0.5, 2.0, 0.3);
  for (double t : {0.5 + 1e-4, 0.7, 1.9}) CHECK_REL(tab.value(t), g(t), 1e-10);
  CHECK_REL(tab.value(0.5 + 1e-9), g(0.5 + 1e-9), 1e-8);
  const double t = 1.2;
  const double dg = 0.3 * std::pow(t - 0.5, -0.7) * (1 + t) + std::pow(t - 0.5, 0.3);
  CHECK_REL(tab.derivative(t), Complex(dg), 1e-8);
}
