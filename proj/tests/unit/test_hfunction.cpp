#include <cmath>

#include "check.hpp"
#include "foxh/hfunction.hpp"
#include "foxh/specfun.hpp"
#include "oracles.hpp"

using namespace foxh;

namespace {

HParams g1222() { return {1, 2, {{0.2, 1}, {-0.3, 1}}, {{0.1, 1}, {0.4, 1}}}; }

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(HParams{0, 0, {}, {{0, 1}}}), DomainError);
  CHECK_THROWS_AS(validate(HParams{2, 0, {}, {{0, 1}}}), DomainError);
  CHECK_THROWS_AS(validate(HParams{1, 2, {{0, 1}}, {{0, 1}}}), DomainError);
  CHECK_THROWS_AS(validate(HParams{1, 0, {}, {{0, -1}}}), DomainError);
  CHECK_THROWS_AS(validate(HParams{1, 0, {}, {{NAN, 1}}}), DomainError);
  CHECK_NOTHROW(validate(lambda_template(2, 0.2, 0.1)));
  CHECK(orders_string(mittag_leffler_template(0.5, 1)) == "(1,1,1,2)");
}

TEST_CASE("mellin_theta") {
  CHECK_REL(mellin_theta(exponential_template(), 2.0), Complex(1.0), 1e-15);
  CHECK_REL(mellin_theta(mittag_leffler_template(0.5, 1), {0.5, 0.5}), oracle::kThetaML_05_1, 1e-13);
  // m = q and n = p: the denominator products are empty
  const HParams full{2, 1, {{0.3, 0.5}}, {{0.1, 1}, {0.2, 2}}};
  const Complex s(0.4, 0.3);
  CHECK_REL(mellin_theta(full, s),
            specfun::gamma(0.1 + s) * specfun::gamma(0.2 + 2.0 * s) * specfun::gamma(0.7 - 0.5 * s), 1e-13);
}

TEST_CASE("theta blows up at the left poles") {
  const auto h = lambda_template(2, 0.2, 0.1);
  for (int j = 0; j < h.m; ++j) {
    for (int k = 0; k < 3; ++k) {
      const double pole = -(h.lower[j].shift + k) / h.lower[j].scale;
      CHECK_THROWS_AS(mellin_theta(h, pole), PoleError);
      CHECK(std::abs(mellin_theta(h, Complex(pole + 1e-14, 0))) > 1e12);
    }
  }
}

TEST_CASE("check_convergence") {
  CHECK(check_convergence(exponential_template(), 3.0) == HMethod::ResidueLeft);
  for (double r : {0.5, 2.0, 5.0}) {
    CHECK(check_convergence(mittag_leffler_template(0.5, 1), -r) == HMethod::ResidueLeft);
  }
  const HParams g{1, 1, {{0, 1}}, {{0, 1}}};
  CHECK(check_convergence(g, 1.0) == HMethod::ContourOnly);
  CHECK(check_convergence(g, 0.5) == HMethod::ResidueLeft);
  CHECK(check_convergence(g, 2.0) == HMethod::ResidueRight);
  CHECK(check_convergence(g, 0.0) == HMethod::Divergent);
  CHECK_THROWS_AS(eval_h(g, 0.0), DomainError);
}

TEST_CASE("eval_h closed forms") {
  CHECK_REL(eval_h(exponential_template(), 1.0), Complex(std::exp(-1.0)), 1e-14);
  // H^{1,0}_{0,1}[z | (b, beta)] = z^{b/beta} exp(-z^{1/beta}) / beta
  const HParams scaled{1, 0, {}, {{0.3, 0.5}}};
  for (double z : {0.2, 0.9, 1.7}) {
    CHECK_REL(eval_h(scaled, z), Complex(std::pow(z, 0.6) * std::exp(-z * z) / 0.5), 1e-12);
  }
  // H^{1,1}_{1,1}[z | (0,1); (0,1)] = 1/(1+z), on every path
  const HParams g{1, 1, {{0, 1}}, {{0, 1}}};
  for (double z : {0.4, 1.0, 3.0}) CHECK_REL(eval_h(g, z), Complex(1 / (1 + z)), 1e-9);
  CHECK_REL(eval_h(g1222(), 0.3), oracle::kMeijerG_1222, 1e-11);
}

TEST_CASE("residues and contour agree for every template") {
  const HParams fams[] = {exponential_template(), mittag_leffler_template(0.5, 1),
                          mittag_leffler_template(0.8, 1.3), lambda_template(2, 0.2, 0.1),
                          lambda_template(1.5, 1, 0.4)};
  for (const auto& h : fams) {
    const HFunction f(h);
    for (double z : {0.3, 0.8, 1.5, 2.5, 4.0}) {
      CAPTURE(orders_string(h));
      CAPTURE(z);
      CHECK_REL(f.by_contour(z), f.by_residues(z, true), 1e-7);
    }
  }
}

TEST_CASE("known reductions") {
  auto e = reduce_to_known(exponential_template());
  REQUIRE(e);
  CHECK(e->kind == KnownKind::Exponential);

  auto ml = reduce_to_known(mittag_leffler_template(0.5, 1));
  REQUIRE(ml);
  CHECK(ml->kind == KnownKind::MittagLeffler);
  CHECK(ml->p1 == doctest::Approx(0.5));
  CHECK(ml->p2 == doctest::Approx(1.0));
  for (double r : {0.1, 1.0, 2.0, 3.0}) {
    CHECK_REL(eval_h(mittag_leffler_template(0.5, 1), r), specfun::mittag_leffler(0.5, 1, -r), 1e-7);
  }

  // beyond the stable range of the series the H-function still evaluates
  CHECK_REL(eval_h(mittag_leffler_template(0.5, 1), 5.0), Complex(0.11070463773306863), 1e-9);

  auto lam = reduce_to_known(lambda_template(2, 0.2, 0.1));
  REQUIRE(lam);
  CHECK(lam->kind == KnownKind::Lambda);
  CHECK(lam->p1 == doctest::Approx(2));
  CHECK(lam->p2 == doctest::Approx(0.2));
  CHECK(lam->p3 == doctest::Approx(0.1));
  for (double z : {0.5, 1.0, 2.0, 3.0}) {
    CHECK_REL(eval_h(lambda_template(2, 0.2, 0.1), z), specfun::lambda_fn({2, 0.2, 0.1, z}), 1e-6);
    CHECK_REL(lam->evaluate(z), eval_h(lambda_template(2, 0.2, 0.1), z), 1e-7);
  }

  const HParams other{2, 2, {{0.1, 1}, {0.2, 0.5}, {0.3, 1}}, {{0, 1}, {0.5, 1}, {0.2, 2}}};
  CHECK_FALSE(reduce_to_known(other));
}

TEST_CASE("identical factors cancel") {
  // Gamma(1 - a - alpha s) over Gamma(1 - b - beta s) with (a, alpha) = (b, beta)
  const HParams h{1, 1, {{0.35, 0.5}}, {{0, 1}, {0.35, 0.5}}};
  const HFunction f(h);
  CHECK(f.contour_abscissa() > 0.0);
  CHECK_REL(f.theta({0.3, 0.8}), specfun::gamma(Complex(0.3, 0.8)), 1e-13);
  for (double z : {0.5, 2.0}) CHECK_REL(f(z), Complex(std::exp(-z)), 1e-12);
}
