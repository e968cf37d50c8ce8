#include <cmath>
#include <random>

#include "check.hpp"
#include "foxh/compose.hpp"
#include "foxh/specfun.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace foxh;

namespace {

HKernelOp exp_op() {
  HKernelOp op;
  op.h = exponential_template();
  return op;
}

HKernelOp ml_op() {
  HKernelOp op;
  op.h = mittag_leffler_template(0.5, 1.0);
  op.alpha = 0.5;
  return op;
}

HKernelOp lam_op() {
  HKernelOp op;
  op.h = lambda_template(2.0, 0.2, 0.1);
  op.beta = 1.5;
  return op;
}

}  // namespace

TEST_CASE("shift orders and beta") {
  const auto ml = ml_op();
  const auto hi = shift_H_after_I(ml, 0.5);
  CHECK(orders_string(hi.h) == "(1,2,2,3)");
  CHECK(hi.beta == ml.beta + 0.5);
  CHECK(orders_string(shift_H_after_I(lam_op(), 0.5).h) == "(2,1,2,3)");
  CHECK(orders_string(shift_I_after_H(lam_op(), 0.5).h) == "(2,1,2,3)");
  const auto d = shift_D_after_H(lam_op(), 0.5);
  CHECK(orders_string(d.h) == "(2,2,3,4)");
  CHECK(d.beta == Complex(1.0));
  CHECK(orders_string(shift_H_after_D(lam_op(), 0.5).h) == "(2,2,3,4)");

  HKernelOp generic = ml_op();
  generic.beta = 2.0;
  CHECK(orders_string(shift_D_after_H(generic, 0.5).h) == "(1,3,3,4)");
  const auto hil = shift_Hilfer_after_H(generic, 0.5, 0.5);
  CHECK(orders_string(hil.h) == "(1,4,4,5)");
  CHECK(hil.beta == Complex(1.5));
}

TEST_CASE("the two integral rules give the same operator") {
  for (const auto& op : {exp_op(), ml_op(), lam_op()}) {
    for (double mu : {0.3, 0.5, 1.7}) CHECK(shift_I_after_H(op, mu) == shift_H_after_I(op, mu));
  }
}

TEST_CASE("rule table") {
  CHECK(shift_rules().size() == 5);
  const auto& r = shift_rule(ShiftKind::HilferAfterH);
  CHECK(r.dn == 3);
  CHECK(r.dp == 3);
  CHECK(r.dq == 3);
  CHECK(r.beta_sign == -1);
  CHECK(std::string(r.label) == "hilfer-after-H");
}

TEST_CASE("shift preconditions") {
  HKernelOp op = exp_op();
  CHECK_THROWS_AS(shift_D_after_H(op, 1.5), DomainError);
  CHECK_THROWS_AS(shift_H_after_I(op, 0.0), DomainError);
  CHECK_THROWS_AS(shift_Hilfer_after_H(op, 1.0, 0.5), DomainError);
  op.beta = Complex(1.0, 0.5);
  CHECK_THROWS_AS(shift_H_after_I(op, 0.5), DomainError);
}

TEST_CASE("Mellin ratio of the derivative rule") {
  HKernelOp op = ml_op();
  op.beta = 2.0;
  const auto shifted = shift_D_after_H(op, 0.5);
  const double c = HFunction(shifted.h).contour_abscissa();
  const Complex s(c, 0.7);
  const Complex ratio = mellin_theta(shifted.h, s) / mellin_theta(op.h, s);
  const Complex want = specfun::gamma(op.beta - op.alpha * s) / specfun::gamma(op.beta - 0.5 - op.alpha * s);
  CHECK_REL(ratio, want, 1e-10);
  CHECK_REL(declared_ratio(ShiftKind::DAfterH, op, 0.5, s), want, 1e-14);
}

TEST_CASE("vanishing order leaves the kernel in place") {
  const HKernelOp op = ml_op();
  const HFunction h0(op.h);
  for (double mu : {1e-6, 1e-7}) {
    const HKernelOp s = shift_H_after_I(op, mu);
    const HFunction h1(s.h);
    for (double tau : {0.2, 0.7, 1.3}) {
      const Complex k0 = kernel_value(op, h0, tau);
      const Complex k1 = kernel_value(s, h1, tau);
      CHECK(rel_diff(k1, k0) < 10 * mu);
    }
  }
}

TEST_CASE("composite kernels against nested quadrature") {
  CHECK_REL(theorem1_kernel(exp_op(), 0.5, 0.5, 1.0, 0.4), oracle::kThm1_exp_g05_m05_x1_u04, 1e-9);
  CHECK_REL(theorem1_kernel(ml_op(), 1.0, 0.5, 1.0, 0.3), oracle::kThm1_ml_g1_m05_x1_u03, 1e-9);
  HKernelOp based = exp_op();
  based.a = 0.2;
  CHECK_REL(theorem1_kernel(based, 0.5, 0.7, 1.3, 0.5), oracle::kThm1_exp_g05_m07_a02_x13_u05, 1e-9);
  CHECK_REL(theorem2_kernel(exp_op(), 0.5, 0.5, 1.0, 0.4), oracle::kThm2_exp_g05_m05_x1_u04, 1e-9);
  CHECK_REL(theorem2_kernel(ml_op(), 1.0, 0.3, 1.5, 0.7), oracle::kThm2_ml_g1_m03_x15_u07, 1e-9);
}

TEST_CASE("composite kernel paths agree") {
  for (auto form : {KernelForm::HAfterIK, KernelForm::IKAfterH}) {
    const CompositeKernel res(form, ml_op(), 0.5, 0.5, KernelPath::Residue);
    const CompositeKernel con(form, ml_op(), 0.5, 0.5, KernelPath::Contour);
    for (double u : {0.1, 0.6, 0.95}) CHECK_REL(res(1.0, u), con(1.0, u), 1e-8);
  }
}

TEST_CASE("composite kernel edge behaviour") {
  // Re(mu + beta) > 1: the kernel vanishes as u -> x
  const double near = std::abs(theorem1_kernel(exp_op(), 0.5, 0.5, 1.0, 1.0 - 1e-8));
  CHECK(near < 1e-3);
  CHECK(std::abs(theorem2_kernel(exp_op(), 0.5, 0.5, 1.0, 1.0 - 1e-8)) < 1e-3);
  HKernelOp neg = exp_op();
  neg.a = -0.5;
  CHECK_THROWS_AS(theorem2_kernel(neg, 0.5, 0.5, 1.0, 0.2), DomainError);
  CHECK_THROWS_AS(theorem1_kernel(exp_op(), -1.5, 0.5, 1.0, 0.2), DomainError);
  // gamma = 0: the I^{gamma,mu} o H kernel is (x-a)^(-mu) times the shifted-operator kernel
  const HKernelOp shifted = shift_I_after_H(exp_op(), 0.5);
  const HFunction hs(shifted.h);
  for (double u : {0.2, 0.7}) {
    CHECK_REL(theorem2_kernel(exp_op(), 0.0, 0.5, 1.3, u),
              std::pow(1.3, -0.5) * kernel_value(shifted, hs, 1.3 - u), 1e-6);
  }
}

TEST_CASE("identity names") {
  CHECK(all_identities().size() == 12);
  for (auto id : all_identities()) CHECK(parse_identity(to_string(id)) == id);
  CHECK_FALSE(parse_identity("nosuch"));
  CHECK(requires_lambda_kernel(IdentityId::Cor5));
  CHECK_FALSE(requires_lambda_kernel(IdentityId::Cor1));
  CHECK(relative_error(0.0, 0.0) == 0.0);
}

TEST_CASE("verify_identity") {
  const std::vector<double> grid{0.5, 1.0, 1.5};
  const auto one = TestFunction::constant("const1", 1.0);
  const auto r = verify_identity(IdentityId::Cor1, ml_op(), {}, one, grid, 1e-5);
  CHECK(r.pass);
  CHECK(r.rows.size() == 3);
  CHECK(r.max_rel_err <= 1e-5);
  CHECK(r.target_orders == "(1,2,2,3)");

  const auto t = TestFunction::polynomial("t", {0, 1});
  CHECK(verify_identity(IdentityId::Thm3, exp_op(), {}, t, grid, 1e-4).pass);

  const auto zero = verify_identity(IdentityId::Cor2, ml_op(), {}, TestFunction::constant("zero", 0.0), grid, 1e-12);
  CHECK(zero.pass);
  CHECK(zero.max_rel_err == 0.0);

  CHECK_THROWS_AS(verify_identity(IdentityId::Cor3, ml_op(), {}, one, grid, 1e-4), DomainError);

  // a tolerance below the attainable accuracy is reported, not thrown
  const auto strict = verify_identity(IdentityId::Cor1, ml_op(), {}, TestFunction::exponential("e", 1), grid, 1e-17);
  CHECK(strict.pass == (strict.max_rel_err <= 1e-17));
}

TEST_CASE("report serialization") {
  CHECK(csv_header() == "identity,x,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err\n");
  CHECK(format_number(0.1) == "1.0000000000000001e-01");
  VerificationReport r;
  r.identity = "cor1/op=ml";
  r.tol = 1e-4;
  r.rows.push_back({"cor1/op=ml", 0.5, {1.0, 0.0}, {1.0, 1e-9}, 1e-9, 1e-9});
  r.max_rel_err = 1e-9;
  const std::string csv = to_csv_rows(r);
  CHECK(csv.rfind("cor1/op=ml,5.0000000000000000e-01,1.0000000000000000e+00,", 0) == 0);
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["identity"] == "cor1/op=ml");
  CHECK(j["pass"] == true);
  CHECK(j["rows"].size() == 1);
}
