#include <cmath>
#include <random>

#include "doctest.h"
#include "hyper3/errors.hpp"
#include "hyper3/quadrature.hpp"

using namespace hyper3;

namespace {

FloatParams ha_params() { return {{"alpha", 0.5}, {"beta1", 1.5}, {"beta2", 1.5}, {"gamma1", 3.0}, {"gamma2", 3.0}}; }

FloatParams laplace_params() {
  return {{"alpha", 1.5},  {"beta1", 1.5},  {"beta2", 1.5}, {"gamma", 2.5},
          {"gamma1", 2.5}, {"gamma2", 2.5}, {"gamma3", 2.5}};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const std::array<double, 3> kSmall{0.05, 0.05, 0.05};

}  // namespace

TEST_CASE("rep names") {
  CHECK(all_reps().size() == 9);
  CHECK(parse_rep("R6_4") == IntegralRep::R6_4);
  CHECK(parse_rep("5.10") == IntegralRep::R5_10);
  CHECK(std::string(to_string(IntegralRep::R6_8)) == "R6_8");
  CHECK_THROWS_AS(parse_rep("R6_3"), UnknownIdentity);
  CHECK(rep_info(IntegralRep::R6_7).dims == 2);
  CHECK(rep_info(IntegralRep::R6_8).target == FunctionId::parse("HC"));
}

TEST_CASE("Gauss-Legendre integrates random polynomials exactly") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (unsigned n : {4u, 7u, 16u, 33u}) {
    const auto r = gauss_legendre01(n);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> c(2 * n);
      double exact = 0.0;
      for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] = coef(rng);
        exact += c[k] / (k + 1.0);
      }
      double q = 0.0;
      for (unsigned i = 0; i < n; ++i) {
        double p = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) p = p * r.nodes[i] + c[k];
        q += r.weights[i] * p;
      }
      CHECK(std::abs(q - exact) < 1e-13);
    }
  }
}

TEST_CASE("generalized Gauss-Laguerre moments") {
  for (double a : {-0.5, 0.0, 0.5, 1.25}) {
    for (unsigned n : {4u, 12u, 40u}) {
      const auto r = gauss_laguerre(n, a);
      for (unsigned k = 0; k < std::min(2 * n, 30u); ++k) {
        double q = 0.0;
        for (unsigned i = 0; i < n; ++i) q += r.weights[i] * std::pow(r.nodes[i], k);
        CHECK(rel(q, std::tgamma(a + k + 1.0)) < 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(gauss_laguerre(8, -1.0), BadParams);
}

TEST_CASE("Laplace representation at the origin") {
  const std::array<double, 3> origin{0, 0, 0};
  const auto r = quad_eval(IntegralRep::R6_8, {{"alpha", 1.5}, {"beta1", 1.5}, {"beta2", 1.5}, {"gamma", 2.5}},
                           origin, {32});
  CHECK(std::abs(r.value - 1.0) <= 1e-10);
}

TEST_CASE("unit-square representation matches the HA series") {
  const std::array<double, 3> pt{0.1, 0.1, 0.1};
  const auto q = quad_eval(IntegralRep::R5_1, ha_params(), pt, {80});
  CHECK(rel(q.value, eval(FunctionId::parse("HA"), ha_params(), pt).value) <= 1e-8);
}

TEST_CASE("Laplace representations match the series") {
  const auto p = laplace_params();
  for (auto rep : {IntegralRep::R6_4, IntegralRep::R6_5, IntegralRep::R6_6, IntegralRep::R6_7, IntegralRep::R6_8}) {
    CAPTURE(to_string(rep));
    const auto q = quad_eval(rep, p, kSmall, {24});
    CHECK(rel(q.value, eval(rep_info(rep).target, p, kSmall).value) <= 1e-6);
  }
}

TEST_CASE("paired representations agree") {
  const auto p = laplace_params();
  CHECK(rel(quad_eval(IntegralRep::R6_5, p, kSmall, {24}).value,
            quad_eval(IntegralRep::R6_4, p, kSmall, {24}).value) <= 1e-6);
  CHECK(rel(quad_eval(IntegralRep::R6_7, p, kSmall, {24}).value,
            quad_eval(IntegralRep::R6_6, p, kSmall, {24}).value) <= 1e-6);
}

TEST_CASE("errors shrink as nodes double") {
  const std::array<double, 3> pt{0.1, 0.1, 0.1};
  const double truth = eval(FunctionId::parse("HA"), ha_params(), pt).value;
  double last = 1.0;
  for (unsigned n : {4u, 8u, 16u}) {
    const double err = std::abs(quad_eval(IntegralRep::R5_1, ha_params(), pt, {n}).value - truth);
    CHECK(err < last);
    last = err;
  }
  const auto p = laplace_params();
  const double hc = eval(FunctionId::parse("HC"), p, pt).value;
  const double e4 = std::abs(quad_eval(IntegralRep::R6_8, p, pt, {4}).value - hc);
  const double e6 = std::abs(quad_eval(IntegralRep::R6_8, p, pt, {6}).value - hc);
  CHECK(e6 < e4);
  // Already at roundoff.
  CHECK(std::abs(quad_eval(IntegralRep::R6_8, p, pt, {16}).value - hc) < 1e-12);
}

TEST_CASE("endpoint map helps half-integer exponents") {
  const std::array<double, 3> pt{0.1, 0.1, 0.1};
  const double truth = eval(FunctionId::parse("HA"), ha_params(), pt).value;
  const double plain = std::abs(quad_eval(IntegralRep::R5_1, ha_params(), pt, {32, false}).value - truth);
  const double mapped = std::abs(quad_eval(IntegralRep::R5_1, ha_params(), pt, {32, true}).value - truth);
  CHECK(mapped < 1e-3 * plain);
}

TEST_CASE("recorded outcomes of the printed representations") {
  const auto prof = quad_profile();
  // The Euler-type HA integral reduces to the series only when beta1 = beta2.
  CHECK(rel(quad_eval(IntegralRep::R6_1, prof[0].params, kSmall, {24}).value,
            eval(FunctionId::parse("HA"), prof[0].params, kSmall).value) < 1e-10);
  CHECK(rel(quad_eval(IntegralRep::R6_1, prof[1].params, kSmall, {24}).value,
            eval(FunctionId::parse("HA"), prof[1].params, kSmall).value) > 1e-3);
  // The triple HB integral holds on every single-variable slice but not in the xy plane.
  const std::array<double, 3> x_only{0.1, 0, 0}, xy{0.1, 0.1, 0};
  const auto hb = FunctionId::parse("HB");
  CHECK(rel(quad_eval(IntegralRep::R5_10, prof[0].params, x_only, {16}).value,
            eval(hb, prof[0].params, x_only).value) < 1e-10);
  CHECK(rel(quad_eval(IntegralRep::R5_10, prof[0].params, xy, {16}).value, eval(hb, prof[0].params, xy).value) >
        1e-4);
}

TEST_CASE("constraints and errors") {
  auto p = ha_params();
  p.set("beta1", 0.5);
  CHECK_THROWS_AS(quad_eval(IntegralRep::R5_1, p, kSmall), ConstraintViolated);
  p.set("beta1", -1.0);
  CHECK_THROWS_AS(check_constraints(IntegralRep::R5_1, p), ConstraintViolated);
  auto l = laplace_params();
  l.set("alpha", 0.0);
  CHECK_THROWS_AS(quad_eval(IntegralRep::R6_4, l, kSmall), ConstraintViolated);
  CHECK_THROWS_AS(quad_eval(IntegralRep::R6_8, FloatParams{{"alpha", 1.5}}, kSmall), BadParams);
  CHECK_THROWS_AS(quad_eval(IntegralRep::R5_1, ha_params(), kSmall, {3}), BadParams);
  CHECK_THROWS_AS(quad_eval(IntegralRep::R5_1, ha_params(), kSmall, {257}), BadParams);
  const std::array<double, 2> two{0.1, 0.1};
  CHECK_THROWS_AS(quad_eval(IntegralRep::R5_1, ha_params(), two), ArityMismatch);
  const std::array<double, 3> far{2.0, 0.1, 0.1};
  CHECK_THROWS_AS(quad_eval(IntegralRep::R5_1, ha_params(), far, {8}), IntegrandSingular);
  CHECK_THROWS_AS(quad_eval(IntegralRep::R6_2, quad_profile()[0].params, kSmall, {8}), ConstraintViolated);
}

TEST_CASE("consistency sweep") {
  const QuadConfig cfg{16};
  const auto one = consistency_sweep({IntegralRep::R6_8}, {quad_profile()[0]}, {kSmall}, cfg);
  REQUIRE(one.entries.size() == 1);
  CHECK(one.entries[0].status == "agree");

  const auto both = consistency_sweep({IntegralRep::R6_4, IntegralRep::R6_5}, {quad_profile()[0]}, {kSmall}, cfg);
  REQUIRE(both.entries.size() == 2);
  CHECK(both.entries[0].rep == "R6_4");
  CHECK(both.entries[1].rep == "R6_5");
  for (const auto& r : both.entries) CHECK(r.rel_diff <= 1e-6);
  CHECK_FALSE(both.any_failed());

  const auto mixed = consistency_sweep({IntegralRep::R6_2, IntegralRep::R6_8}, quad_profile(), {kSmall}, {8});
  REQUIRE(mixed.entries.size() == 4);
  CHECK(mixed.entries[0].status == "error");
  CHECK(mixed.entries[3].status == "agree");
  CHECK(mixed.any_failed());

  const auto j = to_json(mixed);
  CHECK(nlohmann::ordered_json::parse(j.dump(2)).dump(2) == j.dump(2));
  CHECK(j["entries"].size() == 4);
  CHECK(to_json(consistency_sweep({IntegralRep::R6_2, IntegralRep::R6_8}, quad_profile(), {kSmall}, {8}, 1e-6, 1))
            .dump() == j.dump());
}
