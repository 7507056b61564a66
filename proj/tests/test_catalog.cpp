#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "hyper3/catalog.hpp"
#include "hyper3/errors.hpp"

using namespace hyper3;

namespace {

const FunctionId kHA = FunctionId::parse("HA");
const FunctionId kHB = FunctionId::parse("HB");
const FunctionId kHC = FunctionId::parse("HC");
const FunctionId k2F1 = FunctionId::parse("2F1");

ExactParams generic_h() {
  return {{"alpha", Rational(1, 2)}, {"beta1", Rational(1, 3)}, {"beta2", Rational(1, 4)},
          {"gamma", Rational(8, 3)},  {"gamma1", Rational(5, 2)}, {"gamma2", Rational(7, 3)},
          {"gamma3", Rational(9, 4)}};
}

/// Exact value of a truncated series at a rational point.
Rational evaluate_at(const TruncatedSeries& s, const std::array<Rational, 3>& pt) {
  Rational sum = 0;
  for (const auto& [k, v] : s.terms()) {
    Rational t = v;
    for (unsigned i = 0; i < k.m; ++i) t *= pt[0];
    for (unsigned i = 0; i < k.n; ++i) t *= pt[1];
    for (unsigned i = 0; i < k.p; ++i) t *= pt[2];
    sum += t;
  }
  return sum;
}

}  // namespace

TEST_CASE("function ids") {
  CHECK(FunctionId::parse("AppellF3") == FunctionId::parse("F3"));
  CHECK(FunctionId::parse("FD3").arity() == 3);
  CHECK(FunctionId::parse("Psi2").name() == "Psi2");
  CHECK(kHB.param_names() == std::vector<std::string>{"alpha", "beta1", "beta2", "gamma1", "gamma2", "gamma3"});
  CHECK(FunctionId::parse("F3").param_names() == std::vector<std::string>{"a1", "a2", "b1", "b2", "c"});
  CHECK_THROWS_AS(FunctionId::parse("H_D"), ParseError);
}

TEST_CASE("coeff examples") {
  CHECK(coeff(kHA, generic_h(), {0, 0, 0}) == Rational(1));

  const ExactParams ones{{"alpha", 1}, {"beta1", 1}, {"beta2", 1}, {"gamma", 2}};
  // direct formula: (1)_2^3 / ((2)_3 * 1!1!1!)
  const Rational direct = pochhammer(1, 2) * pochhammer(1, 2) * pochhammer(1, 2) / pochhammer(2, 3);
  CHECK(direct == Rational(1, 3));
  CHECK(coeff(kHC, ones, {1, 1, 1}) == direct);

  const ExactParams hb{{"alpha", 1}, {"beta1", 2}, {"beta2", 3}, {"gamma1", 1}, {"gamma2", 1}, {"gamma3", 1}};
  CHECK(coeff(kHB, hb, {1, 0, 0}) == Rational(2));
}

TEST_CASE("coeff errors") {
  CHECK_THROWS_AS(coeff(k2F1, {{"a", 1}, {"b", 1}, {"c", 2}}, {0, 1, 0}), ArityMismatch);
  CHECK_THROWS_AS(coeff(kHA, {{"alpha", 1}}, {1, 0, 0}), BadParams);
  const ExactParams bad{{"a", 1}, {"b", 1}, {"c", -2}};
  // (1)_2 (1)_2 / ((-2)_2 2!) = 4 / (2 * 2)
  CHECK(coeff(k2F1, bad, {2, 0, 0}) == Rational(1));
  CHECK_THROWS_AS(coeff(k2F1, bad, {3, 0, 0}), BadParams);
  // validity is only checked up to the truncation depth
  CHECK_NOTHROW(truncated(k2F1, bad, 2));
  CHECK_THROWS_AS(truncated(k2F1, bad, 3), BadParams);
}

TEST_CASE("truncated examples") {
  const auto g = truncated(k2F1, {{"a", 1}, {"b", 1}, {"c", 2}}, 3);
  for (unsigned k = 0; k <= 3; ++k) CHECK(g.coeff({k, 0, 0}) == Rational(1, static_cast<long>(k) + 1));
  CHECK(g.size() == 4);

  const ExactParams f1{{"a", Rational(2, 7)}, {"b1", 3}, {"b2", Rational(-1, 2)}, {"c", Rational(9, 5)}};
  CHECK(truncated(FunctionId::parse("F1"), f1, 0) == TruncatedSeries::one(0));

  const ExactParams ha{{"alpha", 1}, {"beta1", 0}, {"beta2", 1}, {"gamma1", Rational(5, 2)}, {"gamma2", 1}};
  const auto z_only = truncated(kHA, ha, 2);
  CHECK(z_only == TruncatedSeries(2, {{MultiIndex3{0, 0, 0}, Rational(1)},
                                      {MultiIndex3{0, 0, 1}, Rational(1)},
                                      {MultiIndex3{0, 0, 2}, Rational(1)}}));
}

TEST_CASE("recurrence route agrees with direct Pochhammer route") {
  const ExactParams h = generic_h();
  const std::vector<std::pair<FunctionId, ExactParams>> cases = {
      {kHA, h},
      {kHB, h},
      {kHC, h},
      {FunctionId::parse("F1"), {{"a", Rational(2, 7)}, {"b1", 3}, {"b2", Rational(-1, 2)}, {"c", Rational(9, 5)}}},
      {FunctionId::parse("F2"),
       {{"a", Rational(2, 7)}, {"b1", 3}, {"b2", Rational(-1, 2)}, {"c1", Rational(9, 5)}, {"c2", Rational(4, 3)}}},
      {FunctionId::parse("F3"),
       {{"a1", Rational(2, 7)}, {"a2", 3}, {"b1", Rational(-1, 2)}, {"b2", Rational(5, 6)}, {"c", Rational(4, 3)}}},
      {FunctionId::parse("F4"), {{"a", Rational(2, 7)}, {"b", 3}, {"c1", Rational(9, 5)}, {"c2", Rational(4, 3)}}},
      {FunctionId::parse("Psi2"), {{"a", Rational(2, 7)}, {"c1", Rational(9, 5)}, {"c2", Rational(4, 3)}}},
      {FunctionId::parse("FD3"),
       {{"a", Rational(2, 7)}, {"b1", 3}, {"b2", Rational(-1, 2)}, {"b3", Rational(1, 9)}, {"c", Rational(9, 5)}}},
      {FunctionId::parse("0F1"), {{"c", Rational(3, 2)}}},
      {FunctionId::parse("1F1"), {{"a", Rational(-5, 2)}, {"c", Rational(3, 2)}}},
  };
  for (const auto& [fn, p] : cases) {
    const auto s = truncated(fn, p, 7);
    for (const auto& idx : graded_indices(7)) {
      const bool in_arity = (fn.arity() >= 2 || idx.n == 0) && (fn.arity() >= 3 || idx.p == 0);
      if (!in_arity) {
        CHECK(s.coeff(idx).is_zero());
        continue;
      }
      CHECK(s.coeff(idx) == coeff(fn, p, idx));
    }
  }
}

TEST_CASE("H_C and H_B symmetries under m <-> p") {
  const ExactParams h = generic_h();
  ExactParams hc_swapped = h;
  hc_swapped.set("beta1", h.get("beta2")).set("beta2", h.get("beta1"));
  ExactParams hb_swapped = hc_swapped;
  hb_swapped.set("gamma1", h.get("gamma3")).set("gamma3", h.get("gamma1"));
  for (const auto& idx : graded_indices(8)) {
    const MultiIndex3 swapped{idx.p, idx.n, idx.m};
    CHECK(coeff(kHC, h, idx) == coeff(kHC, hc_swapped, swapped));
    CHECK(coeff(kHB, h, idx) == coeff(kHB, hb_swapped, swapped));
  }
}

TEST_CASE("one- and two-variable slices reduce to simpler functions") {
  const ExactParams h = generic_h();
  const unsigned cap = 10;
  auto slice = [](const TruncatedSeries& s, Axis keep) {
    TruncatedSeries::Terms t;
    for (const auto& [k, v] : s.terms()) {
      MultiIndex3 only;
      only[keep] = k[keep];
      if (only == k) t.emplace(k, v);
    }
    return TruncatedSeries(s.cap(), std::move(t));
  };
  auto gauss = [&](const Rational& a, const Rational& b, const Rational& c, Axis to) {
    return truncated(k2F1, {{"a", a}, {"b", b}, {"c", c}}, cap).embedded({to, Axis::X, Axis::X});
  };
  const auto ha = truncated(kHA, h, cap);
  CHECK(slice(ha, Axis::X) == gauss(h.get("alpha"), h.get("beta1"), h.get("gamma1"), Axis::X));
  CHECK(slice(ha, Axis::Y) == gauss(h.get("beta1"), h.get("beta2"), h.get("gamma2"), Axis::Y));
  CHECK(slice(ha, Axis::Z) == gauss(h.get("alpha"), h.get("beta2"), h.get("gamma2"), Axis::Z));
  const auto hb = truncated(kHB, h, cap);
  CHECK(slice(hb, Axis::X) == gauss(h.get("alpha"), h.get("beta1"), h.get("gamma1"), Axis::X));
  CHECK(slice(hb, Axis::Y) == gauss(h.get("beta1"), h.get("beta2"), h.get("gamma2"), Axis::Y));
  CHECK(slice(hb, Axis::Z) == gauss(h.get("alpha"), h.get("beta2"), h.get("gamma3"), Axis::Z));
  const auto hc = truncated(kHC, h, cap);
  CHECK(slice(hc, Axis::X) == gauss(h.get("alpha"), h.get("beta1"), h.get("gamma"), Axis::X));
  CHECK(slice(hc, Axis::Z) == gauss(h.get("alpha"), h.get("beta2"), h.get("gamma"), Axis::Z));

  const Rational a(2, 7), b1(3, 5), b2(-1, 2), c(9, 5), c1(4, 3), c2(11, 6);
  const auto f1 = truncated(FunctionId::parse("F1"), {{"a", a}, {"b1", b1}, {"b2", b2}, {"c", c}}, cap);
  CHECK(slice(f1, Axis::X) == gauss(a, b1, c, Axis::X));
  CHECK(slice(f1, Axis::Y) == gauss(a, b2, c, Axis::Y));
  const auto f2 = truncated(FunctionId::parse("F2"), {{"a", a}, {"b1", b1}, {"b2", b2}, {"c1", c1}, {"c2", c2}}, cap);
  CHECK(slice(f2, Axis::X) == gauss(a, b1, c1, Axis::X));
  CHECK(slice(f2, Axis::Y) == gauss(a, b2, c2, Axis::Y));
  const auto f3 =
      truncated(FunctionId::parse("F3"), {{"a1", a}, {"a2", c1}, {"b1", b1}, {"b2", b2}, {"c", c}}, cap);
  CHECK(slice(f3, Axis::X) == gauss(a, b1, c, Axis::X));
  CHECK(slice(f3, Axis::Y) == gauss(c1, b2, c, Axis::Y));
  const auto f4 = truncated(FunctionId::parse("F4"), {{"a", a}, {"b", b1}, {"c1", c1}, {"c2", c2}}, cap);
  CHECK(slice(f4, Axis::X) == gauss(a, b1, c1, Axis::X));
  CHECK(slice(f4, Axis::Y) == gauss(a, b1, c2, Axis::Y));
  const auto psi = truncated(FunctionId::parse("Psi2"), {{"a", a}, {"c1", c1}, {"c2", c2}}, cap);
  const auto one_f1 = truncated(FunctionId::parse("1F1"), {{"a", a}, {"c", c1}}, cap);
  CHECK(slice(psi, Axis::X) == one_f1);
}

TEST_CASE("Lauricella F_D collapses to 2F1 and F1") {
  const Rational a(2, 7), b1(3, 5), b2(-1, 2), c(9, 5);
  CHECK(truncated(FunctionId::parse("FD1"), {{"a", a}, {"b1", b1}, {"c", c}}, 12) ==
        truncated(k2F1, {{"a", a}, {"b", b1}, {"c", c}}, 12));
  const ExactParams f1{{"a", a}, {"b1", b1}, {"b2", b2}, {"c", c}};
  CHECK(truncated(FunctionId::parse("FD2"), f1, 9) == truncated(FunctionId::parse("F1"), f1, 9));
}

TEST_CASE("eval examples") {
  const FloatParams g{{"a", 1.0}, {"b", 1.0}, {"c", 2.0}};
  const std::array<double, 1> zero{0.0};
  const auto r0 = eval(k2F1, {{"a", 0.3}, {"b", -2.5}, {"c", 1.7}}, zero);
  CHECK(r0.value == 1.0);
  CHECK(r0.status == EvalStatus::Converged);

  const std::array<double, 1> half{0.5};
  const auto r = eval(k2F1, g, half);
  CHECK(r.status == EvalStatus::Converged);
  const double oracle = -std::log1p(-0.5) / 0.5;
  CHECK(std::fabs(r.value - oracle) <= 1e-12);
  CHECK(std::fabs(r.value - oracle) <= r.abs_error_estimate + 1e-15);
  CHECK(r.abs_error_estimate <= 1e-12 * std::max(1.0, std::fabs(r.value)));

  const FloatParams h = to_float(generic_h());
  const std::array<double, 3> xonly{0.3, 0.0, 0.0};
  const std::array<double, 1> x{0.3};
  const auto ha = eval(kHA, h, xonly);
  const auto gx = eval(k2F1, {{"a", 0.5}, {"b", 1.0 / 3.0}, {"c", 2.5}}, x);
  CHECK(std::fabs(ha.value - gx.value) <= 1e-12 * std::fabs(gx.value));
}

TEST_CASE("eval status and errors") {
  const FloatParams g{{"a", 1.0}, {"b", 1.0}, {"c", 2.0}};
  const std::array<double, 1> far{1.5};
  CHECK(eval(k2F1, g, far).status == EvalStatus::DivergenceSuspected);
  const std::array<double, 1> slow{0.999};
  const auto capped = eval(k2F1, g, slow, {1e-12, 50});
  CHECK(capped.status == EvalStatus::MaxShellsReached);
  CHECK(capped.shells_summed == 51);

  // Early growth of an entire function is not divergence.
  const std::array<double, 1> big{60.0};
  const auto e = eval(FunctionId::parse("1F1"), {{"a", 1.0}, {"c", 1.0}}, big);
  CHECK(e.status == EvalStatus::Converged);
  CHECK(std::fabs(e.value / std::exp(60.0) - 1.0) < 1e-12);
  // (e^z - 1) / z
  const std::array<double, 1> hundred{100.0};
  const auto e2 = eval(FunctionId::parse("1F1"), {{"a", 1.0}, {"c", 2.0}}, hundred);
  CHECK(e2.status == EvalStatus::Converged);
  CHECK(std::fabs(e2.value / (std::expm1(100.0) / 100.0) - 1.0) < 1e-12);
  const std::array<double, 2> psi_pt{20.0, 0.0};
  const auto psi = eval(FunctionId::parse("Psi2"), {{"a", 1.5}, {"c1", 2.5}, {"c2", 2.5}}, psi_pt);
  const std::array<double, 1> twenty{20.0};
  CHECK(psi.status == EvalStatus::Converged);
  CHECK(std::fabs(psi.value / eval(FunctionId::parse("1F1"), {{"a", 1.5}, {"c", 2.5}}, twenty).value - 1.0) < 1e-12);

  const std::array<double, 1> huge{1000.0};
  CHECK_THROWS_AS(eval(FunctionId::parse("1F1"), {{"a", 1.0}, {"c", 1.0}}, huge), NonFinite);
  const std::array<double, 1> half{0.5};
  CHECK_THROWS_AS(eval(k2F1, {{"a", 1.0}, {"b", 1.0}, {"c", -3.0}}, half), BadParams);
  const std::array<double, 2> two{0.1, 0.1};
  CHECK_THROWS_AS(eval(k2F1, g, two), ArityMismatch);
}

TEST_CASE("float evaluation agrees with exact truncated evaluation") {
  const ExactParams h = generic_h();
  const std::array<std::array<Rational, 3>, 3> points = {{
      {Rational(1, 10), Rational(1, 20), Rational(3, 20)},
      {Rational(-1, 10), Rational(1, 10), Rational(1, 10)},
      {Rational(0), Rational(1, 5), Rational(-1, 10)},
  }};
  for (FunctionId fn : {kHA, kHB, kHC}) {
    const auto s = truncated(fn, h, 36);
    for (const auto& pt : points) {
      const double exact = evaluate_at(s, pt).to_double();
      const std::array<double, 3> fp{pt[0].to_double(), pt[1].to_double(), pt[2].to_double()};
      const auto r = eval(fn, to_float(h), fp);
      CHECK(r.status == EvalStatus::Converged);
      CHECK(std::fabs(r.value - exact) <= r.abs_error_estimate + 4e-16 * std::fabs(exact));
    }
  }
}
