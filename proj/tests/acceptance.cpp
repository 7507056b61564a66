#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "hyper3/audit.hpp"
#include "hyper3/cli.hpp"
#include "hyper3/decomposition.hpp"
#include "hyper3/errors.hpp"
#include "hyper3/operators.hpp"
#include "hyper3/quadrature.hpp"

using namespace hyper3;

namespace {

// Rising factorial by repeated multiplication, kept apart from the library's.
Rational rise(const Rational& a, unsigned k) {
  Rational r = 1;
  for (unsigned i = 0; i < k; ++i) r *= a + Rational(static_cast<long>(i));
  return r;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(double v, int digits = 3) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

const Rational kGrid[] = {Rational(1, 2), Rational(1), Rational(3, 2), Rational(2), Rational(7, 3)};

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

Outcome summation_theorem() {
  Outcome o;
  for (const auto& h : kGrid) {
    for (unsigned m = 0; m <= 8; ++m) {
      for (unsigned n = 0; n <= 8; ++n) {
        const Rational up = rise(h, m + n) / (rise(h, m) * rise(h, n));
        const auto nab = DiagonalOp::nabla(Axis::X, Axis::Y, h);
        if (operator_series(nab, {m, n, 0}) != up) o.fail("Nabla(" + h.str() + ") at m=" + std::to_string(m));
        if (operator_series(nab.inverse(), {m, n, 0}) != Rational(1) / up)
          o.fail("Delta(" + h.str() + ") at m=" + std::to_string(m));
        if (operator_series(nab.inverse(), {m, n, 0}, true) != Rational(1) / up)
          o.fail("second Delta series (" + h.str() + ") at m=" + std::to_string(m));
        for (unsigned p = 0; p <= 8; ++p) {
          const Rational tup = rise(h, m + n + p) / (rise(h, m) * rise(h, n + p));
          const auto nt = DiagonalOp::nabla_tilde(Axis::X, h);
          const MultiIndex3 idx{m, n, p};
          if (operator_series(nt, idx) != tup) o.fail("NablaTilde(" + h.str() + ") at " + idx.str());
          if (operator_series(nt.inverse(), idx) != Rational(1) / tup) o.fail("DeltaTilde(" + h.str() + ") at " + idx.str());
          if (operator_series(nt.inverse(), idx, true) != Rational(1) / tup)
            o.fail("second DeltaTilde series (" + h.str() + ") at " + idx.str());
        }
      }
    }
  }
  return o;
}

Outcome inverse_pairs() {
  Outcome o;
  for (const auto& h : kGrid)
    for (unsigned m = 0; m <= 8; ++m)
      for (unsigned n = 0; n <= 8; ++n)
        for (unsigned p = 0; p <= 8; ++p) {
          const MultiIndex3 idx{m, n, p};
          const auto a = DiagonalOp::nabla(Axis::X, Axis::Y, h), b = DiagonalOp::delta(Axis::X, Axis::Y, h);
          const auto c = DiagonalOp::nabla_tilde(Axis::X, h), d = DiagonalOp::delta_tilde(Axis::X, h);
          if (eigenvalue(a, idx) * eigenvalue(b, idx) != Rational(1)) o.fail("Nabla Delta at " + idx.str());
          if (eigenvalue(c, idx) * eigenvalue(d, idx) != Rational(1)) o.fail("tilde pair at " + idx.str());
        }
  return o;
}

Outcome five_identities() {
  Outcome o;
  for (const char* id : {"3.1", "3.4", "3.5", "3.13", "3.14"})
    for (const auto& s : make_profile("generic").sets) {
      const auto v = verify_operator_identity(id, s.params, 10);
      if (!(v.verified() && v.degree == 10)) o.fail(std::string(id) + " on " + s.name + ": " + v.str());
    }
  return o;
}

Outcome decompositions() {
  Outcome o;
  for (const char* id : {"4.1", "7.3"})
    for (const auto& s : make_profile("generic").sets) {
      const auto v = verify_decomposition(id, s.params, 10);
      if (!(v.verified() && v.degree == 10)) o.fail(std::string(id) + " on " + s.name + ": " + v.str());
    }
  // (1-y)^-beta1 (1-z)^-alpha F4(alpha, beta1; beta2, gamma1; yz/s, x/s), s = (1-y)(1-z)
  const double a = 0.5, b = 1.0 / 3, c1 = 1.5, c2 = 2.5, x = 0.1, y = 0.2, z = 0.15;
  const double s = (1 - y) * (1 - z);
  const double u = y * z / s, w = x / s;
  double f4 = 0.0, row = 1.0;
  for (unsigned i = 0; i < 80; ++i) {
    double term = row;
    for (unsigned j = 0; j < 80; ++j) {
      f4 += term;
      term *= (a + i + j) * (b + i + j) / ((c2 + j) * (j + 1.0)) * w;
    }
    row *= (a + i) * (b + i) / ((c1 + i) * (i + 1.0)) * u;
  }
  const double want = std::pow(1 - y, -b) * std::pow(1 - z, -a) * f4;
  const FloatParams fp{{"alpha", a}, {"beta1", b}, {"beta2", c1}, {"gamma1", c2}};
  const std::array<double, 3> pt{x, y, z};
  const auto got = eval_via_decomposition("7.4", fp, pt);
  const double r = rel(got.value, want);
  if (!(r <= 1e-9)) o.fail("7.4 float check off by " + fmt(r));
  if (o.pass) o.detail = "7.4 rel diff " + fmt(r);
  return o;
}

Outcome audit_determinism() {
  Outcome o;
  auto body = [](std::string& out) {
    std::ostringstream os, es;
    const int code = parse_and_dispatch({"audit", "--degree", "6", "--json", "-", "--omit-timings"}, os, es);
    out = os.str();
    return code;
  };
  std::string first, second;
  const int c1 = body(first), c2 = body(second);
  if (c1 != c2 || c1 == 2) o.fail("exit codes " + std::to_string(c1) + " and " + std::to_string(c2));
  if (first != second) o.fail("bodies differ");
  const auto doc = nlohmann::ordered_json::parse(first);
  if (doc["entries"].size() != 34) o.fail("expected 34 rows");
  unsigned failed = 0;
  for (const auto& row : doc["entries"]) {
    const auto st = row["status"].get<std::string>();
    if (st == "failed") {
      ++failed;
      if (!row.contains("first_bad_index")) o.fail(row["id"].get<std::string>() + " has no witness");
    } else if (st != "verified") {
      o.fail(row["id"].get<std::string>() + " is " + st);
    }
  }
  if (o.pass) o.detail = "34 rows, " + std::to_string(failed) + " failed as printed, identical bodies";
  return o;
}

Outcome reductions() {
  Outcome o;
  const ExactParams p = make_profile("generic").sets[1].params;
  const Rational al = p.get("alpha"), b1 = p.get("beta1"), b2 = p.get("beta2");
  const Rational g = p.get("gamma"), g1 = p.get("gamma1"), g2 = p.get("gamma2"), g3 = p.get("gamma3");
  struct Slice {
    const char* fn;
    Axis axis;
    Rational a, b, c;
  };
  const Slice slices[] = {
      {"HA", Axis::X, al, b1, g1}, {"HA", Axis::Y, b1, b2, g2}, {"HA", Axis::Z, al, b2, g2},
      {"HB", Axis::X, al, b1, g1}, {"HB", Axis::Y, b1, b2, g2}, {"HB", Axis::Z, al, b2, g3},
      {"HC", Axis::X, al, b1, g},  {"HC", Axis::Y, b1, b2, g},  {"HC", Axis::Z, al, b2, g},
  };
  for (const auto& s : slices) {
    const auto fn = FunctionId::parse(s.fn);
    const auto series = truncated(fn, p, 12);
    for (unsigned k = 0; k <= 12; ++k) {
      MultiIndex3 idx{0, 0, 0};
      (s.axis == Axis::X ? idx.m : s.axis == Axis::Y ? idx.n : idx.p) = k;
      const Rational want = rise(s.a, k) * rise(s.b, k) / (rise(s.c, k) * rise(Rational(1), k));
      if (series.coeff(idx) != want) o.fail(std::string(s.fn) + " slice at " + idx.str());
    }
    std::array<double, 3> pt{0, 0, 0};
    pt[static_cast<int>(s.axis)] = 0.3;
    const double got = eval(fn, to_float(p), pt, {1e-15, 2000}).value;
    double want = 0.0, term = 1.0;
    const double a = s.a.to_double(), b = s.b.to_double(), c = s.c.to_double();
    for (unsigned k = 0; k < 400; ++k) {
      want += term;
      term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * 0.3;
    }
    if (!(rel(got, want) <= 1e-12)) o.fail(std::string(s.fn) + " float slice off by " + fmt(rel(got, want)));
  }
  return o;
}

Outcome cross_method() {
  Outcome o;
  const auto p = make_profile("default").sets[0].params;
  const auto fp = to_float(p);
  const std::array<double, 3> all{0.05, 0.05, 0.05};
  unsigned checked = 0;
  double worst = 0.0;
  for (const auto& e : decomposition_registry()) {
    if (!verify_decomposition(e, p, 6).verified()) continue;
    ++checked;
    const std::span<const double> pt(all.data(), e.lhs.arity());
    const double r = rel(eval_via_decomposition(e, fp, pt).value, eval_lhs(e, fp, pt).value);
    worst = std::max(worst, r);
    if (!(r <= 1e-9)) o.fail(e.id + " off by " + fmt(r));
  }
  if (o.pass) o.detail = std::to_string(checked) + " entries, worst rel diff " + fmt(worst);
  return o;
}

Outcome quadrature() {
  Outcome o;
  const FloatParams lp{{"alpha", 1.5},  {"beta1", 1.5},  {"beta2", 1.5}, {"gamma", 2.5},
                       {"gamma1", 2.5}, {"gamma2", 2.5}, {"gamma3", 2.5}};
  const std::array<double, 3> origin{0, 0, 0}, small{0.05, 0.05, 0.05}, tenth{0.1, 0.1, 0.1};
  const double r68 = quad_eval(IntegralRep::R6_8, lp, origin, {32}).value;
  if (!(std::abs(r68 - 1.0) <= 1e-10)) o.fail("R6_8 at the origin gave " + fmt(r68, 17));
  for (auto rep : {IntegralRep::R6_4, IntegralRep::R6_6}) {
    const double r = rel(quad_eval(rep, lp, small, {48}).value, eval(rep_info(rep).target, lp, small).value);
    if (!(r <= 1e-6)) o.fail(std::string(to_string(rep)) + " off by " + fmt(r));
  }
  const FloatParams hp{{"alpha", 0.5}, {"beta1", 1.5}, {"beta2", 1.5}, {"gamma1", 3.0}, {"gamma2", 3.0}};
  const double r51 = rel(quad_eval(IntegralRep::R5_1, hp, tenth, {80}).value, eval(FunctionId::parse("HA"), hp, tenth).value);
  if (!(r51 <= 1e-8)) o.fail("R5_1 off by " + fmt(r51));
  return o;
}

Outcome spot_value() {
  Outcome o;
  const std::array<double, 1> x{0.5};
  const double v = eval(FunctionId::parse("2F1"), {{"a", 1.0}, {"b", 1.0}, {"c", 2.0}}, x).value;
  const double oracle = -std::log1p(-0.5) / 0.5;
  if (!(std::abs(v - 1.386294361119891) <= 1e-12 && std::abs(v - oracle) <= 1e-12)) o.fail("got " + fmt(v, 17));
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double seconds;
  };
  const Criterion criteria[] = {
      {"operator summation sums equal closed-form eigenvalues", summation_theorem, 1},
      {"inverse pairs multiply to one", inverse_pairs, 0},
      {"3.1 3.4 3.5 3.13 3.14 verified to degree 10 at three sets", five_identities, 30},
      {"4.1 and 7.3 verified to degree 10, 7.4 float check", decompositions, 60},
      {"degree 6 audit is complete and deterministic", audit_determinism, 0},
      {"one-variable slices reduce to 2F1", reductions, 0},
      {"expansions agree with direct sums in float", cross_method, 0},
      {"quadrature targets", quadrature, 120},
      {"2F1(1,1;2;1/2) spot value", spot_value, 0},
  };
  int failures = 0;
  int n = 0;
  for (const auto& [name, run, limit] : criteria) {
    ++n;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit > 0 && secs > limit) o.fail("took longer than " + fmt(limit) + "s");
    std::printf("%s %d: %s (%.2fs)%s%s\n", o.pass ? "PASS" : "FAIL", n, name, secs, o.detail.empty() ? "" : " - ",
                o.detail.c_str());
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
