#include "hyper3/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "hyper3/audit.hpp"
#include "hyper3/parallel.hpp"

namespace hyper3 {

namespace {

struct RepName {
  IntegralRep rep;
  const char* tag;
  const char* eq;
};

constexpr RepName kNames[] = {
    {IntegralRep::R5_1, "R5_1", "5.1"},   {IntegralRep::R5_10, "R5_10", "5.10"}, {IntegralRep::R6_1, "R6_1", "6.1"},
    {IntegralRep::R6_2, "R6_2", "6.2"},   {IntegralRep::R6_4, "R6_4", "6.4"},   {IntegralRep::R6_5, "R6_5", "6.5"},
    {IntegralRep::R6_6, "R6_6", "6.6"},   {IntegralRep::R6_7, "R6_7", "6.7"},   {IntegralRep::R6_8, "R6_8", "6.8"},
};

}  // namespace

const std::vector<IntegralRep>& all_reps() {
  static const std::vector<IntegralRep> reps = [] {
    std::vector<IntegralRep> r;
    for (const auto& n : kNames) r.push_back(n.rep);
    return r;
  }();
  return reps;
}

const char* to_string(IntegralRep rep) {
  for (const auto& n : kNames)
    if (n.rep == rep) return n.tag;
  return "?";
}

IntegralRep parse_rep(std::string_view text) {
  for (const auto& n : kNames)
    if (text == n.tag || text == n.eq) return n.rep;
  throw UnknownIdentity("unknown integral representation '" + std::string(text) + "'");
}

RepInfo rep_info(IntegralRep rep) {
  const auto ha = FunctionId{FunctionKind::HA, 0};
  const auto hb = FunctionId{FunctionKind::HB, 0};
  switch (rep) {
    case IntegralRep::R5_1:
    case IntegralRep::R6_1:
      return {ha, QuadRule::GaussLegendre01, 2};
    case IntegralRep::R5_10:
    case IntegralRep::R6_2:
      return {hb, QuadRule::GaussLegendre01, 3};
    case IntegralRep::R6_4:
      return {ha, QuadRule::GaussLaguerre, 3};
    case IntegralRep::R6_5:
      return {ha, QuadRule::GaussLaguerre, 2};
    case IntegralRep::R6_6:
      return {hb, QuadRule::GaussLaguerre, 3};
    case IntegralRep::R6_7:
      return {hb, QuadRule::GaussLaguerre, 2};
    case IntegralRep::R6_8:
      return {FunctionId{FunctionKind::HC, 0}, QuadRule::GaussLaguerre, 3};
  }
  return {ha, QuadRule::GaussLegendre01, 2};
}

NodeRule gauss_legendre01(unsigned n) {
  if (n == 0) throw BadParams("quadrature needs at least one node");
  NodeRule r{std::vector<double>(n), std::vector<double>(n)};
  for (unsigned i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (unsigned k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = 0.5 * (1.0 - x);
    r.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    r.weights[i] = r.weights[n - 1 - i] = 0.5 * w;
  }
  return r;
}

namespace {

/// L_n^(a)(x) and L_{n-1}^(a)(x) scaled by a common factor e^(-log_scale).
struct LaguerrePair {
  double ln = 0.0, ln1 = 0.0, log_scale = 0.0;
};

LaguerrePair laguerre_pair(unsigned n, double a, double x) {
  LaguerrePair r{1.0, 0.0, 0.0};
  double p0 = 0.0, p1 = 1.0;
  for (unsigned k = 1; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0 + a - x) * p1 - (k - 1.0 + a) * p0) / k;
    p0 = p1;
    p1 = p2;
    if (std::abs(p1) > 1e150) {
      p0 *= 1e-150;
      p1 *= 1e-150;
      r.log_scale += 150.0 * std::numbers::ln10;
    }
  }
  r.ln = p1;
  r.ln1 = p0;
  return r;
}

}  // namespace

NodeRule gauss_laguerre(unsigned n, double a) {
  if (n == 0) throw BadParams("quadrature needs at least one node");
  if (!(a > -1.0)) throw BadParams("Laguerre exponent must exceed -1");
  // Golub-Welsch seeds, then Newton on the three-term recurrence. Weights
  // come from Gamma(n+a+1)/n! * x / ((n+a) L_{n-1}(x))^2 in log form, which
  // keeps their relative accuracy far out in the tail.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
  for (unsigned i = 0; i < n; ++i) diag[i] = 2.0 * i + a + 1.0;
  for (unsigned i = 0; i + 1 < n; ++i) sub[i] = std::sqrt((i + 1.0) * (i + 1.0 + a));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
  const double log_c = std::lgamma(n + a + 1.0) - std::lgamma(n + 1.0);
  NodeRule r{std::vector<double>(n), std::vector<double>(n)};
  for (unsigned i = 0; i < n; ++i) {
    double x = es.eigenvalues()[i];
    LaguerrePair lp;
    for (int it = 0; it < 10; ++it) {
      lp = laguerre_pair(n, a, x);
      const double dx = lp.ln * x / (n * lp.ln - (n + a) * lp.ln1);
      x -= dx;
      if (std::abs(dx) <= 4e-16 * x) break;
    }
    lp = laguerre_pair(n, a, x);
    r.nodes[i] = x;
    r.weights[i] =
        std::exp(log_c + std::log(x) - 2.0 * (std::log(n + a) + std::log(std::abs(lp.ln1)) + lp.log_scale));
  }
  return r;
}

namespace {

/// One axis of a tensor rule: node value, its complement 1 - v (kept
/// separately to avoid cancellation near 1) and the weight.
struct Axis1 {
  std::vector<double> v, c, w;
};

const NodeRule& cached_legendre(unsigned n) {
  static std::mutex mu;
  static std::map<unsigned, NodeRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre01(n)).first;
  return it->second;
}

/// Laguerre rule for t^(s-1) e^(-t), weights divided by Gamma(s).
const NodeRule& cached_laguerre(unsigned n, double s) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, double>, NodeRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find({n, s});
  if (it == cache.end()) {
    NodeRule r = gauss_laguerre(n, s - 1.0);
    const double mass = std::exp(std::lgamma(s));
    for (auto& w : r.weights) w /= mass;
    it = cache.emplace(std::pair{n, s}, std::move(r)).first;
  }
  return it->second;
}

Axis1 legendre_axis(unsigned n, bool endpoint_map) {
  const auto& r = cached_legendre(n);
  Axis1 a;
  for (unsigned i = 0; i < n; ++i) {
    const double t = r.nodes[i];
    if (endpoint_map) {
      a.v.push_back(t * t * (3.0 - 2.0 * t));
      a.c.push_back((1.0 - t) * (1.0 - t) * (1.0 + 2.0 * t));
      a.w.push_back(r.weights[i] * 6.0 * t * (1.0 - t));
    } else {
      a.v.push_back(t);
      a.c.push_back(1.0 - t);
      a.w.push_back(r.weights[i]);
    }
  }
  return a;
}

Axis1 laguerre_axis(unsigned n, double s) {
  const auto& r = cached_laguerre(n, s);
  return {r.nodes, std::vector<double>(n, 0.0), r.weights};
}

double need(const FloatParams& p, const char* name) { return p.get(name); }

void positive(double v, const char* what) {
  if (!(v > 0.0)) throw ConstraintViolated(std::string(what) + " must be positive");
}

void endpoint(double e, const char* what) {
  if (!(e >= 0.0))
    throw ConstraintViolated(std::string("endpoint exponent ") + what + " must be nonnegative for Gauss-Legendre");
}

double pw(double base, double e, const char* what) {
  if (e == 0.0) return 1.0;
  if (!(base > 0.0)) throw IntegrandSingular(std::string("nonpositive base ") + what + " at a quadrature node");
  return std::pow(base, e);
}

double log_gamma_ratio(std::initializer_list<double> num, std::initializer_list<double> den) {
  double s = 0.0;
  for (double v : num) s += std::lgamma(v);
  for (double v : den) s -= std::lgamma(v);
  return s;
}

bool terminating(double b) { return b <= 0.0 && b == std::floor(b); }

const EvalOptions kInner{1e-13, 5000};

double inner(FunctionId fn, const FloatParams& p, std::initializer_list<double> pt) {
  const std::vector<double> point(pt);
  const auto r = eval(fn, p, point, kInner);
  if (r.status != EvalStatus::Converged)
    throw IntegrandSingular(fn.name() + " did not converge at a quadrature node (" + to_string(r.status) + ")");
  return r.value;
}

double checked_2f1(const FloatParams& p, double arg) {
  if (!(std::abs(arg) < 1.0) && !terminating(p.get("a")) && !terminating(p.get("b")))
    throw ConstraintViolated("2F1 argument leaves the unit disk at a quadrature node");
  return inner(FunctionId{FunctionKind::Gauss2F1, 0}, p, {arg});
}

template <class F>
double sum2(const Axis1& a, const Axis1& b, F f) {
  double s = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i)
    for (std::size_t j = 0; j < b.v.size(); ++j) {
      const double w = a.w[i] * b.w[j];
      if (w == 0.0) continue;
      const double t = w * f(i, j);
      const double y = s + t;
      comp += std::abs(s) >= std::abs(t) ? (s - y) + t : (t - y) + s;
      s = y;
    }
  return s + comp;
}

template <class F>
double sum3(const Axis1& a, const Axis1& b, const Axis1& c, F f) {
  double s = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i)
    for (std::size_t j = 0; j < b.v.size(); ++j) {
      const double wij = a.w[i] * b.w[j];
      if (wij == 0.0) continue;
      for (std::size_t k = 0; k < c.v.size(); ++k) {
        const double w = wij * c.w[k];
        if (w == 0.0) continue;
        const double t = w * f(i, j, k);
        const double y = s + t;
        comp += std::abs(s) >= std::abs(t) ? (s - y) + t : (t - y) + s;
        s = y;
      }
    }
  return s + comp;
}

/// f(a.v[i], b.v[j]) for every node pair with a nonzero weight product.
template <class F>
std::vector<double> table(const Axis1& a, const Axis1& b, F f) {
  std::vector<double> t(a.v.size() * b.v.size(), 0.0);
  for (std::size_t i = 0; i < a.v.size(); ++i)
    for (std::size_t j = 0; j < b.v.size(); ++j)
      if (a.w[i] * b.w[j] != 0.0) t[i * b.v.size() + j] = f(a.v[i], b.v[j]);
  return t;
}

struct Params {
  double al = 0, b1 = 0, b2 = 0, g1 = 0, g2 = 0, g3 = 0, g = 0;
};

Params read_params(IntegralRep rep, const FloatParams& p) {
  Params q;
  q.al = need(p, "alpha");
  q.b1 = need(p, "beta1");
  q.b2 = need(p, "beta2");
  switch (rep) {
    case IntegralRep::R6_8:
      q.g = need(p, "gamma");
      break;
    case IntegralRep::R5_1:
    case IntegralRep::R6_1:
    case IntegralRep::R6_4:
    case IntegralRep::R6_5:
      q.g1 = need(p, "gamma1");
      q.g2 = need(p, "gamma2");
      break;
    default:
      q.g1 = need(p, "gamma1");
      q.g2 = need(p, "gamma2");
      q.g3 = need(p, "gamma3");
  }
  return q;
}

double quad_once(IntegralRep rep, const Params& q, double x, double y, double z, unsigned n, bool map) {
  using FK = FunctionKind;
  switch (rep) {
    case IntegralRep::R5_1: {
      const auto a = legendre_axis(n, map);
      const double pre = std::exp(log_gamma_ratio({q.g1, q.g2}, {q.b1, q.b2, q.g1 - q.b1, q.g2 - q.b2}));
      return pre * sum2(a, a, [&](std::size_t i, std::size_t j) {
               const double xi = a.v[i], eta = a.v[j];
               const double ye = 1.0 - y * eta;
               return pw(xi, q.b1 - 1, "xi") * pw(eta, q.b2 - 1, "eta") * pw(a.c[i], q.g1 - q.b1 - 1, "1-xi") *
                      pw(a.c[j], q.g2 - q.b2 - 1, "1-eta") * pw(ye, q.al - q.b1, "1-y eta") *
                      pw(ye * (1.0 - z * eta) - x * xi, -q.al, "(1-y eta)(1-z eta)-x xi");
             });
    }
    case IntegralRep::R6_1: {
      const auto a = legendre_axis(n, map);
      const double pre = std::exp(log_gamma_ratio({q.g1, q.g2}, {q.b1, q.b2, q.g1 - q.b1, q.g2 - q.b2}));
      const FloatParams f{{"a", q.al}, {"b", q.b2}, {"c", q.b1}};
      return pre * sum2(a, a, [&](std::size_t i, std::size_t j) {
               const double xi = a.v[i], eta = a.v[j];
               const double ye = 1.0 - y * eta, d = 1.0 - x * xi - z * eta;
               if (!(ye > 0.0 && d > 0.0)) throw IntegrandSingular("nonpositive base at a quadrature node");
               return pw(xi, q.b1 - 1, "xi") * pw(eta, q.b2 - 1, "eta") * pw(a.c[i], q.g1 - q.b1 - 1, "1-xi") *
                      pw(a.c[j], q.g2 - q.b2 - 1, "1-eta") * pw(ye, -q.b2, "1-y eta") * pw(d, -q.al, "1-x xi-z eta") *
                      checked_2f1(f, x * y * xi * eta / (ye * d));
             });
    }
    case IntegralRep::R5_10: {
      const auto a = legendre_axis(n, map);
      const double pre = std::exp(log_gamma_ratio(
          {q.g1, q.g2, q.g3}, {q.b1, q.b2, q.al, q.g1 - q.b1, q.g2 - q.b2, q.g3 - q.al}));
      return pre * sum3(a, a, a, [&](std::size_t i, std::size_t j, std::size_t k) {
               const double xi = a.v[i], eta = a.v[j], zeta = a.v[k];
               const double xx = 1.0 - x * xi, ye = 1.0 - y * eta, xz = 1.0 - x * xi - z * zeta;
               const double b1 = a.c[k] * xx * ye + x * y * xi * eta * zeta;
               const double b2 = a.c[i] * ye * xz + y * z * xi * eta * zeta;
               return pw(xi, q.b1 - 1, "xi") * pw(eta, q.b2 - 1, "eta") * pw(zeta, q.al - 1, "zeta") *
                      pw(a.c[j], q.g2 - q.b2 - 1, "1-eta") * pw(xx, 1 + q.b2 - q.g3, "1-x xi") *
                      pw(ye, 2 + q.al - q.g1 - q.g3, "1-y eta") * pw(xz, 1 + q.b1 - q.b2 - q.g1, "1-x xi-z zeta") *
                      pw(b1, q.g3 - q.al - 1, "first bracket") * pw(b2, q.g1 - q.b1 - 1, "second bracket");
             });
    }
    case IntegralRep::R6_2: {
      const auto a = legendre_axis(n, map);
      const double pre = std::exp(log_gamma_ratio(
          {q.g1, q.g2, q.g3}, {q.al, q.al, q.b1, q.g1 - q.al, q.g2 - q.b1, q.g3 - q.al}));
      const FloatParams f{{"a", q.b2}, {"b", 1 + q.b1 - q.g2}, {"c", q.al}};
      return pre * sum3(a, a, a, [&](std::size_t i, std::size_t j, std::size_t k) {
               const double xi = a.v[i], eta = a.v[j], zeta = a.v[k];
               const double xx = 1.0 - x * xi;
               const double d = xx * (1.0 - y * eta - z * zeta) - x * y * xi * eta;
               if (!(d > 0.0)) throw IntegrandSingular("nonpositive bracket at a quadrature node");
               return pw(xi, q.al - 1, "xi") * pw(eta, q.b1 - 1, "eta") * pw(zeta, q.al - 1, "zeta") *
                      pw(a.c[i], q.g1 - q.al - 1, "1-xi") * pw(a.c[j], q.g2 - q.b1 - 1, "1-eta") *
                      pw(a.c[k], q.g3 - q.al - 1, "1-zeta") * pw(xx, q.b2 - q.b1, "1-x xi") * pw(d, -q.b2, "bracket") *
                      checked_2f1(f, -x * z * xi * eta * zeta / (a.c[j] * d));
             });
    }
    case IntegralRep::R6_4: {
      const auto u1 = laguerre_axis(n, q.al), u2 = laguerre_axis(n, q.b1), u3 = laguerre_axis(n, q.b2);
      const FloatParams f1{{"c", q.g1}}, f2{{"c", q.g2}};
      const FunctionId h0{FK::Hyp0F1, 0};
      const auto t12 = table(u1, u2, [&](double a, double b) { return inner(h0, f1, {x * a * b}); });
      return sum3(u1, u2, u3, [&](std::size_t i, std::size_t j, std::size_t k) {
        return t12[i * n + j] * inner(h0, f2, {y * u2.v[j] * u3.v[k] + z * u1.v[i] * u3.v[k]});
      });
    }
    case IntegralRep::R6_5: {
      const auto u1 = laguerre_axis(n, q.al), u2 = laguerre_axis(n, q.b1);
      const FloatParams f1{{"c", q.g1}}, f2{{"a", q.b2}, {"c", q.g2}};
      return sum2(u1, u2, [&](std::size_t i, std::size_t j) {
        return inner({FK::Hyp0F1, 0}, f1, {x * u1.v[i] * u2.v[j]}) *
               inner({FK::Hyp1F1, 0}, f2, {y * u2.v[j] + z * u1.v[i]});
      });
    }
    case IntegralRep::R6_6: {
      const auto u1 = laguerre_axis(n, q.al), u2 = laguerre_axis(n, q.b1), u3 = laguerre_axis(n, q.b2);
      const FloatParams f1{{"c", q.g1}}, f2{{"c", q.g2}}, f3{{"c", q.g3}};
      const FunctionId h0{FK::Hyp0F1, 0};
      const auto t12 = table(u1, u2, [&](double a, double b) { return inner(h0, f1, {x * a * b}); });
      const auto t23 = table(u2, u3, [&](double b, double c) { return inner(h0, f2, {y * b * c}); });
      const auto t13 = table(u1, u3, [&](double a, double c) { return inner(h0, f3, {z * a * c}); });
      return sum3(u1, u2, u3, [&](std::size_t i, std::size_t j, std::size_t k) {
        return t12[i * n + j] * t23[j * n + k] * t13[i * n + k];
      });
    }
    case IntegralRep::R6_7: {
      const auto u1 = laguerre_axis(n, q.al), u2 = laguerre_axis(n, q.b1);
      const FloatParams f1{{"c", q.g1}}, f2{{"a", q.b2}, {"c1", q.g2}, {"c2", q.g3}};
      return sum2(u1, u2, [&](std::size_t i, std::size_t j) {
        return inner({FK::Hyp0F1, 0}, f1, {x * u1.v[i] * u2.v[j]}) *
               inner({FK::HumbertPsi2, 0}, f2, {y * u2.v[j], z * u1.v[i]});
      });
    }
    case IntegralRep::R6_8: {
      const auto u1 = laguerre_axis(n, q.al), u2 = laguerre_axis(n, q.b1), u3 = laguerre_axis(n, q.b2);
      const FloatParams f{{"c", q.g}};
      return sum3(u1, u2, u3, [&](std::size_t i, std::size_t j, std::size_t k) {
        const double a = u1.v[i], b = u2.v[j], c = u3.v[k];
        return inner({FK::Hyp0F1, 0}, f, {x * a * b + y * b * c + z * a * c});
      });
    }
  }
  return 0.0;
}

}  // namespace

void check_constraints(IntegralRep rep, const FloatParams& p) {
  const Params q = read_params(rep, p);
  switch (rep) {
    case IntegralRep::R5_1:
    case IntegralRep::R6_1:
      positive(q.b1, "beta1");
      positive(q.b2, "beta2");
      positive(q.g1 - q.b1, "gamma1-beta1");
      positive(q.g2 - q.b2, "gamma2-beta2");
      endpoint(q.b1 - 1, "beta1-1");
      endpoint(q.b2 - 1, "beta2-1");
      endpoint(q.g1 - q.b1 - 1, "gamma1-beta1-1");
      endpoint(q.g2 - q.b2 - 1, "gamma2-beta2-1");
      break;
    case IntegralRep::R5_10:
      positive(q.al, "alpha");
      positive(q.b1, "beta1");
      positive(q.b2, "beta2");
      positive(q.g1 - q.b1, "gamma1-beta1");
      positive(q.g2 - q.b2, "gamma2-beta2");
      positive(q.g3 - q.al, "gamma3-alpha");
      endpoint(q.b1 - 1, "beta1-1");
      endpoint(q.b2 - 1, "beta2-1");
      endpoint(q.al - 1, "alpha-1");
      endpoint(q.g2 - q.b2 - 1, "gamma2-beta2-1");
      endpoint(q.g3 - q.al - 1, "gamma3-alpha-1");
      endpoint(q.g1 - q.b1 - 1, "gamma1-beta1-1");
      break;
    case IntegralRep::R6_2:
      positive(q.al, "alpha");
      positive(q.g1 - q.al, "gamma1-alpha");
      positive(q.b1, "beta1");
      positive(q.g2 - q.b1, "gamma2-beta1");
      positive(q.g3 - q.al, "gamma3-alpha");
      endpoint(q.al - 1, "alpha-1");
      endpoint(q.b1 - 1, "beta1-1");
      endpoint(q.g1 - q.al - 1, "gamma1-alpha-1");
      endpoint(q.g2 - q.b1 - 1, "gamma2-beta1-1");
      endpoint(q.g3 - q.al - 1, "gamma3-alpha-1");
      break;
    case IntegralRep::R6_5:
    case IntegralRep::R6_7:
      positive(q.al, "alpha");
      positive(q.b1, "beta1");
      break;
    case IntegralRep::R6_4:
    case IntegralRep::R6_6:
    case IntegralRep::R6_8:
      positive(q.al, "alpha");
      positive(q.b1, "beta1");
      positive(q.b2, "beta2");
      break;
  }
}

EvalResult quad_eval(IntegralRep rep, const FloatParams& params, std::span<const double> point,
                     const QuadConfig& cfg) {
  if (point.size() != 3) throw ArityMismatch("integral representations take 3 variables");
  if (cfg.nodes_per_axis < 4 || cfg.nodes_per_axis > 256)
    throw BadParams("nodes per axis must lie in [4, 256]");
  check_constraints(rep, params);
  const Params q = read_params(rep, params);
  const double x = point[0], y = point[1], z = point[2];
  const double qn = quad_once(rep, q, x, y, z, cfg.nodes_per_axis, cfg.endpoint_map);
  const double q2n = quad_once(rep, q, x, y, z, 2 * cfg.nodes_per_axis, cfg.endpoint_map);
  if (!std::isfinite(qn) || !std::isfinite(q2n)) throw IntegrandSingular("quadrature sum is not finite");
  EvalResult r;
  r.value = qn;
  r.abs_error_estimate = std::abs(qn - q2n);
  r.shells_summed = cfg.nodes_per_axis;
  r.status = EvalStatus::Converged;
  return r;
}

std::vector<NamedFloatParams> quad_profile() {
  return {
      {"q1",
       {{"alpha", 1.5}, {"beta1", 1.5}, {"beta2", 1.5}, {"gamma", 3.0}, {"gamma1", 3.0}, {"gamma2", 3.0},
        {"gamma3", 3.0}}},
      {"q2",
       {{"alpha", 2.0}, {"beta1", 1.25}, {"beta2", 1.75}, {"gamma", 3.5}, {"gamma1", 3.5}, {"gamma2", 3.25},
        {"gamma3", 4.0}}},
  };
}

std::vector<std::array<double, 3>> quad_points() { return {{0.05, 0.05, 0.05}, {0.1, 0.05, 0.02}}; }

bool SweepReport::any_failed() const {
  return std::any_of(entries.begin(), entries.end(), [](const SweepRow& r) { return r.status != "agree"; });
}

SweepReport consistency_sweep(const std::vector<IntegralRep>& reps, const std::vector<NamedFloatParams>& profile,
                              const std::vector<std::array<double, 3>>& points, const QuadConfig& cfg, double tol,
                              unsigned threads) {
  SweepReport report{kVersion, tol, {}};
  for (auto rep : reps)
    for (const auto& set : profile)
      for (const auto& pt : points) {
        SweepRow row;
        row.rep = to_string(rep);
        row.profile = set.name;
        row.point = pt;
        row.nodes = cfg.nodes_per_axis;
        report.entries.push_back(row);
      }
  const std::size_t per_rep = profile.size() * points.size();
  parallel_for(report.entries.size(), threads, [&](std::size_t cell) {
    auto& row = report.entries[cell];
    const auto rep = reps[cell / per_rep];
    const auto& set = profile[(cell % per_rep) / points.size()];
    try {
      const auto q = quad_eval(rep, set.params, row.point, cfg);
      const auto s = eval(rep_info(rep).target, set.params, row.point);
      row.quad = q.value;
      row.series = s.value;
      row.abs_error_estimate = q.abs_error_estimate;
      row.rel_diff = std::abs(q.value - s.value) / std::abs(s.value);
      row.status = row.rel_diff <= tol ? "agree" : "disagree";
    } catch (const Error& e) {
      row.status = "error";
      row.error = std::string(e.kind()) + ": " + e.what();
    } catch (const std::exception& e) {
      row.status = "error";
      row.error = e.what();
    }
  });
  return report;
}

nlohmann::ordered_json to_json(const SweepReport& report) {
  nlohmann::ordered_json j;
  j["version"] = report.version;
  j["kind"] = "quadrature";
  j["tol"] = report.tol;
  unsigned agree = 0, disagree = 0, error = 0;
  for (const auto& r : report.entries) {
    if (r.status == "agree") ++agree;
    else if (r.status == "disagree") ++disagree;
    else ++error;
  }
  j["summary"] = {{"entries", report.entries.size()}, {"agree", agree}, {"disagree", disagree}, {"error", error}};
  auto& rows = j["entries"] = nlohmann::ordered_json::array();
  for (const auto& r : report.entries) {
    nlohmann::ordered_json e;
    e["id"] = r.rep;
    e["profile"] = r.profile;
    e["point"] = r.point;
    e["nodes"] = r.nodes;
    e["status"] = r.status;
    if (r.status == "error") {
      e["error"] = r.error;
    } else {
      e["quad"] = r.quad;
      e["series"] = r.series;
      e["rel_diff"] = r.rel_diff;
      e["abs_error_estimate"] = r.abs_error_estimate;
    }
    rows.push_back(e);
  }
  return j;
}

std::string to_table(const SweepReport& report) {
  std::ostringstream os;
  os << std::left << std::setw(7) << "rep" << std::setw(8) << "profile" << std::setw(20) << "point" << std::setw(7)
     << "nodes" << std::setw(10) << "status" << std::right << std::setw(24) << "quad" << std::setw(12) << "rel_diff"
     << std::setw(12) << "estimate" << "\n";
  for (const auto& r : report.entries) {
    std::ostringstream pt;
    pt << r.point[0] << "," << r.point[1] << "," << r.point[2];
    os << std::left << std::setw(7) << r.rep << std::setw(8) << r.profile << std::setw(20) << pt.str() << std::setw(7)
       << r.nodes << std::setw(10) << r.status << std::right;
    if (r.status == "error") {
      os << "  " << r.error << "\n";
      continue;
    }
    os << std::setw(24) << std::setprecision(17) << r.quad << std::setw(12) << std::setprecision(3) << r.rel_diff
       << std::setw(12) << r.abs_error_estimate << "\n";
  }
  return os.str();
}

}  // namespace hyper3
