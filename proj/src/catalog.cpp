#include "hyper3/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hyper3/errors.hpp"

namespace hyper3 {

namespace {

struct KindName {
  FunctionKind kind;
  unsigned r;
  std::string_view short_name;
  std::string_view long_name;
};

constexpr KindName kNames[] = {
    {FunctionKind::Gauss2F1, 0, "2F1", "Gauss2F1"},
    {FunctionKind::Hyp0F1, 0, "0F1", "Hyp0F1"},
    {FunctionKind::Hyp1F1, 0, "1F1", "Hyp1F1"},
    {FunctionKind::AppellF1, 0, "F1", "AppellF1"},
    {FunctionKind::AppellF2, 0, "F2", "AppellF2"},
    {FunctionKind::AppellF3, 0, "F3", "AppellF3"},
    {FunctionKind::AppellF4, 0, "F4", "AppellF4"},
    {FunctionKind::HumbertPsi2, 0, "Psi2", "HumbertPsi2"},
    {FunctionKind::LauricellaFD, 1, "FD1", "LauricellaFD1"},
    {FunctionKind::LauricellaFD, 2, "FD2", "LauricellaFD2"},
    {FunctionKind::LauricellaFD, 3, "FD3", "LauricellaFD3"},
    {FunctionKind::HA, 0, "HA", "HA"},
    {FunctionKind::HB, 0, "HB", "HB"},
    {FunctionKind::HC, 0, "HC", "HC"},
};

using W = std::array<std::uint8_t, 3>;
constexpr W kX{1, 0, 0}, kY{0, 1, 0}, kZ{0, 0, 1}, kXY{1, 1, 0}, kXZ{1, 0, 1}, kYZ{0, 1, 1}, kXYZ{1, 1, 1};

void check_lauricella(const FunctionId& fn) {
  if (fn.kind == FunctionKind::LauricellaFD && (fn.r < 1 || fn.r > 3))
    throw ArityMismatch("LauricellaFD supports 1 to 3 variables, got " + std::to_string(fn.r));
}

}  // namespace

FunctionId FunctionId::parse(std::string_view name) {
  for (const auto& k : kNames)
    if (name == k.short_name || name == k.long_name) return FunctionId{k.kind, k.r};
  if (name == "F" || name == "2f1") return FunctionId{FunctionKind::Gauss2F1, 0};
  throw ParseError("unknown function '" + std::string(name) + "'");
}

std::string FunctionId::name() const {
  for (const auto& k : kNames)
    if (k.kind == kind && (kind != FunctionKind::LauricellaFD || k.r == r)) return std::string(k.short_name);
  return "FD" + std::to_string(r);
}

unsigned FunctionId::arity() const {
  switch (kind) {
    case FunctionKind::Gauss2F1:
    case FunctionKind::Hyp0F1:
    case FunctionKind::Hyp1F1:
      return 1;
    case FunctionKind::AppellF1:
    case FunctionKind::AppellF2:
    case FunctionKind::AppellF3:
    case FunctionKind::AppellF4:
    case FunctionKind::HumbertPsi2:
      return 2;
    case FunctionKind::LauricellaFD:
      check_lauricella(*this);
      return r;
    case FunctionKind::HA:
    case FunctionKind::HB:
    case FunctionKind::HC:
      return 3;
  }
  return 0;
}

std::vector<PochhammerFactor> coefficient_shape(FunctionId fn) {
  switch (fn.kind) {
    case FunctionKind::Gauss2F1:
      return {{"a", kX, false}, {"b", kX, false}, {"c", kX, true}};
    case FunctionKind::Hyp0F1:
      return {{"c", kX, true}};
    case FunctionKind::Hyp1F1:
      return {{"a", kX, false}, {"c", kX, true}};
    case FunctionKind::AppellF1:
      return {{"a", kXY, false}, {"b1", kX, false}, {"b2", kY, false}, {"c", kXY, true}};
    case FunctionKind::AppellF2:
      return {{"a", kXY, false}, {"b1", kX, false}, {"b2", kY, false}, {"c1", kX, true}, {"c2", kY, true}};
    case FunctionKind::AppellF3:
      return {{"a1", kX, false}, {"a2", kY, false}, {"b1", kX, false}, {"b2", kY, false}, {"c", kXY, true}};
    case FunctionKind::AppellF4:
      return {{"a", kXY, false}, {"b", kXY, false}, {"c1", kX, true}, {"c2", kY, true}};
    case FunctionKind::HumbertPsi2:
      return {{"a", kXY, false}, {"c1", kX, true}, {"c2", kY, true}};
    case FunctionKind::LauricellaFD: {
      check_lauricella(fn);
      W all{0, 0, 0};
      for (unsigned i = 0; i < fn.r; ++i) all[i] = 1;
      std::vector<PochhammerFactor> s{{"a", all, false}};
      for (unsigned i = 0; i < fn.r; ++i) {
        W e{0, 0, 0};
        e[i] = 1;
        s.push_back({"b" + std::to_string(i + 1), e, false});
      }
      s.push_back({"c", all, true});
      return s;
    }
    case FunctionKind::HA:
      return {{"alpha", kXZ, false}, {"beta1", kXY, false}, {"beta2", kYZ, false},
              {"gamma1", kX, true}, {"gamma2", kYZ, true}};
    case FunctionKind::HB:
      return {{"alpha", kXZ, false}, {"beta1", kXY, false}, {"beta2", kYZ, false},
              {"gamma1", kX, true}, {"gamma2", kY, true}, {"gamma3", kZ, true}};
    case FunctionKind::HC:
      return {{"alpha", kXZ, false}, {"beta1", kXY, false}, {"beta2", kYZ, false}, {"gamma", kXYZ, true}};
  }
  return {};
}

std::vector<std::string> FunctionId::param_names() const {
  std::vector<std::string> names;
  for (const auto& f : coefficient_shape(*this))
    if (std::find(names.begin(), names.end(), f.param) == names.end()) names.push_back(f.param);
  return names;
}

namespace {

unsigned subscript(const std::array<std::uint8_t, 3>& w, const MultiIndex3& idx) {
  return w[0] * idx.m + w[1] * idx.n + w[2] * idx.p;
}

void check_index_arity(FunctionId fn, const MultiIndex3& idx) {
  const unsigned a = fn.arity();
  if ((a < 2 && idx.n != 0) || (a < 3 && idx.p != 0))
    throw ArityMismatch(fn.name() + " has " + std::to_string(a) + " variable(s); index " + idx.str() +
                        " uses more");
}

template <class T>
struct Resolved {
  std::vector<T> value;
  std::vector<std::array<std::uint8_t, 3>> weight;
  std::vector<bool> denominator;
};

template <class T>
Resolved<T> resolve(FunctionId fn, const ParamSet<T>& params) {
  Resolved<T> r;
  for (const auto& f : coefficient_shape(fn)) {
    r.value.push_back(params.get(f.param));
    r.weight.push_back(f.weight);
    r.denominator.push_back(f.denominator);
  }
  return r;
}

[[noreturn]] void singular_denominator(FunctionId fn, const std::string& param, const MultiIndex3& idx) {
  throw BadParams(fn.name() + ": denominator parameter '" + param +
                  "' is a nonpositive integer reached at index " + idx.str());
}

}  // namespace

Rational coeff(FunctionId fn, const ExactParams& params, const MultiIndex3& idx) {
  check_index_arity(fn, idx);
  const auto shape = coefficient_shape(fn);
  Rational num = 1;
  Rational den = 1;
  for (const auto& f : shape) {
    const Rational p = pochhammer(params.get(f.param), subscript(f.weight, idx));
    if (f.denominator) {
      if (p.is_zero()) singular_denominator(fn, f.param, idx);
      den *= p;
    } else {
      num *= p;
    }
  }
  for (unsigned k : idx.as_array()) den *= pochhammer(1, k);
  return num / den;
}

TruncatedSeries truncated(FunctionId fn, const ExactParams& params, unsigned cap) {
  const unsigned arity = fn.arity();
  const auto shape = coefficient_shape(fn);
  const Resolved<Rational> rs = resolve(fn, params);

  TruncatedSeries::Terms terms;
  terms.emplace(MultiIndex3{}, Rational(1));
  mpq_class num, den;
  for (const MultiIndex3& idx : graded_indices(cap)) {
    if (idx.degree() == 0) continue;
    if ((arity < 2 && idx.n != 0) || (arity < 3 && idx.p != 0)) continue;
    // Step from a parent one lower in degree along a single axis.
    MultiIndex3 parent = idx;
    Axis axis;
    if (idx.p > 0) {
      axis = Axis::Z;
    } else if (idx.n > 0) {
      axis = Axis::Y;
    } else {
      axis = Axis::X;
    }
    --parent[axis];
    auto it = terms.find(parent);
    if (it == terms.end()) continue;  // a numerator factor already vanished
    const auto ax = static_cast<std::size_t>(axis);
    num = 1;
    den = parent[axis] + 1;
    for (std::size_t f = 0; f < rs.value.size(); ++f) {
      if (rs.weight[f][ax] == 0) continue;
      const mpq_class factor = rs.value[f].raw() + subscript(rs.weight[f], parent);
      if (rs.denominator[f]) {
        if (sgn(factor) == 0) singular_denominator(fn, shape[f].param, idx);
        den *= factor;
      } else {
        num *= factor;
      }
    }
    if (sgn(num) == 0) continue;
    terms.emplace(idx, it->second * Rational(mpq_class(num / den)));
  }
  return TruncatedSeries(cap, std::move(terms));
}

const char* to_string(EvalStatus s) {
  switch (s) {
    case EvalStatus::Converged:
      return "Converged";
    case EvalStatus::MaxShellsReached:
      return "MaxShellsReached";
    case EvalStatus::DivergenceSuspected:
      return "DivergenceSuspected";
  }
  return "?";
}

namespace {

/// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

class ShellStepper {
 public:
  ShellStepper(FunctionId fn, const FloatParams& params, std::span<const double> point)
      : fn_(fn), rs_(resolve(fn, params)), point_(point.begin(), point.end()) {
    names_.reserve(rs_.value.size());
    for (const auto& f : coefficient_shape(fn)) names_.push_back(f.param);
  }

  /// Term at `idx` from the term at its parent one step back along `axis`.
  double step(double parent_term, const MultiIndex3& parent, Axis axis) const {
    if (parent_term == 0.0) return 0.0;
    const auto ax = static_cast<std::size_t>(axis);
    double r = point_[ax] / static_cast<double>(parent[axis] + 1);
    if (r == 0.0) return 0.0;
    for (std::size_t f = 0; f < rs_.value.size(); ++f) {
      if (rs_.weight[f][ax] == 0) continue;
      const double factor = rs_.value[f] + static_cast<double>(subscript(rs_.weight[f], parent));
      if (rs_.denominator[f]) {
        if (factor == 0.0) {
          MultiIndex3 idx = parent;
          ++idx[axis];
          singular_denominator(fn_, names_[f], idx);
        }
        r /= factor;
      } else {
        r *= factor;
      }
    }
    return parent_term * r;
  }

 private:
  FunctionId fn_;
  Resolved<double> rs_;
  std::vector<double> point_;
  std::vector<std::string> names_;
};

}  // namespace

EvalResult eval(FunctionId fn, const FloatParams& params, std::span<const double> point, const EvalOptions& opts) {
  const unsigned arity = fn.arity();
  if (point.size() != arity)
    throw ArityMismatch(fn.name() + " takes " + std::to_string(arity) + " variable(s), got " +
                        std::to_string(point.size()));
  if (!(opts.tol > 0.0)) throw BadParams("tolerance must be positive");
  for (double v : point)
    if (!std::isfinite(v)) throw NonFinite("non-finite evaluation point");
  for (const auto& f : coefficient_shape(fn))
    if (!std::isfinite(params.get(f.param))) throw BadParams("parameter '" + f.param + "' is not finite");

  const ShellStepper stepper(fn, params, point);
  // Entire series grow before they decay; only max_shells can stop them.
  const bool entire = fn.kind == FunctionKind::Hyp0F1 || fn.kind == FunctionKind::Hyp1F1 ||
                      fn.kind == FunctionKind::HumbertPsi2;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  // Terms of the previous and current shell. Layout: arity 1 -> [0];
  // arity 2 -> [m]; arity 3 -> [m * stride + n].
  std::vector<double> prev{1.0}, cur;
  CompensatedSum partial;
  partial.add(1.0);
  double total_abs = 1.0;
  double mag_prev = 1.0, ratio_prev = 0.0;
  unsigned small_run = 0, growth_run = 0;

  EvalResult res;
  res.shells_summed = 1;
  res.value = 1.0;
  res.status = EvalStatus::MaxShellsReached;
  res.abs_error_estimate = std::numeric_limits<double>::infinity();

  for (unsigned s = 1; s <= opts.max_shells; ++s) {
    CompensatedSum shell;
    double mag = 0.0;
    auto take = [&](double t) {
      shell.add(t);
      mag += std::fabs(t);
    };
    if (arity == 1) {
      cur.assign(1, stepper.step(prev[0], {s - 1, 0, 0}, Axis::X));
      take(cur[0]);
    } else if (arity == 2) {
      cur.assign(s + 1, 0.0);
      for (unsigned m = 0; m < s; ++m) cur[m] = stepper.step(prev[m], {m, s - 1 - m, 0}, Axis::Y);
      cur[s] = stepper.step(prev[s - 1], {s - 1, 0, 0}, Axis::X);
      for (double t : cur) take(t);
    } else {
      const unsigned ps = s;  // previous stride
      const unsigned cs = s + 1;
      cur.assign(static_cast<std::size_t>(cs) * cs, 0.0);
      for (unsigned m = 0; m <= s; ++m) {
        for (unsigned n = 0; m + n <= s; ++n) {
          const unsigned p = s - m - n;
          double t;
          if (p > 0)
            t = stepper.step(prev[m * ps + n], {m, n, p - 1}, Axis::Z);
          else if (n > 0)
            t = stepper.step(prev[m * ps + n - 1], {m, n - 1, 0}, Axis::Y);
          else
            t = stepper.step(prev[(m - 1) * ps], {m - 1, 0, 0}, Axis::X);
          cur[m * cs + n] = t;
          take(t);
        }
      }
    }
    std::swap(prev, cur);
    partial.add(shell.value());
    total_abs += mag;
    res.shells_summed = s + 1;
    res.value = partial.value();
    if (!std::isfinite(res.value) || !std::isfinite(mag))
      throw NonFinite(fn.name() + ": overflow while summing shell " + std::to_string(s));

    const double scale = std::max(1.0, std::fabs(res.value));
    const double ratio = mag_prev > 0.0 ? mag / mag_prev : (mag == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    double tail = std::numeric_limits<double>::infinity();
    if (mag == 0.0)
      tail = 0.0;
    else if (ratio < 1.0)
      tail = mag * ratio / (1.0 - ratio);
    res.abs_error_estimate = tail + 4.0 * eps * total_abs;

    small_run = mag < opts.tol * scale ? small_run + 1 : 0;
    if (small_run >= 3 && res.abs_error_estimate <= opts.tol * scale) {
      res.status = EvalStatus::Converged;
      return res;
    }

    growth_run = (mag_prev > 0.0 && mag > mag_prev) ? growth_run + 1 : 0;
    if (!entire && growth_run >= 5 && std::isfinite(ratio_prev)) {
      // Shell ratios of a hypergeometric series behave like rho (1 + k/s);
      // extrapolate to s -> infinity before declaring divergence.
      const double rho = ratio + static_cast<double>(s) * (ratio - ratio_prev);
      if (rho >= 1.0) {
        res.status = EvalStatus::DivergenceSuspected;
        return res;
      }
    }
    mag_prev = mag;
    ratio_prev = ratio;
  }
  return res;
}

}  // namespace hyper3
