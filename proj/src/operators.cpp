#include "hyper3/operators.hpp"

#include <algorithm>

#include "hyper3/errors.hpp"

namespace hyper3 {

namespace {

/// Exponent on the lead axis and on the remaining axes.
std::pair<unsigned, unsigned> split(const DiagonalOp& op, const MultiIndex3& idx) {
  if (op.kind == OpKind::Nabla || op.kind == OpKind::Delta) return {idx[op.a], idx[op.b]};
  return {idx[op.a], idx.degree() - idx[op.a]};
}

std::array<Axis, 2> others(Axis lead) {
  switch (lead) {
    case Axis::X:
      return {Axis::Y, Axis::Z};
    case Axis::Y:
      return {Axis::X, Axis::Z};
    case Axis::Z:
      break;
  }
  return {Axis::X, Axis::Y};
}

bool is_tilde(OpKind k) { return k == OpKind::NablaTilde || k == OpKind::DeltaTilde; }

[[noreturn]] void singular(const DiagonalOp& op, const MultiIndex3& idx) {
  throw SingularParameter(op.str() + " is singular at " + idx.str());
}

Rational checked_div(const Rational& num, const Rational& den, const DiagonalOp& op, const MultiIndex3& idx) {
  if (den.is_zero()) singular(op, idx);
  return num / den;
}

Rational neg(unsigned m) { return Rational(-static_cast<long>(m)); }

}  // namespace

DiagonalOp DiagonalOp::inverse() const {
  DiagonalOp r = *this;
  switch (kind) {
    case OpKind::Nabla:
      r.kind = OpKind::Delta;
      break;
    case OpKind::Delta:
      r.kind = OpKind::Nabla;
      break;
    case OpKind::NablaTilde:
      r.kind = OpKind::DeltaTilde;
      break;
    case OpKind::DeltaTilde:
      r.kind = OpKind::NablaTilde;
      break;
  }
  return r;
}

std::string DiagonalOp::str() const {
  std::string s;
  switch (kind) {
    case OpKind::Nabla:
      s = "Nabla_";
      break;
    case OpKind::Delta:
      s = "Delta_";
      break;
    case OpKind::NablaTilde:
      s = "NablaTilde_";
      break;
    case OpKind::DeltaTilde:
      s = "DeltaTilde_";
      break;
  }
  s += axis_name(a);
  if (!is_tilde(kind)) s += axis_name(b);
  return s + "(" + h.str() + ")";
}

std::string OperatorChain::str() const {
  std::string s;
  for (const auto& op : ops) s += (s.empty() ? "" : " ") + op.str();
  return s.empty() ? "identity" : s;
}

Rational eigenvalue(const DiagonalOp& op, const MultiIndex3& idx) {
  const auto [m, n] = split(op, idx);
  const Rational whole = pochhammer(op.h, m + n);
  const Rational parts = pochhammer(op.h, m) * pochhammer(op.h, n);
  if (op.kind == OpKind::Nabla || op.kind == OpKind::NablaTilde) return checked_div(whole, parts, op, idx);
  return checked_div(parts, whole, op, idx);
}

Rational eigenvalue(const OperatorChain& chain, const MultiIndex3& idx) {
  Rational v = 1;
  for (const auto& op : chain.ops) v *= eigenvalue(op, idx);
  return v;
}

TruncatedSeries apply(const OperatorChain& chain, const TruncatedSeries& s) {
  TruncatedSeries::Terms t;
  for (const auto& [k, v] : s.terms()) t.emplace_hint(t.end(), k, v * eigenvalue(chain, k));
  return TruncatedSeries(s.cap(), std::move(t));
}

namespace {

/// (a)_0 .. (a)_n.
std::vector<Rational> rising_table(const Rational& a, unsigned n) {
  std::vector<Rational> t(n + 1, Rational(1));
  for (unsigned k = 1; k <= n; ++k) t[k] = t[k - 1] * (a + Rational(static_cast<long>(k) - 1));
  return t;
}

/// Per-k denominator and extra factor of the series, for k = 0..kmax. `m`
/// and `n` are the two exponents the operator splits the monomial into.
void series_weights(const DiagonalOp& op, bool alternate, unsigned m, unsigned n, unsigned kmax,
                    std::vector<Rational>& bottom, std::vector<Rational>& extra) {
  const Rational& h = op.h;
  bottom.assign(kmax + 1, Rational(1));
  extra.assign(kmax + 1, Rational(1));
  const bool nabla = op.kind == OpKind::Nabla || op.kind == OpKind::NablaTilde;
  if (nabla) {
    bottom = rising_table(h, kmax);
  } else if (!alternate) {
    bottom = rising_table(Rational(1) - h - Rational(static_cast<long>(m + n)), kmax);
  } else {
    const auto hm = rising_table(h + Rational(static_cast<long>(m)), kmax);
    const auto hn = rising_table(h + Rational(static_cast<long>(n)), kmax);
    const auto h2 = rising_table(h, 2 * kmax);
    for (unsigned k = 0; k <= kmax; ++k) {
      extra[k] = h2[2 * k] * Rational(k % 2 == 0 ? 1 : -1);
      // (h+k-1)_k = (h)_{2k-1} / (h)_{k-1} unless the latter vanishes
      const Rational lead = k == 0                 ? Rational(1)
                            : h2[k - 1].is_zero() ? pochhammer(h + Rational(static_cast<long>(k) - 1), k)
                                                  : h2[2 * k - 1] / h2[k - 1];
      bottom[k] = lead * hm[k] * hn[k];
    }
  }
}

}  // namespace

Rational operator_series(const DiagonalOp& op, const MultiIndex3& idx, bool alternate) {
  std::vector<Rational> bottom, extra;
  Rational sum = 0;
  if (!is_tilde(op.kind)) {
    const unsigned m = idx[op.a], n = idx[op.b], kmax = std::min(m, n);
    const auto pm = rising_table(neg(m), kmax), pn = rising_table(neg(n), kmax), f = rising_table(1, kmax);
    series_weights(op, alternate, m, n, kmax, bottom, extra);
    for (unsigned k = 0; k <= kmax; ++k) sum += checked_div(pm[k] * pn[k] * extra[k], f[k] * bottom[k], op, idx);
    return sum;
  }
  const auto [o2, o3] = others(op.a);
  const unsigned m1 = idx[op.a], m2 = idx[o2], m3 = idx[o3], kmax = m2 + m3;
  const auto p1 = rising_table(neg(m1), kmax);
  auto c2 = rising_table(neg(m2), m2), c3 = rising_table(neg(m3), m3);
  const auto f = rising_table(1, std::max(m2, m3));
  for (unsigned k = 0; k <= m2; ++k) c2[k] /= f[k];
  for (unsigned k = 0; k <= m3; ++k) c3[k] /= f[k];
  series_weights(op, alternate, m1, m2 + m3, kmax, bottom, extra);
  // Terms are grouped by k2 + k3; (-m)_k / k! is an integer, so each inner sum is exact and cheap.
  for (unsigned kk = 0; kk <= std::min(kmax, m1); ++kk) {
    Rational inner = 0;
    for (unsigned k2 = kk > m3 ? kk - m3 : 0; k2 <= std::min(kk, m2); ++k2)
      inner += c2[k2] * c3[kk - k2];
    if (inner.is_zero()) continue;
    sum += checked_div(p1[kk] * inner * extra[kk], bottom[kk], op, idx);
  }
  return sum;
}

const char* to_string(ProductReading r) {
  switch (r) {
    case ProductReading::FirstSeriesL2k:
      return "first series with (l)_{2k}";
    case ProductReading::SecondSeriesL2k:
      return "second series with (l)_{2k}";
    case ProductReading::SecondSeriesNoFactor:
      return "second series without the (l)_{2l} factor";
  }
  return "?";
}

Rational product_series(const Rational& h, const Rational& l, unsigned m, unsigned n, ProductReading reading) {
  const DiagonalOp tag = DiagonalOp::nabla(Axis::X, Axis::Y, h);
  const MultiIndex3 idx{m, n, 0};
  Rational sum = 0;
  for (unsigned k = 0; k <= std::min(m, n); ++k) {
    const Rational lk = pochhammer(l, 2 * k);
    const Rational top = pochhammer(neg(m), k) * pochhammer(neg(n), k);
    Rational term;
    if (reading == ProductReading::FirstSeriesL2k) {
      const Rational bottom = pochhammer(l + Rational(static_cast<long>(k) - 1), k) *
                              pochhammer(l + Rational(static_cast<long>(m)), k) *
                              pochhammer(l + Rational(static_cast<long>(n)), k) * pochhammer(1, k);
      term = checked_div(pochhammer(l - h, k) * lk * top, bottom, tag, idx);
    } else {
      const Rational bottom =
          pochhammer(h, k) * pochhammer(Rational(1) - l - Rational(static_cast<long>(m + n)), k) * pochhammer(1, k);
      const Rational factor = reading == ProductReading::SecondSeriesL2k ? lk : Rational(1);
      term = checked_div(pochhammer(h - l, k) * factor * top, bottom, tag, idx);
    }
    sum += term;
  }
  return sum;
}

std::vector<ProductReadingResult> check_product_readings(const Rational& h, const Rational& l,
                                                         unsigned max_exponent) {
  const OperatorChain pair{{DiagonalOp::nabla(Axis::X, Axis::Y, h), DiagonalOp::delta(Axis::X, Axis::Y, l)}};
  std::vector<ProductReadingResult> out;
  for (auto reading : {ProductReading::FirstSeriesL2k, ProductReading::SecondSeriesL2k,
                       ProductReading::SecondSeriesNoFactor}) {
    ProductReadingResult r{reading, true, std::nullopt};
    for (unsigned d = 0; d <= 2 * max_exponent && r.holds; ++d) {
      for (unsigned m = std::min(d, max_exponent) + 1; m-- > 0;) {
        const unsigned n = d - m;
        if (n > max_exponent) break;
        if (product_series(h, l, m, n, reading) != eigenvalue(pair, {m, n, 0})) {
          r.holds = false;
          r.first_counterexample = std::make_pair(m, n);
          break;
        }
      }
    }
    out.push_back(r);
  }
  return out;
}

std::string Verdict::str() const {
  if (verified()) return "VERIFIED to degree " + std::to_string(degree);
  return "FAILED at " + first_bad_index.str() + ": expected " + expected.str() + ", actual " + actual.str();
}

Verdict compare(const TruncatedSeries& expected, const TruncatedSeries& actual, unsigned degree) {
  Verdict v;
  v.degree = degree;
  auto e = expected.terms().begin(), ee = expected.terms().end();
  auto a = actual.terms().begin(), ae = actual.terms().end();
  // Both maps iterate in graded-lex order; the first difference is the answer.
  while (e != ee || a != ae) {
    MultiIndex3 idx;
    if (a == ae || (e != ee && e->first < a->first))
      idx = e->first;
    else
      idx = a->first;
    if (idx.degree() > degree) break;
    const Rational ev = (e != ee && e->first == idx) ? e->second : Rational(0);
    const Rational av = (a != ae && a->first == idx) ? a->second : Rational(0);
    if (ev != av) {
      v.status = Verdict::Status::Failed;
      v.first_bad_index = idx;
      v.expected = ev;
      v.actual = av;
      return v;
    }
    if (e != ee && e->first == idx) ++e;
    if (a != ae && a->first == idx) ++a;
  }
  return v;
}

namespace {

void collect(std::vector<std::string>& out, const AffineExpr& e) {
  for (auto& n : e.param_names())
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
}

std::array<Axis, 3> embedding(const std::vector<Axis>& vars) {
  std::array<Axis, 3> target{Axis::X, Axis::X, Axis::X};
  for (std::size_t i = 0; i < vars.size(); ++i) target[i] = vars[i];
  return target;
}

template <class T>
ParamSet<T> bind_impl(FunctionId fn, const std::vector<AffineExpr>& args, const ParamSet<T>& params,
                      const IndexValues& idx) {
  const auto names = fn.param_names();
  if (names.size() != args.size())
    throw ArityMismatch(fn.name() + " takes " + std::to_string(names.size()) + " parameters, got " +
                        std::to_string(args.size()));
  ParamSet<T> out;
  for (std::size_t i = 0; i < names.size(); ++i) out.set(names[i], args[i].eval(params, idx));
  return out;
}

OpSpec parse_op(const CallSpec& c) {
  auto axis = [&](char ch) {
    if (ch == 'x') return Axis::X;
    if (ch == 'y') return Axis::Y;
    if (ch == 'z') return Axis::Z;
    throw ParseError("bad operator '" + c.name + "'");
  };
  if (c.args.size() != 1 || !c.vars.empty()) throw ParseError("operator '" + c.name + "' takes one parameter");
  const std::string& n = c.name;
  if (n.size() == 3 && (n[1] == 'T') && (n[0] == 'N' || n[0] == 'D'))
    return {n[0] == 'N' ? OpKind::NablaTilde : OpKind::DeltaTilde, axis(n[2]), axis(n[2]), c.args[0]};
  if (n.size() == 3 && (n[0] == 'N' || n[0] == 'D') && n[1] != n[2])
    return {n[0] == 'N' ? OpKind::Nabla : OpKind::Delta, axis(n[1]), axis(n[2]), c.args[0]};
  throw ParseError("bad operator '" + n + "'");
}

FactorSpec parse_factor(const CallSpec& c) {
  FactorSpec f{FunctionId::parse(c.name), c.args, c.vars};
  if (f.vars.size() != f.fn.arity())
    throw ArityMismatch(c.name + " needs " + std::to_string(f.fn.arity()) + " variable(s)");
  if (f.args.size() != f.fn.param_names().size())
    throw ArityMismatch(c.name + " needs " + std::to_string(f.fn.param_names().size()) + " parameters");
  return f;
}

const std::vector<std::string>& identity_param_names() {
  static const std::vector<std::string> names = {"alpha", "beta1", "beta2", "gamma", "gamma1", "gamma2", "gamma3"};
  return names;
}

}  // namespace

std::vector<std::string> IdentityEntry::required_params() const {
  std::vector<std::string> out;
  for (const auto& e : lhs_args) collect(out, e);
  for (const auto& op : chain) collect(out, op.h);
  for (const auto& f : factors)
    for (const auto& e : f.args) collect(out, e);
  std::sort(out.begin(), out.end());
  return out;
}

IdentityEntry make_identity(std::string id, std::string_view lhs, std::string_view chain, std::string_view factors) {
  IdentityEntry e;
  e.id = std::move(id);
  const auto head = CallSpec::parse_list(lhs);
  if (head.size() != 1) throw ParseError("identity " + e.id + ": expected one left-hand function");
  e.lhs = FunctionId::parse(head[0].name);
  e.lhs_args = head[0].args;
  if (e.lhs_args.size() != e.lhs.param_names().size())
    throw ArityMismatch("identity " + e.id + ": wrong parameter count for " + e.lhs.name());
  for (const auto& c : CallSpec::parse_list(chain)) e.chain.push_back(parse_op(c));
  for (const auto& c : CallSpec::parse_list(factors)) e.factors.push_back(parse_factor(c));
  const auto& allowed = identity_param_names();
  for (const auto& n : e.required_params())
    if (std::find(allowed.begin(), allowed.end(), n) == allowed.end())
      throw ParseError("identity " + e.id + " references unknown parameter '" + n + "'");
  return e;
}

const std::vector<IdentityEntry>& identity_registry() {
  static const std::vector<IdentityEntry> registry = [] {
    struct Row {
      const char* id;
      const char* lhs;
      const char* chain;
      const char* factors;
    };
    static constexpr Row rows[] = {
        {"3.1", "HA(alpha,beta1,beta2,gamma1,gamma2)", "Nxz(alpha) Nxy(beta1)",
         "2F1(alpha,beta1,gamma1;x) F1(beta2,beta1,alpha,gamma2;y,z)"},
        {"3.2", "HB(alpha,beta1,beta2,gamma1,gamma,gamma)", "Nxz(alpha) Nxy(beta1) Nyz(gamma)",
         "2F1(alpha,beta1,gamma1;x) F1(beta2,beta1,alpha,gamma;y,z)"},
        {"3.3", "HC(alpha,beta1,beta2,gamma)", "Nxz(alpha) Nxy(beta1) DTx(gamma)",
         "2F1(alpha,beta1,gamma;x) F1(beta2,beta1,alpha,gamma;y,z)"},
        {"3.4", "HA(alpha,beta1,beta2,gamma1,gamma2)", "Nxz(alpha) Nxy(beta1) Dyz(gamma2)",
         "2F1(alpha,beta1,gamma1;x) F2(beta2,beta1,alpha,gamma2,gamma2;y,z)"},
        {"3.5", "HB(alpha,beta1,beta2,gamma1,gamma2,gamma3)", "Nxz(alpha) Nxy(beta1)",
         "2F1(alpha,beta1,gamma1;x) F2(beta2,beta1,alpha,gamma2,gamma3;y,z)"},
        {"3.6", "HC(alpha,beta1,beta2,gamma)", "Nxz(alpha) Nxy(beta1) Nyz(gamma) DTx(gamma)",
         "2F1(alpha,beta1,gamma;x) F2(beta2,beta1,alpha,gamma,gamma;y,z)"},
        {"3.7", "HA(alpha,beta1,beta2,gamma1,gamma2)", "Nxz(alpha) Nxy(beta1) Nyz(beta2)",
         "2F1(alpha,beta1,gamma1;x) F3(beta1,beta2,beta2,alpha,gamma2;y,z)"},
        {"3.8", "HB(alpha,beta1,beta2,gamma1,gamma,gamma)", "Nxz(alpha) Nxy(beta1) Nyz(beta2) Nyz(gamma)",
         "2F1(alpha,beta1,gamma1;x) F3(beta2,alpha,beta1,beta2,gamma;y,z)"},
        {"3.9", "HC(alpha,beta1,beta2,gamma)", "Nxz(alpha) Nxy(beta1) Nyz(beta2) DTx(gamma)",
         "2F1(alpha,beta1,gamma;x) F3(beta2,beta2,beta1,alpha,gamma;y,z)"},
        {"3.10", "HA(alpha,alpha,beta2,gamma1,gamma2)", "Nxy(alpha) Nxz(alpha) Dyz(alpha) Dyz(gamma2)",
         "2F1(alpha,alpha,gamma1;x) F4(alpha,beta2,gamma2,gamma2;y,z)"},
        {"3.11", "HB(alpha,alpha,beta2,gamma1,gamma2,gamma3)", "Nxz(alpha) Nxy(alpha) Dyz(alpha)",
         "2F1(alpha,alpha,gamma1;x) F4(alpha,beta2,gamma2,gamma3;y,z)"},
        {"3.12", "HC(alpha,alpha,beta2,gamma)", "Nxz(alpha) Nxy(alpha) Dyz(alpha) Dyz(gamma) DTx(gamma)",
         "2F1(alpha,alpha,gamma;x) F4(alpha,beta2,gamma,gamma;y,z)"},
        {"3.13", "HA(alpha,beta1,beta2,gamma1,gamma2)", "Nxz(alpha) Nxy(beta1) Nyz(beta2) Dyz(gamma2)",
         "2F1(alpha,beta1,gamma1;x) 2F1(beta1,beta2,gamma2;y) 2F1(alpha,beta2,gamma2;z)"},
        {"3.14", "HB(alpha,beta1,beta2,gamma1,gamma2,gamma3)", "Nxz(alpha) Nxy(beta1) Nyz(beta2)",
         "2F1(alpha,beta1,gamma1;x) 2F1(beta1,beta2,gamma2;y) 2F1(alpha,beta2,gamma3;z)"},
        {"3.15", "HC(alpha,beta1,beta2,gamma)", "Nxz(alpha) Nxy(beta1) Nyz(beta2) Dyz(gamma) DTx(gamma)",
         "2F1(alpha,beta1,gamma;x) 2F1(beta1,beta2,gamma;y) 2F1(alpha,beta2,gamma;z)"},
    };
    std::vector<IdentityEntry> out;
    for (const auto& r : rows) out.push_back(make_identity(r.id, r.lhs, r.chain, r.factors));
    return out;
  }();
  return registry;
}

const std::vector<IdentityEntry>& corrected_identities() {
  static const std::vector<IdentityEntry> corrected = {
      make_identity("3.6", "HC(alpha,beta1,beta2,gamma)", "Nxz(alpha) Nxy(beta1) Dyz(gamma) DTx(gamma)",
                    "2F1(alpha,beta1,gamma;x) F2(beta2,beta1,alpha,gamma,gamma;y,z)"),
  };
  return corrected;
}

const IdentityEntry* find_corrected_identity(std::string_view id) {
  for (const auto& e : corrected_identities())
    if (e.id == id) return &e;
  return nullptr;
}

const IdentityEntry& find_identity(std::string_view id) {
  for (const auto& e : identity_registry())
    if (e.id == id) return e;
  throw UnknownIdentity("no operator identity '" + std::string(id) + "'");
}

ExactParams bind_params(FunctionId fn, const std::vector<AffineExpr>& args, const ExactParams& params,
                        const IndexValues& idx) {
  return bind_impl(fn, args, params, idx);
}

FloatParams bind_params(FunctionId fn, const std::vector<AffineExpr>& args, const FloatParams& params,
                        const IndexValues& idx) {
  return bind_impl(fn, args, params, idx);
}

OperatorChain bind_chain(const std::vector<OpSpec>& chain, const ExactParams& params) {
  OperatorChain out;
  for (const auto& op : chain) out.ops.push_back({op.kind, op.a, op.b, op.h.eval(params)});
  return out;
}

void require_params(const std::vector<std::string>& names, const ExactParams& params, std::string_view what) {
  std::string missing;
  for (const auto& n : names)
    if (!params.contains(n)) missing += (missing.empty() ? "" : ", ") + n;
  if (!missing.empty()) throw BadParams(std::string(what) + " needs parameter(s): " + missing);
}

Verdict verify_operator_identity(std::string_view id, const ExactParams& params, unsigned degree) {
  return verify_operator_identity(find_identity(id), params, degree);
}

Verdict verify_operator_identity(const IdentityEntry& entry, const ExactParams& params, unsigned degree) {
  require_params(entry.required_params(), params, "identity " + entry.id);
  try {
    const auto lhs = truncated(entry.lhs, bind_params(entry.lhs, entry.lhs_args, params), degree);
    auto rhs = TruncatedSeries::one(degree);
    for (const auto& f : entry.factors)
      rhs = rhs * truncated(f.fn, bind_params(f.fn, f.args, params), degree).embedded(embedding(f.vars));
    rhs = apply(bind_chain(entry.chain, params), rhs);
    return compare(lhs, rhs, degree);
  } catch (const BadParams& e) {
    throw SingularParameter(e.what());
  }
}

}  // namespace hyper3
