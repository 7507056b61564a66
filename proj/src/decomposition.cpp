#include "hyper3/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hyper3/errors.hpp"

namespace hyper3 {

namespace {

std::vector<AffineExpr> split_exprs(std::string_view text) {
  std::vector<AffineExpr> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(AffineExpr::parse(text.substr(0, comma)));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
  }
  return out;
}

std::vector<PochSpec> parse_pochhammers(std::string_view text, const std::string& id) {
  std::vector<PochSpec> out;
  for (auto& c : CallSpec::parse_list(text)) {
    if (c.name != "P" || c.args.size() != 2 || !c.vars.empty())
      throw ParseError("decomposition " + id + ": expected P(arg,length), got '" + c.name + "'");
    if (c.args[1].uses_params()) throw ParseError("decomposition " + id + ": Pochhammer length uses a parameter");
    out.push_back({c.args[0], c.args[1]});
  }
  return out;
}

InnerFactor parse_inner(const CallSpec& c, const std::string& id) {
  InnerFactor f;
  f.args = c.args;
  f.vars = c.vars;
  if (c.name == "Binom") {
    f.binomial = true;
    if (f.args.size() != 1 || f.vars.size() != 1)
      throw ParseError("decomposition " + id + ": Binom takes one exponent and one variable");
    return f;
  }
  f.fn = FunctionId::parse(c.name);
  if (f.vars.size() != f.fn.arity() || f.args.size() != f.fn.param_names().size())
    throw ArityMismatch("decomposition " + id + ": wrong arity for " + c.name);
  return f;
}

void collect(std::vector<std::string>& out, const AffineExpr& e) {
  for (auto& n : e.param_names())
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
}

std::array<Axis, 3> embedding(const std::vector<Axis>& vars) {
  std::array<Axis, 3> target{Axis::X, Axis::X, Axis::X};
  for (std::size_t i = 0; i < vars.size(); ++i) target[i] = vars[i];
  return target;
}

std::string index_str(const IndexValues& idx, unsigned count) {
  static constexpr char letters[] = "ijklr";
  std::string s;
  for (unsigned t = 0; t < count; ++t)
    s += (t ? "," : "") + std::string(1, letters[t]) + "=" + std::to_string(idx[t]);
  return s;
}

unsigned length_of(const PochSpec& p, const IndexValues& idx, const std::string& id) {
  const long n = p.length.eval_index(idx);
  if (n < 0) throw BadParams("decomposition " + id + ": negative Pochhammer length " + p.length.str());
  return static_cast<unsigned>(n);
}

/// Tuples whose shift degree is exactly `target`.
void tuples_at(const DecompositionEntry& e, unsigned target, unsigned t, unsigned used, IndexValues& idx,
               std::vector<IndexValues>& out) {
  if (t == e.index_count) {
    if (used == target) out.push_back(idx);
    return;
  }
  const unsigned w = e.index_weight[t];
  for (unsigned v = 0; used + v * w <= target; ++v) {
    idx[t] = v;
    tuples_at(e, target, t + 1, used + v * w, idx, out);
  }
  idx[t] = 0;
}

std::vector<IndexValues> tuples_at(const DecompositionEntry& e, unsigned target) {
  std::vector<IndexValues> out;
  IndexValues idx{};
  tuples_at(e, target, 0, 0, idx, out);
  return out;
}

/// Product of many factors kept as mantissa * 2^exponent so that large
/// Pochhammer ratios do not overflow before they cancel.
struct ScaledProduct {
  double mant = 1.0;
  long exp = 0;
  void mul(double v) {
    int e = 0;
    mant = std::frexp(mant * v, &e);
    exp += e;
  }
  void div(double v) { mul(1.0 / v); }
  double value() const {
    if (mant == 0.0) return 0.0;
    if (exp > std::numeric_limits<int>::max()) return std::copysign(std::numeric_limits<double>::infinity(), mant);
    if (exp < std::numeric_limits<int>::min()) return 0.0;
    return std::ldexp(mant, static_cast<int>(exp));
  }
};

}  // namespace

std::vector<std::string> DecompositionEntry::required_params() const {
  std::vector<std::string> out;
  for (const auto& e : lhs_args) collect(out, e);
  for (const auto* list : {&num, &den})
    for (const auto& p : *list) collect(out, p.arg);
  for (const auto& f : factors)
    for (const auto& e : f.args) collect(out, e);
  std::sort(out.begin(), out.end());
  return out;
}

DecompositionEntry make_decomposition(std::string id, std::string_view lhs, bool diagonal_yz, std::string_view sign,
                                      std::string_view num, std::string_view den, std::string_view shift,
                                      std::string_view factors) {
  DecompositionEntry e;
  e.id = std::move(id);
  const auto head = CallSpec::parse_list(lhs);
  if (head.size() != 1) throw ParseError("decomposition " + e.id + ": expected one left-hand function");
  e.lhs = FunctionId::parse(head[0].name);
  e.lhs_args = head[0].args;
  if (e.lhs_args.size() != e.lhs.param_names().size())
    throw ArityMismatch("decomposition " + e.id + ": wrong parameter count for " + e.lhs.name());
  e.diagonal_yz = diagonal_yz;
  if (!sign.empty()) e.sign_exponent = AffineExpr::parse(sign);
  e.num = parse_pochhammers(num, e.id);
  e.den = parse_pochhammers(den, e.id);
  const auto sh = split_exprs(shift);
  if (sh.size() != 3) throw ParseError("decomposition " + e.id + ": shift needs three exponents");
  std::copy(sh.begin(), sh.end(), e.shift.begin());
  for (const auto& c : CallSpec::parse_list(factors)) e.factors.push_back(parse_inner(c, e.id));

  std::vector<const AffineExpr*> all{&e.sign_exponent, &e.shift[0], &e.shift[1], &e.shift[2]};
  for (const auto* list : {&e.num, &e.den})
    for (const auto& p : *list) all.insert(all.end(), {&p.arg, &p.length});
  for (const auto& f : e.factors)
    for (const auto& a : f.args) all.push_back(&a);
  e.index_count = index_count(all);

  for (const auto& s : e.shift) {
    if (s.uses_params() || s.constant() != 0) throw ParseError("decomposition " + e.id + ": bad monomial shift");
    for (std::size_t t = 0; t < 5; ++t)
      if (s.index_coeff(t) < 0) throw ParseError("decomposition " + e.id + ": negative monomial shift");
  }
  for (unsigned t = 0; t < e.index_count; ++t) {
    long w = 0;
    for (const auto& s : e.shift) w += s.index_coeff(t);
    if (w < 1) throw ParseError("decomposition " + e.id + ": an outer index does not raise the monomial degree");
    e.index_weight.push_back(static_cast<unsigned>(w));
  }
  if (e.diagonal_yz && e.shift[2].eval_index({1, 1, 1, 1, 1}) != 0)
    throw ParseError("decomposition " + e.id + ": diagonal entries shift only x and y");
  return e;
}

namespace {

struct DecompositionRow {
  const char* id;
  const char* lhs;
  bool diagonal;
  const char* sign;
  const char* num;
  const char* den;
  const char* shift;
  const char* factors;
};

constexpr DecompositionRow kRows[] = {
    {"4.1", "HA(alpha,beta1,beta2,gamma1,gamma2)", false, "", "P(alpha,i+j) P(beta1,i+j) P(beta2,i+j)",
     "P(gamma1,i+j) P(gamma2,i+j)", "i+j, j, i",
     "2F1(alpha+i+j,beta1+i+j,gamma1+i+j;x) F1(beta2+i+j,beta1+i+j,alpha+i,gamma2+i+j;y,z)"},
    {"4.2", "HB(alpha,beta1,beta2,gamma1,gamma,gamma)", false, "",
     "P(alpha,i+j+k) P(beta1,i+j+k) P(beta2,2i+j+k)", "P(gamma1,j+k) P(gamma,i) P(gamma,2i+j+k)", "j+k, i+j, i+k",
     "2F1(alpha+i+j+k,beta1+i+j+k,gamma1+j+k;x) F1(beta2+2i+j+k,beta1+i+j,alpha+i+j+k,gamma+2i+j+k;y,z)"},
    {"4.3", "HC(alpha,beta1,beta2,gamma)", false, "i+j",
     "P(alpha,i+2j+k+l) P(beta1,2i+j+k+l) P(beta2,i+j+k+l) P(gamma,2i+2j)",
     "P(gamma+i+j-1,i+j) P(gamma,2i+2j+k+l) P(gamma,2i+2j+k+l)", "i+j+k+l, i+k, j+l",
     "2F1(alpha+i+2j+k+l,beta1+2i+j+k+l,gamma+2i+2j+k+l;x) "
     "F1(beta2+i+j+k+l,beta1+2i+j+k,alpha+i+2j+k+l,gamma+2i+2j+k+l;y,z)"},
    {"4.4", "HA(alpha,beta1,beta2,gamma1,gamma2)", false, "k",
     "P(gamma2,2k) P(alpha,i+j+k) P(beta1,i+j+k) P(beta2,i+j+2k)",
     "P(gamma2+k-1,k) P(gamma1,i+j) P(gamma2,i+2k) P(gamma2,j+2k)", "i+j, j+k, i+k",
     "2F1(alpha+i+j+k,beta1+i+j+k,gamma1+i+j;x) F2(beta2+i+j+2k,beta1+j+k,alpha+i+j+k,gamma2+j+2k,gamma2+i+2k;y,z)"},
    {"4.5", "HB(alpha,beta1,beta2,gamma1,gamma2,gamma3)", false, "", "P(alpha,i+j) P(beta1,i+j) P(beta2,i+j)",
     "P(gamma1,i+j) P(gamma2,j) P(gamma3,i)", "i+j, j, i",
     "2F1(alpha+i+j,beta1+i+j,gamma1+i+j;x) F2(beta2+i+j,beta1+i+j,alpha+i,gamma2+j,gamma3+i;y,z)"},
    {"4.6", "HC(alpha,beta1,beta2,gamma)", false, "i+j+r",
     "P(alpha,i+2j+k+l+r) P(beta1,2i+j+k+l) P(beta1,2i+j+k+r) P(beta2,i+j+k+l+2r) P(gamma,2i+2j)",
     "P(gamma+i+j-1,i+j) P(gamma+2i+2j+k+l+r-1,r) P(beta1,2i+j+k) P(gamma,2i+2j+k+l) P(gamma,2i+2j+k+l+2r)",
     "i+j+k+l, i+k+r, j+l+r",
     "2F1(alpha+i+2j+k+l,beta1+2i+j+k+l,gamma+2i+2j+k+l;x) "
     "F2(beta2+i+j+k+l+2r,beta1+2i+j+k+r,alpha+i+2j+k+l+r,gamma+2i+2j+k+l+2r,gamma+2i+2j+k+l+2r;y,z)"},
    {"4.7", "HA(alpha,beta1,beta2,gamma1,gamma2)", false, "",
     "P(alpha,i+j+k) P(beta1,i+j+k) P(beta2,i+j) P(beta2,i+k)", "P(beta2,i) P(gamma1,j+k) P(gamma2,2i+j+k)",
     "j+k, i+j, i+k",
     "2F1(alpha+i+j+k,beta1+i+j+k,gamma1+j+k;x) F3(beta1+i+j,beta2+i+k,beta2+i+j,alpha+i+j+k,gamma2+2i+j+k;y,z)"},
    {"4.8", "HB(alpha,beta1,beta2,gamma1,gamma,gamma)", false, "",
     "P(alpha,j+2k+l) P(beta1,i+j+k+l) P(beta2,2i+j+k) P(beta2,2i+j+l)",
     "P(beta2,2i+j) P(gamma,i) P(gamma,2i+2j+k+l) P(gamma1,k+l)", "k+l, i+j+k, i+j+l",
     "2F1(alpha+j+2k+l,beta1+i+j+k+l,gamma1+k+l;x) "
     "F3(beta2+2i+j+k,alpha+i+j+k+l,beta1+i+j+k,beta2+2i+j+l,gamma+2i+2j+k+l;y,z)"},
    {"4.9", "HC(alpha,beta1,beta2,gamma)", false, "i+j",
     "P(alpha,i+2j+k+l) P(alpha,i+2j+k+r) P(beta1,2i+j+k+l+r) P(beta2,i+j+k+l+r) P(gamma,2i+2j)",
     "P(gamma+i+j-1,i+j) P(alpha,i+2j+k) P(gamma,2i+2j+k+l) P(gamma,2i+2j+k+l+2r)", "i+j+k+l, i+l+r, j+k+r",
     "2F1(alpha+i+2j+k+l,beta1+2i+j+k+l,gamma+2i+2j+k+l;x) "
     "F3(beta2+i+j+k+l+r,beta2+i+j+k+l+r,beta1+2i+j+k+l+r,alpha+i+2j+k+r,gamma+2i+2j+k+l+2r;y,z)"},
    {"4.10", "HA(alpha,beta1,beta2,gamma1,gamma2)", false, "",
     "P(alpha,i+j) P(alpha,i+k) P(beta1,i+j+k) P(beta2,i+j+k) P(gamma2-beta2,k)",
     "P(gamma2+i+j+k-1,k) P(alpha,i) P(gamma1,i+j) P(gamma2,i+j+2k)", "i+j, j+k, i+k",
     "2F1(alpha+i+j,beta1+i+j,gamma1+i+j;x) 2F1(beta2+i+j+k,beta1+i+j+k,gamma2+i+j+2k;y) "
     "2F1(beta2+i+j+k,alpha+i+k,gamma2+i+j+2k;z)"},
    {"4.11", "HB(alpha,beta1,beta2,gamma1,gamma2,gamma3)", false, "",
     "P(alpha,i+j+k) P(beta1,i+j+k) P(beta2,i+j) P(beta2,j+k)", "P(beta2,j) P(gamma1,i+k) P(gamma2,i+j) P(gamma3,j+k)",
     "i+k, i+j, j+k",
     "2F1(alpha+i+j+k,beta1+i+j+k,gamma1+i+k;x) 2F1(beta1+i+j,beta2+i+j,gamma2+i+j;y) "
     "2F1(beta2+j+k,alpha+i+j+k,gamma3+j+k;z)"},
    {"4.12", "HC(alpha,beta1,beta2,gamma)", false, "i+j",
     "P(alpha,i+2j+k+l+r) P(beta1,2i+j+k+l) P(beta1,2i+j+k+r) P(beta2,i+j+k+l+r) P(gamma,2i+2j) "
     "P(gamma-beta2,i+j+r)",
     "P(gamma+i+j-1,i+j) P(gamma+2i+2j+k+l+r-1,r) P(beta1,2i+j+k) P(gamma-beta2,i+j) P(gamma,2i+2j+k+l) "
     "P(gamma,2i+2j+k+l+2r)",
     "i+j+k+l, i+k+r, j+l+r",
     "2F1(alpha+i+2j+k+l,beta1+2i+j+k+l,gamma+2i+2j+k+l;x) "
     "2F1(beta2+i+j+k+l+r,beta1+2i+j+k+r,gamma+2i+2j+k+l+2r;y) "
     "2F1(beta2+i+j+k+l+r,alpha+i+2j+k+l+r,gamma+2i+2j+k+l+2r;z)"},
    {"4.13", "HA(alpha,beta1,beta2,gamma1,gamma2)", true, "", "P(alpha,i+j) P(beta1,i+j) P(beta2,i+j)",
     "P(gamma1,i+j) P(gamma2,i+j)", "i+j, i+j, 0",
     "2F1(alpha+i+j,beta1+i+j,gamma1+i+j;x) 2F1(beta2+i+j,alpha+beta1+2i+j,gamma2+i+j;y)"},
    {"4.14", "HB(alpha,beta1,beta2,gamma1,gamma,gamma)", true, "",
     "P(alpha,i+j+k) P(beta1,i+j+k) P(beta2,2i+j+k)", "P(gamma1,j+k) P(gamma,i) P(gamma,2i+j+k)",
     "j+k, 2i+j+k, 0",
     "2F1(alpha+i+j+k,beta1+i+j+k,gamma1+j+k;x) 2F1(beta2+2i+j+k,alpha+beta1+2i+2j+k,gamma+2i+j+k;y)"},
    {"4.15", "HC(alpha,beta1,beta2,gamma)", true, "i+j",
     "P(alpha,i+2j+k+l) P(beta1,2i+j+k+l) P(beta2,i+j+k+l) P(gamma,2i+2j)",
     "P(gamma+i+j-1,i+j) P(gamma,2i+2j+k+l) P(gamma,2i+2j+k+l)", "i+j+k+l, i+j+k+l, 0",
     "2F1(alpha+i+2j+k+l,beta1+2i+j+k+l,gamma+2i+2j+k+l;x) "
     "2F1(beta2+i+j+k+l,alpha+beta1+3i+3j+2k+l,gamma+2i+2j+k+l;y)"},
    {"7.1", "F1(alpha,beta1,beta1,gamma)", false, "i+j",
     "P(alpha,2i+2j) P(beta1,i) P(beta1,i+j) P(gamma,2i)", "P(gamma+i-1,i) P(gamma,2i+j) P(gamma,2i+j)",
     "i+j, i+j, 0", "F4(alpha+2i+2j,beta1+i+j,gamma+2i+j,gamma+2i+j;x,y)"},
    {"7.2", "F2(alpha,beta1,beta2,gamma,gamma)", false, "", "P(alpha,2i+j) P(beta1,i+j) P(beta2,i+j)",
     "P(gamma,i) P(gamma,2i+2j)", "i+j, i+j, 0", "F3(alpha+2i+j,alpha+2i+j,beta1+i+j,beta2+i+j,gamma+2i+2j;x,y)"},
    {"7.3", "HA(alpha,beta1,beta2,gamma1,beta2)", false, "", "P(alpha,i) P(beta1,i)", "P(gamma1,i)", "i, 0, 0",
     "Binom(beta1+i;y) Binom(alpha+i;z)"},
    {"7.4", "HB(alpha,beta1,beta2,gamma1,beta2,beta2)", false, "", "P(alpha,i+j) P(beta1,i+j)",
     "P(beta2,i) P(gamma1,j)", "j, i, i", "Binom(beta1+i+j;y) Binom(alpha+i+j;z)"},
};

DecompositionEntry from_row(const DecompositionRow& r) {
  return make_decomposition(r.id, r.lhs, r.diagonal, r.sign, r.num, r.den, r.shift, r.factors);
}

}  // namespace

const std::vector<DecompositionEntry>& decomposition_registry() {
  static const std::vector<DecompositionEntry> registry = [] {
    std::vector<DecompositionEntry> out;
    for (const auto& r : kRows) out.push_back(from_row(r));
    return out;
  }();
  return registry;
}

const std::vector<DecompositionEntry>& corrected_decompositions() {
  static const std::vector<DecompositionEntry> corrected = {
      make_decomposition("4.8", "HB(alpha,beta1,beta2,gamma1,gamma,gamma)", false, "",
                         "P(alpha,i+j+k+l) P(beta1,i+j+k+l) P(beta2,2i+j+k) P(beta2,2i+j+l)",
                         "P(beta2,2i+j) P(gamma,i) P(gamma,2i+2j+k+l) P(gamma1,k+l)", "k+l, i+j+k, i+j+l",
                         "2F1(alpha+i+j+k+l,beta1+i+j+k+l,gamma1+k+l;x) "
                         "F3(beta2+2i+j+k,alpha+i+j+k+l,beta1+i+j+k,beta2+2i+j+l,gamma+2i+2j+k+l;y,z)"),
  };
  return corrected;
}

const DecompositionEntry* find_corrected_decomposition(std::string_view id) {
  for (const auto& e : corrected_decompositions())
    if (e.id == id) return &e;
  return nullptr;
}

const DecompositionEntry& find_decomposition(std::string_view id) {
  for (const auto& e : decomposition_registry())
    if (e.id == id) return e;
  throw UnknownIdentity("no decomposition '" + std::string(id) + "'");
}

void for_each_outer_index(const DecompositionEntry& e, unsigned max_degree,
                          const std::function<void(const IndexValues&, unsigned)>& visit) {
  for (unsigned d = 0; d <= max_degree; ++d)
    for (const auto& idx : tuples_at(e, d)) visit(idx, d);
}

Verdict verify_decomposition(std::string_view id, const ExactParams& params, unsigned degree) {
  return verify_decomposition(find_decomposition(id), params, degree);
}

Verdict verify_decomposition(const DecompositionEntry& e, const ExactParams& params, unsigned degree) {
  require_params(e.required_params(), params, "decomposition " + e.id);
  try {
    auto lhs = truncated(e.lhs, bind_params(e.lhs, e.lhs_args, params), degree);
    if (e.diagonal_yz) lhs = lhs.on_diagonal_yz();

    TruncatedSeries::Terms acc;
    for_each_outer_index(e, degree, [&](const IndexValues& idx, unsigned shift_degree) {
      Rational pre = e.sign_exponent.eval_index(idx) % 2 == 0 ? Rational(1) : Rational(-1);
      for (const auto& p : e.num) pre *= pochhammer(p.arg.eval(params, idx), length_of(p, idx, e.id));
      if (pre.is_zero()) return;
      for (const auto& p : e.den) {
        const Rational d = pochhammer(p.arg.eval(params, idx), length_of(p, idx, e.id));
        if (d.is_zero())
          throw SingularParameter("decomposition " + e.id + ": denominator (" + p.arg.str() + ")_{" +
                                  p.length.str() + "} vanishes at " + index_str(idx, e.index_count));
        pre /= d;
      }
      for (unsigned t = 0; t < e.index_count; ++t) pre /= pochhammer(1, static_cast<unsigned>(idx[t]));

      const unsigned residual = degree - shift_degree;
      auto inner = TruncatedSeries::one(residual);
      for (const auto& f : e.factors) {
        if (f.binomial)
          inner = inner * binomial_series(-f.args[0].eval(params, idx), f.vars[0], -1, residual);
        else
          inner = inner * truncated(f.fn, bind_params(f.fn, f.args, params, idx), residual)
                              .embedded(embedding(f.vars));
      }
      const MultiIndex3 shift{static_cast<unsigned>(e.shift[0].eval_index(idx)),
                              static_cast<unsigned>(e.shift[1].eval_index(idx)),
                              static_cast<unsigned>(e.shift[2].eval_index(idx))};
      for (const auto& [k, v] : inner.terms()) acc[k + shift] += v * pre;
    });
    return compare(lhs, TruncatedSeries(degree, std::move(acc)), degree);
  } catch (const BadParams& err) {
    throw SingularParameter(err.what());
  }
}

namespace {

std::array<double, 3> full_point(const DecompositionEntry& e, std::span<const double> point) {
  std::array<double, 3> pt{0.0, 0.0, 0.0};
  const unsigned arity = e.lhs.arity();
  if (e.diagonal_yz) {
    if (point.size() == 3 && point[2] != point[1])
      throw BadParams("decomposition " + e.id + " lives on the diagonal z = y");
    if (point.size() != 2 && point.size() != 3)
      throw ArityMismatch("decomposition " + e.id + " takes (x, y)");
    return {point[0], point[1], point[1]};
  }
  if (point.size() != arity)
    throw ArityMismatch("decomposition " + e.id + " takes " + std::to_string(arity) + " variable(s)");
  std::copy(point.begin(), point.end(), pt.begin());
  return pt;
}

}  // namespace

EvalResult eval_lhs(const DecompositionEntry& e, const FloatParams& params, std::span<const double> point,
                    const EvalOptions& opts) {
  const auto pt = full_point(e, point);
  const FloatParams bound = bind_params(e.lhs, e.lhs_args, params);
  return eval(e.lhs, bound, std::span<const double>(pt.data(), e.lhs.arity()), opts);
}

EvalResult eval_via_decomposition(std::string_view id, const FloatParams& params, std::span<const double> point,
                                  const DecompositionEvalOptions& opts) {
  return eval_via_decomposition(find_decomposition(id), params, point, opts);
}

EvalResult eval_via_decomposition(const DecompositionEntry& e, const FloatParams& params,
                                  std::span<const double> point, const DecompositionEvalOptions& opts) {
  for (const auto& name : e.required_params()) params.get(name);
  const auto pt = full_point(e, point);
  for (double v : pt)
    if (!std::isfinite(v)) throw NonFinite("non-finite evaluation point");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const EvalOptions inner_opts{opts.inner_tol, 400};

  double partial = 0.0, comp = 0.0;  // Neumaier sum
  double total_abs = 0.0, inner_error = 0.0;
  double mag_prev = 0.0, ratio_prev = 0.0;
  unsigned small_run = 0, growth_run = 0, shells = 0;

  EvalResult res;
  res.status = EvalStatus::MaxShellsReached;
  res.abs_error_estimate = std::numeric_limits<double>::infinity();

  // Shift degrees no outer tuple reaches are skipped without counting.
  const unsigned max_gap = *std::max_element(e.index_weight.begin(), e.index_weight.end());
  unsigned empty_run = 0;
  for (unsigned d = 0; shells < opts.outer_cap; ++d) {
    const auto tuples = tuples_at(e, d);
    if (tuples.empty()) {
      if (++empty_run > max_gap) {
        // finitely many outer terms, all summed
        res.status = EvalStatus::Converged;
        res.abs_error_estimate = inner_error + 4.0 * eps * total_abs;
        return res;
      }
      continue;
    }
    empty_run = 0;
    double shell_sum = 0.0, mag = 0.0;
    for (const auto& idx : tuples) {
      ScaledProduct pre;
      if (e.sign_exponent.eval_index(idx) % 2 != 0) pre.mul(-1.0);
      for (const auto& p : e.num) {
        const double a = p.arg.eval(params, idx);
        for (unsigned q = 0, n = length_of(p, idx, e.id); q < n; ++q) pre.mul(a + q);
      }
      if (pre.mant == 0.0) continue;
      for (const auto& p : e.den) {
        const double a = p.arg.eval(params, idx);
        for (unsigned q = 0, n = length_of(p, idx, e.id); q < n; ++q) {
          if (a + q == 0.0)
            throw SingularParameter("decomposition " + e.id + ": denominator (" + p.arg.str() + ")_{" +
                                    p.length.str() + "} vanishes at " + index_str(idx, e.index_count));
          pre.div(a + q);
        }
      }
      for (unsigned t = 0; t < e.index_count; ++t)
        for (long q = 2; q <= idx[t]; ++q) pre.div(static_cast<double>(q));
      for (int ax = 0; ax < 3; ++ax)
        for (long q = 0, n = e.shift[ax].eval_index(idx); q < n; ++q) pre.mul(pt[ax]);
      if (pre.mant == 0.0) continue;

      double rel_err = 0.0;
      for (const auto& f : e.factors) {
        if (f.binomial) {
          const double base = 1.0 - pt[static_cast<int>(f.vars[0])];
          if (base <= 0.0) throw DivergenceSuspected("decomposition " + e.id + ": binomial factor outside |v| < 1");
          pre.mul(std::pow(base, -f.args[0].eval(params, idx)));
          continue;
        }
        std::array<double, 3> sub{};
        for (std::size_t v = 0; v < f.vars.size(); ++v) sub[v] = pt[static_cast<int>(f.vars[v])];
        const auto r = eval(f.fn, bind_params(f.fn, f.args, params, idx),
                            std::span<const double>(sub.data(), f.vars.size()), inner_opts);
        if (r.status != EvalStatus::Converged)
          throw DivergenceSuspected("decomposition " + e.id + ": inner " + f.fn.name() + " did not converge (" +
                                    to_string(r.status) + ") at " + index_str(idx, e.index_count));
        if (r.value == 0.0) {
          pre.mant = 0.0;
          break;
        }
        rel_err += r.abs_error_estimate / std::fabs(r.value);
        pre.mul(r.value);
      }
      const double term = pre.value();
      if (!std::isfinite(term)) throw NonFinite("decomposition " + e.id + ": overflow in an outer term");
      shell_sum += term;
      mag += std::fabs(term);
      inner_error += std::fabs(term) * rel_err;
    }
    ++shells;
    const double t = partial + shell_sum;
    comp += std::fabs(partial) >= std::fabs(shell_sum) ? (partial - t) + shell_sum : (shell_sum - t) + partial;
    partial = t;
    total_abs += mag;
    res.value = partial + comp;
    res.shells_summed = shells;

    const double scale = std::max(1.0, std::fabs(res.value));
    double tail = std::numeric_limits<double>::infinity();
    const double ratio = mag_prev > 0.0 ? mag / mag_prev : (mag == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    if (shells == 1 || mag == 0.0)
      tail = mag == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    else if (ratio < 1.0)
      tail = mag * ratio / (1.0 - ratio);
    res.abs_error_estimate = tail + inner_error + 4.0 * eps * total_abs;

    small_run = mag < opts.tol * scale ? small_run + 1 : 0;
    if (small_run >= 3) {
      res.status = EvalStatus::Converged;
      return res;
    }
    growth_run = (shells > 1 && mag > mag_prev) ? growth_run + 1 : 0;
    if (growth_run >= 5 && std::isfinite(ratio_prev) && ratio + static_cast<double>(shells) * (ratio - ratio_prev) >= 1.0) {
      res.status = EvalStatus::DivergenceSuspected;
      return res;
    }
    mag_prev = mag;
    ratio_prev = ratio;
  }
  return res;
}

}  // namespace hyper3
