#include "hyper3/series.hpp"

#include <sstream>

#include "hyper3/errors.hpp"

namespace hyper3 {

char axis_name(Axis a) { return a == Axis::X ? 'x' : (a == Axis::Y ? 'y' : 'z'); }

std::string MultiIndex3::str() const {
  return "(" + std::to_string(m) + "," + std::to_string(n) + "," + std::to_string(p) + ")";
}

std::vector<MultiIndex3> graded_indices(unsigned cap) {
  std::vector<MultiIndex3> out;
  out.reserve(static_cast<std::size_t>(cap + 1) * (cap + 2) * (cap + 3) / 6);
  for (unsigned d = 0; d <= cap; ++d)
    for (unsigned m = d + 1; m-- > 0;)
      for (unsigned n = d - m + 1; n-- > 0;) out.push_back({m, n, d - m - n});
  return out;
}

Rational pochhammer(const Rational& a, unsigned k) {
  mpq_class r(1);
  mpq_class f = a.raw();
  for (unsigned i = 0; i < k; ++i) {
    r *= f;
    if (sgn(r) == 0) break;
    f += 1;
  }
  return Rational(std::move(r));
}

TruncatedSeries::TruncatedSeries(unsigned cap, Terms terms) : cap_(cap), terms_(std::move(terms)) {
  std::erase_if(terms_, [cap](const auto& kv) { return kv.first.degree() > cap || kv.second.is_zero(); });
}

TruncatedSeries TruncatedSeries::one(unsigned cap) { return monomial(cap, {}, 1); }

TruncatedSeries TruncatedSeries::monomial(unsigned cap, MultiIndex3 idx, Rational coeff) {
  Terms t;
  t.emplace(idx, std::move(coeff));
  return TruncatedSeries(cap, std::move(t));
}

Rational TruncatedSeries::coeff(const MultiIndex3& idx) const {
  auto it = terms_.find(idx);
  return it == terms_.end() ? Rational(0) : it->second;
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
  if (cap_ != o.cap_) throw CapMismatch("series addition with caps " + std::to_string(cap_) + " and " + std::to_string(o.cap_));
  Terms t = terms_;
  for (const auto& [k, v] : o.terms_) t[k] += v;
  return TruncatedSeries(cap_, std::move(t));
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
  return *this + o.scaled(-1);
}

TruncatedSeries TruncatedSeries::scaled(const Rational& s) const {
  Terms t;
  if (!s.is_zero())
    for (const auto& [k, v] : terms_) t.emplace_hint(t.end(), k, v * s);
  return TruncatedSeries(cap_, std::move(t));
}

TruncatedSeries TruncatedSeries::shifted(const MultiIndex3& by) const {
  Terms t;
  for (const auto& [k, v] : terms_) {
    const MultiIndex3 idx = k + by;
    if (idx.degree() <= cap_) t.emplace(idx, v);
  }
  return TruncatedSeries(cap_, std::move(t));
}

TruncatedSeries TruncatedSeries::with_cap(unsigned cap) const { return TruncatedSeries(cap, terms_); }

TruncatedSeries TruncatedSeries::embedded(const std::array<Axis, 3>& target) const {
  Terms t;
  for (const auto& [k, v] : terms_) {
    MultiIndex3 idx;
    idx[target[0]] += k.m;
    idx[target[1]] += k.n;
    idx[target[2]] += k.p;
    t[idx] += v;
  }
  return TruncatedSeries(cap_, std::move(t));
}

TruncatedSeries TruncatedSeries::on_diagonal_yz() const {
  Terms t;
  for (const auto& [k, v] : terms_) t[MultiIndex3{k.m, k.n + k.p, 0}] += v;
  return TruncatedSeries(cap_, std::move(t));
}

std::string TruncatedSeries::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << v.str();
    if (k.m) os << "*x^" << k.m;
    if (k.n) os << "*y^" << k.n;
    if (k.p) os << "*z^" << k.p;
  }
  return os.str();
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.cap() != b.cap())
    throw CapMismatch("series product with caps " + std::to_string(a.cap()) + " and " + std::to_string(b.cap()));
  const unsigned cap = a.cap();
  TruncatedSeries::Terms t;
  mpq_class prod;
  for (const auto& [ka, va] : a.terms()) {
    if (ka.degree() > cap) continue;
    const unsigned budget = cap - ka.degree();
    for (const auto& [kb, vb] : b.terms()) {
      // b's terms are graded, so everything after this one is too heavy.
      if (kb.degree() > budget) break;
      prod = va.raw() * vb.raw();
      auto [it, inserted] = t.try_emplace(ka + kb, Rational(prod));
      if (!inserted) it->second += Rational(prod);
    }
  }
  return TruncatedSeries(cap, std::move(t));
}

TruncatedSeries binomial_series(const Rational& exponent, Axis var, int sign, unsigned cap) {
  // (1 + s v)^e = sum_k (-e)_k (-s)^k / k! v^k
  TruncatedSeries::Terms t;
  Rational c = 1;
  const Rational neg_e = -exponent;
  const Rational step_sign = sign > 0 ? Rational(-1) : Rational(1);
  for (unsigned k = 0; k <= cap && !c.is_zero(); ++k) {
    MultiIndex3 idx;
    idx[var] = k;
    t.emplace(idx, c);
    c *= (neg_e + Rational(static_cast<long>(k))) * step_sign / Rational(static_cast<long>(k + 1));
  }
  return TruncatedSeries(cap, std::move(t));
}

}  // namespace hyper3
