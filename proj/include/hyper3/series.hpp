#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hyper3/rational.hpp"

namespace hyper3 {

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

char axis_name(Axis a);

/// Exponent triple (m, n, p) of x^m y^n z^p.
struct MultiIndex3 {
  unsigned m = 0;
  unsigned n = 0;
  unsigned p = 0;

  unsigned degree() const { return m + n + p; }
  unsigned operator[](Axis a) const { return a == Axis::X ? m : (a == Axis::Y ? n : p); }
  unsigned& operator[](Axis a) { return a == Axis::X ? m : (a == Axis::Y ? n : p); }
  std::array<unsigned, 3> as_array() const { return {m, n, p}; }

  friend MultiIndex3 operator+(MultiIndex3 a, const MultiIndex3& b) {
    return {a.m + b.m, a.n + b.n, a.p + b.p};
  }
  friend bool operator==(const MultiIndex3&, const MultiIndex3&) = default;

  /// Graded lexicographic: lower total degree first, then larger m, then larger n.
  friend bool operator<(const MultiIndex3& a, const MultiIndex3& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    if (a.m != b.m) return a.m > b.m;
    return a.n > b.n;
  }

  std::string str() const;
};

/// All indices with total degree <= cap, in graded-lex order.
std::vector<MultiIndex3> graded_indices(unsigned cap);

/// Rising factorial a (a+1) ... (a+k-1); 1 when k == 0.
Rational pochhammer(const Rational& a, unsigned k);

template <class T>
T rising(T a, unsigned k) {
  T r = T(1);
  for (unsigned i = 0; i < k; ++i) r *= a + T(i);
  return r;
}

/// Total-degree-capped trivariate power series with exact coefficients.
/// Values are immutable; every operation returns a new series.
class TruncatedSeries {
 public:
  using Terms = std::map<MultiIndex3, Rational>;

  explicit TruncatedSeries(unsigned cap) : cap_(cap) {}
  /// Drops zero coefficients and indices above the cap.
  TruncatedSeries(unsigned cap, Terms terms);

  static TruncatedSeries one(unsigned cap);
  static TruncatedSeries monomial(unsigned cap, MultiIndex3 idx, Rational coeff = 1);

  unsigned cap() const { return cap_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  Rational coeff(const MultiIndex3& idx) const;

  TruncatedSeries operator+(const TruncatedSeries& o) const;
  TruncatedSeries operator-(const TruncatedSeries& o) const;
  TruncatedSeries scaled(const Rational& s) const;
  /// Multiplies by the monomial `by`, discarding terms above the cap.
  TruncatedSeries shifted(const MultiIndex3& by) const;
  /// Same coefficients with a different cap (terms above it are dropped).
  TruncatedSeries with_cap(unsigned cap) const;
  /// Relabels variables: exponent on axis k of this series moves to axis target[k].
  TruncatedSeries embedded(const std::array<Axis, 3>& target) const;
  /// Substitutes z -> y.
  TruncatedSeries on_diagonal_yz() const;

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.cap_ == b.cap_ && a.terms_ == b.terms_;
  }

  std::string str() const;

 private:
  unsigned cap_;
  Terms terms_;
};

/// Cauchy product truncated to the common cap. Throws CapMismatch.
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);
inline TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  return series_mul(a, b);
}

/// (1 + sign*v)^exponent in the variable `var`, sign = +1 or -1.
TruncatedSeries binomial_series(const Rational& exponent, Axis var, int sign, unsigned cap);

}  // namespace hyper3
