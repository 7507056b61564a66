#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hyper3/params.hpp"
#include "hyper3/series.hpp"

namespace hyper3 {

/// Values of the summation indices i, j, k, l, r (in that order).
using IndexValues = std::array<long, 5>;

/// Integer-coefficient affine combination of parameter names and summation
/// indices plus an integer constant, e.g. "gamma+2i+j-1" or "gamma2-beta2".
class AffineExpr {
 public:
  AffineExpr() = default;
  /// Throws ParseError on unknown identifiers or malformed input.
  static AffineExpr parse(std::string_view text);

  Rational eval(const ExactParams& params, const IndexValues& idx = {}) const;
  double eval(const FloatParams& params, const IndexValues& idx = {}) const;
  /// Value of an expression that mentions no parameters.
  long eval_index(const IndexValues& idx) const;

  bool uses_params() const { return !params_.empty(); }
  /// Parameter names referenced with a nonzero coefficient.
  std::vector<std::string> param_names() const;
  /// Coefficient of index letter `pos` (0 = i, ..., 4 = r).
  long index_coeff(std::size_t pos) const { return index_[pos]; }
  long constant() const { return constant_; }

  std::string str() const;

 private:
  std::map<std::string, long> params_;
  std::array<long, 5> index_{};
  long constant_ = 0;
};

/// Number of distinct index letters an expression list refers to; the
/// letters must be used as a prefix of "ijklr".
unsigned index_count(const std::vector<const AffineExpr*>& exprs);

/// One call "Name(arg, arg; var, var)" from a registry table.
struct CallSpec {
  std::string name;
  std::vector<AffineExpr> args;
  std::vector<Axis> vars;

  /// Parses a whitespace-separated list of calls.
  static std::vector<CallSpec> parse_list(std::string_view text);
};

}  // namespace hyper3
