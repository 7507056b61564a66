#pragma once

#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hyper3/errors.hpp"
#include "hyper3/rational.hpp"

namespace hyper3 {

/// Named function parameters (alpha, beta1, ..., or a, b, c, b1, ...).
/// Rational for the exact path, double for the float path.
template <class T>
class ParamSet {
 public:
  ParamSet() = default;
  ParamSet(std::initializer_list<std::pair<const std::string, T>> init) : values_(init) {}

  ParamSet& set(std::string name, T value) {
    values_.insert_or_assign(std::move(name), std::move(value));
    return *this;
  }
  bool contains(std::string_view name) const { return values_.find(std::string(name)) != values_.end(); }
  const T& get(std::string_view name) const {
    auto it = values_.find(std::string(name));
    if (it == values_.end()) throw BadParams("missing parameter '" + std::string(name) + "'");
    return it->second;
  }
  const std::map<std::string, T>& values() const { return values_; }

  friend bool operator==(const ParamSet&, const ParamSet&) = default;

 private:
  std::map<std::string, T> values_;
};

using ExactParams = ParamSet<Rational>;
using FloatParams = ParamSet<double>;

FloatParams to_float(const ExactParams& p);

/// Parses "alpha=1/2,beta1=1/3". Exact values must be integers or p/q.
ExactParams parse_exact_params(std::string_view text);
/// Parses "alpha=0.5,beta1=0.33". Fractions are rejected.
FloatParams parse_float_params(std::string_view text);
/// Strict decimal parse; rejects "p/q" and trailing junk.
double parse_decimal(std::string_view text);

/// Canonical parameter names accepted anywhere a ParamSet is read.
const std::vector<std::string>& known_param_names();

}  // namespace hyper3
