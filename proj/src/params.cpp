#include "hyper3/params.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>

namespace hyper3 {

const std::vector<std::string>& known_param_names() {
  static const std::vector<std::string> names = {
      "alpha", "beta1", "beta2", "gamma", "gamma1", "gamma2", "gamma3",
      "a", "a1", "a2", "b", "b1", "b2", "b3", "c", "c1", "c2"};
  return names;
}

FloatParams to_float(const ExactParams& p) {
  FloatParams out;
  for (const auto& [k, v] : p.values()) out.set(k, v.to_double());
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

template <class T, class Parse>
ParamSet<T> parse_assignments(std::string_view text, Parse parse) {
  ParamSet<T> out;
  const auto& names = known_param_names();
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected name=value, got '" + std::string(item) + "'");
    const std::string name(trim(item.substr(0, eq)));
    if (std::find(names.begin(), names.end(), name) == names.end())
      throw ParseError("unknown parameter name '" + name + "'");
    if (out.contains(name)) throw ParseError("parameter '" + name + "' given twice");
    out.set(name, parse(trim(item.substr(eq + 1))));
  }
  return out;
}

}  // namespace

double parse_decimal(std::string_view text) {
  const std::string s(trim(text));
  if (s.empty()) throw ParseError("empty number");
  if (s.find('/') != std::string::npos)
    throw ParseError("'" + s + "' is a fraction; the float path takes decimals");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw ParseError("malformed decimal '" + s + "'");
  return v;
}

ExactParams parse_exact_params(std::string_view text) {
  return parse_assignments<Rational>(text, [](std::string_view v) {
    if (v.find_first_of(".eE") != std::string_view::npos)
      throw ParseError("'" + std::string(v) + "' is a decimal; exact paths take p/q rationals");
    return Rational::parse(v);
  });
}

FloatParams parse_float_params(std::string_view text) {
  return parse_assignments<double>(text, [](std::string_view v) { return parse_decimal(v); });
}

}  // namespace hyper3
