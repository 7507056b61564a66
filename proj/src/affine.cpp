#include "hyper3/affine.hpp"

#include <algorithm>
#include <cctype>

#include "hyper3/errors.hpp"

namespace hyper3 {

namespace {

constexpr std::string_view kIndexLetters = "ijklr";

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

}  // namespace

AffineExpr AffineExpr::parse(std::string_view text) {
  AffineExpr e;
  const auto& names = known_param_names();
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& why) -> AffineExpr {
    throw ParseError("bad expression '" + std::string(text) + "': " + why);
  };
  bool first = true;
  skip_ws();
  if (pos == text.size()) fail("empty");
  while (pos < text.size()) {
    long sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
      skip_ws();
    } else if (!first) {
      fail("expected '+' or '-'");
    }
    first = false;
    long coeff = 1;
    bool has_number = false;
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      coeff = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
        coeff = coeff * 10 + (text[pos++] - '0');
      has_number = true;
    }
    std::size_t start = pos;
    while (pos < text.size() && is_ident_char(text[pos])) ++pos;
    const std::string_view ident = text.substr(start, pos - start);
    if (ident.empty()) {
      if (!has_number) fail("expected a term");
      e.constant_ += sign * coeff;
    } else if (ident.size() == 1 && kIndexLetters.find(ident[0]) != std::string_view::npos) {
      e.index_[kIndexLetters.find(ident[0])] += sign * coeff;
    } else if (std::find(names.begin(), names.end(), ident) != names.end()) {
      e.params_[std::string(ident)] += sign * coeff;
    } else {
      fail("unknown identifier '" + std::string(ident) + "'");
    }
    skip_ws();
  }
  std::erase_if(e.params_, [](const auto& kv) { return kv.second == 0; });
  return e;
}

Rational AffineExpr::eval(const ExactParams& params, const IndexValues& idx) const {
  Rational v(eval_index(idx));
  for (const auto& [name, c] : params_) v += Rational(c) * params.get(name);
  return v;
}

double AffineExpr::eval(const FloatParams& params, const IndexValues& idx) const {
  double v = static_cast<double>(eval_index(idx));
  for (const auto& [name, c] : params_) v += static_cast<double>(c) * params.get(name);
  return v;
}

long AffineExpr::eval_index(const IndexValues& idx) const {
  long v = constant_;
  for (std::size_t i = 0; i < idx.size(); ++i) v += index_[i] * idx[i];
  return v;
}

std::vector<std::string> AffineExpr::param_names() const {
  std::vector<std::string> out;
  for (const auto& kv : params_) out.push_back(kv.first);
  return out;
}

std::string AffineExpr::str() const {
  std::string out;
  auto term = [&](long c, std::string_view name) {
    if (c == 0) return;
    if (c < 0)
      out += "-";
    else if (!out.empty())
      out += "+";
    const long a = c < 0 ? -c : c;
    if (name.empty() || a != 1) out += std::to_string(a);
    out += name;
  };
  for (const auto& [name, c] : params_) term(c, name);
  for (std::size_t i = 0; i < index_.size(); ++i) term(index_[i], kIndexLetters.substr(i, 1));
  term(constant_, "");
  return out.empty() ? "0" : out;
}

unsigned index_count(const std::vector<const AffineExpr*>& exprs) {
  std::array<bool, 5> used{};
  for (const auto* e : exprs)
    for (std::size_t i = 0; i < used.size(); ++i)
      if (e->index_coeff(i) != 0) used[i] = true;
  unsigned n = 0;
  while (n < used.size() && used[n]) ++n;
  for (std::size_t i = n; i < used.size(); ++i)
    if (used[i]) throw ParseError("summation indices must be used in the order i, j, k, l, r");
  return n;
}

std::vector<CallSpec> CallSpec::parse_list(std::string_view text) {
  std::vector<CallSpec> out;
  std::size_t pos = 0;
  while (true) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == text.size()) break;
    const auto open = text.find('(', pos);
    const auto close = text.find(')', pos);
    if (open == std::string_view::npos || close == std::string_view::npos || close < open)
      throw ParseError("bad call list '" + std::string(text) + "'");
    CallSpec call;
    call.name = std::string(text.substr(pos, open - pos));
    std::string_view inside = text.substr(open + 1, close - open - 1);
    std::string_view vars;
    if (const auto semi = inside.find(';'); semi != std::string_view::npos) {
      vars = inside.substr(semi + 1);
      inside = inside.substr(0, semi);
    }
    while (!inside.empty()) {
      const auto comma = inside.find(',');
      call.args.push_back(AffineExpr::parse(inside.substr(0, comma)));
      inside = comma == std::string_view::npos ? std::string_view{} : inside.substr(comma + 1);
    }
    for (char c : vars) {
      if (c == 'x') call.vars.push_back(Axis::X);
      else if (c == 'y') call.vars.push_back(Axis::Y);
      else if (c == 'z') call.vars.push_back(Axis::Z);
      else if (c != ',' && c != ' ') throw ParseError("bad variable list in '" + std::string(text) + "'");
    }
    out.push_back(std::move(call));
    pos = close + 1;
  }
  return out;
}

}  // namespace hyper3
