#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyper3/params.hpp"
#include "hyper3/series.hpp"

namespace hyper3 {

enum class FunctionKind {
  Gauss2F1,
  Hyp0F1,
  Hyp1F1,
  AppellF1,
  AppellF2,
  AppellF3,
  AppellF4,
  HumbertPsi2,
  LauricellaFD,
  HA,
  HB,
  HC,
};

/// A catalog function. `r` is the number of variables of LauricellaFD (1..3)
/// and is ignored for every other kind.
struct FunctionId {
  FunctionKind kind = FunctionKind::Gauss2F1;
  unsigned r = 0;

  /// Accepts "2F1", "0F1", "1F1", "F1".."F4", "Psi2", "FD1".."FD3", "HA",
  /// "HB", "HC" and the long spellings ("Gauss2F1", "AppellF2", ...).
  static FunctionId parse(std::string_view name);

  std::string name() const;
  unsigned arity() const;
  /// Positional parameter order, e.g. {"a","b1","b2","c"} for AppellF1.
  std::vector<std::string> param_names() const;

  friend bool operator==(const FunctionId&, const FunctionId&) = default;
};

/// One Pochhammer factor (param)_{w.m + w.n + w.p} of a series coefficient.
struct PochhammerFactor {
  std::string param;
  std::array<std::uint8_t, 3> weight;
  bool denominator;
};

/// Coefficient structure of `fn`; factorials m! n! p! over the active
/// variables are implied.
std::vector<PochhammerFactor> coefficient_shape(FunctionId fn);

/// Exact coefficient of x^m y^n z^p. Throws ArityMismatch, BadParams.
Rational coeff(FunctionId fn, const ExactParams& params, const MultiIndex3& idx);

/// All coefficients up to total degree `cap`. Throws BadParams when a
/// denominator Pochhammer vanishes within the cap.
TruncatedSeries truncated(FunctionId fn, const ExactParams& params, unsigned cap);

enum class EvalStatus { Converged, MaxShellsReached, DivergenceSuspected };

const char* to_string(EvalStatus s);

struct EvalOptions {
  double tol = 1e-12;
  unsigned max_shells = 400;
};

struct EvalResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  unsigned shells_summed = 0;
  EvalStatus status = EvalStatus::Converged;
};

/// Sums the defining series by total-degree shells. Throws BadParams,
/// ArityMismatch, NonFinite.
EvalResult eval(FunctionId fn, const FloatParams& params, std::span<const double> point,
                const EvalOptions& opts = {});

}  // namespace hyper3
