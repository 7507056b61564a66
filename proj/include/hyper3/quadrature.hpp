#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hyper3/catalog.hpp"

namespace hyper3 {

/// Integral representations of HA, HB and HC.
///   R5_1, R6_1        HA on [0,1]^2
///   R5_10, R6_2       HB on [0,1]^3
///   R6_4 / R6_5       HA on [0,inf)^3 / [0,inf)^2
///   R6_6 / R6_7       HB on [0,inf)^3 / [0,inf)^2
///   R6_8              HC on [0,inf)^3
enum class IntegralRep { R5_1, R5_10, R6_1, R6_2, R6_4, R6_5, R6_6, R6_7, R6_8 };

enum class QuadRule { GaussLegendre01, GaussLaguerre };

const std::vector<IntegralRep>& all_reps();
const char* to_string(IntegralRep rep);
/// Accepts "R6_4" and "6.4". Throws UnknownIdentity.
IntegralRep parse_rep(std::string_view text);

struct RepInfo {
  FunctionId target;
  QuadRule rule;
  unsigned dims;
};
RepInfo rep_info(IntegralRep rep);

struct QuadConfig {
  unsigned nodes_per_axis = 32;
  /// Maps Legendre nodes through t^2 (3 - 2t), which lifts the endpoint
  /// behaviour t^e to t^(2e+1) and keeps half-integer exponents analytic.
  bool endpoint_map = true;
};

struct NodeRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [0, 1].
NodeRule gauss_legendre01(unsigned n);
/// n-point generalized Gauss-Laguerre rule for the weight t^a e^(-t), a > -1;
/// the weights sum to Gamma(a + 1).
NodeRule gauss_laguerre(unsigned n, double a);

/// Checks the printed positivity conditions of `rep` and, for [0,1] domains,
/// that every endpoint exponent is nonnegative. Throws ConstraintViolated,
/// BadParams (missing parameter).
void check_constraints(IntegralRep rep, const FloatParams& params);

/// Tensor-product quadrature with nodes_per_axis points per axis. The error
/// estimate is |Q_n - Q_2n|. Throws ConstraintViolated, IntegrandSingular,
/// ArityMismatch, BadParams.
EvalResult quad_eval(IntegralRep rep, const FloatParams& params, std::span<const double> point,
                     const QuadConfig& cfg = {});

struct SweepRow {
  std::string rep;
  std::string profile;
  std::array<double, 3> point{};
  unsigned nodes = 0;
  /// "agree", "disagree" or "error".
  std::string status;
  double quad = 0.0;
  double series = 0.0;
  double rel_diff = 0.0;
  double abs_error_estimate = 0.0;
  std::string error;
};

struct SweepReport {
  std::string version;
  double tol = 0.0;
  std::vector<SweepRow> entries;

  bool any_failed() const;
};

struct NamedFloatParams {
  std::string name;
  FloatParams params;
};

/// Two parameter sets satisfying the constraints of every representation.
std::vector<NamedFloatParams> quad_profile();
std::vector<std::array<double, 3>> quad_points();

/// Compares quad_eval with the direct series for every (rep, set, point);
/// rows are ordered by rep, set, point. Per-cell errors become rows.
SweepReport consistency_sweep(const std::vector<IntegralRep>& reps, const std::vector<NamedFloatParams>& profile,
                              const std::vector<std::array<double, 3>>& points, const QuadConfig& cfg,
                              double tol = 1e-6, unsigned threads = 0);

nlohmann::ordered_json to_json(const SweepReport& report);
std::string to_table(const SweepReport& report);

}  // namespace hyper3
