#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyper3/affine.hpp"
#include "hyper3/catalog.hpp"
#include "hyper3/operators.hpp"

namespace hyper3 {

/// Pochhammer symbol (arg)_{length} with both parts depending on the outer indices.
struct PochSpec {
  AffineExpr arg;
  AffineExpr length;
};

/// Inner factor of a decomposition term: a catalog function, or the binomial
/// (1 - v)^(-e) written "Binom(e; v)".
struct InnerFactor {
  bool binomial = false;
  FunctionId fn;
  std::vector<AffineExpr> args;
  std::vector<Axis> vars;
};

/// One expansion formula: the left side equals
///   sum over outer indices of sign * num/den / (i! j! ...) * x^a y^b z^c * product of inner factors.
struct DecompositionEntry {
  std::string id;
  FunctionId lhs;
  std::vector<AffineExpr> lhs_args;
  /// Left side taken on the diagonal z = y.
  bool diagonal_yz = false;
  unsigned index_count = 0;
  AffineExpr sign_exponent;
  std::vector<PochSpec> num;
  std::vector<PochSpec> den;
  std::array<AffineExpr, 3> shift;
  std::vector<InnerFactor> factors;
  /// Total shift degree contributed by one unit of each outer index.
  std::vector<unsigned> index_weight;

  std::vector<std::string> required_params() const;
};

/// Builds an entry from table notation: lhs "HA(alpha,beta1,beta2,gamma1,gamma2)",
/// sign exponent "i+j" (may be empty), Pochhammer lists "P(alpha,i+j) P(beta1,i+j)",
/// shift "i+j, j, i" and factors "2F1(alpha+i,beta1,gamma1;x) Binom(alpha+i;z)".
/// Throws ParseError when some outer index does not raise the monomial degree.
DecompositionEntry make_decomposition(std::string id, std::string_view lhs, bool diagonal_yz,
                                      std::string_view sign, std::string_view num, std::string_view den,
                                      std::string_view shift, std::string_view factors);

/// Formulas exactly as printed.
const std::vector<DecompositionEntry>& decomposition_registry();
/// Repaired forms of printed formulas that fail, keyed by the same id.
const std::vector<DecompositionEntry>& corrected_decompositions();
const DecompositionEntry* find_corrected_decomposition(std::string_view id);
/// Throws UnknownIdentity.
const DecompositionEntry& find_decomposition(std::string_view id);

/// Calls `visit(idx, shift_degree)` for every outer index tuple whose
/// monomial shift has total degree <= max_degree, in increasing shift degree.
void for_each_outer_index(const DecompositionEntry& e, unsigned max_degree,
                          const std::function<void(const IndexValues&, unsigned)>& visit);

/// Sums the right side exactly to total degree `degree` and compares it with
/// the left side. Throws UnknownIdentity, BadParams (missing parameters),
/// SingularParameter.
Verdict verify_decomposition(std::string_view id, const ExactParams& params, unsigned degree);
Verdict verify_decomposition(const DecompositionEntry& entry, const ExactParams& params, unsigned degree);

struct DecompositionEvalOptions {
  unsigned outer_cap = 60;
  double tol = 1e-10;
  double inner_tol = 1e-13;
};

/// Sums the right side numerically, shell by shell in outer shift degree.
/// `point` is (x, y, z); for diagonal entries it may also be (x, y), and a
/// given z must equal y. Throws DivergenceSuspected when an inner factor
/// does not converge, SingularParameter, BadParams.
EvalResult eval_via_decomposition(std::string_view id, const FloatParams& params, std::span<const double> point,
                                  const DecompositionEvalOptions& opts = {});
EvalResult eval_via_decomposition(const DecompositionEntry& entry, const FloatParams& params,
                                  std::span<const double> point, const DecompositionEvalOptions& opts = {});

/// Direct series value of the entry's left side at `point` (z := y on the diagonal).
EvalResult eval_lhs(const DecompositionEntry& entry, const FloatParams& params, std::span<const double> point,
                    const EvalOptions& opts = {});

}  // namespace hyper3
