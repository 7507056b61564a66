#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyper3/affine.hpp"
#include "hyper3/catalog.hpp"
#include "hyper3/params.hpp"
#include "hyper3/series.hpp"

namespace hyper3 {

enum class OpKind { Nabla, Delta, NablaTilde, DeltaTilde };

/// A diagonal symbolic operator. Nabla/Delta act on the pair (a, b);
/// NablaTilde/DeltaTilde take `a` as the lead axis against the other two.
struct DiagonalOp {
  OpKind kind = OpKind::Nabla;
  Axis a = Axis::X;
  Axis b = Axis::Y;
  Rational h = 1;

  static DiagonalOp nabla(Axis a, Axis b, Rational h) { return {OpKind::Nabla, a, b, std::move(h)}; }
  static DiagonalOp delta(Axis a, Axis b, Rational h) { return {OpKind::Delta, a, b, std::move(h)}; }
  static DiagonalOp nabla_tilde(Axis lead, Rational h) { return {OpKind::NablaTilde, lead, lead, std::move(h)}; }
  static DiagonalOp delta_tilde(Axis lead, Rational h) { return {OpKind::DeltaTilde, lead, lead, std::move(h)}; }

  /// The operator with reciprocal eigenvalues.
  DiagonalOp inverse() const;
  std::string str() const;
};

struct OperatorChain {
  std::vector<DiagonalOp> ops;
  std::string str() const;
};

/// Closed-form eigenvalue on x^m y^n z^p. Throws SingularParameter.
Rational eigenvalue(const DiagonalOp& op, const MultiIndex3& idx);
Rational eigenvalue(const OperatorChain& chain, const MultiIndex3& idx);

/// Multiplies every coefficient by the chain eigenvalue at its index.
TruncatedSeries apply(const OperatorChain& chain, const TruncatedSeries& s);

/// Terminating operator series on a monomial (the sums terminate because
/// (-m)_k vanishes for k > m). `alternate` selects the second series form
/// of Delta and DeltaTilde; Nabla operators have only one.
Rational operator_series(const DiagonalOp& op, const MultiIndex3& idx, bool alternate = false);

/// Readings of the displayed series for Nabla(h) Delta(l) on x^m y^n, whose
/// printed factor "(l)_{2l}" is ambiguous.
enum class ProductReading {
  FirstSeriesL2k,      ///< first series with (l)_{2k}
  SecondSeriesL2k,     ///< second series with (l)_{2k}
  SecondSeriesNoFactor ///< second series with the factor dropped
};

const char* to_string(ProductReading r);
Rational product_series(const Rational& h, const Rational& l, unsigned m, unsigned n, ProductReading reading);

struct ProductReadingResult {
  ProductReading reading;
  bool holds = true;
  std::optional<std::pair<unsigned, unsigned>> first_counterexample;
};

/// Compares each reading with eigenvalue(Nabla(h)) * eigenvalue(Delta(l))
/// for all exponents m, n <= max_exponent.
std::vector<ProductReadingResult> check_product_readings(const Rational& h, const Rational& l,
                                                         unsigned max_exponent);

/// Outcome of an exact coefficient comparison.
struct Verdict {
  enum class Status { Verified, Failed };
  Status status = Status::Verified;
  unsigned degree = 0;
  MultiIndex3 first_bad_index;
  Rational expected;
  Rational actual;

  bool verified() const { return status == Status::Verified; }
  /// "VERIFIED to degree N" or "FAILED at (m,n,p): expected E, actual A".
  std::string str() const;
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Compares `expected` and `actual` on all indices up to `degree` and
/// reports the graded-lex first mismatch.
Verdict compare(const TruncatedSeries& expected, const TruncatedSeries& actual, unsigned degree);

/// Diagonal operator whose parameter is an expression in the identity's
/// parameters.
struct OpSpec {
  OpKind kind;
  Axis a;
  Axis b;
  AffineExpr h;
};

/// A catalog function applied to bound parameters, its variables mapped into
/// (x, y, z) in order.
struct FactorSpec {
  FunctionId fn;
  std::vector<AffineExpr> args;
  std::vector<Axis> vars;
};

struct IdentityEntry {
  std::string id;
  FunctionId lhs;
  std::vector<AffineExpr> lhs_args;
  std::vector<OpSpec> chain;
  std::vector<FactorSpec> factors;

  /// Parameter names the identity reads.
  std::vector<std::string> required_params() const;
};

/// Builds an entry from the compact table notation used by the registry:
/// lhs "HA(alpha,beta1,beta2,gamma1,gamma2)", chain "Nxz(alpha) Dyz(gamma2)
/// DTx(gamma)", factors "2F1(alpha,beta1,gamma1;x) F1(beta2,beta1,alpha,gamma2;y,z)".
IdentityEntry make_identity(std::string id, std::string_view lhs, std::string_view chain,
                            std::string_view factors);

/// Identities exactly as printed.
const std::vector<IdentityEntry>& identity_registry();
/// Repaired forms of printed identities that fail, keyed by the same id.
const std::vector<IdentityEntry>& corrected_identities();
/// nullptr when `id` has no corrected form.
const IdentityEntry* find_corrected_identity(std::string_view id);
/// Throws UnknownIdentity.
const IdentityEntry& find_identity(std::string_view id);

/// Binds positional arguments to the catalog parameter names of `fn`.
ExactParams bind_params(FunctionId fn, const std::vector<AffineExpr>& args, const ExactParams& params,
                        const IndexValues& idx = {});
FloatParams bind_params(FunctionId fn, const std::vector<AffineExpr>& args, const FloatParams& params,
                        const IndexValues& idx = {});

OperatorChain bind_chain(const std::vector<OpSpec>& chain, const ExactParams& params);

/// Builds both sides to total degree `degree` and compares them exactly.
/// Throws UnknownIdentity, BadParams (missing parameters), SingularParameter.
Verdict verify_operator_identity(std::string_view id, const ExactParams& params, unsigned degree);
Verdict verify_operator_identity(const IdentityEntry& entry, const ExactParams& params, unsigned degree);

/// Parameters an expression list needs that `params` lacks; throws BadParams.
void require_params(const std::vector<std::string>& names, const ExactParams& params, std::string_view what);

}  // namespace hyper3
