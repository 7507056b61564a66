#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hyper3/operators.hpp"
#include "hyper3/params.hpp"

namespace hyper3 {

inline constexpr const char* kVersion = "1.0.0";

struct NamedParams {
  std::string name;
  ExactParams params;
};

/// The parameter sets an audit runs over.
struct Profile {
  std::string name;
  std::vector<NamedParams> sets;
  std::uint64_t seed = 0;
};

/// "default" (one set), "generic" (three unrelated sets) or "random" (three
/// sets drawn from `seed`). Throws BadParams for other names.
Profile make_profile(std::string_view name, std::uint64_t seed = 0);

/// Three rational parameter sets drawn with mt19937_64. Every value is a
/// positive non-integer with denominator at most 9; gamma-type values exceed 2.
std::vector<NamedParams> random_param_sets(std::uint64_t seed, unsigned count = 3);

enum class RowStatus { Verified, Failed, Error };
const char* to_string(RowStatus s);

struct AuditRow {
  std::string id;
  std::string kind;  // "identity" or "decomposition"
  std::string profile;
  RowStatus status = RowStatus::Verified;
  unsigned degree_checked = 0;
  std::optional<MultiIndex3> first_bad_index;
  std::optional<Rational> expected;
  std::optional<Rational> actual;
  std::string error;
  double ms = 0.0;
};

struct AuditSummary {
  unsigned verified = 0;
  unsigned failed = 0;
  unsigned error = 0;
};

/// Verdict of one registry entry over every set of the profile: verified
/// only when all sets verify.
struct GenericityRow {
  std::string id;
  std::string kind;
  RowStatus status = RowStatus::Verified;
  unsigned sets = 0;
};

struct AuditReport {
  std::string version = kVersion;
  unsigned degree = 0;
  std::uint64_t seed = 0;
  Profile profile;
  std::vector<AuditRow> entries;
  /// Repaired forms of failing entries, run over the same profile.
  std::vector<AuditRow> corrected;

  AuditSummary summary() const;
  std::vector<GenericityRow> genericity() const;
  bool any_failed() const;
};

struct AuditOptions {
  /// 0 reads HYPER3_THREADS, falling back to the hardware concurrency.
  unsigned threads = 0;
  bool include_corrected = true;
};

/// Verifies every operator identity and decomposition at every set of the
/// profile. Failed verdicts and per-entry errors become rows; throws BadParams
/// when degree < 2.
AuditReport run_audit(const Profile& profile, unsigned degree, const AuditOptions& opts = {});

/// Ordering key for ids like "3.15" and "4.2": numeric by section, then item.
bool id_less(std::string_view a, std::string_view b);

/// JSON document. Timings are omitted when `timings` is false, which makes
/// the output a deterministic function of (profile, degree, seed).
nlohmann::ordered_json to_json(const AuditReport& report, bool timings = true);
std::string to_table(const AuditReport& report);

nlohmann::ordered_json index_json(const MultiIndex3& idx);

}  // namespace hyper3
