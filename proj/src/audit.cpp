#include "hyper3/audit.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

#include "hyper3/decomposition.hpp"
#include "hyper3/parallel.hpp"

namespace hyper3 {

namespace {

NamedParams p1() {
  return {"p1",
          {{"alpha", Rational(1, 2)}, {"beta1", Rational(1, 3)}, {"beta2", Rational(1, 4)},
           {"gamma", Rational(8, 3)}, {"gamma1", Rational(5, 2)}, {"gamma2", Rational(7, 3)},
           {"gamma3", Rational(9, 4)}}};
}

NamedParams p2() {
  return {"p2",
          {{"alpha", Rational(2, 7)}, {"beta1", Rational(3, 5)}, {"beta2", Rational(5, 9)},
           {"gamma", Rational(17, 6)}, {"gamma1", Rational(11, 3)}, {"gamma2", Rational(13, 4)},
           {"gamma3", Rational(19, 7)}}};
}

NamedParams p3() {
  return {"p3",
          {{"alpha", Rational(4, 3)}, {"beta1", Rational(7, 4)}, {"beta2", Rational(2, 5)},
           {"gamma", Rational(23, 7)}, {"gamma1", Rational(15, 4)}, {"gamma2", Rational(29, 9)},
           {"gamma3", Rational(31, 8)}}};
}

std::pair<long, long> split_id(std::string_view id) {
  const auto dot = id.find('.');
  const auto num = [](std::string_view s) {
    long v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') return -1L;
      v = v * 10 + (c - '0');
    }
    return v;
  };
  if (dot == std::string_view::npos) return {num(id), 0};
  return {num(id.substr(0, dot)), num(id.substr(dot + 1))};
}

struct Task {
  std::string id;
  std::string kind;
  const NamedParams* set;
  std::function<Verdict(const ExactParams&, unsigned)> run;
};

AuditRow execute(const Task& t, unsigned degree) {
  AuditRow row;
  row.id = t.id;
  row.kind = t.kind;
  row.profile = t.set->name;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Verdict v = t.run(t.set->params, degree);
    row.degree_checked = degree;
    if (v.verified()) {
      row.status = RowStatus::Verified;
    } else {
      row.status = RowStatus::Failed;
      row.first_bad_index = v.first_bad_index;
      row.expected = v.expected;
      row.actual = v.actual;
    }
  } catch (const Error& e) {
    row.status = RowStatus::Error;
    row.error = std::string(e.kind()) + ": " + e.what();
  } catch (const std::exception& e) {
    row.status = RowStatus::Error;
    row.error = e.what();
  }
  const auto us =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
  row.ms = static_cast<double>(us) / 1000.0;
  return row;
}

std::vector<AuditRow> run_tasks(const std::vector<Task>& tasks, unsigned degree, unsigned threads) {
  std::vector<AuditRow> rows(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t i) { rows[i] = execute(tasks[i], degree); });
  std::stable_sort(rows.begin(), rows.end(), [](const AuditRow& a, const AuditRow& b) {
    if (a.id != b.id) return id_less(a.id, b.id);
    return a.profile < b.profile;
  });
  return rows;
}

}  // namespace

bool id_less(std::string_view a, std::string_view b) {
  const auto ka = split_id(a), kb = split_id(b);
  if (ka != kb) return ka < kb;
  return a < b;
}

std::vector<NamedParams> random_param_sets(std::uint64_t seed, unsigned count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> den(2, 9);
  auto draw = [&](long lo_whole, long hi_whole) {
    for (;;) {
      const long d = den(rng);
      std::uniform_int_distribution<long> num(lo_whole * d + 1, hi_whole * d - 1);
      Rational r(num(rng), d);
      if (!r.is_integer()) return r;
    }
  };
  std::vector<NamedParams> out;
  for (unsigned s = 0; s < count; ++s) {
    NamedParams np{"r" + std::to_string(s + 1), {}};
    for (const char* name : {"alpha", "beta1", "beta2"}) np.params.set(name, draw(0, 3));
    for (const char* name : {"gamma", "gamma1", "gamma2", "gamma3"}) np.params.set(name, draw(2, 5));
    out.push_back(std::move(np));
  }
  return out;
}

Profile make_profile(std::string_view name, std::uint64_t seed) {
  if (name == "default") return {"default", {p1()}};
  if (name == "generic") return {"generic", {p1(), p2(), p3()}};
  if (name == "random") return {"random", random_param_sets(seed), seed};
  throw BadParams("unknown profile '" + std::string(name) + "' (expected default, generic or random)");
}

const char* to_string(RowStatus s) {
  switch (s) {
    case RowStatus::Verified:
      return "verified";
    case RowStatus::Failed:
      return "failed";
    case RowStatus::Error:
      return "error";
  }
  return "?";
}

AuditSummary AuditReport::summary() const {
  AuditSummary s;
  for (const auto& r : entries) {
    if (r.status == RowStatus::Verified) ++s.verified;
    else if (r.status == RowStatus::Failed) ++s.failed;
    else ++s.error;
  }
  return s;
}

std::vector<GenericityRow> AuditReport::genericity() const {
  std::vector<GenericityRow> out;
  for (const auto& r : entries) {
    if (out.empty() || out.back().id != r.id) out.push_back({r.id, r.kind, RowStatus::Verified, 0});
    auto& g = out.back();
    ++g.sets;
    if (r.status == RowStatus::Failed) g.status = RowStatus::Failed;
    else if (r.status == RowStatus::Error && g.status == RowStatus::Verified) g.status = RowStatus::Error;
  }
  return out;
}

bool AuditReport::any_failed() const {
  return std::any_of(entries.begin(), entries.end(),
                     [](const AuditRow& r) { return r.status != RowStatus::Verified; });
}

AuditReport run_audit(const Profile& profile, unsigned degree, const AuditOptions& opts) {
  if (degree < 2) throw BadParams("audit degree must be at least 2");
  AuditReport report;
  report.degree = degree;
  report.profile = profile;
  report.seed = profile.seed;

  std::vector<Task> tasks, fixes;
  for (const auto& set : report.profile.sets) {
    for (const auto& e : identity_registry())
      tasks.push_back({e.id, "identity", &set,
                       [&e](const ExactParams& p, unsigned d) { return verify_operator_identity(e, p, d); }});
    for (const auto& e : decomposition_registry())
      tasks.push_back({e.id, "decomposition", &set,
                       [&e](const ExactParams& p, unsigned d) { return verify_decomposition(e, p, d); }});
    if (!opts.include_corrected) continue;
    for (const auto& e : corrected_identities())
      fixes.push_back({e.id, "identity", &set,
                       [&e](const ExactParams& p, unsigned d) { return verify_operator_identity(e, p, d); }});
    for (const auto& e : corrected_decompositions())
      fixes.push_back({e.id, "decomposition", &set,
                       [&e](const ExactParams& p, unsigned d) { return verify_decomposition(e, p, d); }});
  }
  const unsigned threads = opts.threads;
  report.entries = run_tasks(tasks, degree, threads);
  report.corrected = run_tasks(fixes, degree, threads);
  return report;
}

nlohmann::ordered_json index_json(const MultiIndex3& idx) { return {idx.m, idx.n, idx.p}; }

namespace {

nlohmann::ordered_json row_json(const AuditRow& r, bool timings) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["kind"] = r.kind;
  j["profile"] = r.profile;
  j["status"] = to_string(r.status);
  j["degree_checked"] = r.degree_checked;
  if (r.first_bad_index) j["first_bad_index"] = index_json(*r.first_bad_index);
  if (r.expected) j["expected"] = r.expected->str();
  if (r.actual) j["actual"] = r.actual->str();
  if (!r.error.empty()) j["error"] = r.error;
  if (timings) j["ms"] = r.ms;
  return j;
}

}  // namespace

nlohmann::ordered_json to_json(const AuditReport& report, bool timings) {
  nlohmann::ordered_json j;
  j["version"] = report.version;
  j["degree"] = report.degree;
  j["seed"] = report.seed;
  j["profile"] = report.profile.name;
  auto& sets = j["params"] = nlohmann::ordered_json::object();
  for (const auto& s : report.profile.sets) {
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : s.params.values()) p[k] = v.str();
    sets[s.name] = p;
  }
  const auto sum = report.summary();
  j["summary"] = {{"entries", report.entries.size()},
                  {"verified", sum.verified},
                  {"failed", sum.failed},
                  {"error", sum.error}};
  auto& gen = j["genericity"] = nlohmann::ordered_json::array();
  for (const auto& g : report.genericity())
    gen.push_back({{"id", g.id}, {"kind", g.kind}, {"status", to_string(g.status)}, {"sets", g.sets}});
  auto& rows = j["entries"] = nlohmann::ordered_json::array();
  for (const auto& r : report.entries) rows.push_back(row_json(r, timings));
  auto& fixed = j["corrected"] = nlohmann::ordered_json::array();
  for (const auto& r : report.corrected) fixed.push_back(row_json(r, timings));
  return j;
}

namespace {

std::string witness(const AuditRow& r) {
  if (r.status == RowStatus::Error) return r.error;
  if (!r.first_bad_index) return "";
  const auto& i = *r.first_bad_index;
  std::ostringstream os;
  os << "(" << i.m << "," << i.n << "," << i.p << ") expected " << r.expected->str() << ", actual "
     << r.actual->str();
  return os.str();
}

void table_rows(std::ostringstream& os, const std::vector<AuditRow>& rows) {
  os << std::left << std::setw(7) << "id" << std::setw(15) << "kind" << std::setw(9) << "profile" << std::setw(10)
     << "status" << std::setw(8) << "degree" << std::right << std::setw(10) << "ms" << "  witness\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(7) << r.id << std::setw(15) << r.kind << std::setw(9) << r.profile << std::setw(10)
       << to_string(r.status) << std::setw(8) << r.degree_checked << std::right << std::setw(10) << std::fixed
       << std::setprecision(1) << r.ms << "  " << witness(r) << "\n";
  }
}

}  // namespace

std::string to_table(const AuditReport& report) {
  std::ostringstream os;
  os << "audit " << report.version << "  profile " << report.profile.name << "  degree " << report.degree;
  if (report.profile.name == "random") os << "  seed " << report.seed;
  os << "\n\n";
  table_rows(os, report.entries);
  const auto sum = report.summary();
  os << "\n" << report.entries.size() << " rows: " << sum.verified << " verified, " << sum.failed << " failed, "
     << sum.error << " error\n";
  if (report.profile.sets.size() > 1) {
    os << "\nacross " << report.profile.sets.size() << " parameter sets:\n";
    for (const auto& g : report.genericity())
      if (g.status != RowStatus::Verified) os << "  " << g.id << " " << to_string(g.status) << "\n";
    unsigned ok = 0;
    for (const auto& g : report.genericity()) ok += g.status == RowStatus::Verified;
    os << "  " << ok << " of " << report.genericity().size() << " entries verified at every set\n";
  }
  if (!report.corrected.empty()) {
    os << "\nrepaired forms:\n";
    table_rows(os, report.corrected);
  }
  return os.str();
}

}  // namespace hyper3
