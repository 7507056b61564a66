#include "hyper3/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "hyper3/audit.hpp"
#include "hyper3/decomposition.hpp"
#include "hyper3/operators.hpp"
#include "hyper3/quadrature.hpp"

namespace hyper3 {

namespace {

/// Bad command-line input discovered after CLI11 parsing.
class Usage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  return parts;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> pt;
  for (const auto& s : split_commas(text)) pt.push_back(parse_decimal(s));
  if (pt.empty()) throw Usage("--point needs at least one coordinate");
  return pt;
}

MultiIndex3 parse_index(const std::string& text) {
  const auto parts = split_commas(text);
  if (parts.size() != 3) throw Usage("--index takes m,n,p");
  std::array<unsigned, 3> v{};
  for (std::size_t i = 0; i < 3; ++i) {
    const Rational r = Rational::parse(parts[i]);
    if (!r.is_integer() || r.sign() < 0) throw Usage("--index entries must be nonnegative integers");
    v[i] = static_cast<unsigned>(r.to_long());
  }
  return {v[0], v[1], v[2]};
}

std::string index_str(const MultiIndex3& i) {
  return "(" + std::to_string(i.m) + "," + std::to_string(i.n) + "," + std::to_string(i.p) + ")";
}

void write_json(const nlohmann::ordered_json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Usage("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Usage("failed to write '" + path + "'");
}

/// Either an operator identity or a decomposition, printed or repaired.
struct Entry {
  const IdentityEntry* identity = nullptr;
  const DecompositionEntry* decomposition = nullptr;

  Verdict verify(const ExactParams& p, unsigned degree) const {
    return identity ? verify_operator_identity(*identity, p, degree) : verify_decomposition(*decomposition, p, degree);
  }
};

Entry lookup_entry(const std::string& id, bool corrected) {
  Entry e;
  const auto& ids = identity_registry();
  const bool is_identity = std::any_of(ids.begin(), ids.end(), [&](const IdentityEntry& x) { return x.id == id; });
  if (is_identity) {
    e.identity = corrected ? find_corrected_identity(id) : &find_identity(id);
  } else {
    const auto& printed = find_decomposition(id);
    e.decomposition = corrected ? find_corrected_decomposition(id) : &printed;
  }
  if (!e.identity && !e.decomposition) throw Usage("no repaired form recorded for " + id);
  return e;
}

struct EvalArgs {
  std::string fn;
  std::string params;
  std::map<std::string, std::string> named;
  std::map<std::string, CLI::Option*> named_opts;
  std::string point;
  double tol = 1e-12;
  unsigned max_shells = 400;
  bool json = false;
};

int run_eval(const EvalArgs& a, std::ostream& out) {
  const FunctionId fn = FunctionId::parse(a.fn);
  FloatParams p = a.params.empty() ? FloatParams{} : parse_float_params(a.params);
  for (const auto& [name, opt] : a.named_opts) {
    if (opt->count() == 0) continue;
    if (p.contains(name)) throw Usage("parameter '" + name + "' given twice");
    p.set(name, parse_decimal(a.named.at(name)));
  }
  const auto pt = parse_point(a.point);
  const auto r = eval(fn, p, pt, {a.tol, a.max_shells});
  if (a.json) {
    nlohmann::ordered_json j{{"function", fn.name()},
                             {"point", pt},
                             {"value", r.value},
                             {"abs_error_estimate", r.abs_error_estimate},
                             {"shells_summed", r.shells_summed},
                             {"status", to_string(r.status)}};
    out << j.dump(2) << "\n";
  } else {
    std::ostringstream args;
    for (std::size_t i = 0; i < pt.size(); ++i) args << (i ? ", " : "") << pt[i];
    out << fn.name() << "(" << args.str() << ") = " << std::setprecision(17) << r.value << "\n"
        << "error estimate  " << std::setprecision(3) << r.abs_error_estimate << "\n"
        << "shells          " << r.shells_summed << "\n"
        << "status          " << to_string(r.status) << "\n";
  }
  return r.status == EvalStatus::Converged ? 0 : 1;
}

struct CoeffArgs {
  std::string fn;
  std::string params;
  std::string index;
  int degree = -1;
};

int run_coeff(const CoeffArgs& a, std::ostream& out) {
  const FunctionId fn = FunctionId::parse(a.fn);
  const ExactParams p = parse_exact_params(a.params);
  if (a.index.empty() == (a.degree < 0)) throw Usage("give exactly one of --index or --degree");
  if (!a.index.empty()) {
    out << coeff(fn, p, parse_index(a.index)).str() << "\n";
    return 0;
  }
  const auto s = truncated(fn, p, static_cast<unsigned>(a.degree));
  for (const auto& idx : graded_indices(static_cast<unsigned>(a.degree))) {
    if (fn.arity() < 3 && idx.p > 0) continue;
    if (fn.arity() < 2 && idx.n > 0) continue;
    out << index_str(idx) << "  " << s.coeff(idx).str() << "\n";
  }
  return 0;
}

std::vector<NamedParams> select_sets(const std::string& params, const std::string& profile, CLI::Option* seed_opt,
                                     std::uint64_t seed) {
  if (!params.empty()) {
    if (!profile.empty()) throw Usage("--params and --profile are exclusive");
    return {{"params", parse_exact_params(params)}};
  }
  const std::string name = profile.empty() ? (seed_opt->count() ? "random" : "default") : profile;
  return make_profile(name, seed).sets;
}

struct VerifyArgs {
  std::string id;
  std::string params;
  std::string profile;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  unsigned degree = 6;
  bool corrected = false;
};

int run_verify(const VerifyArgs& a, std::ostream& out) {
  const Entry e = lookup_entry(a.id, a.corrected);
  const auto sets = select_sets(a.params, a.profile, a.seed_opt, a.seed);
  bool ok = true;
  for (const auto& s : sets) {
    const Verdict v = e.verify(s.params, a.degree);
    ok = ok && v.verified();
    if (sets.size() > 1) out << s.name << ": ";
    out << v.str() << "\n";
  }
  return ok ? 0 : 1;
}

struct AuditArgs {
  unsigned degree = 6;
  std::string profile;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::string json;
  bool omit_timings = false;
  bool quiet = false;
  unsigned threads = 0;
};

int run_audit_cmd(const AuditArgs& a, std::ostream& out) {
  const std::string name = a.profile.empty() ? (a.seed_opt->count() ? "random" : "default") : a.profile;
  const auto profile = make_profile(name, a.seed);
  const auto report = run_audit(profile, a.degree, {a.threads, true});
  if (!a.json.empty()) write_json(to_json(report, !a.omit_timings), a.json, out);
  if (!a.quiet && a.json != "-") out << to_table(report);
  return report.any_failed() ? 1 : 0;
}

struct QuadArgs {
  std::string rep;
  std::string params;
  std::string point;
  unsigned nodes = 32;
  bool no_map = false;
  double tol = 1e-6;
  std::string json;
};

int run_quad(const QuadArgs& a, std::ostream& out) {
  const QuadConfig cfg{a.nodes, !a.no_map};
  if (a.rep.empty() || a.rep == "all") {
    if (!a.params.empty() || !a.point.empty()) throw Usage("--params and --point apply to a single representation");
    const auto report = consistency_sweep(all_reps(), quad_profile(), quad_points(), cfg, a.tol);
    if (!a.json.empty()) write_json(to_json(report), a.json, out);
    if (a.json != "-") out << to_table(report);
    return report.any_failed() ? 1 : 0;
  }
  const IntegralRep rep = parse_rep(a.rep);
  const FloatParams p = a.params.empty() ? quad_profile()[0].params : parse_float_params(a.params);
  const auto pt = a.point.empty() ? std::vector<double>{0.05, 0.05, 0.05} : parse_point(a.point);
  if (pt.size() != 3) throw Usage("--point takes x,y,z");
  const auto q = quad_eval(rep, p, pt, cfg);
  const auto s = eval(rep_info(rep).target, p, pt);
  const double rel = std::abs(q.value - s.value) / std::abs(s.value);
  if (a.json.empty()) {
    out << to_string(rep) << " with " << a.nodes << " nodes per axis\n"
        << "quadrature      " << std::setprecision(17) << q.value << "\n"
        << "estimate        " << std::setprecision(3) << q.abs_error_estimate << "\n"
        << "series          " << std::setprecision(17) << s.value << "\n"
        << "relative diff   " << std::setprecision(3) << rel << "\n";
  } else {
    nlohmann::ordered_json j{{"id", to_string(rep)},   {"point", pt},     {"nodes", a.nodes},
                             {"quad", q.value},        {"series", s.value}, {"rel_diff", rel},
                             {"abs_error_estimate", q.abs_error_estimate}};
    write_json(j, a.json, out);
  }
  return rel <= a.tol ? 0 : 1;
}

struct ReportArgs {
  unsigned degree = 6;
  std::string json;
  bool quad = false;
  unsigned nodes = 24;
};

int run_report(const ReportArgs& a, std::ostream& out) {
  const auto audit = run_audit(make_profile("generic"), a.degree);
  const std::vector<std::pair<Rational, Rational>> pairs = {{Rational(1, 2), Rational(7, 3)},
                                                            {Rational(3, 2), Rational(2, 5)}};
  nlohmann::ordered_json readings = nlohmann::ordered_json::array();
  std::ostringstream text;
  text << "Errata report, degree " << a.degree << ", parameter sets p1 p2 p3\n\n";
  text << "Formulas that fail as printed:\n";
  for (const auto& g : audit.genericity()) {
    if (g.status == RowStatus::Verified) continue;
    text << "  " << g.id << " (" << g.kind << ")\n";
    for (const auto& r : audit.entries) {
      if (r.id != g.id) continue;
      text << "    " << r.profile << "  ";
      if (r.status == RowStatus::Failed)
        text << "FAILED at " << index_str(*r.first_bad_index) << ": expected " << r.expected->str() << ", actual "
             << r.actual->str() << "\n";
      else
        text << r.error << "\n";
    }
    for (const auto& r : audit.corrected)
      if (r.id == g.id) text << "    repaired form, " << r.profile << ": " << to_string(r.status) << "\n";
  }
  unsigned ok = 0;
  for (const auto& g : audit.genericity()) ok += g.status == RowStatus::Verified;
  text << "  " << ok << " of " << audit.genericity().size() << " formulas verify at every set\n\n";

  text << "Readings of the displayed Nabla Delta product series (exponents up to 8):\n";
  for (const auto& [h, l] : pairs) {
    for (const auto& r : check_product_readings(h, l, 8)) {
      nlohmann::ordered_json j{{"h", h.str()}, {"l", l.str()}, {"reading", to_string(r.reading)}, {"holds", r.holds}};
      text << "  h=" << h.str() << " l=" << l.str() << "  " << to_string(r.reading) << ": ";
      if (r.holds) {
        text << "holds\n";
      } else {
        const auto [m, n] = *r.first_counterexample;
        j["first_counterexample"] = {m, n};
        text << "fails at (m,n)=(" << m << "," << n << ")\n";
      }
      readings.push_back(j);
    }
  }

  nlohmann::ordered_json doc;
  doc["version"] = kVersion;
  doc["degree"] = a.degree;
  doc["audit"] = to_json(audit, false);
  doc["readings"] = readings;
  if (a.quad) {
    const auto sweep = consistency_sweep(all_reps(), quad_profile(), quad_points(), {a.nodes});
    doc["quadrature"] = to_json(sweep);
    text << "\nIntegral representations against the series (" << a.nodes << " nodes per axis):\n";
    std::map<std::string, std::pair<unsigned, unsigned>> tally;
    for (const auto& r : sweep.entries) {
      auto& t = tally[r.rep];
      ++t.second;
      if (r.status == "agree") ++t.first;
    }
    for (auto rep : all_reps()) {
      const auto& t = tally[to_string(rep)];
      text << "  " << std::left << std::setw(6) << to_string(rep) << " agrees in " << t.first << " of " << t.second
           << " cells\n";
    }
  }
  if (!a.json.empty()) write_json(doc, a.json, out);
  if (a.json != "-") out << text.str();
  return 0;
}

bool is_usage_error(const Error& e) {
  return dynamic_cast<const ParseError*>(&e) || dynamic_cast<const UnknownIdentity*>(&e) ||
         dynamic_cast<const BadParams*>(&e) || dynamic_cast<const ArityMismatch*>(&e) ||
         dynamic_cast<const ConstraintViolated*>(&e);
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and numerical tools for the triple hypergeometric series HA, HB, HC", "hyper3"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  EvalArgs ev;
  auto* evc = app.add_subcommand("eval", "Sum a catalog function's series at a point");
  evc->add_option("function", ev.fn, "2F1, 0F1, 1F1, F1..F4, Psi2, FD1..FD3, HA, HB, HC")->required();
  evc->add_option("--params", ev.params, "Decimal assignments, e.g. alpha=0.5,beta1=0.33");
  for (const auto& name : known_param_names())
    ev.named_opts[name] = evc->add_option("--" + name, ev.named[name], "Decimal value of " + name);
  evc->add_option("--point", ev.point, "Comma-separated decimals")->required();
  evc->add_option("--tol", ev.tol, "Relative tolerance")->check(CLI::PositiveNumber);
  evc->add_option("--max-shells", ev.max_shells, "Shell limit");
  evc->add_flag("--json", ev.json, "Print JSON");

  CoeffArgs co;
  auto* coc = app.add_subcommand("coeff", "Exact series coefficients");
  coc->add_option("function", co.fn)->required();
  coc->add_option("--params", co.params, "Rational assignments, e.g. alpha=1/2,beta1=1/3")->required();
  coc->add_option("--index", co.index, "m,n,p");
  coc->add_option("--degree", co.degree, "Print every coefficient up to this total degree");

  VerifyArgs ve;
  auto* vec = app.add_subcommand("verify", "Verify one operator identity or expansion exactly");
  vec->add_option("id", ve.id, "3.1 .. 3.15, 4.1 .. 4.15, 7.1 .. 7.4")->required();
  vec->add_option("--params", ve.params, "Rational assignments");
  vec->add_option("--profile", ve.profile, "default, generic or random");
  ve.seed_opt = vec->add_option("--seed", ve.seed, "Seed of the random profile");
  vec->add_option("--degree", ve.degree, "Total degree")->check(CLI::Range(0u, 40u));
  vec->add_flag("--corrected", ve.corrected, "Use the repaired form");

  AuditArgs au;
  auto* auc = app.add_subcommand("audit", "Verify every registry entry at every parameter set");
  auc->add_option("--degree", au.degree, "Total degree")->check(CLI::Range(2u, 40u));
  auc->add_option("--profile", au.profile, "default, generic or random");
  au.seed_opt = auc->add_option("--seed", au.seed, "Seed of the random profile");
  auc->add_option("--json", au.json, "Write the JSON report here ('-' for stdout)");
  auc->add_flag("--omit-timings", au.omit_timings, "Leave per-row ms out of the JSON");
  auc->add_flag("--quiet", au.quiet, "No table");
  auc->add_option("--threads", au.threads, "Worker threads (default HYPER3_THREADS or all cores)");

  QuadArgs qu;
  auto* quc = app.add_subcommand("quad", "Integral representations by tensor quadrature");
  quc->add_option("rep", qu.rep, "R5_1, R5_10, R6_1, R6_2, R6_4 .. R6_8, or all");
  quc->add_option("--params", qu.params, "Decimal assignments");
  quc->add_option("--point", qu.point, "x,y,z");
  quc->add_option("--nodes", qu.nodes, "Nodes per axis")->check(CLI::Range(4u, 256u));
  quc->add_flag("--no-endpoint-map", qu.no_map, "Plain Gauss-Legendre nodes on [0,1]");
  quc->add_option("--tol", qu.tol, "Relative agreement tolerance")->check(CLI::PositiveNumber);
  quc->add_option("--json", qu.json, "Write JSON here ('-' for stdout)");

  ReportArgs re;
  auto* rec = app.add_subcommand("report", "Errata report over three parameter sets");
  rec->add_option("--degree", re.degree, "Total degree")->check(CLI::Range(2u, 40u));
  rec->add_option("--json", re.json, "Write JSON here ('-' for stdout)");
  rec->add_flag("--quad", re.quad, "Include the quadrature sweep");
  rec->add_option("--nodes", re.nodes, "Nodes per axis for --quad")->check(CLI::Range(4u, 256u));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "hyper3: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*evc) return run_eval(ev, out);
    if (*coc) return run_coeff(co, out);
    if (*vec) return run_verify(ve, out);
    if (*auc) return run_audit_cmd(au, out);
    if (*quc) return run_quad(qu, out);
    if (*rec) return run_report(re, out);
  } catch (const Usage& e) {
    err << "hyper3: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "hyper3: " << e.kind() << ": " << e.what() << "\n";
    return is_usage_error(e) ? 2 : 1;
  }
  return 2;
}

}  // namespace hyper3
