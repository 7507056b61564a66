#include <cstdlib>

#include "doctest.h"
#include "hyper3/audit.hpp"
#include "hyper3/errors.hpp"
#include "hyper3/parallel.hpp"

using namespace hyper3;

TEST_CASE("id ordering") {
  CHECK(id_less("3.2", "3.10"));
  CHECK(id_less("3.15", "4.1"));
  CHECK(id_less("4.15", "7.1"));
  CHECK_FALSE(id_less("4.1", "4.1"));
}

TEST_CASE("default profile gives one row per registry entry") {
  const auto r = run_audit(make_profile("default"), 6);
  REQUIRE(r.entries.size() == 34);
  CHECK(r.entries.front().id == "3.1");
  CHECK(r.entries[9].id == "3.10");
  CHECK(r.entries.back().id == "7.4");
  for (std::size_t i = 1; i < r.entries.size(); ++i) CHECK(id_less(r.entries[i - 1].id, r.entries[i].id));
  for (const auto& row : r.entries) {
    CAPTURE(row.id);
    CHECK(row.status != RowStatus::Error);
    CHECK(row.degree_checked == 6);
    CHECK(row.first_bad_index.has_value() == (row.status == RowStatus::Failed));
  }
  const auto s = r.summary();
  CHECK(s.verified + s.failed == 34);
  CHECK(r.any_failed());
  REQUIRE(r.corrected.size() == 2);
  for (const auto& row : r.corrected) CHECK(row.status == RowStatus::Verified);
}

TEST_CASE("three parameter sets give the cartesian row count") {
  const auto r = run_audit(make_profile("generic"), 6);
  CHECK(r.entries.size() == 102);
  CHECK(r.entries[0].profile == "p1");
  CHECK(r.entries[1].profile == "p2");
  CHECK(r.entries[2].profile == "p3");
  const auto g = r.genericity();
  REQUIRE(g.size() == 34);
  for (const auto& row : g) {
    CHECK(row.sets == 3);
    CHECK((row.status == RowStatus::Failed) == (row.id == "3.6" || row.id == "4.8"));
  }
}

TEST_CASE("report bodies are reproducible") {
  const auto a = to_json(run_audit(make_profile("default"), 6, {1}), false).dump(2);
  const auto b = to_json(run_audit(make_profile("default"), 6, {4}), false).dump(2);
  CHECK(a == b);
  CHECK(a.find("\"ms\"") == std::string::npos);

  const auto r1 = run_audit(make_profile("random", 99), 4);
  const auto r2 = run_audit(make_profile("random", 99), 4);
  CHECK(to_json(r1, false).dump() == to_json(r2, false).dump());
  CHECK(r1.seed == 99);
  CHECK(make_profile("random", 100).sets[0].params != make_profile("random", 99).sets[0].params);
}

TEST_CASE("json round trip and schema") {
  const auto r = run_audit(make_profile("default"), 3);
  const auto j = to_json(r);
  const auto text = j.dump(2);
  CHECK(nlohmann::ordered_json::parse(text).dump(2) == text);
  CHECK(j["version"] == kVersion);
  CHECK(j["degree"] == 3);
  REQUIRE(j["entries"].size() == 34);
  const auto& first = j["entries"][0];
  CHECK(first.contains("ms"));
  CHECK(first["status"] == "verified");
  bool saw_failed = false;
  for (const auto& e : j["entries"]) {
    if (e["status"] != "failed") continue;
    saw_failed = true;
    CHECK(e["first_bad_index"].size() == 3);
    CHECK(e["expected"].get<std::string>().find('/') != std::string::npos);
    CHECK(e["actual"].is_string());
  }
  CHECK(saw_failed);
}

TEST_CASE("random parameter sets are generic") {
  for (std::uint64_t seed : {1u, 2u, 3u, 1234u}) {
    for (const auto& s : random_param_sets(seed)) {
      for (const auto& [name, v] : s.params.values()) {
        CHECK(v.sign() > 0);
        CHECK_FALSE(v.is_integer());
        CHECK(std::stol(v.denominator()) <= 9);
        if (name.rfind("gamma", 0) == 0) CHECK(v > Rational(2));
      }
    }
  }
}

TEST_CASE("errors become rows, bad input throws") {
  CHECK_THROWS_AS(run_audit(make_profile("default"), 1), BadParams);
  CHECK_THROWS_AS(make_profile("nope"), BadParams);
  Profile singular{"custom", {{"s1", make_profile("default").sets[0].params}}};
  singular.sets[0].params.set("gamma1", Rational(-1));
  const auto r = run_audit(singular, 4);
  REQUIRE(r.entries.size() == 34);
  unsigned errors = 0;
  for (const auto& row : r.entries)
    if (row.status == RowStatus::Error) {
      ++errors;
      CHECK(row.error.find("Singular") != std::string::npos);
    }
  CHECK(errors > 0);
  CHECK(r.summary().error == errors);
}

TEST_CASE("table rendering") {
  const auto t = to_table(run_audit(make_profile("generic"), 3));
  CHECK(t.find("3.6") != std::string::npos);
  CHECK(t.find("102 rows") != std::string::npos);
  CHECK(t.find("32 of 34 entries verified at every set") != std::string::npos);
  CHECK(t.find("repaired forms") != std::string::npos);
}

TEST_CASE("thread count honours the environment") {
  setenv("HYPER3_THREADS", "3", 1);
  CHECK(thread_count() == 3);
  setenv("HYPER3_THREADS", "zero", 1);
  CHECK(thread_count() >= 1);
  unsetenv("HYPER3_THREADS");
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
}
