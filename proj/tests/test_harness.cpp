#include <stdexcept>

#include "doctest.h"
#include "slowtrap/harness.hpp"
#include "slowtrap/parallel.hpp"

using namespace slowtrap;

TEST_CASE("criterion helpers") {
  CHECK(criterion_below("a", "", 0.1, 0.2).pass);
  CHECK_FALSE(criterion_below("a", "", 0.2, 0.2).pass);
  CHECK(criterion_above("a", "", 0.3, 0.2).pass);
  CHECK_FALSE(criterion_above("a", "", 0.2, 0.2).pass);
  CHECK(criterion_within("a", "", 1.0, 0.9, 1.1).pass);
  CHECK_FALSE(criterion_within("a", "", 1.2, 0.9, 1.1).pass);
  const auto t = criterion_true("a", "A7", false, "x");
  CHECK(t.value == 0.0);
  CHECK_FALSE(t.pass);

  ExperimentResult r;
  r.criteria = {criterion_true("x", "A1", true, ""), criterion_true("y", "A2", false, "")};
  CHECK(r.passes("A1"));
  CHECK_FALSE(r.passes("A2"));
  CHECK_FALSE(r.passes("A3"));  // no criteria tagged
  CHECK_FALSE(r.all_pass());
}

TEST_CASE("parallel_map keeps index order and rethrows the lowest failure") {
  for (unsigned w : {1U, 2U, 5U}) {
    const auto v = parallel_map(100, w, [](std::size_t i) { return i * i; });
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == i * i);
  }
  try {
    (void)parallel_map(50, 4, [](std::size_t i) -> int {
      if (i == 7 || i == 30) throw std::runtime_error("fail " + std::to_string(i));
      return 0;
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "fail 7");
  }
  CHECK(parallel_map(0, 3, [](std::size_t) { return 1; }).empty());
}

TEST_CASE("CSV layout") {
  ExperimentResult r;
  r.id = "E0";
  r.table.columns = {"a", "b"};
  r.table.add({"1", "2"});
  r.budget.push_back({"dt", 0.5});
  r.criteria.push_back(criterion_below("ks", "A1", 0.01, 0.02));
  const auto csv = to_csv(r);
  CHECK(csv.find("experiment,a,b\nE0,1,2\n") == 0);
  CHECK(csv.find("budget,dt,0.5\n") != std::string::npos);
  CHECK(csv.find("PASS,E0.ks,A1,0.01,< 0.02\n") != std::string::npos);
  ResultTable t;
  t.columns = {"a"};
  CHECK_THROWS(t.add({"1", "2"}));
}

TEST_CASE("config validation and pinned defaults") {
  CHECK_NOTHROW(validate_config(Config::parse("[E6]\nn = 10\n[general]\nseed = 3\n")));
  CHECK_THROWS_AS(validate_config(Config::parse("[E6]\nfoo = 1\n")), ConfigError);
  CHECK_THROWS_AS(validate_config(Config::parse("[E99]\nn = 1\n")), ConfigError);
  // user values win over the pinned file
  const auto eff = effective_config(Config::parse("[E1]\nks_threshold = 0.5\n"));
  CHECK(eff.get_double("E1", "ks_threshold", 0.0) == 0.5);
  CHECK(eff.has("E7", "sep_q10_floor"));
  CHECK_THROWS(run_experiment("E42", Config{}, RunOptions{}));
  CHECK_THROWS(run_acceptance("A9", Config{}, RunOptions{}));
  CHECK(acceptance_ids().size() == 8);
}

TEST_CASE("figure examples pass through the acceptance route") {
  const auto r = run_acceptance("A7", effective_config(Config{}), RunOptions{});
  CHECK(r.id == "FA");
  CHECK(r.passes("A7"));
  CHECK(r.table.rows.size() == 18);
}

TEST_CASE("seeded experiments are worker-count independent") {
  auto cfg = Config::parse("[E6]\nn = 300\nreplicas = 64\n");
  RunOptions one{5, 1}, many{5, 4}, other{6, 1};
  const auto a = to_csv(run_experiment("E6", cfg, one));
  CHECK(a == to_csv(run_experiment("E6", cfg, many)));
  CHECK(a != to_csv(run_experiment("E6", cfg, other)));
}

TEST_CASE("quadrature routes agree") {
  auto cfg = Config::parse("[E9]\nbetas = 0.5\nlog_n = 20, 50\neps = 0.1, 0.01\n");
  const auto r = run_experiment("E9", cfg, RunOptions{});
  bool found = false;
  for (const auto& c : r.criteria)
    if (c.name.find("route_agreement") == 0) {
      found = true;
      CHECK(c.pass);
    }
  CHECK(found);
}
