#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "dynaring/experiment.hpp"

using namespace dynaring;

TEST_CASE("check parsing") {
  CHECK(parse_check("max_tower").kind == CheckSpec::Kind::MaxTower);
  CHECK(parse_check("opposite_dirs").kind == CheckSpec::Kind::OppositeDirs);
  CHECK(parse_check("epochs>=5").threshold == 5);
  CHECK(parse_check("gap<5000").threshold == 5000);
  CHECK(parse_check("sentinels:1000").threshold == 1000);
  CHECK_THROWS_AS(parse_check("towers"), std::invalid_argument);
  CHECK_THROWS_AS(parse_check("epochs>=x"), std::invalid_argument);
  CHECK(to_string(parse_check(" epochs>=5 ")) == "epochs>=5");
}

TEST_CASE("settings are strict") {
  ExperimentConfig cfg;
  apply_setting(cfg, "ring.n", "7");
  CHECK(cfg.n == 7);
  apply_setting(cfg, "robots.algorithm", "pef1");
  CHECK(cfg.algorithm == Algorithm::PEF1);
  apply_override(cfg, "run.horizon=123");
  CHECK(cfg.horizon == 123);
  CHECK_THROWS_AS(apply_setting(cfg, "ring.size", "7"), std::invalid_argument);
  CHECK_THROWS_AS(apply_setting(cfg, "ring.n", "seven"), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(cfg, "no-equals-sign"), std::invalid_argument);
}

TEST_CASE("config files parse with comments") {
  std::istringstream in("# experiment\n"
                        "ring.n = 5\n"
                        "robots.k = 2\n"
                        "robots.positions = 0,2\n"
                        "schedule.kind = bounded   # fairness-controlled\n"
                        "schedule.window = 4\n"
                        "checks = max_tower, epochs>=1\n");
  const ExperimentConfig cfg = parse_config(in);
  CHECK(cfg.n == 5);
  CHECK(cfg.k == 2);
  CHECK(cfg.positions == "0,2");
  CHECK(cfg.schedule_kind == "bounded");
  CHECK(cfg.window == 4);
  REQUIRE(cfg.checks.size() == 2);
  CHECK(cfg.checks[1].kind == CheckSpec::Kind::EpochsAtLeast);

  std::istringstream bad("ring.n 5\n");
  CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);
}

TEST_CASE("canonical text round-trips") {
  ExperimentConfig cfg;
  cfg.n = 9;
  cfg.k = 3;
  cfg.schedule_kind = "bounded";
  cfg.seed = 77;
  cfg.checks = {parse_check("max_tower"), parse_check("gap<100")};
  std::istringstream in(canonical_config(cfg));
  const ExperimentConfig back = parse_config(in);
  CHECK(canonical_config(back) == canonical_config(cfg));
  CHECK(config_digest(back) == config_digest(cfg));
  cfg.seed = 78;
  CHECK(config_digest(back) != config_digest(cfg));
}

TEST_CASE("build helpers") {
  ExperimentConfig cfg;
  cfg.n = 6;
  cfg.k = 4;
  const RingSpec ring = build_ring(cfg);
  const InitParams spread = build_init(cfg, ring);
  CHECK(spread.positions == std::vector<NodeId>{0, 1, 3, 4});
  CHECK(spread.chiralities[0].right_is_cw);
  CHECK_FALSE(spread.chiralities[1].right_is_cw);

  cfg.chirality = "cw,ccw,cw,cw";
  CHECK(build_init(cfg, ring).chiralities[1].right_is_cw == false);
  cfg.chirality = "cw,up,cw,cw";
  CHECK_THROWS_AS(build_init(cfg, ring), std::invalid_argument);
  cfg.chirality = "uniform";
  cfg.positions = "0,1,2";
  CHECK_THROWS_AS(build_init(cfg, ring), std::invalid_argument);  // count mismatch

  cfg.positions = "spread";
  cfg.schedule_kind = "eventual_missing";
  cfg.edge = 99;
  CHECK_THROWS_AS(build_schedule(cfg, ring), std::invalid_argument);
  cfg.schedule_kind = "scripted";
  CHECK_THROWS_AS(build_schedule(cfg, ring), std::invalid_argument);  // no file
  cfg.schedule_kind = "warp";
  CHECK_THROWS_AS(build_schedule(cfg, ring), std::invalid_argument);
}

TEST_CASE("execute applies checks and reports") {
  ExperimentConfig cfg;  // n=4, k=3, pef3plus, static
  cfg.horizon = 100;
  cfg.checks = {parse_check("epochs>=1")};
  const RunOutcome outcome = execute(cfg);
  CHECK(outcome.ok);
  REQUIRE(outcome.summary.reports.size() == 1);
  CHECK(outcome.summary.reports[0].passed());
  CHECK(outcome.summary.reports[0].witness_seed == cfg.seed);
  CHECK(outcome.summary.visited == 4);
  const std::string line = outcome.summary.to_line();
  CHECK(line.rfind("digest=", 0) == 0);
  CHECK(line.find(" visited=4/4 ") != std::string::npos);
  CHECK(line.find(" checks=epochs:pass ") != std::string::npos);

  ExperimentConfig too_many = cfg;
  too_many.k = 4;
  CHECK_THROWS_AS(execute(too_many), std::invalid_argument);

  ExperimentConfig pef2 = cfg;
  pef2.n = 3;
  pef2.k = 2;
  pef2.algorithm = Algorithm::PEF2;
  pef2.checks = {parse_check("epochs>=30")};
  CHECK(execute(pef2).ok);

  ExperimentConfig misapplied = cfg;
  misapplied.checks = {parse_check("sentinels:10")};
  CHECK_THROWS_AS(execute(misapplied), std::invalid_argument);
}

TEST_CASE("failed checks keep the outcome replayable") {
  ExperimentConfig cfg;
  cfg.horizon = 10;
  cfg.checks = {parse_check("epochs>=1000")};
  const RunOutcome outcome = execute(cfg);
  CHECK_FALSE(outcome.ok);
  CHECK(outcome.summary.reports[0].verdict == Verdict::Fail);
  // Replaying from the canonical record reproduces the identical verdicts.
  std::istringstream canon(outcome.summary.canonical);
  const RunOutcome again = execute(parse_config(canon));
  CHECK(again.summary.digest == outcome.summary.digest);
  CHECK(again.summary.epochs == outcome.summary.epochs);
  CHECK(again.summary.max_gap == outcome.summary.max_gap);
}

TEST_CASE("axis parsing") {
  const Axis list = parse_axis("robots.k=3,4,5");
  CHECK(list.key == "robots.k");
  CHECK(list.values == std::vector<std::string>{"3", "4", "5"});
  const Axis range = parse_axis("ring.n=4..7");
  CHECK(range.values == std::vector<std::string>{"4", "5", "6", "7"});
  CHECK_THROWS_AS(parse_axis("ring.n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_axis("ring.n=7..4"), std::invalid_argument);
  CHECK_THROWS_AS(parse_axis("ring.n="), std::invalid_argument);
}

TEST_CASE("sweeps continue past bad cells and derive seeds") {
  ExperimentConfig base;
  base.n = 4;
  base.horizon = 200;
  base.checks = {parse_check("max_tower"), parse_check("epochs>=1")};
  base.schedule_kind = "bounded";

  const SweepResult result = run_sweep(base, {parse_axis("robots.k=2,3,4,5")}, 2);
  REQUIRE(result.cells.size() == 4);
  CHECK(result.errored == 2);  // k=4 and k=5 violate k < n
  CHECK(result.failed == 0);
  CHECK(result.cell_errors[0].empty());
  CHECK(result.cell_errors[1].empty());
  CHECK_FALSE(result.cell_errors[2].empty());
  CHECK_FALSE(result.cell_errors[3].empty());
  // Derived seeds differ across cells when no seed axis is given.
  CHECK(result.cells[0].seed != result.cells[1].seed);

  const SweepResult pinned =
      run_sweep(base, {parse_axis("schedule.seed=5,6"), parse_axis("robots.k=3")}, 1);
  REQUIRE(pinned.cells.size() == 2);
  CHECK(pinned.cells[0].seed == 5);
  CHECK(pinned.cells[1].seed == 6);

  const SweepResult single = run_sweep(base, {}, 1);
  CHECK(single.cells.size() == 1);
}

TEST_CASE("thread cap honors the environment") {
  setenv("DYNARING_THREADS", "3", 1);
  CHECK(sweep_thread_cap() == 3);
  unsetenv("DYNARING_THREADS");
  CHECK(sweep_thread_cap() >= 1);
}
