#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dynaring/acceptance.hpp"
#include "dynaring/analysis.hpp"
#include "dynaring/engine.hpp"
#include "dynaring/experiment.hpp"

namespace {

using namespace dynaring;

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
  std::string trace_path;
  std::optional<std::uint64_t> seed;
  std::optional<long> horizon;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config file");
  cmd->add_option("--set", opts.sets, "override, key=value (repeatable)");
  cmd->add_option("--trace", opts.trace_path, "write the round trace to this path ('-' = stdout)");
  cmd->add_option("--seed", opts.seed, "override schedule.seed");
  cmd->add_option("--horizon", opts.horizon, "override run.horizon");
}

ExperimentConfig resolve(const CommonOpts& opts) {
  ExperimentConfig cfg =
      opts.config_path.empty() ? ExperimentConfig{} : load_config(opts.config_path);
  for (const auto& kv : opts.sets) apply_override(cfg, kv);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.horizon) cfg.horizon = *opts.horizon;
  if (!opts.trace_path.empty()) cfg.trace_emit = true;
  return cfg;
}

void emit_trace(const ExecutionTrace& trace, const std::string& path) {
  if (path == "-") {
    write_trace(trace, std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open trace output: " + path);
  write_trace(trace, out);
}

int cmd_run(const CommonOpts& opts) {
  const ExperimentConfig cfg = resolve(opts);
  RunOutcome outcome = execute(cfg);
  for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << outcome.summary.to_line() << "\n";
  for (const auto& report : outcome.summary.reports)
    std::cout << format_report(report) << "\n";
  if (cfg.trace_emit && !opts.trace_path.empty()) emit_trace(outcome.trace, opts.trace_path);
  else if (cfg.trace_emit) write_trace(outcome.trace, std::cout);
  return outcome.ok ? 0 : 1;
}

int cmd_sweep(const CommonOpts& opts, const std::vector<std::string>& axis_specs) {
  const ExperimentConfig base = resolve(opts);
  std::vector<Axis> axes;
  for (const auto& spec : axis_specs) axes.push_back(parse_axis(spec));
  const SweepResult result = run_sweep(base, axes, sweep_thread_cap());
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    std::cout << "cell=" << i << " ";
    if (!result.cell_errors[i].empty())
      std::cout << "error=\"" << result.cell_errors[i] << "\"\n";
    else
      std::cout << result.cells[i].to_line() << "\n";
  }
  std::cout << "cells=" << result.cells.size() << " failed=" << result.failed
            << " errored=" << result.errored << "\n";
  return (result.failed || result.errored) ? 1 : 0;
}

int cmd_demo(const std::string& mode, int n, long horizon, const std::string& algo,
             int anchor) {
  ExperimentConfig cfg;
  cfg.n = n;
  cfg.horizon = horizon;
  cfg.anchor = anchor;
  apply_setting(cfg, "robots.algorithm", algo);
  std::vector<NodeId> allowed;
  if (mode == "one_robot") {
    if (n < 3) {
      std::cerr << "error: one_robot demo needs a ring of size >= 3\n";
      return 2;
    }
    cfg.k = 1;
    cfg.positions = std::to_string(anchor);
    cfg.chirality = "cw";
    cfg.schedule_kind = "one_robot_confiner";
    const RingSpec ring(n);
    allowed = {anchor, ring.neighbor(anchor, GlobalDirection::CCW)};
  } else if (mode == "two_robots") {
    if (n < 4) {
      std::cerr << "error: two_robots demo needs a ring of size >= 4\n";
      return 2;
    }
    cfg.k = 2;
    cfg.positions = std::to_string(anchor) + "," + std::to_string((anchor + 1) % n);
    cfg.chirality = "alternating";
    cfg.schedule_kind = "two_robot_confiner";
    allowed = {anchor, (anchor + 1) % n, (anchor + 2) % n};
  } else {
    std::cerr << "error: demo mode must be one_robot or two_robots\n";
    return 2;
  }

  const RingSpec ring = build_ring(cfg);
  std::vector<std::string> warnings;
  const Configuration initial = make_initial(ring, build_init(cfg, ring), &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  auto schedule = build_schedule(cfg, ring);
  ExecutionTrace trace = run(ring, *schedule, initial, cfg.horizon);

  const InvariantReport confinement = check_confinement(trace, allowed);
  const CoverageStats& cov = trace.coverage();
  std::cout << format_report(confinement) << "\n";
  std::cout << "visited=" << cov.visited_nodes() << "/" << n << " allowed=" << allowed.size()
            << " horizon=" << cfg.horizon << "\n";

  long phase_changes = 0;
  const AbsenceLog* log = nullptr;
  if (auto* one = dynamic_cast<OneRobotConfinerSchedule*>(schedule.get())) {
    phase_changes = one->phase_changes();
    log = &one->absences();
  } else if (auto* two = dynamic_cast<TwoRobotConfinerSchedule*>(schedule.get())) {
    phase_changes = two->phase_changes();
    log = &two->absences();
  }
  long max_closed = 0;
  for (const auto& iv : log->closed()) max_closed = std::max(max_closed, iv.last - iv.first + 1);
  const auto open = log->open(cfg.horizon - 1);
  std::cout << "phase_changes=" << phase_changes
            << " closed_absence_intervals=" << log->closed().size()
            << " longest_closed_absence=" << max_closed
            << " open_at_horizon=" << open.size() << "\n";
  const ConnectivityDiagnosis diag = diagnose(trace, 64);
  std::cout << "recurrent_in_trailing_window=";
  for (std::size_t e = 0; e < diag.edges.size(); ++e)
    std::cout << (diag.edges[e].recurrent_so_far ? '1' : '0');
  long longest_open = 0;
  for (const auto& iv : open) longest_open = std::max(longest_open, iv.last - iv.first + 1);
  const bool advancing = phase_changes >= cfg.horizon / 4;
  // Intervals still open at the horizon count as finite when they are no
  // longer than the closed ones — they were cut by the horizon, not held open.
  const bool finite = advancing && longest_open <= 2 * max_closed + 2;
  std::cout << " phase_status=" << (advancing ? "advancing" : "stalled")
            << " longest_open_absence=" << longest_open
            << " every_absence_finite=" << (finite ? "yes" : "no") << "\n";
  return confinement.passed() ? 0 : 1;
}

int cmd_verify(const std::string& golden) {
  const auto results = run_acceptance(golden, std::cout);
  return all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic simulator for perpetual ring exploration under churn"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "execute one experiment");
  add_common(run_cmd, run_opts);

  CommonOpts sweep_opts;
  std::vector<std::string> axis_specs;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "grid of experiments");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--axis", axis_specs, "sweep axis, key=v1,v2 or key=a..b (repeatable)")
      ->required();

  std::string demo_mode = "one_robot";
  int demo_n = 5;
  long demo_horizon = 100000;
  std::string demo_algo = "pef3plus";
  int demo_anchor = 0;
  CLI::App* demo_cmd =
      app.add_subcommand("demo-impossible", "adversarial confinement demonstration");
  demo_cmd->add_option("mode", demo_mode, "one_robot or two_robots");
  demo_cmd->add_option("--n", demo_n, "ring size");
  demo_cmd->add_option("--horizon", demo_horizon, "rounds to simulate");
  demo_cmd->add_option("--algo", demo_algo, "pef3plus, pef2, or pef1");
  demo_cmd->add_option("--anchor", demo_anchor, "anchor node of the confiner");

  std::string golden = "tests/data/engine_n4k3_static_h3.golden";
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the full verification suite");
  verify_cmd->add_option("--golden", golden, "expected reference trace");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_opts);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts, axis_specs);
    if (demo_cmd->parsed())
      return cmd_demo(demo_mode, demo_n, demo_horizon, demo_algo, demo_anchor);
    if (verify_cmd->parsed()) return cmd_verify(golden);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
