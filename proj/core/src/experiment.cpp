#include "dynaring/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

namespace dynaring {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

long to_long(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer for " + what + ": '" + s + "'");
  }
}

bool to_bool(const std::string& s, const std::string& what) {
  if (s == "true" || s == "on" || s == "1") return true;
  if (s == "false" || s == "off" || s == "0") return false;
  throw std::invalid_argument("bad boolean for " + what + ": '" + s + "'");
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "pef3plus") return Algorithm::PEF3plus;
  if (s == "pef2") return Algorithm::PEF2;
  if (s == "pef1") return Algorithm::PEF1;
  throw std::invalid_argument("unknown algorithm: '" + s + "'");
}

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::PEF3plus: return "pef3plus";
    case Algorithm::PEF2: return "pef2";
    case Algorithm::PEF1: return "pef1";
  }
  return "?";
}

}  // namespace

CheckSpec parse_check(const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "max_tower") return {CheckSpec::Kind::MaxTower, 0};
  if (text == "opposite_dirs") return {CheckSpec::Kind::OppositeDirs, 0};
  if (text.rfind("epochs>=", 0) == 0)
    return {CheckSpec::Kind::EpochsAtLeast, to_long(text.substr(8), "epochs check")};
  if (text.rfind("gap<", 0) == 0)
    return {CheckSpec::Kind::GapBelow, to_long(text.substr(4), "gap check")};
  if (text.rfind("sentinels:", 0) == 0)
    return {CheckSpec::Kind::Sentinels, to_long(text.substr(10), "sentinel tail")};
  throw std::invalid_argument("unknown check: '" + text + "'");
}

std::string to_string(const CheckSpec& check) {
  switch (check.kind) {
    case CheckSpec::Kind::MaxTower: return "max_tower";
    case CheckSpec::Kind::OppositeDirs: return "opposite_dirs";
    case CheckSpec::Kind::EpochsAtLeast: return "epochs>=" + std::to_string(check.threshold);
    case CheckSpec::Kind::GapBelow: return "gap<" + std::to_string(check.threshold);
    case CheckSpec::Kind::Sentinels: return "sentinels:" + std::to_string(check.threshold);
  }
  return "?";
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "ring.n") cfg.n = static_cast<int>(to_long(value, key));
  else if (key == "ring.multigraph") cfg.multigraph = to_bool(value, key);
  else if (key == "robots.k") cfg.k = static_cast<int>(to_long(value, key));
  else if (key == "robots.algorithm") cfg.algorithm = parse_algorithm(value);
  else if (key == "robots.positions") cfg.positions = value;
  else if (key == "robots.chirality") cfg.chirality = value;
  else if (key == "schedule.kind") cfg.schedule_kind = value;
  else if (key == "schedule.p") {
    try { cfg.p = std::stod(value); } catch (const std::exception&) {
      throw std::invalid_argument("bad number for schedule.p: '" + value + "'");
    }
  }
  else if (key == "schedule.window") cfg.window = static_cast<int>(to_long(value, key));
  else if (key == "schedule.seed") cfg.seed = static_cast<std::uint64_t>(to_long(value, key));
  else if (key == "schedule.edge") cfg.edge = static_cast<int>(to_long(value, key));
  else if (key == "schedule.t_remove") cfg.t_remove = to_long(value, key);
  else if (key == "schedule.base") cfg.base_kind = value;
  else if (key == "schedule.file") cfg.script_path = value;
  else if (key == "schedule.anchor") cfg.anchor = static_cast<int>(to_long(value, key));
  else if (key == "run.horizon") cfg.horizon = to_long(value, key);
  else if (key == "run.trace") cfg.trace_emit = to_bool(value, key);
  else if (key == "run.trace_cap") cfg.trace_cap = to_long(value, key);
  else if (key == "run.inconclusive_fail") cfg.inconclusive_is_fail = to_bool(value, key);
  else if (key == "checks") {
    cfg.checks.clear();
    for (const auto& item : split(value, ','))
      if (!trim(item).empty()) cfg.checks.push_back(parse_check(item));
  }
  else throw std::invalid_argument("unknown config key: '" + key + "'");
}

void apply_override(ExperimentConfig& cfg, const std::string& key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("override must be key=value: '" + key_value + "'");
  apply_setting(cfg, trim(key_value.substr(0, eq)), trim(key_value.substr(eq + 1)));
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    try {
      apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  return parse_config(in);
}

std::string canonical_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "ring.n = " << cfg.n << '\n'
     << "ring.multigraph = " << (cfg.multigraph ? "true" : "false") << '\n'
     << "robots.k = " << cfg.k << '\n'
     << "robots.algorithm = " << algorithm_name(cfg.algorithm) << '\n'
     << "robots.positions = " << cfg.positions << '\n'
     << "robots.chirality = " << cfg.chirality << '\n'
     << "schedule.kind = " << cfg.schedule_kind << '\n'
     << "schedule.p = " << cfg.p << '\n'
     << "schedule.window = " << cfg.window << '\n'
     << "schedule.seed = " << cfg.seed << '\n'
     << "schedule.edge = " << cfg.edge << '\n'
     << "schedule.t_remove = " << cfg.t_remove << '\n'
     << "schedule.base = " << cfg.base_kind << '\n';
  if (!cfg.script_path.empty()) os << "schedule.file = " << cfg.script_path << '\n';
  os << "schedule.anchor = " << cfg.anchor << '\n'
     << "run.horizon = " << cfg.horizon << '\n'
     << "run.trace = " << (cfg.trace_emit ? "on" : "off") << '\n'
     << "run.trace_cap = " << cfg.trace_cap << '\n'
     << "run.inconclusive_fail = " << (cfg.inconclusive_is_fail ? "true" : "false") << '\n';
  os << "checks = ";
  for (std::size_t i = 0; i < cfg.checks.size(); ++i) {
    if (i) os << ',';
    os << to_string(cfg.checks[i]);
  }
  os << '\n';
  return os.str();
}

std::uint64_t config_digest(const ExperimentConfig& cfg) {
  // FNV-1a 64
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char ch : canonical_config(cfg)) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ull;
  }
  return h;
}

RingSpec build_ring(const ExperimentConfig& cfg) { return RingSpec(cfg.n, cfg.multigraph); }

InitParams build_init(const ExperimentConfig& cfg, const RingSpec& ring) {
  InitParams params;
  params.algorithm = cfg.algorithm;
  if (cfg.k < 1) throw std::invalid_argument("robots.k must be >= 1");

  if (cfg.positions == "spread") {
    for (int i = 0; i < cfg.k; ++i)
      params.positions.push_back(static_cast<NodeId>(static_cast<long>(i) * ring.n() / cfg.k));
  } else {
    for (const auto& item : split(cfg.positions, ','))
      params.positions.push_back(static_cast<NodeId>(to_long(trim(item), "robots.positions")));
    if (static_cast<int>(params.positions.size()) != cfg.k)
      throw std::invalid_argument("robots.positions count does not match robots.k");
  }

  if (cfg.chirality == "alternating") {
    for (int i = 0; i < cfg.k; ++i) params.chiralities.push_back({i % 2 == 0});
  } else if (cfg.chirality == "uniform") {
    params.chiralities.assign(static_cast<std::size_t>(cfg.k), Chirality{true});
  } else {
    for (const auto& item : split(cfg.chirality, ',')) {
      const std::string tok = trim(item);
      if (tok == "cw") params.chiralities.push_back({true});
      else if (tok == "ccw") params.chiralities.push_back({false});
      else throw std::invalid_argument("chirality tokens must be cw/ccw, got '" + tok + "'");
    }
    if (static_cast<int>(params.chiralities.size()) != cfg.k)
      throw std::invalid_argument("robots.chirality count does not match robots.k");
  }
  return params;
}

std::unique_ptr<EdgeSchedule> build_schedule(const ExperimentConfig& cfg, const RingSpec& ring) {
  auto base_by_kind = [&](const std::string& kind) -> std::unique_ptr<EdgeSchedule> {
    if (kind == "static") return std::make_unique<StaticSchedule>(ring);
    if (kind == "bernoulli") return std::make_unique<BernoulliSchedule>(ring, cfg.p, cfg.seed);
    if (kind == "bounded")
      return std::make_unique<BoundedRecurrenceSchedule>(ring, cfg.window, cfg.seed);
    throw std::invalid_argument("unknown schedule kind: '" + kind + "'");
  };

  const std::string& kind = cfg.schedule_kind;
  if (kind == "eventual_missing") {
    if (!ring.valid_edge(cfg.edge))
      throw std::invalid_argument("schedule.edge outside ring edges");
    return std::make_unique<EventualMissingSchedule>(cfg.edge, cfg.t_remove,
                                                     base_by_kind(cfg.base_kind));
  }
  if (kind == "scripted") {
    if (cfg.script_path.empty())
      throw std::invalid_argument("scripted schedule needs schedule.file");
    RemovalMask mask = load_removal_script(cfg.script_path);
    for (const auto& entry : mask.entries)
      if (!ring.valid_edge(entry.edge))
        throw std::invalid_argument("script removes edge outside ring: " +
                                    std::to_string(entry.edge));
    return make_scripted(ring, std::move(mask));
  }
  if (kind == "one_robot_confiner")
    return std::make_unique<OneRobotConfinerSchedule>(ring, cfg.anchor);
  if (kind == "two_robot_confiner")
    return std::make_unique<TwoRobotConfinerSchedule>(ring, cfg.anchor);
  return base_by_kind(kind);
}

bool SummaryRecord::checks_passed(bool inconclusive_is_fail) const {
  for (const auto& r : reports) {
    if (r.verdict == Verdict::Fail) return false;
    if (r.verdict == Verdict::Inconclusive && inconclusive_is_fail) return false;
  }
  return true;
}

std::string SummaryRecord::to_line() const {
  std::ostringstream os;
  os << "digest=" << std::hex << std::setw(16) << std::setfill('0') << digest << std::dec
     << " seed=" << seed << " horizon=" << horizon << " epochs=" << epochs
     << " max_gap=" << max_gap << " visited=" << visited << "/" << n
     << " first_full=" << first_full << " checks=";
  if (reports.empty()) os << '-';
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i) os << ',';
    os << reports[i].name << ':' << to_string(reports[i].verdict);
  }
  os << " wall_ms=" << std::fixed << std::setprecision(3) << wall_ms;
  return os.str();
}

RunOutcome execute(const ExperimentConfig& cfg) {
  // Validate check applicability before any run.
  for (const auto& check : cfg.checks)
    if (check.kind == CheckSpec::Kind::Sentinels && cfg.schedule_kind != "eventual_missing")
      throw std::invalid_argument("sentinel check requires an eventual_missing schedule");

  const auto start = std::chrono::steady_clock::now();
  const RingSpec ring = build_ring(cfg);
  std::vector<std::string> warnings;
  const Configuration initial = make_initial(ring, build_init(cfg, ring), &warnings);
  auto schedule = build_schedule(cfg, ring);

  ExecutionTrace trace = run(ring, *schedule, initial, cfg.horizon, cfg.trace_cap);

  SummaryRecord summary;
  summary.digest = config_digest(cfg);
  summary.seed = cfg.seed;
  summary.horizon = cfg.horizon;
  summary.n = ring.n();
  summary.canonical = canonical_config(cfg);
  const CoverageStats& cov = trace.coverage();
  summary.epochs = cov.epochs_completed;
  summary.max_gap = cov.max_gap_over_nodes();
  summary.visited = cov.visited_nodes();
  summary.first_full = cov.first_full_coverage_round;

  for (const auto& check : cfg.checks) {
    InvariantReport report;
    switch (check.kind) {
      case CheckSpec::Kind::MaxTower:
        report = check_max_tower(trace);
        break;
      case CheckSpec::Kind::OppositeDirs:
        report = check_tower_opposite_dirs(trace);
        break;
      case CheckSpec::Kind::EpochsAtLeast:
        report.name = "epochs";
        report.verdict = cov.epochs_completed >= check.threshold ? Verdict::Pass : Verdict::Fail;
        if (report.verdict == Verdict::Fail)
          report.witness = std::to_string(cov.epochs_completed) + " < " +
                           std::to_string(check.threshold);
        break;
      case CheckSpec::Kind::GapBelow:
        report.name = "gap";
        report.verdict =
            cov.max_gap_over_nodes() < check.threshold ? Verdict::Pass : Verdict::Fail;
        if (report.verdict == Verdict::Fail)
          report.witness = std::to_string(cov.max_gap_over_nodes()) + " >= " +
                           std::to_string(check.threshold);
        break;
      case CheckSpec::Kind::Sentinels:
        report = check_sentinels(trace, cfg.edge, cfg.t_remove, check.threshold);
        break;
    }
    report.witness_seed = cfg.seed;
    summary.reports.push_back(std::move(report));
  }

  summary.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();

  RunOutcome outcome{std::move(summary), std::move(trace), std::move(warnings), false};
  outcome.ok = outcome.summary.checks_passed(cfg.inconclusive_is_fail);
  return outcome;
}

Axis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("axis must be key=values: '" + text + "'");
  Axis axis;
  axis.key = trim(text.substr(0, eq));
  const std::string values = trim(text.substr(eq + 1));
  const auto dots = values.find("..");
  if (dots != std::string::npos && values.find(',') == std::string::npos) {
    const long a = to_long(values.substr(0, dots), "axis range");
    const long b = to_long(values.substr(dots + 2), "axis range");
    if (b < a) throw std::invalid_argument("empty axis range: '" + values + "'");
    for (long v = a; v <= b; ++v) axis.values.push_back(std::to_string(v));
  } else {
    for (const auto& item : split(values, ','))
      if (!trim(item).empty()) axis.values.push_back(trim(item));
  }
  if (axis.values.empty()) throw std::invalid_argument("axis without values: '" + text + "'");
  return axis;
}

int sweep_thread_cap() {
  if (const char* env = std::getenv("DYNARING_THREADS")) {
    const long v = std::atol(env);
    if (v >= 1) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

SweepResult run_sweep(const ExperimentConfig& base, const std::vector<Axis>& axes,
                      int threads) {
  std::size_t cells = 1;
  for (const auto& axis : axes) cells *= axis.values.size();

  bool seed_axis = false;
  for (const auto& axis : axes) seed_axis |= axis.key == "schedule.seed";

  SweepResult result;
  result.cells.resize(cells);
  result.cell_errors.resize(cells);

  auto run_cell = [&](std::size_t index) {
    ExperimentConfig cfg = base;
    std::size_t rest = index;
    try {
      for (const auto& axis : axes) {
        apply_setting(cfg, axis.key, axis.values[rest % axis.values.size()]);
        rest /= axis.values.size();
      }
      if (!seed_axis)
        cfg.seed = mix64(base.seed + 0x9e3779b97f4a7c15ull * (index + 1));
      cfg.trace_emit = false;
      RunOutcome outcome = execute(cfg);
      result.cells[index] = std::move(outcome.summary);
      if (!outcome.ok) result.cells[index].canonical = canonical_config(cfg);
    } catch (const std::exception& e) {
      result.cell_errors[index] = e.what();
    }
  };

  if (threads <= 1 || cells <= 1) {
    for (std::size_t i = 0; i < cells; ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int used = std::min<std::size_t>(static_cast<std::size_t>(threads), cells);
    for (int w = 0; w < used; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < cells; i = next.fetch_add(1)) run_cell(i);
      });
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < cells; ++i) {
    if (!result.cell_errors[i].empty()) ++result.errored;
    else if (!result.cells[i].checks_passed(base.inconclusive_is_fail)) ++result.failed;
  }
  return result;
}

}  // namespace dynaring
