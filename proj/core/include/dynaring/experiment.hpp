#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "dynaring/analysis.hpp"
#include "dynaring/engine.hpp"

namespace dynaring {

struct CheckSpec {
  enum class Kind { MaxTower, OppositeDirs, EpochsAtLeast, GapBelow, Sentinels };
  Kind kind;
  long threshold = 0;  // minimum epochs, strict gap bound, or sentinel stability tail
};

// Accepts `max_tower`, `opposite_dirs`, `epochs>=N`, `gap<N`, `sentinels:TAIL`.
CheckSpec parse_check(const std::string& text);
std::string to_string(const CheckSpec& check);

// Flat key-value experiment description; parse-validated before any run and
// strict about unknown keys.
struct ExperimentConfig {
  int n = 4;
  bool multigraph = false;
  int k = 3;
  Algorithm algorithm = Algorithm::PEF3plus;
  std::string positions = "spread";      // or explicit "0,1,2"
  std::string chirality = "alternating";  // "uniform", or explicit "cw,ccw,..."
  std::string schedule_kind = "static";   // static|bernoulli|bounded|eventual_missing|
                                          // scripted|one_robot_confiner|two_robot_confiner
  double p = 0.5;
  int window = 8;
  std::uint64_t seed = 1;
  int edge = 0;
  long t_remove = 0;
  std::string base_kind = "static";  // under eventual_missing
  std::string script_path;
  int anchor = 0;
  long horizon = 1000;
  bool trace_emit = false;
  long trace_cap = ExecutionTrace::kDefaultDetailCap;
  std::vector<CheckSpec> checks;
  bool inconclusive_is_fail = false;
};

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void apply_override(ExperimentConfig& cfg, const std::string& key_value);  // "key=value"
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// Canonical text listing every setting; digest and replay both derive from it.
std::string canonical_config(const ExperimentConfig& cfg);
std::uint64_t config_digest(const ExperimentConfig& cfg);

RingSpec build_ring(const ExperimentConfig& cfg);
InitParams build_init(const ExperimentConfig& cfg, const RingSpec& ring);
std::unique_ptr<EdgeSchedule> build_schedule(const ExperimentConfig& cfg, const RingSpec& ring);

// Sufficient to replay the run exactly: the canonical config carries all
// parameters and seeds.
struct SummaryRecord {
  std::uint64_t digest = 0;
  std::uint64_t seed = 0;
  long horizon = 0;
  int n = 0;
  long epochs = 0;
  long max_gap = 0;
  int visited = 0;
  long first_full = -1;
  std::vector<InvariantReport> reports;
  double wall_ms = 0.0;
  std::string canonical;

  bool checks_passed(bool inconclusive_is_fail) const;
  std::string to_line() const;
};

struct RunOutcome {
  SummaryRecord summary;
  ExecutionTrace trace;
  std::vector<std::string> warnings;
  bool ok = false;
};

RunOutcome execute(const ExperimentConfig& cfg);

struct Axis {
  std::string key;
  std::vector<std::string> values;
};

// `key=v1,v2,...` or `key=a..b` (inclusive integer range).
Axis parse_axis(const std::string& text);

struct SweepResult {
  std::vector<SummaryRecord> cells;
  std::vector<std::string> cell_errors;  // empty string per clean cell
  int failed = 0;
  int errored = 0;
};

// Cartesian product over the axes. Cells without an explicit seed axis get
// independent seeds derived from the template seed and the cell index.
// Config errors in single cells are reported and the sweep continues.
SweepResult run_sweep(const ExperimentConfig& base, const std::vector<Axis>& axes,
                      int threads);

// DYNARING_THREADS when set, hardware concurrency otherwise.
int sweep_thread_cap();

}  // namespace dynaring
