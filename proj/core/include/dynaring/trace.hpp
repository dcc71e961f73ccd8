#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dynaring/configuration.hpp"
#include "dynaring/dynamics.hpp"
#include "dynaring/ring.hpp"

namespace dynaring {

// Per-node visit statistics plus the finite-horizon proxies for perpetual
// exploration: completed coverage epochs and the first round by which all
// nodes had been visited. A visit is a robot occupying the node at a round
// boundary.
struct CoverageStats {
  struct NodeStats {
    long visits = 0;
    long last_visit = -1;  // configuration index
    long max_gap = 0;      // between consecutive visits, including lead-in and tail
  };
  std::vector<NodeStats> nodes;
  long epochs_completed = 0;
  long first_full_coverage_round = -1;
  long configs_observed = 0;

  long max_gap_over_nodes() const;
  int visited_nodes() const;
};

class CoverageAccumulator {
public:
  explicit CoverageAccumulator(int n);
  void observe(const std::vector<NodeId>& positions, long config_index);
  CoverageStats finish(long final_config_index) const;

private:
  CoverageStats stats_;
  std::vector<char> epoch_seen_;
  int epoch_remaining_;
  int ever_remaining_;
};

// Maximal co-location record: |members| > 1 robots share `node` over
// configurations [start_round, end_round]. When a robot joins an existing
// tower the record is closed and reopened with the larger member set.
struct TowerRecord {
  NodeId node;
  std::vector<int> members;  // robot indices, ascending
  long start_round;
  long end_round;
};

struct RoundRecord {
  EdgeSet edges;
  Configuration before;     // the configuration the round started from
  std::vector<bool> moved;  // per robot
};

// Full (G_t, gamma_t) history of one run. Per-round detail is retained up to
// detail_cap rounds; coverage and tower aggregates are always maintained.
class ExecutionTrace {
public:
  static constexpr long kDefaultDetailCap = 1l << 17;

  ExecutionTrace(const RingSpec& ring, Configuration initial,
                 long detail_cap = kDefaultDetailCap);

  const RingSpec& ring() const { return ring_; }
  const Configuration& initial() const { return initial_; }
  const Configuration& final_config() const { return final_; }
  long horizon() const { return horizon_; }
  bool truncated() const { return truncated_; }
  long detail_cap() const { return detail_cap_; }

  const std::vector<RoundRecord>& rounds() const { return rounds_; }
  const std::vector<TowerRecord>& towers() const { return towers_; }
  const CoverageStats& coverage() const { return coverage_; }

  // Configuration at time t in [0, horizon]; requires stored detail.
  const Configuration& config_at(long t) const;
  bool has_detail(long t) const;

  std::vector<EdgeSet> edge_history() const;

  // Appends one executed round; `after` becomes the current final
  // configuration.
  void append_round(EdgeSet edges, const std::vector<bool>& moved,
                    const Configuration& after);
  // Closes open tower records and freezes coverage stats.
  void seal();

private:
  void track_towers(const Configuration& config);

  RingSpec ring_;
  Configuration initial_;
  Configuration final_;
  std::vector<RoundRecord> rounds_;
  std::vector<TowerRecord> towers_;
  long horizon_ = 0;
  long detail_cap_;
  bool truncated_ = false;
  bool sealed_ = false;

  CoverageAccumulator coverage_acc_;
  CoverageStats coverage_;
  struct OpenTower {
    std::vector<int> members;
    long start;
  };
  std::map<NodeId, OpenTower> open_towers_;
};

// One line per round:
//   t=<round> E=<bitstring> R=<node>,<l|r>,<CW|CCW>,<moved>;... TW=<node>:<count>;...
// Positions are those at the start of the round; dir is the post-Compute
// direction of the round; TW lists towers in the starting configuration
// ("-" when none).
std::string format_round_line(const ExecutionTrace& trace, long t);
void write_trace(const ExecutionTrace& trace, std::ostream& out);
std::string trace_text(const ExecutionTrace& trace);

}  // namespace dynaring
