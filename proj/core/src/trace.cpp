#include "dynaring/trace.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace dynaring {

long CoverageStats::max_gap_over_nodes() const {
  long g = 0;
  for (const auto& ns : nodes) g = std::max(g, ns.max_gap);
  return g;
}

int CoverageStats::visited_nodes() const {
  int c = 0;
  for (const auto& ns : nodes)
    if (ns.visits > 0) ++c;
  return c;
}

CoverageAccumulator::CoverageAccumulator(int n)
    : epoch_seen_(static_cast<std::size_t>(n), 0), epoch_remaining_(n), ever_remaining_(n) {
  stats_.nodes.resize(static_cast<std::size_t>(n));
}

void CoverageAccumulator::observe(const std::vector<NodeId>& positions, long config_index) {
  for (const NodeId u : positions) {
    auto& ns = stats_.nodes[static_cast<std::size_t>(u)];
    if (ns.last_visit == config_index) continue;  // several robots on one node
    if (ns.visits == 0) {
      ns.max_gap = std::max(ns.max_gap, config_index);
      if (--ever_remaining_ == 0 && stats_.first_full_coverage_round < 0)
        stats_.first_full_coverage_round = std::max(0l, config_index - 1);
    } else {
      ns.max_gap = std::max(ns.max_gap, config_index - ns.last_visit);
    }
    ns.last_visit = config_index;
    ++ns.visits;
    if (!epoch_seen_[static_cast<std::size_t>(u)]) {
      epoch_seen_[static_cast<std::size_t>(u)] = 1;
      if (--epoch_remaining_ == 0) {
        ++stats_.epochs_completed;
        std::fill(epoch_seen_.begin(), epoch_seen_.end(), 0);
        epoch_remaining_ = static_cast<int>(epoch_seen_.size());
      }
    }
  }
  stats_.configs_observed = config_index + 1;
}

CoverageStats CoverageAccumulator::finish(long final_config_index) const {
  CoverageStats out = stats_;
  for (auto& ns : out.nodes) {
    const long tail = final_config_index - (ns.last_visit < 0 ? 0 : ns.last_visit);
    ns.max_gap = std::max(ns.max_gap, tail);
  }
  return out;
}

ExecutionTrace::ExecutionTrace(const RingSpec& ring, Configuration initial, long detail_cap)
    : ring_(ring), initial_(std::move(initial)), final_(initial_), detail_cap_(detail_cap),
      coverage_acc_(ring.n()) {
  initial_.round = 0;
  final_.round = 0;
  coverage_acc_.observe(initial_.positions, 0);
  track_towers(initial_);
}

bool ExecutionTrace::has_detail(long t) const {
  return t >= 0 && t <= horizon_ && (t < static_cast<long>(rounds_.size()) || t == horizon_);
}

const Configuration& ExecutionTrace::config_at(long t) const {
  if (t == horizon_) return final_;
  if (t < 0 || t > horizon_ || t >= static_cast<long>(rounds_.size()))
    throw std::out_of_range("no stored configuration at t=" + std::to_string(t));
  return rounds_[static_cast<std::size_t>(t)].before;
}

std::vector<EdgeSet> ExecutionTrace::edge_history() const {
  std::vector<EdgeSet> out;
  out.reserve(rounds_.size());
  for (const auto& r : rounds_) out.push_back(r.edges);
  return out;
}

void ExecutionTrace::append_round(EdgeSet edges, const std::vector<bool>& moved,
                                  const Configuration& after) {
  if (sealed_) throw std::logic_error("trace already sealed");
  if (horizon_ < detail_cap_) {
    rounds_.push_back(RoundRecord{edges, final_, moved});
  } else {
    truncated_ = true;
  }
  final_ = after;
  ++horizon_;
  final_.round = horizon_;
  coverage_acc_.observe(final_.positions, horizon_);
  track_towers(final_);
}

void ExecutionTrace::track_towers(const Configuration& config) {
  const long now = config.round;
  std::map<NodeId, std::vector<int>> groups;
  for (int i = 0; i < config.robot_count(); ++i) groups[config.positions[i]].push_back(i);

  for (auto it = open_towers_.begin(); it != open_towers_.end();) {
    const auto g = groups.find(it->first);
    if (g == groups.end() || g->second.size() < 2 || g->second != it->second.members) {
      towers_.push_back({it->first, it->second.members, it->second.start, now - 1});
      it = open_towers_.erase(it);
    } else {
      ++it;
    }
  }
  for (const auto& [node, members] : groups) {
    if (members.size() < 2) continue;
    if (!open_towers_.count(node)) open_towers_[node] = OpenTower{members, now};
  }
}

void ExecutionTrace::seal() {
  if (sealed_) return;
  sealed_ = true;
  for (const auto& [node, open] : open_towers_)
    towers_.push_back({node, open.members, open.start, horizon_});
  open_towers_.clear();
  std::sort(towers_.begin(), towers_.end(), [](const TowerRecord& a, const TowerRecord& b) {
    return a.start_round != b.start_round ? a.start_round < b.start_round : a.node < b.node;
  });
  coverage_ = coverage_acc_.finish(horizon_);
}

std::string format_round_line(const ExecutionTrace& trace, long t) {
  const auto& rounds = trace.rounds();
  if (t < 0 || t >= static_cast<long>(rounds.size()))
    throw std::out_of_range("round detail not stored");
  const RoundRecord& rec = rounds[static_cast<std::size_t>(t)];
  const Configuration& post = trace.config_at(t + 1);

  std::ostringstream os;
  os << "t=" << t << " E=" << to_bitstring(rec.edges, trace.ring().edge_count()) << " R=";
  for (int i = 0; i < rec.before.robot_count(); ++i) {
    if (i) os << ';';
    const RobotState& s = post.states[static_cast<std::size_t>(i)];
    os << rec.before.positions[static_cast<std::size_t>(i)] << ',' << to_char(s.dir) << ','
       << to_string(local_to_global(s.dir, s.chirality)) << ','
       << (rec.moved[static_cast<std::size_t>(i)] ? '1' : '0');
  }
  os << " TW=";
  std::map<NodeId, int> counts;
  for (const NodeId u : rec.before.positions) ++counts[u];
  bool any = false;
  for (const auto& [node, count] : counts) {
    if (count < 2) continue;
    if (any) os << ';';
    os << node << ':' << count;
    any = true;
  }
  if (!any) os << '-';
  return os.str();
}

void write_trace(const ExecutionTrace& trace, std::ostream& out) {
  long limit = static_cast<long>(trace.rounds().size());
  if (trace.truncated() && limit > 0) --limit;  // post-Compute state of the last stored round is gone
  for (long t = 0; t < limit; ++t) out << format_round_line(trace, t) << '\n';
}

std::string trace_text(const ExecutionTrace& trace) {
  std::ostringstream os;
  write_trace(trace, os);
  return os.str();
}

}  // namespace dynaring
