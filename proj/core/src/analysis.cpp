#include "dynaring/analysis.hpp"

#include <algorithm>
#include <sstream>

namespace dynaring {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string format_report(const InvariantReport& report) {
  std::ostringstream os;
  os << "inv=" << report.name << " verdict=" << to_string(report.verdict)
     << " first_violation=";
  if (report.first_violation >= 0)
    os << report.first_violation;
  else
    os << '-';
  os << " witness_seed=";
  if (report.witness_seed)
    os << *report.witness_seed;
  else
    os << '-';
  return os.str();
}

InvariantReport check_max_tower(const ExecutionTrace& trace) {
  InvariantReport report;
  report.name = "max_tower";
  for (const TowerRecord& tw : trace.towers()) {
    if (tw.members.size() <= 2) continue;
    report.verdict = Verdict::Fail;
    report.first_violation = tw.start_round;
    std::ostringstream os;
    os << tw.members.size() << " robots on node " << tw.node << " at t=" << tw.start_round;
    report.witness = os.str();
    return report;
  }
  return report;
}

InvariantReport check_tower_opposite_dirs(const ExecutionTrace& trace) {
  InvariantReport report;
  report.name = "opposite_dirs";
  for (const TowerRecord& tw : trace.towers()) {
    if (tw.members.size() != 2) continue;
    // Post-Compute states of round r live in the configuration at r+1.
    const long last_round = std::min(tw.end_round, trace.horizon() - 1);
    for (long r = tw.start_round; r <= last_round; ++r) {
      if (!trace.has_detail(r + 1)) {
        report.verdict = Verdict::Inconclusive;
        report.witness = "trace detail truncated";
        return report;
      }
      const Configuration& post = trace.config_at(r + 1);
      const RobotState& a = post.states[static_cast<std::size_t>(tw.members[0])];
      const RobotState& b = post.states[static_cast<std::size_t>(tw.members[1])];
      if (local_to_global(a.dir, a.chirality) == local_to_global(b.dir, b.chirality)) {
        report.verdict = Verdict::Fail;
        report.first_violation = r;
        std::ostringstream os;
        os << "robots " << tw.members[0] << "," << tw.members[1] << " on node " << tw.node
           << " share direction after Compute of t=" << r;
        report.witness = os.str();
        return report;
      }
    }
  }
  return report;
}

InvariantReport check_sentinels(const ExecutionTrace& trace, EdgeId e, long t_remove,
                                long tail) {
  InvariantReport report;
  report.name = "sentinels";
  const RingSpec& ring = trace.ring();
  if (!ring.valid_edge(e)) throw std::invalid_argument("sentinel edge outside ring");
  if (tail < 1) throw std::invalid_argument("stability tail must be >= 1");

  const long horizon = trace.horizon();
  if (t_remove >= horizon) {
    report.verdict = Verdict::Inconclusive;
    report.witness = "edge never removed within the horizon";
    return report;
  }
  if (horizon < t_remove + tail) {
    report.verdict = Verdict::Inconclusive;
    report.witness = "horizon too short to witness stabilization";
    return report;
  }

  const NodeId a = e % ring.n();
  const NodeId b = (e + 1) % ring.n();
  auto sentinel_on = [&](const Configuration& config, NodeId node) {
    for (int i = 0; i < config.robot_count(); ++i) {
      if (config.positions[static_cast<std::size_t>(i)] != node) continue;
      const RobotState& s = config.states[static_cast<std::size_t>(i)];
      const auto ports = ring.adjacent_edges(node);
      const GlobalDirection g = local_to_global(s.dir, s.chirality);
      const EdgeId pointed = g == GlobalDirection::CW ? ports.cw : ports.ccw;
      if (pointed == e) return true;
    }
    return false;
  };

  long suffix_start = horizon + 1;  // earliest t* with the condition holding through horizon
  bool saw_broken_stable_window = false;
  long run_start = -1;
  for (long c = t_remove; c <= horizon; ++c) {
    if (!trace.has_detail(c)) {
      report.verdict = Verdict::Inconclusive;
      report.witness = "trace detail truncated";
      return report;
    }
    const Configuration& config = trace.config_at(c);
    if (sentinel_on(config, a) && sentinel_on(config, b)) {
      if (run_start < 0) run_start = c;
    } else {
      if (run_start >= 0 && c - run_start >= tail) saw_broken_stable_window = true;
      run_start = -1;
    }
  }
  if (run_start >= 0) suffix_start = run_start;

  if (suffix_start <= horizon - tail) {
    report.verdict = Verdict::Pass;
    report.witness = "stable from t=" + std::to_string(suffix_start);
    return report;
  }
  if (saw_broken_stable_window) {
    report.verdict = Verdict::Fail;
    report.first_violation = suffix_start <= horizon ? suffix_start : horizon;
    report.witness = "sentinel pair formed for >= tail rounds and then broke";
    return report;
  }
  report.verdict = Verdict::Inconclusive;
  report.witness = "no stable tail witnessed within the horizon";
  return report;
}

InvariantReport check_confinement(const ExecutionTrace& trace,
                                  const std::vector<NodeId>& allowed) {
  InvariantReport report;
  report.name = "confinement";
  std::vector<char> ok(static_cast<std::size_t>(trace.ring().n()), 0);
  for (const NodeId u : allowed) ok[static_cast<std::size_t>(u)] = 1;
  const CoverageStats& cov = trace.coverage();
  for (std::size_t u = 0; u < cov.nodes.size(); ++u) {
    if (cov.nodes[u].visits == 0 || ok[u]) continue;
    report.verdict = Verdict::Fail;
    report.first_violation = cov.nodes[u].last_visit >= 0 ? cov.nodes[u].last_visit : -1;
    report.witness = "node " + std::to_string(u) + " visited outside the allowed set";
    return report;
  }
  return report;
}

CoverageStats coverage(const ExecutionTrace& trace) {
  if (trace.truncated()) return trace.coverage();
  CoverageAccumulator acc(trace.ring().n());
  for (long c = 0; c <= trace.horizon(); ++c) acc.observe(trace.config_at(c).positions, c);
  return acc.finish(trace.horizon());
}

bool one_edge(const ExecutionTrace& trace, NodeId u, long t, long t2) {
  return one_edge(trace.ring(), trace.edge_history(), u, t, t2);
}

ConnectivityDiagnosis diagnose(const ExecutionTrace& trace, int window) {
  return diagnose(trace.ring(), trace.edge_history(), window);
}

}  // namespace dynaring
