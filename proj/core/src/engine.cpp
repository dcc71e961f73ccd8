#include "dynaring/engine.hpp"

#include <algorithm>
#include <set>

namespace dynaring {

Configuration make_initial(const RingSpec& ring, const InitParams& params,
                           std::vector<std::string>* warnings) {
  const int k = static_cast<int>(params.positions.size());
  if (k < 1) throw std::invalid_argument("need at least one robot");
  if (k >= ring.n())
    throw std::invalid_argument("well-initiated runs need strictly fewer robots (" +
                                std::to_string(k) + ") than nodes (" +
                                std::to_string(ring.n()) + ")");
  if (params.chiralities.size() != params.positions.size())
    throw std::invalid_argument("one chirality per robot required");

  std::set<NodeId> seen;
  for (const NodeId u : params.positions) {
    if (!ring.valid_node(u))
      throw std::invalid_argument("initial position outside ring: " + std::to_string(u));
    if (!seen.insert(u).second)
      throw std::invalid_argument("initial configuration has a tower on node " +
                                  std::to_string(u));
  }

  if (warnings && params.algorithm == Algorithm::PEF2 && !(k == 2 && ring.n() == 3))
    warnings->push_back("PEF_2 targets 2 robots on a 3-node ring; running with k=" +
                        std::to_string(k) + ", n=" + std::to_string(ring.n()));

  Configuration config;
  config.positions = params.positions;
  config.states.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    auto& s = config.states[static_cast<std::size_t>(i)];
    s.dir = LocalDirection::Left;
    s.has_moved_previous_step = false;
    s.chirality = params.chiralities[static_cast<std::size_t>(i)];
    s.algorithm = params.algorithm;
  }
  config.round = 0;
  return config;
}

StepResult step(const RingSpec& ring, const Configuration& config, EdgeSet present) {
  const int k = config.robot_count();
  StepResult result;
  result.next = config;
  result.moved.assign(static_cast<std::size_t>(k), false);

  std::vector<int> occupancy(static_cast<std::size_t>(ring.n()), 0);
  for (const NodeId u : config.positions) ++occupancy[static_cast<std::size_t>(u)];

  for (int i = 0; i < k; ++i) {
    const NodeId pos = config.positions[static_cast<std::size_t>(i)];
    const RobotState& s = config.states[static_cast<std::size_t>(i)];
    const auto ports = ring.adjacent_edges(pos);
    const GlobalDirection gdir = local_to_global(s.dir, s.chirality);
    const EdgeId edge_dir = gdir == GlobalDirection::CW ? ports.cw : ports.ccw;
    const EdgeId edge_opp = gdir == GlobalDirection::CW ? ports.ccw : ports.cw;

    // Look
    View view;
    view.exists_edge_dir = present.contains(edge_dir);
    view.exists_edge_opp = present.contains(edge_opp);
    view.others_on_node = occupancy[static_cast<std::size_t>(pos)] > 1;

    // Compute
    const RobotState ns = compute(s, view);
    result.next.states[static_cast<std::size_t>(i)] = ns;

    // Move
    const GlobalDirection gmove = local_to_global(ns.dir, ns.chirality);
    const auto nports = ring.adjacent_edges(pos);
    const EdgeId edge_move = gmove == GlobalDirection::CW ? nports.cw : nports.ccw;
    if (present.contains(edge_move)) {
      result.next.positions[static_cast<std::size_t>(i)] = ring.neighbor(pos, gmove);
      result.moved[static_cast<std::size_t>(i)] = true;
    }
  }
  result.next.round = config.round + 1;
  return result;
}

ExecutionTrace run(const RingSpec& ring, EdgeSchedule& schedule, const Configuration& initial,
                   long horizon, long detail_cap) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  ExecutionTrace trace(ring, initial, detail_cap);
  Configuration current = initial;
  current.round = 0;
  for (long t = 0; t < horizon; ++t) {
    const EdgeSet present = schedule.edges_at(t, &current);
    StepResult sr = step(ring, current, present);
    trace.append_round(present, sr.moved, sr.next);
    current = std::move(sr.next);
  }
  trace.seal();
  return trace;
}

}  // namespace dynaring
