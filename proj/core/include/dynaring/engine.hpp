#pragma once

#include <string>
#include <vector>

#include "dynaring/configuration.hpp"
#include "dynaring/dynamics.hpp"
#include "dynaring/ring.hpp"
#include "dynaring/trace.hpp"

namespace dynaring {

struct InitParams {
  std::vector<NodeId> positions;
  std::vector<Chirality> chiralities;
  Algorithm algorithm = Algorithm::PEF3plus;
};

// Builds a well-initiated configuration at round 0: strictly fewer robots
// than nodes, towerless, all robots pointing left and not having moved.
// Non-fatal oddities (a PEF_2 run on sizes the algorithm was not built for)
// go to `warnings` when provided.
Configuration make_initial(const RingSpec& ring, const InitParams& params,
                           std::vector<std::string>* warnings = nullptr);

struct StepResult {
  Configuration next;
  std::vector<bool> moved;
};

// One synchronous Look-Compute-Move round over the present edges. All moves
// are simultaneous; two robots crossing one edge in opposite directions swap
// without ever co-occupying a node.
StepResult step(const RingSpec& ring, const Configuration& config, EdgeSet present);

ExecutionTrace run(const RingSpec& ring, EdgeSchedule& schedule,
                   const Configuration& initial, long horizon,
                   long detail_cap = ExecutionTrace::kDefaultDetailCap);

}  // namespace dynaring
