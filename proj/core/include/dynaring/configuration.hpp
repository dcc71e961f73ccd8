#pragma once

#include <vector>

#include "dynaring/ring.hpp"
#include "dynaring/robots.hpp"

namespace dynaring {

// Positions and states of all robots at one time index.
struct Configuration {
  std::vector<NodeId> positions;
  std::vector<RobotState> states;
  long round = 0;

  int robot_count() const { return static_cast<int>(positions.size()); }
};

}  // namespace dynaring
