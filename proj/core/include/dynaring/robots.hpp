#pragma once

#include <cstdint>

#include "dynaring/ring.hpp"

namespace dynaring {

enum class LocalDirection : std::uint8_t { Left, Right };

constexpr LocalDirection opposite(LocalDirection d) {
  return d == LocalDirection::Left ? LocalDirection::Right : LocalDirection::Left;
}

inline char to_char(LocalDirection d) { return d == LocalDirection::Left ? 'l' : 'r'; }

// Private, stable mapping from a robot's local left/right to the global ring
// orientation. Fixed for the whole execution.
struct Chirality {
  bool right_is_cw = true;
};

constexpr GlobalDirection local_to_global(LocalDirection d, Chirality c) {
  const bool right = d == LocalDirection::Right;
  return right == c.right_is_cw ? GlobalDirection::CW : GlobalDirection::CCW;
}

enum class Algorithm : std::uint8_t { PEF3plus, PEF2, PEF1 };

// Per-robot persistent memory. No field encodes identity, position, or the
// size of the ring.
struct RobotState {
  LocalDirection dir = LocalDirection::Left;
  bool has_moved_previous_step = false;
  Chirality chirality;
  Algorithm algorithm = Algorithm::PEF3plus;
};

// Look-phase snapshot: edge presence at both ports (relative to the current
// dir) and weak local multiplicity detection. Never a robot count.
struct View {
  bool exists_edge_dir = false;
  bool exists_edge_opp = false;
  bool others_on_node = false;
};

// If the robot moved last step and shares its node, it turns back; it then
// records whether an edge exists in its (possibly new) direction.
inline RobotState compute_pef3plus(RobotState s, const View& v) {
  const bool flipped = s.has_moved_previous_step && v.others_on_node;
  if (flipped) s.dir = opposite(s.dir);
  s.has_moved_previous_step = flipped ? v.exists_edge_opp : v.exists_edge_dir;
  return s;
}

// An isolated robot with exactly one present adjacent edge points to it;
// otherwise it keeps its direction.
inline RobotState compute_pef2(RobotState s, const View& v) {
  if (!v.others_on_node && v.exists_edge_dir != v.exists_edge_opp && v.exists_edge_opp)
    s.dir = opposite(s.dir);
  return s;
}

// Points to a present adjacent edge, preferring the current direction.
inline RobotState compute_pef1(RobotState s, const View& v) {
  if (!v.exists_edge_dir && v.exists_edge_opp) s.dir = opposite(s.dir);
  return s;
}

inline RobotState compute(RobotState s, const View& v) {
  switch (s.algorithm) {
    case Algorithm::PEF3plus: return compute_pef3plus(s, v);
    case Algorithm::PEF2: return compute_pef2(s, v);
    case Algorithm::PEF1: return compute_pef1(s, v);
  }
  return s;
}

}  // namespace dynaring
