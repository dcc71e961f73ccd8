#include "doctest.h"
#include "dynaring/robots.hpp"

using namespace dynaring;

namespace {
RobotState make_state(LocalDirection d, bool moved, Algorithm a = Algorithm::PEF3plus) {
  RobotState s;
  s.dir = d;
  s.has_moved_previous_step = moved;
  s.algorithm = a;
  return s;
}
}  // namespace

TEST_CASE("local to global mapping") {
  CHECK(local_to_global(LocalDirection::Right, {true}) == GlobalDirection::CW);
  CHECK(local_to_global(LocalDirection::Left, {true}) == GlobalDirection::CCW);
  CHECK(local_to_global(LocalDirection::Right, {false}) == GlobalDirection::CCW);
  CHECK(local_to_global(LocalDirection::Left, {false}) == GlobalDirection::CW);
}

TEST_CASE("pef3plus compute") {
  // Guard holds, both edges present: flip, then the pointed (new) edge exists.
  auto s = compute_pef3plus(make_state(LocalDirection::Left, true), {true, true, true});
  CHECK(s.dir == LocalDirection::Right);
  CHECK(s.has_moved_previous_step);

  // Guard fails (not moved): no flip; pointed edge absent so no future move.
  s = compute_pef3plus(make_state(LocalDirection::Left, false), {false, true, true});
  CHECK(s.dir == LocalDirection::Left);
  CHECK_FALSE(s.has_moved_previous_step);

  // Flip from right to left, then no edge to the left: moved becomes false.
  // (view is relative to dir: dir=right absent, opposite=left... here
  // exists_edge_dir refers to the right port, exists_edge_opp to the left.)
  s = compute_pef3plus(make_state(LocalDirection::Right, true), {true, false, true});
  CHECK(s.dir == LocalDirection::Left);
  CHECK_FALSE(s.has_moved_previous_step);
}

TEST_CASE("pef3plus flips exactly when the guard holds") {
  for (const bool moved : {false, true})
    for (const bool others : {false, true})
      for (const bool ed : {false, true})
        for (const bool eo : {false, true}) {
          const auto in = make_state(LocalDirection::Left, moved);
          const auto out = compute_pef3plus(in, {ed, eo, others});
          CHECK((out.dir != in.dir) == (moved && others));
          CHECK(out.has_moved_previous_step == (moved && others ? eo : ed));
        }
}

TEST_CASE("pef2 compute") {
  // Isolated with only the opposite edge: point to it.
  auto s = compute_pef2(make_state(LocalDirection::Left, false, Algorithm::PEF2),
                        {false, true, false});
  CHECK(s.dir == LocalDirection::Right);
  // Isolated with both edges: keep.
  s = compute_pef2(make_state(LocalDirection::Left, false, Algorithm::PEF2),
                   {true, true, false});
  CHECK(s.dir == LocalDirection::Left);
  // Not isolated: keep even if only the opposite edge is present.
  s = compute_pef2(make_state(LocalDirection::Left, false, Algorithm::PEF2),
                   {false, true, true});
  CHECK(s.dir == LocalDirection::Left);
}

TEST_CASE("pef1 compute") {
  auto s = compute_pef1(make_state(LocalDirection::Left, false, Algorithm::PEF1),
                        {true, true, false});
  CHECK(s.dir == LocalDirection::Left);
  s = compute_pef1(make_state(LocalDirection::Left, false, Algorithm::PEF1),
                   {false, true, false});
  CHECK(s.dir == LocalDirection::Right);
  s = compute_pef1(make_state(LocalDirection::Left, false, Algorithm::PEF1),
                   {false, false, false});
  CHECK(s.dir == LocalDirection::Left);
}

TEST_CASE("compute is pure and uniform") {
  for (const auto algo : {Algorithm::PEF3plus, Algorithm::PEF2, Algorithm::PEF1})
    for (int v = 0; v < 8; ++v)
      for (const bool moved : {false, true}) {
        const View view{(v & 1) != 0, (v & 2) != 0, (v & 4) != 0};
        const auto in = make_state(LocalDirection::Right, moved, algo);
        const auto a = compute(in, view);
        const auto b = compute(in, view);
        CHECK(a.dir == b.dir);
        CHECK(a.has_moved_previous_step == b.has_moved_previous_step);
        CHECK(a.chirality.right_is_cw == in.chirality.right_is_cw);
      }
}

TEST_CASE("pef3plus direction is stable without a preceding move") {
  for (int v = 0; v < 8; ++v) {
    const View view{(v & 1) != 0, (v & 2) != 0, (v & 4) != 0};
    CHECK(compute_pef3plus(make_state(LocalDirection::Left, false), view).dir ==
          LocalDirection::Left);
  }
}
