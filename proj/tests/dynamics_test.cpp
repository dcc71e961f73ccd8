#include <sstream>

#include "doctest.h"
#include "dynaring/dynamics.hpp"

using namespace dynaring;

TEST_CASE("edge sets and bitstrings") {
  EdgeSet s = EdgeSet::all(4);
  CHECK(s.size() == 4);
  CHECK(to_bitstring(s, 4) == "1111");
  s.erase(2);
  CHECK(to_bitstring(s, 4) == "1101");
  CHECK_FALSE(s.contains(2));
  CHECK(s.subset_of(EdgeSet::all(4)));
  CHECK_FALSE(EdgeSet::all(4).subset_of(s));
}

TEST_CASE("static schedule presents everything") {
  const RingSpec ring(4);
  StaticSchedule sched(ring);
  CHECK(sched.edges_at(17) == EdgeSet::all(4));
}

TEST_CASE("eventual missing removes from t_remove on") {
  const RingSpec ring(4);
  EventualMissingSchedule sched(2, 5, std::make_unique<StaticSchedule>(ring));
  CHECK(sched.edges_at(4) == EdgeSet::all(4));
  EdgeSet expected = EdgeSet::all(4);
  expected.erase(2);
  CHECK(sched.edges_at(5) == expected);
  CHECK(sched.edges_at(5000) == expected);
}

TEST_CASE("scripted removal") {
  const RingSpec ring(3);
  RemovalMask mask;
  mask.entries.push_back({0, 3, 4});
  auto sched = make_scripted(ring, mask);
  EdgeSet expected = EdgeSet::all(3);
  expected.erase(0);
  CHECK(sched->edges_at(3) == expected);
  CHECK(sched->edges_at(4) == expected);
  CHECK(sched->edges_at(2) == EdgeSet::all(3));
  CHECK(sched->edges_at(5) == EdgeSet::all(3));
}

TEST_CASE("script parsing") {
  std::istringstream good("# header\n"
                          "edge 0 absent 3..4\n"
                          "\n"
                          "edge 2 absent 10..10  # tail comment\n");
  const RemovalMask mask = parse_removal_script(good);
  REQUIRE(mask.entries.size() == 2);
  CHECK(mask.entries[0].edge == 0);
  CHECK(mask.entries[0].first == 3);
  CHECK(mask.entries[0].last == 4);
  CHECK(mask.entries[1].edge == 2);
  CHECK(mask.removes(0, 3));
  CHECK_FALSE(mask.removes(0, 5));
  CHECK_FALSE(mask.removes(1, 3));

  for (const char* bad : {"vertex 0 absent 1..2", "edge 0 present 1..2", "edge 0 absent 1-2",
                          "edge 0 absent 5..2", "edge 0 absent 1..2 extra", "edge x absent 1..2"}) {
    std::istringstream in(bad);
    CHECK_THROWS_AS(parse_removal_script(in), std::invalid_argument);
  }
}

TEST_CASE("apply_removal only removes") {
  const RingSpec ring(6);
  RemovalMask mask;
  mask.entries.push_back({1, 0, 9});
  mask.entries.push_back({1, 5, 14});  // overlapping: union of absences
  mask.entries.push_back({4, 2, 2});
  BernoulliSchedule base(ring, 0.7, 99);
  auto masked = apply_removal(std::make_unique<BernoulliSchedule>(base), mask);
  for (long t = 0; t < 40; ++t) {
    const EdgeSet b = base.edges_at(t);
    const EdgeSet m = masked->edges_at(t);
    CHECK(m.subset_of(b));
    if (t <= 14) CHECK_FALSE(m.contains(1));
    if (t > 14) CHECK(m.contains(1) == b.contains(1));
    CHECK(m.contains(4) == (t != 2 && b.contains(4)));
  }

  // Empty mask: pointwise identity.
  auto identity = apply_removal(std::make_unique<BernoulliSchedule>(base), RemovalMask{});
  for (long t = 0; t < 40; ++t) CHECK(identity->edges_at(t) == base.edges_at(t));
}

TEST_CASE("bernoulli determinism and seed sensitivity") {
  const RingSpec ring(5);
  BernoulliSchedule a(ring, 0.5, 7), b(ring, 0.5, 7), c(ring, 0.5, 8);
  bool differed = false;
  for (long t = 0; t < 64; ++t) {
    CHECK(a.edges_at(t) == b.edges_at(t));
    differed |= !(a.edges_at(t) == c.edges_at(t));
  }
  CHECK(differed);
  CHECK_THROWS_AS(BernoulliSchedule(ring, 1.5, 0), std::invalid_argument);
}

TEST_CASE("bounded recurrence window property") {
  for (const int window : {1, 2, 3, 8}) {
    for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
      const RingSpec ring(5);
      BoundedRecurrenceSchedule sched(ring, window, seed);
      std::vector<EdgeSet> history;
      for (long t = 0; t < 200; ++t) history.push_back(sched.edges_at(t));
      for (long t = 0; t + window <= 200; ++t)
        for (EdgeId e = 0; e < 5; ++e) {
          bool seen = false;
          for (long s = t; s < t + window; ++s) seen |= history[s].contains(e);
          CHECK(seen);
        }
    }
  }
}

TEST_CASE("draws are index-derived, not order-derived") {
  const RingSpec ring(5);
  BoundedRecurrenceSchedule fresh(ring, 8, 42);
  BoundedRecurrenceSchedule scanned(ring, 8, 42);
  for (long t = 100; t >= 0; --t) (void)scanned.edges_at(t);  // query in reverse
  for (long t = 0; t <= 100; ++t) CHECK(fresh.edges_at(t) == scanned.edges_at(t));
}

TEST_CASE("adaptive schedules require an observation") {
  const RingSpec ring(5);
  OneRobotConfinerSchedule sched(ring, 0);
  CHECK_THROWS_AS(sched.edges_at(0), std::invalid_argument);
}

namespace {
Configuration robots_at(std::initializer_list<NodeId> nodes) {
  Configuration c;
  c.positions = nodes;
  c.states.resize(c.positions.size());
  return c;
}
}  // namespace

TEST_CASE("one robot confiner emissions") {
  const RingSpec ring(5);
  ConfinerState state;

  // Robot on the anchor: only the anchor's CW edge is withheld.
  auto step = one_robot_confiner_step(ring, 0, state, robots_at({0}), 0);
  EdgeSet expected = EdgeSet::all(5);
  expected.erase(0);
  CHECK(step.edges == expected);
  CHECK(step.state.phase == 0);

  // Robot crossed to v = 4: now v's CCW edge (edge 3) is withheld.
  step = one_robot_confiner_step(ring, 0, step.state, robots_at({4}), 1);
  expected = EdgeSet::all(5);
  expected.erase(3);
  CHECK(step.edges == expected);
  CHECK(step.state.phase == 1);
  CHECK(step.state.phase_start == 1);

  CHECK_THROWS_AS(one_robot_confiner_step(ring, 0, state, robots_at({0, 1}), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(one_robot_confiner_step(ring, 0, state, robots_at({2}), 0),
                  std::logic_error);
  CHECK_THROWS_AS(one_robot_confiner_step(RingSpec(2), 0, state, robots_at({0}), 0),
                  std::invalid_argument);
}

TEST_CASE("two robot confiner emissions") {
  const RingSpec ring(6);
  ConfinerState state;  // phase 0: validates the start and enters phase 1

  auto step = two_robot_confiner_step(ring, 0, state, robots_at({0, 1}), 0);
  CHECK(step.state.phase == 1);
  EdgeSet expected = EdgeSet::all(6);
  expected.erase(5);  // e_ul
  expected.erase(0);  // e_ur = e_vl
  CHECK(step.edges == expected);

  // r2 observed on w = 2: phase advances to 2.
  step = two_robot_confiner_step(ring, 0, step.state, robots_at({0, 2}), 1);
  CHECK(step.state.phase == 2);
  expected = EdgeSet::all(6);
  expected.erase(5);  // e_ul
  expected.erase(1);  // e_vr = e_wl
  expected.erase(2);  // e_wr
  CHECK(step.edges == expected);

  CHECK_THROWS_AS(two_robot_confiner_step(ring, 0, state, robots_at({0}), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(two_robot_confiner_step(RingSpec(3), 0, state, robots_at({0, 1}), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(two_robot_confiner_step(ring, 0, state, robots_at({3, 4}), 0),
                  std::invalid_argument);
}

TEST_CASE("absence log intervals") {
  AbsenceLog log(2);
  EdgeSet both = EdgeSet::all(2);
  EdgeSet only1;
  only1.insert(1);
  log.record(0, both);
  log.record(1, only1);
  log.record(2, only1);
  log.record(3, both);
  log.record(4, only1);
  REQUIRE(log.closed().size() == 1);
  CHECK(log.closed()[0].edge == 0);
  CHECK(log.closed()[0].first == 1);
  CHECK(log.closed()[0].last == 2);
  const auto open = log.open(4);
  REQUIRE(open.size() == 1);
  CHECK(open[0].edge == 0);
  CHECK(open[0].first == 4);
}

TEST_CASE("connectivity diagnosis") {
  const RingSpec ring(4);

  std::vector<EdgeSet> static_hist(50, EdgeSet::all(4));
  auto diag = diagnose(ring, static_hist, 10);
  for (const auto& e : diag.edges) CHECK(e.recurrent_so_far);
  CHECK(diag.eventual_underlying_connected_so_far);

  EdgeSet no2 = EdgeSet::all(4);
  no2.erase(2);
  std::vector<EdgeSet> missing_hist(200, no2);
  diag = diagnose(ring, missing_hist, 100);
  CHECK_FALSE(diag.edges[2].recurrent_so_far);
  CHECK(diag.edges[2].last_seen == -1);
  CHECK(diag.edges[2].longest_absence == 200);
  CHECK(diag.eventual_underlying_connected_so_far);  // a chain is still connected

  EdgeSet no02 = no2;
  no02.erase(0);
  std::vector<EdgeSet> split_hist(200, no02);
  diag = diagnose(ring, split_hist, 100);
  CHECK_FALSE(diag.eventual_underlying_connected_so_far);
}

TEST_CASE("one_edge predicate") {
  const RingSpec ring(4);
  std::vector<EdgeSet> history(12, EdgeSet::all(4));
  for (long t = 5; t <= 9; ++t) history[t].erase(0);

  CHECK(one_edge(ring, history, 0, 5, 9));
  CHECK(one_edge(ring, history, 1, 5, 9));
  CHECK_FALSE(one_edge(ring, history, 2, 5, 9));
  CHECK_FALSE(one_edge(ring, history, 0, 4, 9));  // edge 0 still present at t=4
  std::vector<EdgeSet> static_hist(12, EdgeSet::all(4));
  CHECK_FALSE(one_edge(ring, static_hist, 0, 0, 11));
  CHECK_THROWS_AS(one_edge(ring, history, 0, 9, 5), std::invalid_argument);

  // The 2-node simple ring has a single port edge: the predicate is vacuous.
  const RingSpec simple(2);
  std::vector<EdgeSet> h2(5);
  CHECK_FALSE(one_edge(simple, h2, 0, 0, 4));
}
