#include "doctest.h"
#include "dynaring/ring.hpp"

using namespace dynaring;

TEST_CASE("ring construction limits") {
  CHECK_THROWS_AS(RingSpec(1), std::invalid_argument);
  CHECK_THROWS_AS(RingSpec(0), std::invalid_argument);
  CHECK_THROWS_AS(RingSpec(65), std::invalid_argument);
  CHECK(RingSpec(2).edge_count() == 1);
  CHECK(RingSpec(2, true).edge_count() == 2);
  CHECK(RingSpec(3, true).size2_multigraph() == false);  // only meaningful at n=2
  CHECK(RingSpec(7).edge_count() == 7);
}

TEST_CASE("neighbor follows the clockwise convention") {
  const RingSpec r4(4);
  CHECK(r4.neighbor(3, GlobalDirection::CW) == 0);
  CHECK(r4.neighbor(0, GlobalDirection::CCW) == 3);
  CHECK(RingSpec(2).neighbor(0, GlobalDirection::CW) == 1);
  CHECK_THROWS_AS(r4.neighbor(4, GlobalDirection::CW), std::out_of_range);
}

TEST_CASE("adjacent edge ports") {
  const RingSpec r5(5);
  const auto p0 = r5.adjacent_edges(0);
  CHECK(p0.cw == 0);
  CHECK(p0.ccw == 4);
  const auto m1 = RingSpec(2, true).adjacent_edges(1);
  CHECK(m1.cw == 1);
  CHECK(m1.ccw == 0);
  const auto s0 = RingSpec(2).adjacent_edges(0);
  CHECK(s0.cw == 0);
  CHECK(s0.ccw == 0);
}

TEST_CASE("distance matches arc enumeration") {
  CHECK(RingSpec(8).distance(1, 6) == 3);
  CHECK(RingSpec(4).distance(2, 2) == 0);
  CHECK(RingSpec(3).distance(0, 2) == 1);

  // Oracle: walk both arcs step by step and take the shorter.
  for (int n = 2; n <= 9; ++n) {
    const RingSpec ring(n);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = 0; v < n; ++v) {
        int cw = 0;
        for (NodeId x = u; x != v; x = ring.neighbor(x, GlobalDirection::CW)) ++cw;
        int ccw = 0;
        for (NodeId x = u; x != v; x = ring.neighbor(x, GlobalDirection::CCW)) ++ccw;
        CHECK(ring.distance(u, v) == std::min(cw, ccw));
        CHECK(ring.distance(u, v) == ring.distance(v, u));
        CHECK(ring.distance(u, v) <= n / 2);
      }
  }
}

TEST_CASE("neighbor inverse and edge sharing properties") {
  for (int n = 3; n <= 10; ++n) {
    const RingSpec ring(n);
    for (NodeId u = 0; u < n; ++u) {
      for (const auto g : {GlobalDirection::CW, GlobalDirection::CCW})
        CHECK(ring.neighbor(ring.neighbor(u, g), opposite(g)) == u);
      CHECK(ring.adjacent_edges(u).cw ==
            ring.adjacent_edges(ring.neighbor(u, GlobalDirection::CW)).ccw);
    }
  }
}
