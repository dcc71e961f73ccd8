#pragma once

#include <stdexcept>
#include <string>

namespace dynaring {

using NodeId = int;
using EdgeId = int;

enum class GlobalDirection { CW, CCW };

constexpr GlobalDirection opposite(GlobalDirection g) {
  return g == GlobalDirection::CW ? GlobalDirection::CCW : GlobalDirection::CW;
}

inline const char* to_string(GlobalDirection g) {
  return g == GlobalDirection::CW ? "CW" : "CCW";
}

// Static n-node ring. Node indices are 0..n-1, edge i joins nodes i and
// (i+1) mod n, and global clockwise is increasing node index. A 2-node ring
// has two readings: a simple graph with a single edge, or a multigraph with
// two parallel edges.
class RingSpec {
public:
  explicit RingSpec(int n, bool size2_multigraph = false)
      : n_(n), multi_(size2_multigraph) {
    if (n < 2) throw std::invalid_argument("ring size must be at least 2");
    if (n > 64) throw std::invalid_argument("ring size above 64 unsupported");
    if (n != 2) multi_ = false;
  }

  int n() const { return n_; }
  bool size2_multigraph() const { return multi_; }

  int edge_count() const {
    if (n_ == 2) return multi_ ? 2 : 1;
    return n_;
  }

  NodeId neighbor(NodeId u, GlobalDirection g) const {
    check_node(u);
    return g == GlobalDirection::CW ? (u + 1) % n_ : (u + n_ - 1) % n_;
  }

  struct PortEdges {
    EdgeId cw;
    EdgeId ccw;
  };

  // Port-to-edge bindings of node u. For the 2-node simple ring both ports
  // name the single edge; for the multigraph the two parallel edges are
  // distinguished per port.
  PortEdges adjacent_edges(NodeId u) const {
    check_node(u);
    const int m = edge_count();
    return PortEdges{u % m, (u + m - 1) % m};
  }

  int distance(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    const int a = (v - u + n_) % n_;
    const int b = (u - v + n_) % n_;
    return a < b ? a : b;
  }

  bool valid_node(NodeId u) const { return u >= 0 && u < n_; }
  bool valid_edge(EdgeId e) const { return e >= 0 && e < edge_count(); }

  friend bool operator==(const RingSpec& a, const RingSpec& b) {
    return a.n_ == b.n_ && a.multi_ == b.multi_;
  }

private:
  void check_node(NodeId u) const {
    if (!valid_node(u))
      throw std::out_of_range("node " + std::to_string(u) + " outside ring of size " +
                              std::to_string(n_));
  }

  int n_;
  bool multi_;
};

}  // namespace dynaring
