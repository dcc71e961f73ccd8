#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dynaring/configuration.hpp"
#include "dynaring/ring.hpp"

namespace dynaring {

// Set of edges present at one round. Rings are capped at 64 edges.
class EdgeSet {
public:
  EdgeSet() = default;

  static EdgeSet all(int edge_count) {
    EdgeSet s;
    s.bits_ = edge_count >= 64 ? ~0ull : (1ull << edge_count) - 1;
    return s;
  }

  bool contains(EdgeId e) const { return (bits_ >> e) & 1u; }
  void insert(EdgeId e) { bits_ |= 1ull << e; }
  void erase(EdgeId e) { bits_ &= ~(1ull << e); }
  int size() const { return __builtin_popcountll(bits_); }
  bool subset_of(EdgeSet other) const { return (bits_ & ~other.bits_) == 0; }
  std::uint64_t bits() const { return bits_; }

  friend bool operator==(EdgeSet a, EdgeSet b) { return a.bits_ == b.bits_; }

private:
  std::uint64_t bits_ = 0;
};

std::string to_bitstring(EdgeSet s, int edge_count);  // edge 0 leftmost

// Deterministic per-index draws; the same (seed, a, b) always yields the same
// value regardless of horizon or call order.
std::uint64_t mix64(std::uint64_t x);
double draw_unit(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

// Per-edge absence intervals (inclusive bounds). Applying a mask only ever
// removes edges.
struct RemovalMask {
  struct Entry {
    EdgeId edge;
    long first;
    long last;
  };
  std::vector<Entry> entries;

  bool removes(EdgeId e, long t) const;
};

// Parses records of `edge <id> absent <start>..<end>`, one per line, with `#`
// starting a comment. Throws std::invalid_argument on malformed input.
RemovalMask parse_removal_script(std::istream& in);
RemovalMask load_removal_script(const std::string& path);

// A rule producing the present-edge set for each round. Oblivious schedules
// see only the round index; adaptive ones additionally read the full
// configuration before emitting.
class EdgeSchedule {
public:
  virtual ~EdgeSchedule() = default;

  virtual bool adaptive() const { return false; }
  virtual std::unique_ptr<EdgeSchedule> clone() const = 0;
  virtual std::string describe() const = 0;

  EdgeSet edges_at(long t, const Configuration* obs = nullptr);

protected:
  virtual EdgeSet emit(long t, const Configuration* obs) = 0;
};

class StaticSchedule : public EdgeSchedule {
public:
  explicit StaticSchedule(const RingSpec& ring) : edges_(EdgeSet::all(ring.edge_count())) {}
  std::unique_ptr<EdgeSchedule> clone() const override;
  std::string describe() const override { return "static"; }

protected:
  EdgeSet emit(long, const Configuration*) override { return edges_; }

private:
  EdgeSet edges_;
};

class PeriodicSchedule : public EdgeSchedule {
public:
  PeriodicSchedule(const RingSpec& ring, std::vector<EdgeSet> table);
  std::unique_ptr<EdgeSchedule> clone() const override;
  std::string describe() const override;

protected:
  EdgeSet emit(long t, const Configuration*) override {
    return table_[static_cast<std::size_t>(t % static_cast<long>(table_.size()))];
  }

private:
  std::vector<EdgeSet> table_;
};

// Each edge present independently with probability p per round. Stress only;
// carries no connected-over-time guarantee at finite horizon.
class BernoulliSchedule : public EdgeSchedule {
public:
  BernoulliSchedule(const RingSpec& ring, double p, std::uint64_t seed);
  std::unique_ptr<EdgeSchedule> clone() const override;
  std::string describe() const override;

protected:
  EdgeSet emit(long t, const Configuration*) override;

private:
  int edge_count_;
  double p_;
  std::uint64_t seed_;
};

// Fairness-controlled randomness: every edge is present at least once in
// every window of B consecutive rounds, and otherwise tossed at p = 1/2.
class BoundedRecurrenceSchedule : public EdgeSchedule {
public:
  BoundedRecurrenceSchedule(const RingSpec& ring, int window, std::uint64_t seed);
  std::unique_ptr<EdgeSchedule> clone() const override;
  std::string describe() const override;
  int window() const { return window_; }

protected:
  EdgeSet emit(long t, const Configuration*) override;

private:
  int edge_count_;
  int window_;
  int block_;  // forced-presence block length; any B-window contains a full block
  std::uint64_t seed_;
};

// Base schedule with one edge removed forever from t_remove on.
class EventualMissingSchedule : public EdgeSchedule {
public:
  EventualMissingSchedule(EdgeId edge, long t_remove, std::unique_ptr<EdgeSchedule> base);
  bool adaptive() const override { return base_->adaptive(); }
  std::unique_ptr<EdgeSchedule> clone() const override;
  std::string describe() const override;
  EdgeId edge() const { return edge_; }
  long t_remove() const { return t_remove_; }

protected:
  EdgeSet emit(long t, const Configuration* obs) override;

private:
  EdgeId edge_;
  long t_remove_;
  std::unique_ptr<EdgeSchedule> base_;
};

// The removal operator: presents e at t iff the base does and no mask entry
// removes (e, t).
class MaskedSchedule : public EdgeSchedule {
public:
  MaskedSchedule(std::unique_ptr<EdgeSchedule> base, RemovalMask mask);
  bool adaptive() const override { return base_->adaptive(); }
  std::unique_ptr<EdgeSchedule> clone() const override;
  std::string describe() const override;

protected:
  EdgeSet emit(long t, const Configuration* obs) override;

private:
  std::unique_ptr<EdgeSchedule> base_;
  RemovalMask mask_;
};

std::unique_ptr<EdgeSchedule> apply_removal(std::unique_ptr<EdgeSchedule> base,
                                            RemovalMask mask);
std::unique_ptr<EdgeSchedule> make_scripted(const RingSpec& ring, RemovalMask mask);

// ---------------------------------------------------------------------------
// Confiner adversaries

struct ConfinerState {
  int phase = 0;  // one-robot: 0 at anchor, 1 at its CCW neighbor; two-robot: 1..4
  long phase_start = 0;
};

struct ConfinerStep {
  EdgeSet edges;
  ConfinerState state;
};

// Single-robot confiner anchored at u, with v the CCW neighbor of u. While
// the robot sits on u the CW edge of u is withheld; once it crosses to v the
// CCW edge of v is withheld instead, so the only present adjacent edge always
// points back inside {u, v}. Requires n >= 3.
ConfinerStep one_robot_confiner_step(const RingSpec& ring, NodeId anchor,
                                     const ConfinerState& state, const Configuration& obs,
                                     long t);

// Two-robot confiner anchored at u, with v and w the next two CW nodes and
// the robots starting on u and v. Cycles through four removal phases, each
// advancing when the designated robot makes the designated move
// (r2: v->w, r1: u->v, r1: v->u, r2: w->v). Requires n >= 4.
ConfinerStep two_robot_confiner_step(const RingSpec& ring, NodeId anchor,
                                     const ConfinerState& state, const Configuration& obs,
                                     long t);

struct AbsenceInterval {
  EdgeId edge;
  long first;
  long last;  // inclusive
};

// Tracks contiguous absence intervals from a stream of emitted edge sets.
class AbsenceLog {
public:
  explicit AbsenceLog(int edge_count) : edge_count_(edge_count) {}
  void record(long t, EdgeSet present);
  const std::vector<AbsenceInterval>& closed() const { return closed_; }
  std::vector<AbsenceInterval> open(long now) const;

private:
  int edge_count_;
  std::map<EdgeId, long> open_since_;
  std::vector<AbsenceInterval> closed_;
  long last_t_ = -1;
};

class OneRobotConfinerSchedule : public EdgeSchedule {
public:
  OneRobotConfinerSchedule(const RingSpec& ring, NodeId anchor);
  bool adaptive() const override { return true; }
  std::unique_ptr<EdgeSchedule> clone() const override;
  std::string describe() const override;

  NodeId anchor() const { return anchor_; }
  long phase_changes() const { return phase_changes_; }
  const AbsenceLog& absences() const { return log_; }

protected:
  EdgeSet emit(long t, const Configuration* obs) override;

private:
  RingSpec ring_;
  NodeId anchor_;
  ConfinerState state_;
  long phase_changes_ = 0;
  AbsenceLog log_;
};

class TwoRobotConfinerSchedule : public EdgeSchedule {
public:
  TwoRobotConfinerSchedule(const RingSpec& ring, NodeId anchor);
  bool adaptive() const override { return true; }
  std::unique_ptr<EdgeSchedule> clone() const override;
  std::string describe() const override;

  NodeId anchor() const { return anchor_; }
  long phase_changes() const { return phase_changes_; }
  const AbsenceLog& absences() const { return log_; }

protected:
  EdgeSet emit(long t, const Configuration* obs) override;

private:
  RingSpec ring_;
  NodeId anchor_;
  ConfinerState state_;
  long phase_changes_ = 0;
  AbsenceLog log_;
};

// ---------------------------------------------------------------------------
// Connectivity diagnostics over an observed prefix of edge sets.

struct EdgeDiagnosis {
  long last_seen = -1;
  long longest_absence = 0;
  bool recurrent_so_far = false;  // present at least once in the trailing window
};

struct ConnectivityDiagnosis {
  std::vector<EdgeDiagnosis> edges;
  bool eventual_underlying_connected_so_far = false;
};

ConnectivityDiagnosis diagnose(const RingSpec& ring, const std::vector<EdgeSet>& history,
                               int window);

// True iff exactly one adjacent edge of u is absent at every round of
// [t, t2] while the other is present throughout.
bool one_edge(const RingSpec& ring, const std::vector<EdgeSet>& history, NodeId u, long t,
              long t2);

}  // namespace dynaring
