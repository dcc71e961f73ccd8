#include "dynaring/dynamics.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace dynaring {

std::string to_bitstring(EdgeSet s, int edge_count) {
  std::string out(static_cast<std::size_t>(edge_count), '0');
  for (int e = 0; e < edge_count; ++e)
    if (s.contains(e)) out[static_cast<std::size_t>(e)] = '1';
  return out;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double draw_unit(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t h = mix64(mix64(seed ^ mix64(a)) ^ b);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

bool RemovalMask::removes(EdgeId e, long t) const {
  for (const auto& entry : entries)
    if (entry.edge == e && t >= entry.first && t <= entry.last) return true;
  return false;
}

RemovalMask parse_removal_script(std::istream& in) {
  RemovalMask mask;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw1, kw2, range;
    int edge;
    if (!(ls >> kw1)) continue;  // blank line
    auto bad = [&](const std::string& why) {
      throw std::invalid_argument("script line " + std::to_string(lineno) + ": " + why);
    };
    if (kw1 != "edge") bad("expected 'edge'");
    if (!(ls >> edge >> kw2 >> range) || kw2 != "absent")
      bad("expected 'edge <id> absent <start>..<end>'");
    const auto dots = range.find("..");
    if (dots == std::string::npos) bad("expected '<start>..<end>' range");
    long first = 0, last = 0;
    try {
      first = std::stol(range.substr(0, dots));
      last = std::stol(range.substr(dots + 2));
    } catch (const std::exception&) {
      bad("malformed range bounds");
    }
    if (edge < 0) bad("negative edge id");
    if (last < first) bad("empty range");
    std::string rest;
    if (ls >> rest) bad("trailing tokens");
    mask.entries.push_back({edge, first, last});
  }
  return mask;
}

RemovalMask load_removal_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open script file: " + path);
  return parse_removal_script(in);
}

EdgeSet EdgeSchedule::edges_at(long t, const Configuration* obs) {
  if (adaptive() && obs == nullptr)
    throw std::invalid_argument("adaptive schedule invoked without observation");
  return emit(t, adaptive() ? obs : nullptr);
}

std::unique_ptr<EdgeSchedule> StaticSchedule::clone() const {
  return std::make_unique<StaticSchedule>(*this);
}

PeriodicSchedule::PeriodicSchedule(const RingSpec& ring, std::vector<EdgeSet> table)
    : table_(std::move(table)) {
  if (table_.empty()) throw std::invalid_argument("periodic schedule needs a nonempty table");
  const EdgeSet all = EdgeSet::all(ring.edge_count());
  for (const auto& s : table_)
    if (!s.subset_of(all)) throw std::invalid_argument("periodic table exceeds ring edges");
}

std::unique_ptr<EdgeSchedule> PeriodicSchedule::clone() const {
  return std::make_unique<PeriodicSchedule>(*this);
}

std::string PeriodicSchedule::describe() const {
  return "periodic(" + std::to_string(table_.size()) + ")";
}

BernoulliSchedule::BernoulliSchedule(const RingSpec& ring, double p, std::uint64_t seed)
    : edge_count_(ring.edge_count()), p_(p), seed_(seed) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("bernoulli p outside [0,1]");
}

std::unique_ptr<EdgeSchedule> BernoulliSchedule::clone() const {
  return std::make_unique<BernoulliSchedule>(*this);
}

std::string BernoulliSchedule::describe() const {
  std::ostringstream os;
  os << "bernoulli(p=" << p_ << ",seed=" << seed_ << ")";
  return os.str();
}

EdgeSet BernoulliSchedule::emit(long t, const Configuration*) {
  EdgeSet s;
  for (int e = 0; e < edge_count_; ++e)
    if (draw_unit(seed_, static_cast<std::uint64_t>(e),
                  static_cast<std::uint64_t>(t)) < p_)
      s.insert(e);
  return s;
}

BoundedRecurrenceSchedule::BoundedRecurrenceSchedule(const RingSpec& ring, int window,
                                                     std::uint64_t seed)
    : edge_count_(ring.edge_count()), window_(window), block_((window + 1) / 2),
      seed_(seed) {
  if (window < 1) throw std::invalid_argument("recurrence window must be >= 1");
}

std::unique_ptr<EdgeSchedule> BoundedRecurrenceSchedule::clone() const {
  return std::make_unique<BoundedRecurrenceSchedule>(*this);
}

std::string BoundedRecurrenceSchedule::describe() const {
  return "bounded(B=" + std::to_string(window_) + ",seed=" + std::to_string(seed_) + ")";
}

EdgeSet BoundedRecurrenceSchedule::emit(long t, const Configuration*) {
  // One forced-presence round per aligned block of length ceil(B/2); any
  // window of B consecutive rounds fully contains such a block.
  EdgeSet s;
  const long block_index = t / block_;
  for (int e = 0; e < edge_count_; ++e) {
    const auto eu = static_cast<std::uint64_t>(e);
    const long forced =
        block_index * block_ +
        static_cast<long>(mix64(mix64(seed_ ^ eu) ^ static_cast<std::uint64_t>(block_index)) %
                          static_cast<std::uint64_t>(block_));
    if (t == forced || draw_unit(seed_ ^ 0x5eedull, eu, static_cast<std::uint64_t>(t)) < 0.5)
      s.insert(e);
  }
  return s;
}

EventualMissingSchedule::EventualMissingSchedule(EdgeId edge, long t_remove,
                                                 std::unique_ptr<EdgeSchedule> base)
    : edge_(edge), t_remove_(t_remove), base_(std::move(base)) {
  if (!base_) throw std::invalid_argument("eventual-missing schedule needs a base");
}

std::unique_ptr<EdgeSchedule> EventualMissingSchedule::clone() const {
  return std::make_unique<EventualMissingSchedule>(edge_, t_remove_, base_->clone());
}

std::string EventualMissingSchedule::describe() const {
  return "eventual_missing(e=" + std::to_string(edge_) + ",t=" + std::to_string(t_remove_) +
         "," + base_->describe() + ")";
}

EdgeSet EventualMissingSchedule::emit(long t, const Configuration* obs) {
  EdgeSet s = base_->edges_at(t, obs);
  if (t >= t_remove_) s.erase(edge_);
  return s;
}

MaskedSchedule::MaskedSchedule(std::unique_ptr<EdgeSchedule> base, RemovalMask mask)
    : base_(std::move(base)), mask_(std::move(mask)) {
  if (!base_) throw std::invalid_argument("masked schedule needs a base");
}

std::unique_ptr<EdgeSchedule> MaskedSchedule::clone() const {
  return std::make_unique<MaskedSchedule>(base_->clone(), mask_);
}

std::string MaskedSchedule::describe() const {
  return "masked(" + std::to_string(mask_.entries.size()) + "," + base_->describe() + ")";
}

EdgeSet MaskedSchedule::emit(long t, const Configuration* obs) {
  EdgeSet s = base_->edges_at(t, obs);
  for (const auto& entry : mask_.entries)
    if (t >= entry.first && t <= entry.last) s.erase(entry.edge);
  return s;
}

std::unique_ptr<EdgeSchedule> apply_removal(std::unique_ptr<EdgeSchedule> base,
                                            RemovalMask mask) {
  return std::make_unique<MaskedSchedule>(std::move(base), std::move(mask));
}

std::unique_ptr<EdgeSchedule> make_scripted(const RingSpec& ring, RemovalMask mask) {
  return apply_removal(std::make_unique<StaticSchedule>(ring), std::move(mask));
}

// ---------------------------------------------------------------------------
// Confiners

ConfinerStep one_robot_confiner_step(const RingSpec& ring, NodeId anchor,
                                     const ConfinerState& state, const Configuration& obs,
                                     long t) {
  if (obs.robot_count() != 1)
    throw std::invalid_argument("one-robot confiner requires exactly one robot");
  if (ring.n() < 3)
    throw std::invalid_argument("one-robot confiner requires ring size >= 3");
  const NodeId u = anchor;
  const NodeId v = ring.neighbor(u, GlobalDirection::CCW);
  const NodeId pos = obs.positions[0];

  int phase;
  EdgeId removed;
  if (pos == u) {
    phase = 0;
    removed = ring.adjacent_edges(u).cw;
  } else if (pos == v) {
    phase = 1;
    removed = ring.adjacent_edges(v).ccw;
  } else {
    throw std::logic_error("confined robot escaped {u, v}");
  }

  ConfinerStep step;
  step.edges = EdgeSet::all(ring.edge_count());
  step.edges.erase(removed);
  step.state = state;
  if (phase != state.phase) {
    step.state.phase = phase;
    step.state.phase_start = t;
  }
  return step;
}

ConfinerStep two_robot_confiner_step(const RingSpec& ring, NodeId anchor,
                                     const ConfinerState& state, const Configuration& obs,
                                     long t) {
  if (obs.robot_count() != 2)
    throw std::invalid_argument("two-robot confiner requires exactly two robots");
  if (ring.n() < 4)
    throw std::invalid_argument("two-robot confiner requires ring size >= 4");
  const int n = ring.n();
  const NodeId u = anchor;
  const NodeId v = (u + 1) % n;
  const NodeId w = (u + 2) % n;
  const NodeId r1 = obs.positions[0];
  const NodeId r2 = obs.positions[1];

  ConfinerStep step;
  step.state = state;
  if (step.state.phase == 0) {  // fresh state
    if (r1 != u || r2 != v)
      throw std::invalid_argument("two-robot confiner expects robots on anchor and its CW neighbor");
    step.state.phase = 1;
    step.state.phase_start = t;
  }

  // Advance on the designated move of the current phase.
  int phase = step.state.phase;
  const bool advance = (phase == 1 && r2 == w) || (phase == 2 && r1 == v) ||
                       (phase == 3 && r1 == u) || (phase == 4 && r2 == v);
  if (advance) {
    phase = phase % 4 + 1;
    step.state.phase = phase;
    step.state.phase_start = t;
  }

  const EdgeId e_ul = (u + n - 1) % n;
  const EdgeId e_ur = u;        // == e_vl
  const EdgeId e_vr = (u + 1) % n;  // == e_wl
  const EdgeId e_wr = (u + 2) % n;

  step.edges = EdgeSet::all(ring.edge_count());
  switch (phase) {
    case 1:
      step.edges.erase(e_ul);
      step.edges.erase(e_ur);
      break;
    case 2:
      step.edges.erase(e_ul);
      step.edges.erase(e_vr);
      step.edges.erase(e_wr);
      break;
    case 3:
      step.edges.erase(e_vr);
      step.edges.erase(e_wr);
      break;
    case 4:
      step.edges.erase(e_ul);
      step.edges.erase(e_ur);
      step.edges.erase(e_wr);
      break;
  }
  return step;
}

void AbsenceLog::record(long t, EdgeSet present) {
  for (int e = 0; e < edge_count_; ++e) {
    const bool absent = !present.contains(e);
    const auto it = open_since_.find(e);
    if (absent && it == open_since_.end()) {
      open_since_.emplace(e, t);
    } else if (!absent && it != open_since_.end()) {
      closed_.push_back({e, it->second, t - 1});
      open_since_.erase(it);
    }
  }
  last_t_ = t;
}

std::vector<AbsenceInterval> AbsenceLog::open(long now) const {
  std::vector<AbsenceInterval> out;
  for (const auto& [e, first] : open_since_) out.push_back({e, first, now});
  return out;
}

OneRobotConfinerSchedule::OneRobotConfinerSchedule(const RingSpec& ring, NodeId anchor)
    : ring_(ring), anchor_(anchor), log_(ring.edge_count()) {
  if (!ring.valid_node(anchor)) throw std::invalid_argument("confiner anchor outside ring");
  if (ring.n() < 3) throw std::invalid_argument("one-robot confiner requires ring size >= 3");
}

std::unique_ptr<EdgeSchedule> OneRobotConfinerSchedule::clone() const {
  return std::make_unique<OneRobotConfinerSchedule>(ring_, anchor_);
}

std::string OneRobotConfinerSchedule::describe() const {
  return "one_robot_confiner(u=" + std::to_string(anchor_) + ")";
}

EdgeSet OneRobotConfinerSchedule::emit(long t, const Configuration* obs) {
  auto step = one_robot_confiner_step(ring_, anchor_, state_, *obs, t);
  if (step.state.phase != state_.phase && t > 0) ++phase_changes_;
  state_ = step.state;
  log_.record(t, step.edges);
  return step.edges;
}

TwoRobotConfinerSchedule::TwoRobotConfinerSchedule(const RingSpec& ring, NodeId anchor)
    : ring_(ring), anchor_(anchor), log_(ring.edge_count()) {
  if (!ring.valid_node(anchor)) throw std::invalid_argument("confiner anchor outside ring");
  if (ring.n() < 4) throw std::invalid_argument("two-robot confiner requires ring size >= 4");
}

std::unique_ptr<EdgeSchedule> TwoRobotConfinerSchedule::clone() const {
  return std::make_unique<TwoRobotConfinerSchedule>(ring_, anchor_);
}

std::string TwoRobotConfinerSchedule::describe() const {
  return "two_robot_confiner(u=" + std::to_string(anchor_) + ")";
}

EdgeSet TwoRobotConfinerSchedule::emit(long t, const Configuration* obs) {
  auto step = two_robot_confiner_step(ring_, anchor_, state_, *obs, t);
  if (state_.phase != 0 && step.state.phase != state_.phase) ++phase_changes_;
  state_ = step.state;
  log_.record(t, step.edges);
  return step.edges;
}

// ---------------------------------------------------------------------------
// Diagnostics

ConnectivityDiagnosis diagnose(const RingSpec& ring, const std::vector<EdgeSet>& history,
                               int window) {
  if (window < 1) throw std::invalid_argument("diagnosis window must be >= 1");
  const int m = ring.edge_count();
  ConnectivityDiagnosis diag;
  diag.edges.resize(static_cast<std::size_t>(m));
  const long len = static_cast<long>(history.size());
  const long tail_start = std::max(0l, len - window);

  for (int e = 0; e < m; ++e) {
    auto& d = diag.edges[static_cast<std::size_t>(e)];
    long absent_run = 0;
    for (long t = 0; t < len; ++t) {
      if (history[static_cast<std::size_t>(t)].contains(e)) {
        d.last_seen = t;
        absent_run = 0;
      } else {
        ++absent_run;
        d.longest_absence = std::max(d.longest_absence, absent_run);
      }
      if (t >= tail_start && history[static_cast<std::size_t>(t)].contains(e))
        d.recurrent_so_far = true;
    }
  }

  // Union-find over nodes joined by recurrent-so-far edges.
  std::vector<int> parent(static_cast<std::size_t>(ring.n()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (int e = 0; e < m; ++e) {
    if (!diag.edges[static_cast<std::size_t>(e)].recurrent_so_far) continue;
    const int a = find(e % ring.n());
    const int b = find((e + 1) % ring.n());
    parent[static_cast<std::size_t>(a)] = b;
  }
  const int root = find(0);
  diag.eventual_underlying_connected_so_far = true;
  for (int u = 1; u < ring.n(); ++u)
    if (find(u) != root) diag.eventual_underlying_connected_so_far = false;
  return diag;
}

bool one_edge(const RingSpec& ring, const std::vector<EdgeSet>& history, NodeId u, long t,
              long t2) {
  if (t > t2) throw std::invalid_argument("one_edge requires t <= t2");
  if (t < 0 || t2 >= static_cast<long>(history.size()))
    throw std::invalid_argument("one_edge range outside trace");
  const auto ports = ring.adjacent_edges(u);
  if (ports.cw == ports.ccw) return false;  // 2-node simple ring: a single port edge
  bool cw_ok = true, ccw_ok = true;   // continuously present
  bool cw_gone = true, ccw_gone = true;  // continuously missing
  for (long s = t; s <= t2; ++s) {
    const auto& es = history[static_cast<std::size_t>(s)];
    (es.contains(ports.cw) ? cw_gone : cw_ok) = false;
    (es.contains(ports.ccw) ? ccw_gone : ccw_ok) = false;
  }
  return (cw_gone && ccw_ok) || (ccw_gone && cw_ok);
}

}  // namespace dynaring
