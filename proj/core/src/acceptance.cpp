#include "dynaring/acceptance.hpp"

#include <atomic>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "dynaring/analysis.hpp"
#include "dynaring/engine.hpp"
#include "dynaring/experiment.hpp"

namespace dynaring {
namespace {

std::vector<NodeId> spread_positions(int n, int k) {
  std::vector<NodeId> out;
  for (int i = 0; i < k; ++i) out.push_back(static_cast<NodeId>(static_cast<long>(i) * n / k));
  return out;
}

std::vector<Chirality> seeded_chirality(int k, std::uint64_t seed) {
  std::vector<Chirality> out;
  const std::uint64_t bits = mix64(seed ^ 0xc41ba5eull);
  for (int i = 0; i < k; ++i) out.push_back({((bits >> i) & 1u) == 0});
  return out;
}

std::vector<Chirality> alternating_chirality(int k) {
  std::vector<Chirality> out;
  for (int i = 0; i < k; ++i) out.push_back({i % 2 == 0});
  return out;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const int threads = sweep_thread_cap();
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const std::size_t used = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  for (std::size_t w = 0; w < used; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  for (auto& th : pool) th.join();
}

struct SuiteCell {
  int k;
  int n;
  int family;  // 0 static, 1 bounded, 2 eventual-missing over bounded
  std::uint64_t seed;
};

struct SuiteOutcome {
  bool coverage_ok = false;
  bool tower_ok = false;
  bool oppdir_ok = false;
  std::string note;
};

ExecutionTrace run_pef3_cell(const SuiteCell& cell, EdgeId* missing_edge_out) {
  const RingSpec ring(cell.n);
  InitParams params;
  params.algorithm = Algorithm::PEF3plus;
  params.positions = spread_positions(cell.n, cell.k);
  params.chiralities = seeded_chirality(cell.k, cell.seed);
  const Configuration initial = make_initial(ring, params);

  std::unique_ptr<EdgeSchedule> schedule;
  if (cell.family == 0) {
    schedule = std::make_unique<StaticSchedule>(ring);
  } else if (cell.family == 1) {
    schedule = std::make_unique<BoundedRecurrenceSchedule>(ring, 8, cell.seed);
  } else {
    const EdgeId e = static_cast<EdgeId>(mix64(cell.seed * 77 + static_cast<std::uint64_t>(cell.n)) %
                                         static_cast<std::uint64_t>(ring.edge_count()));
    if (missing_edge_out) *missing_edge_out = e;
    schedule = std::make_unique<EventualMissingSchedule>(
        e, 100, std::make_unique<BoundedRecurrenceSchedule>(ring, 8, cell.seed));
  }
  return run(ring, *schedule, initial, 10000);
}

std::string summarize(std::size_t bad, std::size_t total, const std::string& first_bad) {
  std::ostringstream os;
  os << (total - bad) << "/" << total << " ok";
  if (bad) os << "; first failure: " << first_bad;
  return os.str();
}

// A hand-built trace with two co-located robots forced onto the same global
// direction; the opposite-direction checker must flag it.
ExecutionTrace same_dir_tower_fixture() {
  const RingSpec ring(5);
  Configuration c0;
  c0.positions = {0, 2, 4};
  c0.states.resize(3);
  for (auto& s : c0.states) s.chirality = {true};
  ExecutionTrace trace(ring, c0);
  Configuration c1 = c0;
  c1.round = 1;
  c1.positions = {1, 1, 4};  // tower on node 1, both members still pointing left/CCW
  trace.append_round(EdgeSet::all(5), {true, true, false}, c1);
  Configuration c2 = c1;
  c2.round = 2;
  trace.append_round(EdgeSet::all(5), {false, false, false}, c2);
  trace.seal();
  return trace;
}

struct DemoSpec {
  bool two_robots;
  Algorithm algorithm;
  int n;
};

struct DemoOutcome {
  bool ok = false;
  std::string note;
};

DemoOutcome run_demo(const DemoSpec& spec) {
  const long horizon = 100000;
  const RingSpec ring(spec.n);
  DemoOutcome out;

  InitParams params;
  params.algorithm = spec.algorithm;
  std::unique_ptr<EdgeSchedule> schedule;
  long phase_changes = 0;
  const AbsenceLog* log = nullptr;
  std::vector<NodeId> allowed;
  if (spec.two_robots) {
    params.positions = {0, 1};
    params.chiralities = alternating_chirality(2);
    auto confiner = std::make_unique<TwoRobotConfinerSchedule>(ring, 0);
    allowed = {0, 1, 2};
    auto* raw = confiner.get();
    schedule = std::move(confiner);
    const Configuration initial = make_initial(ring, params);
    ExecutionTrace trace = run(ring, *schedule, initial, horizon);
    phase_changes = raw->phase_changes();
    log = &raw->absences();
    const InvariantReport conf = check_confinement(trace, allowed);
    const int visited = trace.coverage().visited_nodes();
    long max_closed = 0;
    for (const auto& iv : log->closed()) max_closed = std::max(max_closed, iv.last - iv.first + 1);
    bool intervals_ok = true;
    if (phase_changes >= horizon / 4)
      for (const auto& iv : log->open(horizon - 1))
        intervals_ok &= (iv.last - iv.first + 1) <= 2 * max_closed + 2;
    out.ok = conf.passed() && visited <= 3 && intervals_ok;
    std::ostringstream os;
    os << "visited=" << visited << " phase_changes=" << phase_changes
       << " closed_intervals=" << log->closed().size()
       << (phase_changes < horizon / 4 ? " (stalled phase)" : "");
    out.note = os.str();
    return out;
  }

  params.positions = {0};
  params.chiralities = {Chirality{true}};
  auto confiner = std::make_unique<OneRobotConfinerSchedule>(ring, 0);
  allowed = {0, ring.neighbor(0, GlobalDirection::CCW)};
  auto* raw = confiner.get();
  schedule = std::move(confiner);
  const Configuration initial = make_initial(ring, params);
  ExecutionTrace trace = run(ring, *schedule, initial, horizon);
  phase_changes = raw->phase_changes();
  log = &raw->absences();
  const InvariantReport conf = check_confinement(trace, allowed);
  const int visited = trace.coverage().visited_nodes();
  long max_closed = 0;
  for (const auto& iv : log->closed()) max_closed = std::max(max_closed, iv.last - iv.first + 1);
  bool intervals_ok = true;
  if (phase_changes >= horizon / 4)
    for (const auto& iv : log->open(horizon - 1))
      intervals_ok &= (iv.last - iv.first + 1) <= 2 * max_closed + 2;
  out.ok = conf.passed() && visited <= 2 && intervals_ok;
  std::ostringstream os;
  os << "visited=" << visited << " phase_changes=" << phase_changes
     << " closed_intervals=" << log->closed().size()
     << (phase_changes < horizon / 4 ? " (stalled phase)" : "");
  out.note = os.str();
  return out;
}

RemovalMask pef2_alternating_mask(long horizon) {
  RemovalMask mask;
  for (long j = 0; 30 * j < horizon; ++j)
    for (EdgeId e = 0; e < 3; ++e)
      mask.entries.push_back({e, 30 * j + 10 * e, 30 * j + 10 * e + 9});
  return mask;
}

RemovalMask pef1_alternating_mask(long horizon, bool multigraph) {
  RemovalMask mask;
  for (long j = 0; 4 * j < horizon; ++j) {
    mask.entries.push_back({0, 4 * j, 4 * j + 1});
    if (multigraph) mask.entries.push_back({1, 4 * j + 2, 4 * j + 3});
  }
  return mask;
}

struct SmallRingCase {
  std::string label;
  RingSpec ring;
  InitParams params;
  std::function<std::unique_ptr<EdgeSchedule>(std::uint64_t)> make_schedule;
  std::vector<std::uint64_t> seeds;
};

}  // namespace

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

std::vector<CriterionResult> run_acceptance(const std::string& golden_path, std::ostream& log) {
  std::vector<CriterionResult> results;
  auto emit = [&](CriterionResult r) {
    log << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
    results.push_back(std::move(r));
  };

  // --- Criteria 1-3: the PEF_3+ suite ------------------------------------
  std::vector<SuiteCell> cells;
  for (int k = 3; k <= 5; ++k)
    for (int n = k + 1; n <= 12; ++n)
      for (int family = 0; family < 3; ++family)
        for (std::uint64_t seed = 0; seed < 50; ++seed)
          cells.push_back({k, n, family, seed});

  std::vector<SuiteOutcome> outcomes(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) {
    const SuiteCell& cell = cells[i];
    ExecutionTrace trace = run_pef3_cell(cell, nullptr);
    const CoverageStats& cov = trace.coverage();
    SuiteOutcome& out = outcomes[i];
    out.coverage_ok = cov.epochs_completed >= 5 && cov.max_gap_over_nodes() < 5000;
    out.tower_ok = check_max_tower(trace).passed();
    out.oppdir_ok = check_tower_opposite_dirs(trace).passed();
    if (!out.coverage_ok || !out.tower_ok || !out.oppdir_ok) {
      std::ostringstream os;
      os << "k=" << cell.k << " n=" << cell.n << " family=" << cell.family
         << " seed=" << cell.seed << " epochs=" << cov.epochs_completed
         << " max_gap=" << cov.max_gap_over_nodes();
      out.note = os.str();
    }
  });

  std::size_t cov_bad = 0, tower_bad = 0, opp_bad = 0;
  std::string cov_first, tower_first, opp_first;
  for (const auto& out : outcomes) {
    if (!out.coverage_ok && cov_bad++ == 0) cov_first = out.note;
    if (!out.tower_ok && tower_bad++ == 0) tower_first = out.note;
    if (!out.oppdir_ok && opp_bad++ == 0) opp_first = out.note;
  }

  emit({"criterion 1 (PEF_3+ perpetual coverage)", cov_bad == 0,
        summarize(cov_bad, outcomes.size(), cov_first)});

  // Bernoulli stress for criteria 2 and 3.
  const std::size_t stress_runs = 1000;
  std::vector<SuiteOutcome> stress(stress_runs);
  parallel_for(stress_runs, [&](std::size_t i) {
    const int k = 3 + static_cast<int>(i % 3);
    const int n = k + 1 + static_cast<int>((i / 3) % static_cast<std::size_t>(12 - k));
    const RingSpec ring(n);
    InitParams params;
    params.algorithm = Algorithm::PEF3plus;
    params.positions = spread_positions(n, k);
    params.chiralities = seeded_chirality(k, i);
    BernoulliSchedule schedule(ring, 0.5, i);
    ExecutionTrace trace = run(ring, schedule, make_initial(ring, params), 2000);
    stress[i].tower_ok = check_max_tower(trace).passed();
    stress[i].oppdir_ok = check_tower_opposite_dirs(trace).passed();
    if (!stress[i].tower_ok || !stress[i].oppdir_ok)
      stress[i].note = "bernoulli stress run " + std::to_string(i);
  });
  for (const auto& out : stress) {
    if (!out.tower_ok && tower_bad++ == 0) tower_first = out.note;
    if (!out.oppdir_ok && opp_bad++ == 0) opp_first = out.note;
  }

  emit({"criterion 2 (tower size bound)", tower_bad == 0,
        summarize(tower_bad, outcomes.size() + stress_runs, tower_first)});

  const ExecutionTrace fixture = same_dir_tower_fixture();
  const bool fixture_flagged =
      check_tower_opposite_dirs(fixture).verdict == Verdict::Fail;
  emit({"criterion 3 (opposite directions in towers)", opp_bad == 0 && fixture_flagged,
        summarize(opp_bad, outcomes.size() + stress_runs, opp_first) +
            (fixture_flagged ? "; violation fixture flagged" : "; fixture NOT flagged")});

  // --- Criterion 4: sentinel formation ------------------------------------
  struct SentinelCell {
    int n;
    std::uint64_t seed;
  };
  std::vector<SentinelCell> scells;
  for (int n = 5; n <= 10; ++n)
    for (std::uint64_t seed = 0; seed < 20; ++seed) scells.push_back({n, seed});
  std::vector<Verdict> sverdicts(scells.size());
  parallel_for(scells.size(), [&](std::size_t i) {
    const auto& cell = scells[i];
    const RingSpec ring(cell.n);
    const EdgeId e = static_cast<EdgeId>(mix64(cell.seed * 31 + static_cast<std::uint64_t>(cell.n)) %
                                         static_cast<std::uint64_t>(ring.edge_count()));
    InitParams params;
    params.algorithm = Algorithm::PEF3plus;
    params.positions = spread_positions(cell.n, 3);
    params.chiralities = seeded_chirality(3, cell.seed);
    EventualMissingSchedule schedule(
        e, 50, std::make_unique<BoundedRecurrenceSchedule>(ring, 8, cell.seed));
    ExecutionTrace trace = run(ring, schedule, make_initial(ring, params), 5000);
    sverdicts[i] = check_sentinels(trace, e, 50, 1000).verdict;
  });
  std::size_t spass = 0, sfail = 0, sinc = 0;
  for (const Verdict v : sverdicts) {
    if (v == Verdict::Pass) ++spass;
    else if (v == Verdict::Fail) ++sfail;
    else ++sinc;
  }
  {
    std::ostringstream os;
    os << spass << " pass, " << sinc << " inconclusive, " << sfail << " fail of "
       << scells.size();
    emit({"criterion 4 (sentinel formation)",
          sfail == 0 && spass * 100 >= scells.size() * 95, os.str()});
  }

  // --- Criterion 5: small-ring positive results ---------------------------
  {
    const long horizon = 2000;
    std::vector<SmallRingCase> cases;
    const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10,
                                              11, 12, 13, 14, 15, 16, 17, 18, 19, 20};

    auto add_pef2 = [&](const std::string& chirality_label,
                        std::vector<Chirality> chiralities) {
      const RingSpec ring(3);
      InitParams params;
      params.algorithm = Algorithm::PEF2;
      params.positions = {0, 1};
      params.chiralities = std::move(chiralities);
      cases.push_back({"pef2 static " + chirality_label, ring, params,
                       [ring](std::uint64_t) -> std::unique_ptr<EdgeSchedule> {
                         return std::make_unique<StaticSchedule>(ring);
                       },
                       {0}});
      cases.push_back({"pef2 bounded " + chirality_label, ring, params,
                       [ring](std::uint64_t s) -> std::unique_ptr<EdgeSchedule> {
                         return std::make_unique<BoundedRecurrenceSchedule>(ring, 8, s);
                       },
                       seeds});
      cases.push_back({"pef2 scripted " + chirality_label, ring, params,
                       [ring, horizon](std::uint64_t) -> std::unique_ptr<EdgeSchedule> {
                         return make_scripted(ring, pef2_alternating_mask(horizon));
                       },
                       {0}});
    };
    add_pef2("alternating", alternating_chirality(2));
    add_pef2("uniform", {Chirality{true}, Chirality{true}});

    auto add_pef1 = [&](bool multigraph) {
      const RingSpec ring(2, multigraph);
      const std::string label = multigraph ? "pef1 multigraph" : "pef1 simple";
      InitParams params;
      params.algorithm = Algorithm::PEF1;
      params.positions = {0};
      params.chiralities = {Chirality{true}};
      cases.push_back({label + " static", ring, params,
                       [ring](std::uint64_t) -> std::unique_ptr<EdgeSchedule> {
                         return std::make_unique<StaticSchedule>(ring);
                       },
                       {0}});
      cases.push_back({label + " bounded", ring, params,
                       [ring](std::uint64_t s) -> std::unique_ptr<EdgeSchedule> {
                         return std::make_unique<BoundedRecurrenceSchedule>(ring, 8, s);
                       },
                       seeds});
      cases.push_back({label + " scripted", ring, params,
                       [ring, horizon, multigraph](std::uint64_t) -> std::unique_ptr<EdgeSchedule> {
                         return make_scripted(ring, pef1_alternating_mask(horizon, multigraph));
                       },
                       {0}});
    };
    add_pef1(false);
    add_pef1(true);

    std::size_t total = 0, bad = 0;
    std::string first_bad;
    for (const auto& c : cases) {
      for (const std::uint64_t seed : c.seeds) {
        ++total;
        auto schedule = c.make_schedule(seed);
        ExecutionTrace trace =
            run(c.ring, *schedule, make_initial(c.ring, c.params), horizon);
        const CoverageStats& cov = trace.coverage();
        const bool ok =
            cov.visited_nodes() == c.ring.n() && cov.max_gap_over_nodes() < 50;
        if (!ok && bad++ == 0)
          first_bad = c.label + " seed=" + std::to_string(seed) +
                      " max_gap=" + std::to_string(cov.max_gap_over_nodes());
      }
    }
    emit({"criterion 5 (small-ring positive results)", bad == 0,
          summarize(bad, total, first_bad)});
  }

  // --- Criterion 6: impossibility demos -----------------------------------
  {
    std::vector<DemoSpec> demos;
    for (const Algorithm a : {Algorithm::PEF1, Algorithm::PEF2, Algorithm::PEF3plus})
      for (const int n : {3, 5, 9}) demos.push_back({false, a, n});
    for (const int n : {4, 8}) demos.push_back({true, Algorithm::PEF3plus, n});

    std::size_t bad = 0;
    std::string detail;
    std::vector<DemoOutcome> douts(demos.size());
    parallel_for(demos.size(), [&](std::size_t i) { douts[i] = run_demo(demos[i]); });
    for (std::size_t i = 0; i < demos.size(); ++i)
      if (!douts[i].ok && bad++ == 0)
        detail = "n=" + std::to_string(demos[i].n) + " " + douts[i].note;
    emit({"criterion 6 (confinement demos)", bad == 0, summarize(bad, demos.size(), detail)});
  }

  // --- Criterion 7: deterministic replay ----------------------------------
  {
    bool ok = true;
    std::string detail = "replays bit-identical";
    for (const std::string kind : {"bounded", "eventual_missing"}) {
      ExperimentConfig cfg;
      cfg.n = 9;
      cfg.k = 3;
      cfg.schedule_kind = kind;
      cfg.window = 8;
      cfg.seed = 42;
      cfg.edge = 4;
      cfg.t_remove = 100;
      cfg.base_kind = "bounded";
      cfg.horizon = 5000;
      cfg.checks = {parse_check("max_tower"), parse_check("epochs>=1")};
      RunOutcome first = execute(cfg);
      std::istringstream canon(first.summary.canonical);
      RunOutcome second = execute(parse_config(canon));
      const std::string t1 = trace_text(first.trace);
      const std::string t2 = trace_text(second.trace);
      if (t1.empty() || t1 != t2 || first.summary.digest != second.summary.digest) {
        ok = false;
        detail = "replay diverged for schedule " + kind;
        break;
      }
    }
    emit({"criterion 7 (deterministic replay)", ok, detail});
  }

  // --- Criterion 8: golden trace ------------------------------------------
  {
    CriterionResult r{"criterion 8 (golden trace)", false, ""};
    std::ifstream in(golden_path);
    if (!in) {
      r.detail = "cannot open golden file: " + golden_path;
    } else {
      std::ostringstream expected;
      expected << in.rdbuf();
      const RingSpec ring(4);
      InitParams params;
      params.algorithm = Algorithm::PEF3plus;
      params.positions = spread_positions(4, 3);
      params.chiralities = alternating_chirality(3);
      StaticSchedule schedule(ring);
      ExecutionTrace trace = run(ring, schedule, make_initial(ring, params), 3);
      if (trace_text(trace) == expected.str()) {
        r.pass = true;
        r.detail = "engine trace matches " + golden_path;
      } else {
        r.detail = "trace differs from golden file";
      }
    }
    emit(std::move(r));
  }

  return results;
}

}  // namespace dynaring
