#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dynaring/dynamics.hpp"
#include "dynaring/trace.hpp"

namespace dynaring {

enum class Verdict { Pass, Fail, Inconclusive };

const char* to_string(Verdict v);

// Outcome of one lemma-derived check. A fail carries the first violating
// round and a witness snapshot; attach the run seed for replayability.
struct InvariantReport {
  std::string name;
  Verdict verdict = Verdict::Pass;
  long first_violation = -1;
  std::string witness;
  std::optional<std::uint64_t> witness_seed;

  bool passed() const { return verdict == Verdict::Pass; }
};

// `inv=<name> verdict=<pass|fail|inconclusive> first_violation=<round|-> witness_seed=<u64|->`
std::string format_report(const InvariantReport& report);

// No tower involves 3 robots or more.
InvariantReport check_max_tower(const ExecutionTrace& trace);

// The two members of any 2-robot tower hold opposite global directions from
// the Compute phase of the tower's start round until it breaks.
InvariantReport check_tower_opposite_dirs(const ExecutionTrace& trace);

// Under an eventual missing edge e, eventually one robot sits forever on each
// extremity of e pointing to e. Pass requires the condition to hold over the
// final `tail` configurations; a horizon too short to witness that yields
// Inconclusive, not Fail.
InvariantReport check_sentinels(const ExecutionTrace& trace, EdgeId e, long t_remove,
                                long tail);

// Every node visited over the whole trace lies in `allowed`.
InvariantReport check_confinement(const ExecutionTrace& trace,
                                  const std::vector<NodeId>& allowed);

CoverageStats coverage(const ExecutionTrace& trace);

bool one_edge(const ExecutionTrace& trace, NodeId u, long t, long t2);
ConnectivityDiagnosis diagnose(const ExecutionTrace& trace, int window);

}  // namespace dynaring
