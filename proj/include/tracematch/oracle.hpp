#pragma once

#include <optional>

#include "tracematch/abstraction.hpp"
#include "tracematch/monitor.hpp"
#include "tracematch/types.hpp"

namespace tracematch {

struct OracleCaps {
  std::size_t max_spec = 12;
  std::size_t max_impl = 12;
};

// Witness pairing between specification vertices and implementation events
// (indexes into the implementation word).
struct MatchingRelation {
  std::vector<std::pair<VertexId, EventId>> pairs;
};

enum class Clause {
  OneToOne,         // pairing not injective
  SpecUnmatched,    // an expired obligatory vertex has no partner
  ImplUnmatched,    // an expired implementation event has no partner
  OrderViolated,    // matched stamps disagree with the specification order
  OptionalClosure,  // a descendant of an expired unmatched optional vertex
                    // would have to be matched
};

const char* to_string(Clause c);

struct Counterexample {
  Tick time = 0;
  Clause clause = Clause::OrderViolated;
  std::optional<VertexId> spec_vertex;
  std::optional<EventId> impl_event;
};

struct ConformanceResult {
  bool conforming = false;
  std::optional<Counterexample> counterexample;
  MatchingRelation final_witness;  // witness at the last checked time
  std::vector<Tick> checked_times;
};

// All stamps, interval endpoints, expiry times and cancellation-window ends,
// plus tick 0 and one tick beyond the maximum. Between consecutive values
// the past sets and expiry sets are constant, so checking conformance at
// these times decides it for all times.
std::vector<Tick> critical_times(const SpecTrace& spec, const TimedWord& impl,
                                 const MonitorConfig& cfg);

// Backtracking search for a matching relation at time t: injective, covering
// all expired vertices/events, interval- and order-respecting. Plain
// semantics treats every vertex as obligatory.
std::optional<MatchingRelation> find_matching(const SpecTrace& spec,
                                              const TimedWord& impl, Tick t,
                                              const MonitorConfig& cfg,
                                              const OracleCaps& caps = {});

// Same with optional semantics: an expired optional vertex may stay
// unmatched provided none of its descendants is matched.
std::optional<MatchingRelation> find_matching_optional(
    const SpecTrace& spec, const TimedWord& impl, Tick t,
    const MonitorConfig& cfg, const OracleCaps& caps = {});

// Independent validator for a proposed matching at time t.
bool check_matching(const SpecTrace& spec, const TimedWord& impl, Tick t,
                    const MatchingRelation& m, const MonitorConfig& cfg,
                    bool optional_semantics);

// Decides conformance at every critical time; the mode comes from
// cfg.optional_mode. Non-conforming results name the first failing time and
// the violated clause.
ConformanceResult conforms(const SpecTrace& spec, const TimedWord& impl,
                           const MonitorConfig& cfg, const OracleCaps& caps = {});

struct EquivalenceReport {
  bool agree = false;
  Verdict monitor_verdict = Verdict::Inconclusive;
  std::optional<FailureReport> monitor_failure;
  ConformanceResult oracle;
};

// Runs the monitor and the oracle on the same instance; they agree when the
// monitor reports false exactly on non-conforming instances.
EquivalenceReport compare_with_monitor(const SpecTrace& spec,
                                       const TimedWord& impl,
                                       const MonitorConfig& cfg,
                                       const OracleCaps& caps = {});

}  // namespace tracematch
