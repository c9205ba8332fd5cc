#pragma once

#include <iosfwd>

#include "tracematch/harness.hpp"
#include "tracematch/oracle.hpp"

namespace tracematch {

struct FuzzCaps {
  std::size_t max_spec = 6;
  std::size_t max_impl = 6;
  Tick max_tick = 16;
};

// A complete checkable instance plus everything needed to re-serialize it.
struct Instance {
  TimedWord spec_word;
  DependencyDecl deps;
  std::set<EventId> optional_ids;
  AbstractionConfig acfg;
  MonitorConfig mcfg;
  SpecTrace spec;
  TimedWord impl;
};

// Deterministic instance from a seed: random slacks, random spec word with a
// random dependency DAG and (in optional mode) upward-closed optional marks,
// paired with a conforming, mutated or unrelated implementation word.
Instance random_instance(std::uint64_t seed, const FuzzCaps& caps,
                         bool optional_mode);

struct FuzzOutcome {
  std::size_t total = 0;
  std::size_t agreed = 0;
  std::vector<std::uint64_t> disagreeing_seeds;
};

// Monitor/oracle agreement over `count` seeded instances. Disagreements are
// dumped to `diag` when given.
FuzzOutcome run_fuzz(std::uint64_t seed, std::size_t count, const FuzzCaps& caps,
                     bool optional_mode, std::ostream* diag = nullptr);

}  // namespace tracematch
