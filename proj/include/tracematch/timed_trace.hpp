#pragma once

#include <vector>

#include "tracematch/pomset.hpp"
#include "tracematch/types.hpp"

namespace tracematch {

// Pomset with a concrete time stamp per vertex. Valid when causality holds:
// u < v implies theta(u) < theta(v), strictly.
struct TimedTrace {
  Pomset pomset;
  std::vector<Tick> theta;

  bool empty() const { return pomset.empty(); }
  Tick begin_tick() const;
  Tick end_tick() const;
};

struct CausalityViolation {
  VertexId before;
  VertexId after;
};

std::vector<CausalityViolation> validate_timed_trace(const TimedTrace& tt);

// Induced sub-trace on vertices stamped within [t, t+dt], order restricted.
TimedTrace window(const TimedTrace& tt, Tick t, Duration dt);

}  // namespace tracematch
