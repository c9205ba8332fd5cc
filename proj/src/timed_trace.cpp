#include "tracematch/timed_trace.hpp"

#include <algorithm>
#include <cassert>

namespace tracematch {

Tick TimedTrace::begin_tick() const {
  assert(!empty());
  return *std::min_element(theta.begin(), theta.end());
}

Tick TimedTrace::end_tick() const {
  assert(!empty());
  return *std::max_element(theta.begin(), theta.end());
}

std::vector<CausalityViolation> validate_timed_trace(const TimedTrace& tt) {
  std::vector<CausalityViolation> out;
  for (VertexId u = 0; u < tt.pomset.size(); ++u)
    for (VertexId v = 0; v < tt.pomset.size(); ++v)
      if (tt.pomset.precedes(u, v) && tt.theta[u] >= tt.theta[v])
        out.push_back({u, v});
  return out;
}

TimedTrace window(const TimedTrace& tt, Tick t, Duration dt) {
  const Tick hi = sat_add(t, dt);
  std::vector<VertexId> keep;
  for (VertexId v = 0; v < tt.pomset.size(); ++v)
    if (tt.theta[v] >= t && tt.theta[v] <= hi) keep.push_back(v);

  TimedTrace out;
  std::vector<VertexId> remap(tt.pomset.size(), 0);
  for (VertexId v : keep) {
    remap[v] = out.pomset.add_vertex(tt.pomset.label(v));
    out.theta.push_back(tt.theta[v]);
  }
  for (VertexId u : keep)
    for (VertexId v : keep)
      if (tt.pomset.precedes(u, v)) out.pomset.add_edge(remap[u], remap[v]);
  return out;
}

}  // namespace tracematch
