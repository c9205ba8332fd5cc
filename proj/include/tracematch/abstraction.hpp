#pragma once

#include <set>
#include <vector>

#include "tracematch/pomset.hpp"
#include "tracematch/timed_trace.hpp"
#include "tracematch/types.hpp"

namespace tracematch {

// Per-label time slacks with mandatory defaults, bounded globally.
struct SlackPolicy {
  Duration dt_minus_default = 0;
  Duration dt_plus_default = 0;
  std::map<std::string, Duration> dt_minus;
  std::map<std::string, Duration> dt_plus;
  Duration bound_minus = 0;  // global bound on dt_minus
  Duration bound_plus = 0;   // global bound on dt_plus

  Duration minus_for(const std::string& name) const {
    auto it = dt_minus.find(name);
    return it == dt_minus.end() ? dt_minus_default : it->second;
  }
  Duration plus_for(const std::string& name) const {
    auto it = dt_plus.find(name);
    return it == dt_plus.end() ? dt_plus_default : it->second;
  }

  // Every per-label slack (and the defaults) must stay within the bounds.
  void validate() const;
};

// Order edges declared by the model, from earlier to later emitted events.
struct DependencyDecl {
  std::vector<std::pair<EventId, EventId>> edges;
};

// Specification behavior: pomset plus concrete stamps, per-vertex intervals
// and optional marks. theta(x) always lies inside delta(x); causality holds.
struct SpecTrace {
  Pomset pomset;
  std::vector<Tick> theta;
  std::vector<Interval> delta;
  std::vector<bool> optional_mark;
  std::vector<PortId> port;

  std::size_t size() const { return theta.size(); }
  bool empty() const { return theta.empty(); }
  Tick end_tick() const;
};

struct AbstractionConfig {
  ConcurrentAlphabet alphabet;
  PortAssignment ports;
  SlackPolicy slack;
  Duration dep_window = 0;  // bound on |theta(x)-theta(y)| for dependent x, y
  bool optional_mode = false;
};

struct AbstractionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// [max(0, t - dt_minus(label)), t + dt_plus(label)], clamped at tick 0.
Interval widen(Tick t, const EventLabel& label, const SlackPolicy& slack);

// Incremental generalization of a specification stream. Events arrive in
// emission order with weakly monotone ticks; each may declare dependencies
// on earlier events by id. Equal labels are chained mandatorily.
class AbstractionBuilder {
 public:
  explicit AbstractionBuilder(AbstractionConfig cfg);

  // Returns the vertex id (== emission index). Throws AbstractionError on
  // tick regression, causality violation (dependent events at equal ticks),
  // unknown dependency ids, or, in optional mode, a dependency whose stamps
  // are further apart than the dependency window.
  VertexId add_event(const EventLabel& label, Tick tick,
                     const std::vector<EventId>& deps, bool optional_mark);

  const SpecTrace& trace() const { return trace_; }
  const AbstractionConfig& config() const { return cfg_; }

 private:
  AbstractionConfig cfg_;
  SpecTrace trace_;
  std::map<EventLabel, VertexId> last_occurrence_;
  Tick last_tick_ = 0;
};

// Whole-word generalization; validates the word first (monotonicity and,
// via cfg.ports, sequentiality).
SpecTrace abstract_word(const TimedWord& spec, const DependencyDecl& deps,
                        const std::set<EventId>& optional_ids,
                        const AbstractionConfig& cfg);

// True iff tt stamps every vertex inside its interval and carries exactly
// the same order. Throws std::invalid_argument when vertex sets or labels
// do not line up index-wise.
bool language_member(const TimedTrace& tt, const SpecTrace& itrace);

}  // namespace tracematch
