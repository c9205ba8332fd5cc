#include "tracematch/abstraction.hpp"

#include <algorithm>
#include <cassert>

namespace tracematch {

void SlackPolicy::validate() const {
  auto check = [](Duration v, Duration bound, const std::string& what) {
    if (v > bound)
      throw std::invalid_argument("slack " + what + " exceeds its global bound");
  };
  check(dt_minus_default, bound_minus, "dtminus.default");
  check(dt_plus_default, bound_plus, "dtplus.default");
  for (const auto& [name, v] : dt_minus) check(v, bound_minus, "dtminus." + name);
  for (const auto& [name, v] : dt_plus) check(v, bound_plus, "dtplus." + name);
}

Tick SpecTrace::end_tick() const {
  return theta.empty() ? 0 : *std::max_element(theta.begin(), theta.end());
}

Interval widen(Tick t, const EventLabel& label, const SlackPolicy& slack) {
  const Duration minus = slack.minus_for(label.name);
  return Interval{t >= minus ? t - minus : 0, sat_add(t, slack.plus_for(label.name))};
}

AbstractionBuilder::AbstractionBuilder(AbstractionConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.slack.validate();
}

VertexId AbstractionBuilder::add_event(const EventLabel& label, Tick tick,
                                       const std::vector<EventId>& deps,
                                       bool optional_mark) {
  if (!trace_.empty() && tick < last_tick_)
    throw AbstractionError("specification ticks must be weakly monotone");

  std::vector<VertexId> preds;
  for (EventId d : deps) {
    if (d >= trace_.size())
      throw AbstractionError("dependency on unknown event id " + std::to_string(d));
    preds.push_back(d);
  }
  // Occurrences of the same label stay ordered by emission.
  if (auto it = last_occurrence_.find(label); it != last_occurrence_.end())
    preds.push_back(it->second);

  const VertexId v = trace_.pomset.add_vertex(label);
  trace_.theta.push_back(tick);
  trace_.delta.push_back(widen(tick, label, cfg_.slack));
  trace_.optional_mark.push_back(optional_mark);
  trace_.port.push_back(cfg_.ports.has(label.name) ? cfg_.ports.port_of(label.name)
                                                   : 0);
  for (VertexId p : preds) {
    if (trace_.theta[p] >= tick)
      throw AbstractionError("dependent events need strictly increasing ticks");
    trace_.pomset.add_edge(p, v);
  }
  if (cfg_.optional_mode) {
    // All dependencies, including the ones implied by closure, must stay
    // inside the dependency window.
    for (VertexId u = 0; u < v; ++u)
      if (trace_.pomset.precedes(u, v) && tick - trace_.theta[u] > cfg_.dep_window)
        throw AbstractionError("dependency spans more than the dependency window");
  }
  last_occurrence_[label] = v;
  last_tick_ = tick;
  return v;
}

SpecTrace abstract_word(const TimedWord& spec, const DependencyDecl& deps,
                        const std::set<EventId>& optional_ids,
                        const AbstractionConfig& cfg) {
  const PortAssignment* ports = cfg.ports.all().empty() ? nullptr : &cfg.ports;
  if (!validate_timed_word(spec, ports).empty())
    throw AbstractionError("specification word is not a valid timed word");

  std::vector<std::vector<EventId>> per_event(spec.size());
  for (auto [from, to] : deps.edges) {
    if (to >= spec.size() || from >= to)
      throw AbstractionError("dependency edges must point from earlier events");
    per_event[to].push_back(from);
  }
  AbstractionBuilder builder(cfg);
  for (std::size_t i = 0; i < spec.size(); ++i)
    builder.add_event(spec[i].label, spec[i].tick, per_event[i],
                      optional_ids.count(static_cast<EventId>(i)) != 0);
  return builder.trace();
}

bool language_member(const TimedTrace& tt, const SpecTrace& itrace) {
  if (tt.pomset.size() != itrace.size())
    throw std::invalid_argument("vertex sets differ");
  for (VertexId v = 0; v < itrace.size(); ++v)
    if (tt.pomset.label(v) != itrace.pomset.label(v))
      throw std::invalid_argument("labels differ at vertex " + std::to_string(v));

  for (VertexId v = 0; v < itrace.size(); ++v)
    if (!itrace.delta[v].contains(tt.theta[v])) return false;
  for (VertexId u = 0; u < itrace.size(); ++u)
    for (VertexId v = 0; v < itrace.size(); ++v)
      if (tt.pomset.precedes(u, v) != itrace.pomset.precedes(u, v)) return false;
  return true;
}

}  // namespace tracematch
