#include "tracematch/fuzz.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <random>

#include "tracematch/formats.hpp"

namespace tracematch {

namespace {

constexpr const char* kNames[] = {"a", "b", "c", "d"};

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) {
  return n == 0 ? 0 : rng() % n;
}

TimedWord jittered_copy(const SpecTrace& spec, std::mt19937_64& rng,
                        bool drop_optional_cones) {
  // Stamps move freely inside each interval but never cross a dependent
  // predecessor; dropped optional vertices take their whole cone along.
  std::vector<bool> dropped(spec.size(), false);
  if (drop_optional_cones) {
    for (VertexId v = 0; v < spec.size(); ++v) {
      if (!spec.optional_mark[v] || pick(rng, 3) != 0) continue;
      dropped[v] = true;
      for (VertexId w : spec.pomset.strict_successors(v)) dropped[w] = true;
    }
  }
  std::vector<Tick> stamp(spec.size(), 0);
  std::vector<TimedEvent> events;
  for (VertexId v = 0; v < spec.size(); ++v) {
    Tick lo = spec.delta[v].lo;
    const Tick hi = spec.delta[v].hi;
    for (VertexId u = 0; u < v; ++u)
      if (spec.pomset.precedes(u, v) && !dropped[u]) lo = std::max(lo, stamp[u]);
    stamp[v] = lo > hi ? spec.theta[v] : lo + pick(rng, hi - lo + 1);
    if (!dropped[v])
      events.push_back(TimedEvent{spec.pomset.label(v), stamp[v], 0});
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const TimedEvent& a, const TimedEvent& b) {
                     return a.tick < b.tick;
                   });
  TimedWord w;
  for (const auto& e : events) w.push(e.label, e.tick);
  return w;
}

}  // namespace

Instance random_instance(std::uint64_t seed, const FuzzCaps& caps,
                         bool optional_mode) {
  std::mt19937_64 rng(seed);
  Instance inst;

  inst.acfg.alphabet = ConcurrentAlphabet({"a", "b", "c", "d"});
  for (PortId p = 0; p < 4; ++p) inst.acfg.ports.assign(kNames[p], p + 1);

  SlackPolicy slack;
  slack.dt_minus_default = pick(rng, 4);
  slack.dt_plus_default = pick(rng, 4);
  Duration max_minus = slack.dt_minus_default;
  Duration max_plus = slack.dt_plus_default;
  for (const char* name : kNames) {
    slack.dt_minus[name] = pick(rng, 4);
    slack.dt_plus[name] = pick(rng, 4);
    max_minus = std::max(max_minus, slack.dt_minus[name]);
    max_plus = std::max(max_plus, slack.dt_plus[name]);
  }
  slack.bound_minus = max_minus + pick(rng, 3);
  slack.bound_plus = max_plus + pick(rng, 3);
  inst.acfg.slack = slack;
  inst.acfg.optional_mode = optional_mode;

  // Spec word: sorted ticks, no repeated symbol name within a tick (keeps
  // sequentiality and causality satisfiable).
  const std::size_t n = pick(rng, caps.max_spec + 1);
  std::vector<Tick> ticks(n);
  for (auto& t : ticks) t = pick(rng, caps.max_tick + 1);
  std::sort(ticks.begin(), ticks.end());
  Tick floor = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Tick t = std::max(ticks[i], floor);
    std::string name = kNames[pick(rng, 4)];
    std::string payload = pick(rng, 3) == 0 ? "\x01" : "";
    auto name_collides = [&](Tick tt) {
      for (std::size_t j = 0; j < inst.spec_word.size(); ++j)
        if (inst.spec_word[j].tick == tt && inst.spec_word[j].label.name == name)
          return true;
      return false;
    };
    while (name_collides(t)) ++t;
    inst.spec_word.push(EventLabel{std::move(name), std::move(payload)}, t);
    floor = t;
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (inst.spec_word[i].tick < inst.spec_word[j].tick && pick(rng, 4) == 0)
        inst.deps.edges.emplace_back(static_cast<EventId>(i),
                                     static_cast<EventId>(j));

  // The dependency window is only known once the closed order exists, so the
  // first pass abstracts in plain mode.
  AbstractionConfig plain = inst.acfg;
  plain.optional_mode = false;
  inst.spec = abstract_word(inst.spec_word, inst.deps, {}, plain);

  if (optional_mode) {
    // Random marks, closed upward: whatever depends on a cancellable output
    // is itself cancellable.
    std::vector<bool> marks(n, false);
    for (std::size_t i = 0; i < n; ++i) marks[i] = pick(rng, 3) == 0;
    for (VertexId v = 0; v < inst.spec.size(); ++v)
      if (marks[v])
        for (VertexId w : inst.spec.pomset.strict_successors(v)) marks[w] = true;
    for (std::size_t i = 0; i < n; ++i) {
      inst.spec.optional_mark[i] = marks[i];
      if (marks[i]) inst.optional_ids.insert(static_cast<EventId>(i));
    }
    Duration max_gap = 1;
    for (VertexId u = 0; u < inst.spec.size(); ++u)
      for (VertexId v = 0; v < inst.spec.size(); ++v)
        if (inst.spec.pomset.precedes(u, v))
          max_gap = std::max(max_gap, inst.spec.theta[v] - inst.spec.theta[u]);
    inst.acfg.dep_window = max_gap + pick(rng, 3);
  }

  inst.mcfg.slack = inst.acfg.slack;
  inst.mcfg.dep_window = inst.acfg.dep_window;
  inst.mcfg.optional_mode = optional_mode;
  inst.mcfg.termination.mode = TerminationPolicy::Mode::Explicit;

  switch (pick(rng, 8)) {
    case 0:
      break;  // empty implementation
    case 1:
      for (VertexId v = 0; v < inst.spec.size(); ++v)
        inst.impl.push(inst.spec.pomset.label(v), inst.spec.theta[v]);
      break;
    case 2:
      inst.impl = jittered_copy(inst.spec, rng, optional_mode);
      break;
    case 6: {
      // Jitter, then reverse emission order within every tick group. This
      // produces streams where a successor's event shows up before its
      // predecessor's partner at the same tick.
      TimedWord base = jittered_copy(inst.spec, rng, optional_mode);
      std::vector<TimedEvent> events(base.events().begin(), base.events().end());
      std::stable_sort(events.begin(), events.end(),
                       [](const TimedEvent& a, const TimedEvent& b) {
                         if (a.tick != b.tick) return a.tick < b.tick;
                         return a.seq > b.seq;
                       });
      for (const auto& e : events) inst.impl.push(e.label, e.tick);
      break;
    }
    case 7: {
      // Jitter, then swap the stamps of one adjacent pair, which often
      // crosses a dependent pair's ordering.
      TimedWord base = jittered_copy(inst.spec, rng, optional_mode);
      std::vector<TimedEvent> events(base.events().begin(), base.events().end());
      if (events.size() >= 2) {
        const std::size_t i = pick(rng, events.size() - 1);
        std::swap(events[i].tick, events[i + 1].tick);
        std::stable_sort(events.begin(), events.end(),
                         [](const TimedEvent& a, const TimedEvent& b) {
                           return a.tick < b.tick;
                         });
      }
      for (const auto& e : events) inst.impl.push(e.label, e.tick);
      break;
    }
    case 3: {
      TimedWord base = jittered_copy(inst.spec, rng, optional_mode);
      if (!base.empty()) {
        FaultSpec fault;
        const FaultSpec::Kind kinds[] = {
            FaultSpec::Kind::DropOutput, FaultSpec::Kind::DelayBeyondSlack,
            FaultSpec::Kind::RelabelPayload, FaultSpec::Kind::DuplicateOutput};
        fault.kind = kinds[pick(rng, 4)];
        fault.target = pick(rng, base.size());
        fault.seed = rng();
        inst.impl = inject(fault, base, inst.spec, inst.mcfg);
      }
      break;
    }
    case 4: {
      const std::size_t m = pick(rng, caps.max_impl + 1);
      std::vector<Tick> iticks(m);
      for (auto& t : iticks) t = pick(rng, caps.max_tick + 1);
      std::sort(iticks.begin(), iticks.end());
      for (std::size_t i = 0; i < m; ++i)
        inst.impl.push(
            EventLabel{kNames[pick(rng, 4)], pick(rng, 3) == 0 ? "\x01" : ""},
            iticks[i]);
      break;
    }
    case 5: {
      TimedWord base = jittered_copy(inst.spec, rng, optional_mode);
      std::vector<TimedEvent> events(base.events().begin(), base.events().end());
      events.push_back(TimedEvent{
          EventLabel{kNames[pick(rng, 4)], ""}, pick(rng, caps.max_tick + 1), 0});
      std::stable_sort(events.begin(), events.end(),
                       [](const TimedEvent& a, const TimedEvent& b) {
                         return a.tick < b.tick;
                       });
      for (const auto& e : events) inst.impl.push(e.label, e.tick);
      break;
    }
  }
  return inst;
}

FuzzOutcome run_fuzz(std::uint64_t seed, std::size_t count, const FuzzCaps& caps,
                     bool optional_mode, std::ostream* diag) {
  FuzzOutcome out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t sub_seed = seed ^ (0x9e3779b97f4a7c15ULL * (i + 1));
    Instance inst = random_instance(sub_seed, caps, optional_mode);
    auto rep = compare_with_monitor(inst.spec, inst.impl, inst.mcfg);
    ++out.total;
    if (rep.agree) {
      ++out.agreed;
    } else {
      out.disagreeing_seeds.push_back(sub_seed);
      if (diag) {
        *diag << "disagreement seed=" << sub_seed
              << " monitor=" << to_string(rep.monitor_verdict) << " oracle="
              << (rep.oracle.conforming ? "conforming" : "nonconforming")
              << "\n";
        *diag << serialize_trace(spec_records(inst.spec_word, inst.deps,
                                              inst.optional_ids,
                                              inst.acfg.ports));
        *diag << serialize_trace(impl_records(inst.impl, inst.acfg.ports));
      }
    }
  }
  return out;
}

}  // namespace tracematch
