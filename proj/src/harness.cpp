#include "tracematch/harness.hpp"

#include <algorithm>
#include <cassert>
#include <deque>

namespace tracematch {

EventId OutputSink::emit(const EventLabel& label, bool optional_mark,
                         std::vector<EventId> deps) {
  const EventId id = word_.push(label, now_);
  for (EventId d : deps) {
    if (d >= id) throw ModelError("dependency on a not yet emitted event");
    deps_.edges.emplace_back(d, id);
  }
  if (optional_mark) optional_ids_.insert(id);
  return id;
}

namespace {

struct ScheduledOutput {
  Tick due;
  EventLabel label;
  bool optional_mark;
  bool chain_to_previous;  // depend on the model's previous output
  std::uint64_t key;       // cancellation handle
};

// Base for the built-in models: outputs are scheduled with a latency and
// drained when due.
class ScheduledModel : public BehaviorModel {
 public:
  void reset(std::uint64_t seed) override {
    queue_.clear();
    last_output_.reset();
    rng_.seed(seed);
  }

  void on_tick(Tick now, OutputSink& out) override {
    std::vector<ScheduledOutput> due;
    for (auto it = queue_.begin(); it != queue_.end();) {
      if (it->due < now) throw ModelError("output stamped in the past");
      if (it->due == now) {
        due.push_back(*it);
        it = queue_.erase(it);
      } else {
        ++it;
      }
    }
    for (const auto& o : due) {
      std::vector<EventId> deps;
      if (o.chain_to_previous && last_output_) deps.push_back(*last_output_);
      last_output_ = out.emit(o.label, o.optional_mark, deps);
    }
  }

  bool idle() const override { return queue_.empty(); }

 protected:
  void schedule(Tick due, EventLabel label, bool optional_mark, bool chain,
                std::uint64_t key = 0) {
    queue_.push_back({due, std::move(label), optional_mark, chain, key});
  }

  // Outputs already due this tick are on the wire and stay.
  void cancel_scheduled(std::uint64_t key, Tick now) {
    std::erase_if(queue_, [&](const ScheduledOutput& o) {
      return o.key == key && o.due > now;
    });
  }

  std::mt19937_64 rng_;

 private:
  std::deque<ScheduledOutput> queue_;
  std::optional<EventId> last_output_;
};

class FifoBufferModel : public ScheduledModel {
 public:
  explicit FifoBufferModel(Duration latency) : latency_(latency) {}

  void on_input(const TimedEvent& input, Tick now, OutputSink&) override {
    schedule(now + latency_, EventLabel{"out", input.label.payload},
             /*optional=*/false, /*chain=*/true);
  }

 private:
  Duration latency_;
};

// Specification side of the store: every write acknowledges, optionally.
// The ack carries the full write payload (location plus value), so acks of
// different writes are distinct events.
class CancellableStoreSpecModel : public ScheduledModel {
 public:
  explicit CancellableStoreSpecModel(Duration latency) : latency_(latency) {}

  void on_input(const TimedEvent& input, Tick now, OutputSink&) override {
    schedule(now + latency_, EventLabel{"ack", input.label.payload},
             /*optional=*/true, /*chain=*/false, key_of(input.label.payload));
  }

 protected:
  // Cancellation is keyed by the written location (first payload byte).
  static std::uint64_t key_of(const std::string& payload) {
    return payload.empty() ? 1 : static_cast<unsigned char>(payload[0]) + 1u;
  }
  Duration latency_;
};

// Implementation side: a write to a location silences the ack still in
// flight for that location.
class CancellableStoreImplModel : public CancellableStoreSpecModel {
 public:
  using CancellableStoreSpecModel::CancellableStoreSpecModel;

  void on_input(const TimedEvent& input, Tick now, OutputSink& out) override {
    cancel_scheduled(key_of(input.label.payload), now);
    CancellableStoreSpecModel::on_input(input, now, out);
  }
};

class UntimedEchoModel : public ScheduledModel {
 public:
  explicit UntimedEchoModel(Duration max_jitter) : max_jitter_(max_jitter) {}

  void on_input(const TimedEvent& input, Tick now, OutputSink&) override {
    const Duration jitter =
        max_jitter_ == 0 ? 0 : rng_() % (max_jitter_ + 1);
    const std::string which = input.label.name == "in1" ? "echo1" : "echo0";
    schedule(now + jitter, EventLabel{which, input.label.payload},
             /*optional=*/false, /*chain=*/false);
  }

 private:
  Duration max_jitter_;
};

SlackPolicy uniform_slack(Duration minus, Duration plus) {
  SlackPolicy s;
  s.dt_minus_default = minus;
  s.dt_plus_default = plus;
  s.bound_minus = minus;
  s.bound_plus = plus;
  return s;
}

}  // namespace

std::vector<std::string> builtin_model_names() {
  return {"fifo_buffer", "cancellable_store", "untimed_echo"};
}

BuiltinModel make_builtin_model(const std::string& name, std::uint64_t seed) {
  BuiltinModel m;
  m.name = name;
  if (name == "fifo_buffer") {
    m.spec = std::make_unique<FifoBufferModel>(3);
    m.impl = std::make_unique<FifoBufferModel>(3);
    m.config.slack = uniform_slack(2, 2);
    m.ports.assign("in", 0);
    m.ports.assign("out", 1);
  } else if (name == "cancellable_store") {
    const Duration latency = 3;
    m.spec = std::make_unique<CancellableStoreSpecModel>(latency);
    m.impl = std::make_unique<CancellableStoreImplModel>(latency);
    m.config.slack = uniform_slack(2, 2);
    m.config.optional_mode = true;
    m.config.dep_window = latency;  // write pipeline depth
    m.ports.assign("write", 0);
    m.ports.assign("ack", 1);
  } else if (name == "untimed_echo") {
    m.spec = std::make_unique<UntimedEchoModel>(0);
    m.impl = std::make_unique<UntimedEchoModel>(3);
    m.config.slack = uniform_slack(6, 6);
    m.ports.assign("in0", 0);
    m.ports.assign("in1", 1);
    m.ports.assign("echo0", 2);
    m.ports.assign("echo1", 3);
  } else {
    throw std::invalid_argument("unknown model: " + name);
  }
  (void)seed;
  return m;
}

CoExecution co_execute(BehaviorModel& spec_model, BehaviorModel& impl_model,
                       const TimedWord& stimuli, const MonitorConfig& cfg,
                       const PortAssignment& ports, std::uint64_t seed) {
  if (!validate_timed_word(stimuli).empty())
    throw ModelError("stimuli must form a valid timed word");
  spec_model.reset(seed);
  impl_model.reset(seed);

  OutputSink spec_out, impl_out;
  AbstractionConfig acfg;
  acfg.ports = ports;
  acfg.slack = cfg.slack;
  acfg.dep_window = cfg.dep_window;
  acfg.optional_mode = cfg.optional_mode;
  AbstractionBuilder builder(acfg);
  Monitor monitor(cfg);

  CoExecution res;
  std::size_t next_input = 0;
  const Tick last_input =
      stimuli.empty() ? 0 : stimuli.events().back().tick;
  Tick t = 0;
  const Tick guard = sat_add(last_input, 100000);

  while (next_input < stimuli.size() || !spec_model.idle() ||
         !impl_model.idle()) {
    if (t > guard) throw ModelError("model failed to drain its outputs");
    spec_out.advance_to(t);
    impl_out.advance_to(t);
    while (next_input < stimuli.size() && stimuli[next_input].tick == t) {
      spec_model.on_input(stimuli[next_input], t, spec_out);
      impl_model.on_input(stimuli[next_input], t, impl_out);
      ++next_input;
    }
    const std::size_t spec_before = spec_out.word().size();
    const std::size_t impl_before = impl_out.word().size();
    spec_model.on_tick(t, spec_out);
    impl_model.on_tick(t, impl_out);

    std::vector<SpecArrival> spec_arr;
    for (std::size_t i = spec_before; i < spec_out.word().size(); ++i) {
      const auto& e = spec_out.word()[i];
      std::vector<EventId> deps;
      for (auto [from, to] : spec_out.deps().edges)
        if (to == e.seq) deps.push_back(from);
      const VertexId v = builder.add_event(
          e.label, e.tick, deps, spec_out.optional_ids().count(e.seq) != 0);
      const auto& trace = builder.trace();
      SpecArrival a;
      a.vertex = v;
      a.label = e.label;
      a.theta = e.tick;
      a.delta = trace.delta[v];
      a.optional_mark = trace.optional_mark[v];
      for (VertexId u = 0; u < v; ++u)
        if (trace.pomset.precedes(u, v)) a.ancestors.push_back(u);
      spec_arr.push_back(std::move(a));
    }
    std::vector<ImplArrival> impl_arr;
    for (std::size_t i = impl_before; i < impl_out.word().size(); ++i) {
      const auto& e = impl_out.word()[i];
      impl_arr.push_back(ImplArrival{e.seq, e.label, e.tick});
    }
    if (!monitor.terminated())
      monitor.step(t, spec_arr, impl_arr);
    if (monitor.terminated() && monitor.verdict() == Verdict::False) break;
    ++t;
  }

  if (!monitor.terminated()) {
    monitor.end_streams();
    if (cfg.termination.mode == TerminationPolicy::Mode::Convergent) {
      const Tick stab = detect_stabilization(
          impl_out.word(), last_input,
          StabilizationDetector{cfg.termination.stabilization_window});
      monitor.set_stabilization(stab);
      res.stabilization = stab;
    }
    monitor.finish();
  }

  res.spec_trace = builder.trace();
  res.spec_word = spec_out.word();
  res.spec_deps = spec_out.deps();
  res.spec_optional = spec_out.optional_ids();
  res.impl_word = impl_out.word();
  res.verdict = monitor.verdict();
  res.verdict_time = monitor.verdict_time();
  res.failure = monitor.failure();
  res.matches = monitor.matches();
  return res;
}

Tick detect_stabilization(const TimedWord& impl_outputs, Tick last_input_tick,
                          const StabilizationDetector& det) {
  // Silence window counted from the latest activity; an output inside the
  // window restarts it.
  Tick last = last_input_tick;
  for (const auto& e : impl_outputs.events()) last = std::max(last, e.tick);
  return sat_add(last, det.window);
}

std::optional<FaultSpec::Kind> fault_kind_of(const std::string& name) {
  if (name == "drop") return FaultSpec::Kind::DropOutput;
  if (name == "delay") return FaultSpec::Kind::DelayBeyondSlack;
  if (name == "reorder") return FaultSpec::Kind::ReorderWithinSlack;
  if (name == "misorder") return FaultSpec::Kind::ReorderBeyondOrder;
  if (name == "relabel") return FaultSpec::Kind::RelabelPayload;
  if (name == "duplicate") return FaultSpec::Kind::DuplicateOutput;
  return std::nullopt;
}

const char* to_string(FaultSpec::Kind k) {
  switch (k) {
    case FaultSpec::Kind::DropOutput: return "drop";
    case FaultSpec::Kind::DelayBeyondSlack: return "delay";
    case FaultSpec::Kind::ReorderWithinSlack: return "reorder";
    case FaultSpec::Kind::ReorderBeyondOrder: return "misorder";
    case FaultSpec::Kind::RelabelPayload: return "relabel";
    case FaultSpec::Kind::DuplicateOutput: return "duplicate";
  }
  return "?";
}

namespace {

TimedWord rebuild_sorted(std::vector<TimedEvent> events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const TimedEvent& a, const TimedEvent& b) {
                     return a.tick < b.tick;
                   });
  TimedWord w;
  for (const auto& e : events) w.push(e.label, e.tick);
  return w;
}

}  // namespace

TimedWord inject(const FaultSpec& fault, const TimedWord& impl,
                 const SpecTrace& spec, const MonitorConfig& cfg) {
  if (impl.empty()) throw std::invalid_argument("fault selector matches nothing");
  const std::size_t i = fault.target % impl.size();
  std::vector<TimedEvent> events(impl.events().begin(), impl.events().end());
  std::mt19937_64 rng(fault.seed);

  switch (fault.kind) {
    case FaultSpec::Kind::DropOutput:
      events.erase(events.begin() + static_cast<std::ptrdiff_t>(i));
      return rebuild_sorted(std::move(events));

    case FaultSpec::Kind::DelayBeyondSlack: {
      const auto& name = events[i].label.name;
      const Duration shift =
          cfg.slack.minus_for(name) + cfg.slack.plus_for(name) + 1;
      events[i].tick = sat_add(events[i].tick, shift);
      return rebuild_sorted(std::move(events));
    }

    case FaultSpec::Kind::RelabelPayload:
      events[i].label.payload.push_back('\x5a');
      return rebuild_sorted(std::move(events));

    case FaultSpec::Kind::DuplicateOutput: {
      TimedEvent copy = events[i];
      copy.tick = sat_add(copy.tick, 1);
      events.push_back(copy);
      return rebuild_sorted(std::move(events));
    }

    case FaultSpec::Kind::ReorderWithinSlack: {
      // Pair events with vertices by label occurrence, then move every stamp
      // inside its vertex's interval without crossing a dependent pair.
      if (impl.size() != spec.size())
        throw std::invalid_argument("reorder needs a label-aligned instance");
      std::map<EventLabel, std::vector<VertexId>> occurrences;
      for (VertexId v = 0; v < spec.size(); ++v)
        occurrences[spec.pomset.label(v)].push_back(v);
      std::map<EventLabel, std::size_t> used;
      std::vector<VertexId> vertex_of(impl.size());
      for (std::size_t i = 0; i < events.size(); ++i) {
        auto it = occurrences.find(events[i].label);
        std::size_t& k = used[events[i].label];
        if (it == occurrences.end() || k >= it->second.size())
          throw std::invalid_argument("reorder needs a label-aligned instance");
        vertex_of[i] = it->second[k++];
      }
      std::vector<Tick> stamp(spec.size());
      for (VertexId v = 0; v < spec.size(); ++v) {
        Tick lo = spec.delta[v].lo;
        const Tick hi = spec.delta[v].hi;
        for (VertexId u = 0; u < v; ++u)
          if (spec.pomset.precedes(u, v)) lo = std::max(lo, stamp[u]);
        stamp[v] = lo > hi ? spec.theta[v] : lo + rng() % (hi - lo + 1);
      }
      for (std::size_t i = 0; i < events.size(); ++i)
        events[i].tick = stamp[vertex_of[i]];
      return rebuild_sorted(std::move(events));
    }

    case FaultSpec::Kind::ReorderBeyondOrder: {
      // Stamp a dependent pair against its order while staying inside both
      // intervals, so only the ordering is wrong.
      for (VertexId u = 0; u < spec.size(); ++u)
        for (VertexId v = 0; v < spec.size(); ++v) {
          if (!spec.pomset.precedes(u, v)) continue;
          if (u >= impl.size() || v >= impl.size()) continue;
          const Tick late = spec.delta[u].hi;
          const Tick early = spec.delta[v].lo;
          if (late > early) {
            events[u].tick = late;
            events[v].tick = early;
            return rebuild_sorted(std::move(events));
          }
        }
      throw std::invalid_argument("fault selector matches nothing");
    }
  }
  throw std::invalid_argument("unknown fault kind");
}

TimedWord make_stimuli(const std::string& model, std::uint64_t seed,
                       std::size_t count) {
  std::mt19937_64 rng(seed);
  TimedWord w;
  Tick t = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const char byte = static_cast<char>('a' + (i % 26));
    if (model == "cancellable_store") {
      const char loc = static_cast<char>(rng() % 3);
      w.push(EventLabel{"write", std::string{loc, byte}}, t);
      t += 1 + rng() % 3;  // adjacent writes hit the cancellation window
    } else if (model == "untimed_echo") {
      const std::string in = rng() % 2 ? "in1" : "in0";
      w.push(EventLabel{in, std::string{byte}}, t);
      t += 1 + rng() % 3;
    } else {
      w.push(EventLabel{"in", std::string{byte}}, t);
      t += 1 + rng() % 3;
    }
  }
  return w;
}

}  // namespace tracematch
