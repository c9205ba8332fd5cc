#pragma once

#include <memory>
#include <random>
#include <string>

#include "tracematch/abstraction.hpp"
#include "tracematch/monitor.hpp"
#include "tracematch/types.hpp"

namespace tracematch {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Collects a model's outputs; assigns ids in emission order and rejects
// outputs stamped anywhere but the current tick.
class OutputSink {
 public:
  EventId emit(const EventLabel& label, bool optional_mark,
               std::vector<EventId> deps = {});

  // The harness moves the clock; emissions are stamped with it.
  void advance_to(Tick now) { now_ = now; }

  const TimedWord& word() const { return word_; }
  const DependencyDecl& deps() const { return deps_; }
  const std::set<EventId>& optional_ids() const { return optional_ids_; }

 private:
  Tick now_ = 0;

  TimedWord word_;
  DependencyDecl deps_;
  std::set<EventId> optional_ids_;
};

// Cooperative step function driven by the harness clock. Deterministic for
// a given stimulus sequence and seed; outputs always carry the current tick.
class BehaviorModel {
 public:
  virtual ~BehaviorModel() = default;
  virtual void reset(std::uint64_t seed) = 0;
  virtual void on_input(const TimedEvent& input, Tick now, OutputSink& out) = 0;
  virtual void on_tick(Tick now, OutputSink& out) = 0;
  // True when no scheduled output remains.
  virtual bool idle() const = 0;
};

struct BuiltinModel {
  std::string name;
  std::unique_ptr<BehaviorModel> spec;
  std::unique_ptr<BehaviorModel> impl;
  MonitorConfig config;
  PortAssignment ports;
};

// fifo_buffer: fixed-latency forwarding, outputs chained in order.
// cancellable_store: optional acknowledgements; a back-to-back write to the
// same location silences the pending one on the implementation side.
// untimed_echo: wide intervals, no declared order, jittered echo.
BuiltinModel make_builtin_model(const std::string& name, std::uint64_t seed = 0);
std::vector<std::string> builtin_model_names();

struct CoExecution {
  SpecTrace spec_trace;
  TimedWord spec_word;
  DependencyDecl spec_deps;
  std::set<EventId> spec_optional;
  TimedWord impl_word;
  Verdict verdict = Verdict::Inconclusive;
  Tick verdict_time = 0;
  std::optional<FailureReport> failure;
  std::vector<MatchRecord> matches;
  std::optional<Tick> stabilization;
};

// Drives both models slot by slot with the same stimuli, pipes the
// specification outputs through the abstraction and steps the monitor.
CoExecution co_execute(BehaviorModel& spec_model, BehaviorModel& impl_model,
                       const TimedWord& stimuli, const MonitorConfig& cfg,
                       const PortAssignment& ports, std::uint64_t seed = 0);

struct StabilizationDetector {
  Duration window = 0;  // required output silence after the last input
};

// First tick at or after the last input from which a full window of output
// silence follows.
Tick detect_stabilization(const TimedWord& impl_outputs, Tick last_input_tick,
                          const StabilizationDetector& det);

struct FaultSpec {
  enum class Kind {
    DropOutput,
    DelayBeyondSlack,
    ReorderWithinSlack,
    ReorderBeyondOrder,
    RelabelPayload,
    DuplicateOutput,
  } kind = Kind::DropOutput;
  std::size_t target = 0;  // event index modulo the word length
  std::uint64_t seed = 0;
};

std::optional<FaultSpec::Kind> fault_kind_of(const std::string& name);
const char* to_string(FaultSpec::Kind k);

// Mutates an implementation trace. Slack-respecting reorders consult the
// index-aligned specification trace; the other kinds only need the config.
// Throws std::invalid_argument when the selector matches nothing.
TimedWord inject(const FaultSpec& fault, const TimedWord& impl,
                 const SpecTrace& spec, const MonitorConfig& cfg);

// Deterministic stimuli for the built-in models.
TimedWord make_stimuli(const std::string& model, std::uint64_t seed,
                       std::size_t count);

}  // namespace tracematch
