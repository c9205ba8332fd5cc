#pragma once

#include <functional>
#include <optional>
#include <span>

#include "tracematch/abstraction.hpp"
#include "tracematch/types.hpp"

namespace tracematch {

enum class Verdict { True, False, Inconclusive };

const char* to_string(Verdict v);

struct TerminationPolicy {
  enum class Mode { Explicit, Convergent } mode = Mode::Explicit;
  Duration stabilization_window = 0;  // must be > 0 in convergent mode
};

struct MonitorConfig {
  SlackPolicy slack;
  Duration dep_window = 0;
  bool optional_mode = false;
  TerminationPolicy termination;
};

struct MatchRecord {
  VertexId spec_vertex;
  EventId impl_event;
  Tick theta_s;
  Tick theta_i;

  bool operator==(const MatchRecord&) const = default;
};

struct FailureReport {
  enum class Kind { MissingOutput, UnexpectedOutput } kind;
  // MissingOutput names a specification vertex, UnexpectedOutput an
  // implementation event.
  std::uint32_t offender = 0;
  Tick time = 0;
  std::vector<MatchRecord> matched_log;
};

// One specification vertex entering the monitor at its stamp. `ancestors`
// is the closed set of strict predecessors (all emitted earlier).
struct SpecArrival {
  VertexId vertex;
  EventLabel label;
  Tick theta;
  Interval delta;
  bool optional_mark = false;
  std::vector<VertexId> ancestors;
};

struct ImplArrival {
  EventId event;
  EventLabel label;
  Tick theta;
};

// Primary arbiter: minimal elements of `pending` minus `cancelled`.
std::vector<VertexId> arbiter_primary(const std::vector<VertexId>& pending,
                                      const Pomset& order,
                                      const std::set<VertexId>& cancelled = {});

struct SpecCandidate {
  VertexId id;
  EventLabel label;
  Tick theta;
  Interval delta;
  std::uint32_t seq;
};

// Secondary arbiter: among candidates matching the implementation event
// (equal label and stamp inside the interval), the one with minimal
// specification stamp; ties broken by insertion sequence.
std::optional<VertexId> arbiter_secondary(const EventLabel& impl_label,
                                          Tick impl_theta,
                                          const std::vector<SpecCandidate>& xs);

// On-the-fly trace matcher. Driven slot by slot with strictly increasing
// times; guarded timeout actions between slots fire at their exact times.
// Within a slot: specification receptions, implementation receptions,
// specification timeouts, implementation timeouts, cancellation expiry,
// finalization. An implementation event arriving exactly at the upper
// interval boundary of a pending vertex therefore matches before the
// timeout can fire.
class Monitor {
 public:
  explicit Monitor(MonitorConfig cfg);

  void step(Tick t, std::span<const SpecArrival> spec_arrivals,
            std::span<const ImplArrival> impl_arrivals);

  // Explicit termination: both streams are complete.
  void end_streams();
  // Convergent termination: stabilization time estimate from the harness.
  void set_stabilization(Tick t);

  // Drains remaining timeouts and runs finalization; returns the verdict.
  Verdict finish();

  Verdict verdict() const { return verdict_; }
  Tick verdict_time() const { return verdict_time_; }
  bool terminated() const { return terminated_; }
  const std::optional<FailureReport>& failure() const { return failure_; }
  const std::vector<MatchRecord>& matches() const { return matches_; }

  std::vector<VertexId> pending_spec() const;
  std::vector<EventId> pending_impl() const;
  std::vector<VertexId> cancelled_spec() const;

  // Incremental reporting hooks.
  std::function<void(const MatchRecord&)> on_match;
  std::function<void(const FailureReport&)> on_failure;
  std::function<void(Verdict, Tick)> on_verdict;

 private:
  enum class VState { Pending, Cancelled, Matched, Purged, Failed };

  struct SpecVertex {
    EventLabel label;
    Tick theta = 0;
    Interval delta;
    bool optional_mark = false;
    std::vector<VertexId> ancestors;  // sorted
    VState state = VState::Pending;
  };

  struct ImplPending {
    EventId event;
    EventLabel label;
    Tick theta;
  };

  bool is_ancestor(VertexId a, VertexId b) const;
  bool matches_vertex(const SpecVertex& x, const EventLabel& label, Tick theta) const;
  // Matched pairs must keep implementation stamps ordered along the
  // specification order.
  bool order_compatible(VertexId x, Tick impl_theta) const;
  bool minimal_eligible(VertexId v) const;

  void on_spec_output(const SpecArrival& a);
  void on_impl_output(const ImplArrival& a);
  bool scan_pending_impl(VertexId v);
  void record_match(VertexId x, std::size_t impl_index);
  void rescan_new_minimal();
  void cancel_with_descendants(VertexId v);

  void run_timeout_phases(Tick t);
  void check_finalize(Tick t);
  void fail(FailureReport::Kind kind, std::uint32_t offender, Tick t);
  void set_verdict(Verdict v, Tick t);

  Tick next_deadline() const;
  Tick finalize_target() const;

  MonitorConfig cfg_;
  std::vector<SpecVertex> vertices_;
  std::vector<ImplPending> pending_impl_;  // ascending (theta, arrival)
  std::vector<Tick> impl_stamps_;          // every implementation stamp seen
  std::vector<MatchRecord> matches_;
  std::vector<bool> scanned_minimal_;

  Verdict verdict_ = Verdict::Inconclusive;
  Tick verdict_time_ = 0;
  bool terminated_ = false;
  std::optional<FailureReport> failure_;

  std::optional<Tick> last_slot_;
  Tick clock_ = 0;
  bool streams_ended_ = false;
  std::optional<Tick> stabilization_;
  Tick end_spec_ = 0;
  Tick end_impl_ = 0;
};

struct ReplayResult {
  Verdict verdict = Verdict::Inconclusive;
  Tick verdict_time = 0;
  std::optional<FailureReport> failure;
  std::vector<MatchRecord> matches;
};

// Replays a complete instance slot by slot. With a horizon the replay stops
// after that slot and leaves the streams open.
ReplayResult run_replay(const SpecTrace& spec, const TimedWord& impl,
                        const MonitorConfig& cfg,
                        std::optional<Tick> horizon = std::nullopt,
                        Monitor* external = nullptr);

std::vector<SpecArrival> spec_arrivals_of(const SpecTrace& spec);

}  // namespace tracematch
