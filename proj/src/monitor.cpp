#include "tracematch/monitor.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace tracematch {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<VertexId> arbiter_primary(const std::vector<VertexId>& pending,
                                      const Pomset& order,
                                      const std::set<VertexId>& cancelled) {
  std::vector<VertexId> live;
  for (VertexId v : pending)
    if (!cancelled.count(v)) live.push_back(v);
  return order.minimal_of(live);
}

std::optional<VertexId> arbiter_secondary(const EventLabel& impl_label,
                                          Tick impl_theta,
                                          const std::vector<SpecCandidate>& xs) {
  const SpecCandidate* best = nullptr;
  for (const auto& x : xs) {
    if (x.label != impl_label || !x.delta.contains(impl_theta)) continue;
    if (!best || x.theta < best->theta ||
        (x.theta == best->theta && x.seq < best->seq))
      best = &x;
  }
  if (!best) return std::nullopt;
  return best->id;
}

Monitor::Monitor(MonitorConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.slack.validate();
  if (cfg_.termination.mode == TerminationPolicy::Mode::Convergent &&
      cfg_.termination.stabilization_window == 0)
    throw std::invalid_argument("stabilization window must be positive");
}

bool Monitor::is_ancestor(VertexId a, VertexId b) const {
  const auto& anc = vertices_[b].ancestors;
  return std::binary_search(anc.begin(), anc.end(), a);
}

bool Monitor::matches_vertex(const SpecVertex& x, const EventLabel& label,
                             Tick theta) const {
  return x.label == label && x.delta.contains(theta);
}

bool Monitor::order_compatible(VertexId x, Tick impl_theta) const {
  for (const auto& m : matches_) {
    if (is_ancestor(m.spec_vertex, x) && m.theta_i > impl_theta) return false;
    if (is_ancestor(x, m.spec_vertex) && impl_theta > m.theta_i) return false;
  }
  return true;
}

bool Monitor::minimal_eligible(VertexId v) const {
  if (vertices_[v].state != VState::Pending) return false;
  for (VertexId a : vertices_[v].ancestors)
    if (vertices_[a].state == VState::Pending) return false;
  return true;
}

void Monitor::record_match(VertexId x, std::size_t impl_index) {
  const auto& y = pending_impl_[impl_index];
  MatchRecord rec{x, y.event, vertices_[x].theta, y.theta};
  vertices_[x].state = VState::Matched;
  pending_impl_.erase(pending_impl_.begin() +
                      static_cast<std::ptrdiff_t>(impl_index));
  matches_.push_back(rec);
  if (on_match) on_match(rec);
}

bool Monitor::scan_pending_impl(VertexId v) {
  // Pending implementation events, ascending stamp then arrival.
  for (std::size_t i = 0; i < pending_impl_.size(); ++i) {
    const auto& y = pending_impl_[i];
    if (matches_vertex(vertices_[v], y.label, y.theta) &&
        order_compatible(v, y.theta)) {
      record_match(v, i);
      return true;
    }
  }
  return false;
}

void Monitor::rescan_new_minimal() {
  bool matched_any = true;
  while (matched_any && !terminated_) {
    matched_any = false;
    for (VertexId v = 0; v < vertices_.size(); ++v) {
      if (scanned_minimal_[v] || !minimal_eligible(v)) continue;
      scanned_minimal_[v] = true;
      if (scan_pending_impl(v)) {
        matched_any = true;
        break;
      }
    }
  }
}

void Monitor::cancel_with_descendants(VertexId v) {
  vertices_[v].state = VState::Cancelled;
  // A cancelled output cancels everything depending on it.
  for (VertexId w = 0; w < vertices_.size(); ++w)
    if (vertices_[w].state == VState::Pending && is_ancestor(v, w))
      vertices_[w].state = VState::Cancelled;
}

void Monitor::on_spec_output(const SpecArrival& a) {
  assert(a.vertex == vertices_.size() && "spec vertices arrive in emission order");
  SpecVertex x;
  x.label = a.label;
  x.theta = a.theta;
  x.delta = a.delta;
  x.optional_mark = a.optional_mark;
  x.ancestors = a.ancestors;
  std::sort(x.ancestors.begin(), x.ancestors.end());
  vertices_.push_back(std::move(x));
  scanned_minimal_.push_back(false);
  end_spec_ = std::max(end_spec_, a.theta);

  const VertexId v = a.vertex;
  if (cfg_.optional_mode) {
    for (VertexId anc : vertices_[v].ancestors)
      if (vertices_[anc].state == VState::Cancelled) {
        vertices_[v].state = VState::Cancelled;
        return;
      }
  }
  if (minimal_eligible(v)) {
    scanned_minimal_[v] = true;
    if (scan_pending_impl(v)) rescan_new_minimal();
  }
}

void Monitor::on_impl_output(const ImplArrival& a) {
  pending_impl_.push_back(ImplPending{a.event, a.label, a.theta});
  impl_stamps_.push_back(a.theta);
  end_impl_ = std::max(end_impl_, a.theta);

  VertexId best = 0;
  bool found = false;
  for (VertexId v = 0; v < vertices_.size(); ++v) {
    if (!minimal_eligible(v)) continue;
    if (!matches_vertex(vertices_[v], a.label, a.theta)) continue;
    if (!order_compatible(v, a.theta)) continue;
    if (!found || vertices_[v].theta < vertices_[best].theta ||
        (vertices_[v].theta == vertices_[best].theta && v < best)) {
      best = v;
      found = true;
    }
  }
  if (found) {
    record_match(best, pending_impl_.size() - 1);
    rescan_new_minimal();
  }
}

void Monitor::fail(FailureReport::Kind kind, std::uint32_t offender, Tick t) {
  FailureReport rep{kind, offender, t, matches_};
  failure_ = rep;
  if (on_failure) on_failure(*failure_);
  set_verdict(Verdict::False, t);
}

void Monitor::set_verdict(Verdict v, Tick t) {
  verdict_ = v;
  verdict_time_ = t;
  terminated_ = true;
  if (on_verdict) on_verdict(v, t);
}

void Monitor::run_timeout_phases(Tick t) {
  clock_ = std::max(clock_, t);

  // Specification timeouts, in stamp then emission order.
  std::vector<VertexId> due;
  for (VertexId v = 0; v < vertices_.size(); ++v)
    if (vertices_[v].state == VState::Pending && vertices_[v].delta.hi <= t)
      due.push_back(v);
  std::sort(due.begin(), due.end(), [&](VertexId a, VertexId b) {
    if (vertices_[a].theta != vertices_[b].theta)
      return vertices_[a].theta < vertices_[b].theta;
    return a < b;
  });
  for (VertexId v : due) {
    if (vertices_[v].state != VState::Pending) continue;  // cancelled above
    if (cfg_.optional_mode && vertices_[v].optional_mark) {
      cancel_with_descendants(v);
    } else {
      fail(FailureReport::Kind::MissingOutput, v, t);
      return;
    }
  }

  // Implementation timeouts.
  for (const auto& y : pending_impl_) {
    if (sat_add(y.theta, cfg_.slack.minus_for(y.label.name)) <= t) {
      fail(FailureReport::Kind::UnexpectedOutput, y.event, t);
      return;
    }
  }

  // Cancellation expiry: a cancelled vertex cannot affect anything after the
  // dependency window has passed.
  for (auto& x : vertices_)
    if (x.state == VState::Cancelled && sat_add(x.theta, cfg_.dep_window) <= t)
      x.state = VState::Purged;

  check_finalize(t);
}

void Monitor::check_finalize(Tick t) {
  if (terminated_) return;
  if (cfg_.termination.mode == TerminationPolicy::Mode::Explicit) {
    if (!streams_ended_) return;
    if (sat_add(end_spec_, cfg_.slack.bound_plus) <= t &&
        sat_add(end_impl_, cfg_.slack.bound_minus) <= t)
      set_verdict(Verdict::True, t);
  } else {
    if (!streams_ended_ || !stabilization_) return;
    const Tick stab = *stabilization_;
    Tick end_impl_upto = 0;
    for (Tick s : impl_stamps_)
      if (s <= stab) end_impl_upto = std::max(end_impl_upto, s);
    if (stab <= t && sat_add(end_impl_upto, cfg_.slack.bound_minus) <= t &&
        sat_add(end_spec_, cfg_.slack.bound_plus) <= t)
      set_verdict(Verdict::True, t);
  }
}

Tick Monitor::next_deadline() const {
  Tick nd = kTickMax;
  for (const auto& x : vertices_) {
    if (x.state == VState::Pending) nd = std::min(nd, x.delta.hi);
    if (x.state == VState::Cancelled)
      nd = std::min(nd, sat_add(x.theta, cfg_.dep_window));
  }
  for (const auto& y : pending_impl_)
    nd = std::min(nd, sat_add(y.theta, cfg_.slack.minus_for(y.label.name)));
  return nd;
}

Tick Monitor::finalize_target() const {
  Tick t = sat_add(end_spec_, cfg_.slack.bound_plus);
  if (cfg_.termination.mode == TerminationPolicy::Mode::Explicit) {
    t = std::max(t, sat_add(end_impl_, cfg_.slack.bound_minus));
  } else {
    const Tick stab = stabilization_.value_or(0);
    Tick end_impl_upto = 0;
    for (Tick s : impl_stamps_)
      if (s <= stab) end_impl_upto = std::max(end_impl_upto, s);
    t = std::max({t, stab, sat_add(end_impl_upto, cfg_.slack.bound_minus)});
  }
  return t;
}

void Monitor::step(Tick t, std::span<const SpecArrival> spec_arrivals,
                   std::span<const ImplArrival> impl_arrivals) {
  if (terminated_) return;
  if (last_slot_ && t <= *last_slot_)
    throw std::invalid_argument("slots must be processed in increasing order");
  last_slot_ = t;

  // Guarded actions due strictly before this slot fire at their own times.
  while (!terminated_) {
    const Tick nd = next_deadline();
    if (nd >= t) break;
    run_timeout_phases(nd);
  }
  if (terminated_) return;

  clock_ = t;
  for (const auto& a : spec_arrivals) {
    on_spec_output(a);
    if (terminated_) return;
  }
  for (const auto& a : impl_arrivals) {
    on_impl_output(a);
    if (terminated_) return;
  }
  run_timeout_phases(t);
}

void Monitor::end_streams() { streams_ended_ = true; }

void Monitor::set_stabilization(Tick t) { stabilization_ = t; }

Verdict Monitor::finish() {
  if (terminated_) return verdict_;
  if (cfg_.termination.mode == TerminationPolicy::Mode::Explicit) {
    if (!streams_ended_) return verdict_;
  } else {
    if (!streams_ended_ || !stabilization_) return verdict_;
  }
  const Tick target = finalize_target();
  while (!terminated_) {
    const Tick nd = next_deadline();
    const Tick step_t = std::min(nd, target);
    run_timeout_phases(step_t);
    if (step_t >= target) break;
  }
  return verdict_;
}

std::vector<VertexId> Monitor::pending_spec() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < vertices_.size(); ++v)
    if (vertices_[v].state == VState::Pending) out.push_back(v);
  return out;
}

std::vector<EventId> Monitor::pending_impl() const {
  std::vector<EventId> out;
  for (const auto& y : pending_impl_) out.push_back(y.event);
  return out;
}

std::vector<VertexId> Monitor::cancelled_spec() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < vertices_.size(); ++v)
    if (vertices_[v].state == VState::Cancelled) out.push_back(v);
  return out;
}

std::vector<SpecArrival> spec_arrivals_of(const SpecTrace& spec) {
  std::vector<SpecArrival> out;
  for (VertexId v = 0; v < spec.size(); ++v) {
    SpecArrival a;
    a.vertex = v;
    a.label = spec.pomset.label(v);
    a.theta = spec.theta[v];
    a.delta = spec.delta[v];
    a.optional_mark = spec.optional_mark[v];
    for (VertexId u = 0; u < spec.size(); ++u)
      if (spec.pomset.precedes(u, v)) a.ancestors.push_back(u);
    out.push_back(std::move(a));
  }
  return out;
}

ReplayResult run_replay(const SpecTrace& spec, const TimedWord& impl,
                        const MonitorConfig& cfg, std::optional<Tick> horizon,
                        Monitor* external) {
  Monitor own(cfg);
  Monitor& mon = external ? *external : own;

  auto arrivals = spec_arrivals_of(spec);
  std::map<Tick, std::pair<std::vector<SpecArrival>, std::vector<ImplArrival>>>
      slots;
  for (auto& a : arrivals) slots[a.theta].first.push_back(a);
  for (const auto& e : impl.events())
    slots[e.tick].second.push_back(ImplArrival{e.seq, e.label, e.tick});

  std::optional<Tick> last_processed;
  for (const auto& [t, batch] : slots) {
    if (horizon && t > *horizon) break;
    if (mon.terminated()) break;
    mon.step(t, batch.first, batch.second);
    last_processed = t;
  }
  if (horizon) {
    // Advance to the horizon so timeouts due by then fire, but leave the
    // streams open.
    if (!mon.terminated() && (!last_processed || *last_processed < *horizon))
      mon.step(*horizon, {}, {});
  } else if (!mon.terminated()) {
    mon.end_streams();
    if (cfg.termination.mode == TerminationPolicy::Mode::Convergent) {
      Tick last = std::max(spec.end_tick(), impl.end_tick());
      mon.set_stabilization(sat_add(last, cfg.termination.stabilization_window));
    }
    mon.finish();
  }

  ReplayResult res;
  res.verdict = mon.verdict();
  res.verdict_time = mon.verdict_time();
  res.failure = mon.failure();
  res.matches = mon.matches();
  return res;
}

}  // namespace tracematch
