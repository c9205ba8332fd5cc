#include "tracematch/oracle.hpp"

#include <algorithm>
#include <cassert>

namespace tracematch {

const char* to_string(Clause c) {
  switch (c) {
    case Clause::OneToOne: return "one-to-one";
    case Clause::SpecUnmatched: return "spec-unmatched";
    case Clause::ImplUnmatched: return "impl-unmatched";
    case Clause::OrderViolated: return "order";
    case Clause::OptionalClosure: return "optional-closure";
  }
  return "?";
}

std::vector<Tick> critical_times(const SpecTrace& spec, const TimedWord& impl,
                                 const MonitorConfig& cfg) {
  if (spec.empty() && impl.empty()) return {0};
  std::set<Tick> times{0};
  for (VertexId v = 0; v < spec.size(); ++v) {
    times.insert(spec.theta[v]);
    times.insert(spec.delta[v].hi);
    if (cfg.optional_mode) times.insert(sat_add(spec.theta[v], cfg.dep_window));
  }
  for (const auto& e : impl.events()) {
    times.insert(e.tick);
    times.insert(sat_add(e.tick, cfg.slack.minus_for(e.label.name)));
  }
  times.insert(sat_add(*times.rbegin(), 1));
  return {times.begin(), times.end()};
}

namespace {

struct SearchOpts {
  bool optional_semantics = false;
  // Diagnosis knobs: drop one item's own requirement, or ignore the
  // closure constraint of optional vertices entirely.
  std::optional<VertexId> exempt_spec;
  std::optional<EventId> exempt_impl;
  bool enforce_closure = true;
};

struct Search {
  const SpecTrace& spec;
  const TimedWord& impl;
  const MonitorConfig& cfg;
  Tick t;
  SearchOpts opts;

  std::vector<VertexId> past_s;
  std::vector<EventId> past_i;
  std::vector<VertexId> required_s;  // ascending (theta, id)
  std::vector<EventId> required_i;   // ascending (tick, id)

  std::vector<int> spec_partner;  // vertex -> impl event or -1
  std::vector<int> impl_partner;  // impl event -> vertex or -1
  std::vector<bool> host_forbidden;

  Search(const SpecTrace& s, const TimedWord& w, const MonitorConfig& c, Tick tt,
         SearchOpts o)
      : spec(s), impl(w), cfg(c), t(tt), opts(std::move(o)) {
    for (VertexId v = 0; v < spec.size(); ++v)
      if (spec.theta[v] <= t) past_s.push_back(v);
    for (const auto& e : impl.events())
      if (e.tick <= t) past_i.push_back(e.seq);
    for (VertexId v : past_s)
      if (spec.delta[v].hi <= t && opts.exempt_spec != v) required_s.push_back(v);
    for (EventId e : past_i)
      if (sat_add(impl[e].tick, cfg.slack.minus_for(impl[e].label.name)) <= t &&
          opts.exempt_impl != e)
        required_i.push_back(e);
    spec_partner.assign(spec.size(), -1);
    impl_partner.assign(impl.size(), -1);
    host_forbidden.assign(spec.size(), false);
  }

  bool in_past_i(EventId e) const { return impl[e].tick <= t; }

  bool pair_matches(VertexId x, EventId y) const {
    return spec.pomset.label(x) == impl[y].label &&
           spec.delta[x].contains(impl[y].tick);
  }

  bool order_ok(VertexId x, EventId y) const {
    for (VertexId v = 0; v < spec.size(); ++v) {
      if (spec_partner[v] < 0) continue;
      const Tick other = impl[static_cast<EventId>(spec_partner[v])].tick;
      if (spec.pomset.precedes(v, x) && other > impl[y].tick) return false;
      if (spec.pomset.precedes(x, v) && impl[y].tick > other) return false;
    }
    return true;
  }

  void assign(VertexId x, EventId y) {
    spec_partner[x] = static_cast<int>(y);
    impl_partner[y] = static_cast<int>(x);
  }
  void unassign(VertexId x, EventId y) {
    spec_partner[x] = -1;
    impl_partner[y] = -1;
  }

  bool solve_spec(std::size_t i);
  bool solve_impl(std::size_t i);

  bool run() { return solve_spec(0); }

  MatchingRelation relation() const {
    MatchingRelation m;
    for (VertexId v = 0; v < spec.size(); ++v)
      if (spec_partner[v] >= 0)
        m.pairs.emplace_back(v, static_cast<EventId>(spec_partner[v]));
    return m;
  }
};

bool Search::solve_spec(std::size_t i) {
  if (i == required_s.size()) return solve_impl(0);
  const VertexId x = required_s[i];

  if (!host_forbidden[x]) {
    for (EventId y : past_i) {
      if (impl_partner[y] >= 0) continue;
      if (!pair_matches(x, y) || !order_ok(x, y)) continue;
      assign(x, y);
      if (solve_spec(i + 1)) return true;
      unassign(x, y);
    }
  }

  const bool optional_vertex = opts.optional_semantics && spec.optional_mark[x];
  // Below a skipped optional vertex nothing may be matched; an obligatory
  // vertex trapped there makes the branch infeasible.
  if (host_forbidden[x]) return optional_vertex && solve_spec(i + 1);
  if (!optional_vertex) return false;
  if (!opts.enforce_closure) return solve_spec(i + 1);

  // Leaving x unmatched forbids matching anything at or above x. Required
  // items are processed in stamp order, so nothing in the cone is paired yet.
  std::vector<VertexId> newly{x};
  host_forbidden[x] = true;
  for (VertexId w : spec.pomset.strict_successors(x))
    if (!host_forbidden[w]) {
      assert(spec_partner[w] < 0);
      host_forbidden[w] = true;
      newly.push_back(w);
    }
  if (solve_spec(i + 1)) return true;
  for (VertexId w : newly) host_forbidden[w] = false;
  return false;
}

bool Search::solve_impl(std::size_t i) {
  if (i == required_i.size()) return true;
  const EventId y = required_i[i];
  if (impl_partner[y] >= 0) return solve_impl(i + 1);

  for (VertexId x : past_s) {
    if (spec_partner[x] >= 0 || host_forbidden[x]) continue;
    if (!pair_matches(x, y) || !order_ok(x, y)) continue;
    // Matching a non-required optional vertex is fine; matching below a
    // skipped optional vertex is not, which host_forbidden already covers.
    assign(x, y);
    if (solve_impl(i + 1)) return true;
    unassign(x, y);
  }
  return false;
}

std::optional<MatchingRelation> run_search(const SpecTrace& spec,
                                           const TimedWord& impl, Tick t,
                                           const MonitorConfig& cfg,
                                           const OracleCaps& caps,
                                           SearchOpts opts) {
  Search s(spec, impl, cfg, t, std::move(opts));
  if (s.past_s.size() > caps.max_spec || s.past_i.size() > caps.max_impl)
    throw CapExceeded("oracle search cap exceeded at t=" + std::to_string(t));
  if (!s.run()) return std::nullopt;
  return s.relation();
}

}  // namespace

std::optional<MatchingRelation> find_matching(const SpecTrace& spec,
                                              const TimedWord& impl, Tick t,
                                              const MonitorConfig& cfg,
                                              const OracleCaps& caps) {
  SearchOpts opts;
  opts.optional_semantics = false;
  return run_search(spec, impl, t, cfg, caps, opts);
}

std::optional<MatchingRelation> find_matching_optional(const SpecTrace& spec,
                                                       const TimedWord& impl,
                                                       Tick t,
                                                       const MonitorConfig& cfg,
                                                       const OracleCaps& caps) {
  SearchOpts opts;
  opts.optional_semantics = true;
  return run_search(spec, impl, t, cfg, caps, opts);
}

bool check_matching(const SpecTrace& spec, const TimedWord& impl, Tick t,
                    const MatchingRelation& m, const MonitorConfig& cfg,
                    bool optional_semantics) {
  std::vector<int> spec_partner(spec.size(), -1), impl_partner(impl.size(), -1);
  for (auto [x, y] : m.pairs) {
    if (x >= spec.size() || y >= impl.size()) return false;
    if (spec.theta[x] > t || impl[y].tick > t) return false;
    if (spec.pomset.label(x) != impl[y].label) return false;
    if (!spec.delta[x].contains(impl[y].tick)) return false;
    if (spec_partner[x] >= 0 || impl_partner[y] >= 0) return false;  // 1:1
    spec_partner[x] = static_cast<int>(y);
    impl_partner[y] = static_cast<int>(x);
  }
  // Every expired vertex matched (obligatory), or the optional escape.
  for (VertexId x = 0; x < spec.size(); ++x) {
    if (spec.theta[x] > t || spec.delta[x].hi > t) continue;
    if (spec_partner[x] >= 0) continue;
    if (!optional_semantics || !spec.optional_mark[x]) return false;
    for (VertexId w = 0; w < spec.size(); ++w)
      if ((w == x || spec.pomset.precedes(x, w)) && spec_partner[w] >= 0)
        return false;
  }
  // Every expired implementation event matched.
  for (const auto& e : impl.events()) {
    if (e.tick > t) continue;
    if (sat_add(e.tick, cfg.slack.minus_for(e.label.name)) > t) continue;
    if (impl_partner[e.seq] < 0) return false;
  }
  // Order preservation.
  for (auto [x, y] : m.pairs)
    for (auto [x2, y2] : m.pairs)
      if (spec.pomset.precedes(x, x2) && impl[y].tick > impl[y2].tick)
        return false;
  return true;
}

namespace {

Counterexample diagnose(const SpecTrace& spec, const TimedWord& impl,
                        const MonitorConfig& cfg, const OracleCaps& caps, Tick t,
                        std::optional<Tick> prev) {
  Counterexample ce;
  ce.time = t;
  const bool optional_semantics = cfg.optional_mode;
  auto newly = [&](Tick deadline) {
    return deadline <= t && (!prev || deadline > *prev);
  };

  // Specification expiries crossed at t, in the order the monitor fires them.
  std::vector<VertexId> new_s;
  for (VertexId v = 0; v < spec.size(); ++v)
    if (spec.theta[v] <= t && newly(spec.delta[v].hi)) new_s.push_back(v);
  std::sort(new_s.begin(), new_s.end(), [&](VertexId a, VertexId b) {
    if (spec.theta[a] != spec.theta[b]) return spec.theta[a] < spec.theta[b];
    return a < b;
  });
  for (VertexId v : new_s) {
    SearchOpts opts;
    opts.optional_semantics = optional_semantics;
    opts.exempt_spec = v;
    if (run_search(spec, impl, t, cfg, caps, opts)) {
      ce.spec_vertex = v;
      ce.clause = (optional_semantics && spec.optional_mark[v])
                      ? Clause::OptionalClosure
                      : Clause::SpecUnmatched;
      return ce;
    }
  }

  std::vector<EventId> new_i;
  for (const auto& e : impl.events())
    if (e.tick <= t &&
        newly(sat_add(e.tick, cfg.slack.minus_for(e.label.name))))
      new_i.push_back(e.seq);
  for (EventId y : new_i) {
    SearchOpts opts;
    opts.optional_semantics = optional_semantics;
    opts.exempt_impl = y;
    if (!run_search(spec, impl, t, cfg, caps, opts)) continue;
    ce.impl_event = y;
    // No host at all: a plainly unexpected output.
    bool host_exists = false;
    for (VertexId x = 0; x < spec.size(); ++x)
      if (spec.theta[x] <= t && spec.pomset.label(x) == impl[y].label &&
          spec.delta[x].contains(impl[y].tick)) {
        host_exists = true;
        break;
      }
    if (!host_exists) {
      ce.clause = Clause::ImplUnmatched;
      return ce;
    }
    if (optional_semantics) {
      SearchOpts relaxed;
      relaxed.optional_semantics = true;
      relaxed.enforce_closure = false;
      if (auto m = run_search(spec, impl, t, cfg, caps, relaxed)) {
        // Hosting y forces a match above a skipped optional vertex.
        ce.clause = Clause::OptionalClosure;
        for (auto [x, e] : m->pairs)
          if (e == y) ce.spec_vertex = x;
        return ce;
      }
    }
    // Hosts exist but none can be paired without breaking the stamp order.
    ce.clause = Clause::OrderViolated;
    return ce;
  }

  ce.clause = Clause::OrderViolated;
  return ce;
}

}  // namespace

ConformanceResult conforms(const SpecTrace& spec, const TimedWord& impl,
                           const MonitorConfig& cfg, const OracleCaps& caps) {
  ConformanceResult res;
  res.conforming = true;
  res.checked_times = critical_times(spec, impl, cfg);
  std::optional<Tick> prev;
  for (Tick t : res.checked_times) {
    SearchOpts opts;
    opts.optional_semantics = cfg.optional_mode;
    auto m = run_search(spec, impl, t, cfg, caps, opts);
    if (!m) {
      res.conforming = false;
      res.counterexample = diagnose(spec, impl, cfg, caps, t, prev);
      return res;
    }
    assert(check_matching(spec, impl, t, *m, cfg, cfg.optional_mode));
    res.final_witness = *m;
    prev = t;
  }
  return res;
}

EquivalenceReport compare_with_monitor(const SpecTrace& spec,
                                       const TimedWord& impl,
                                       const MonitorConfig& cfg,
                                       const OracleCaps& caps) {
  EquivalenceReport rep;
  auto replay = run_replay(spec, impl, cfg);
  rep.monitor_verdict = replay.verdict;
  rep.monitor_failure = replay.failure;
  rep.oracle = conforms(spec, impl, cfg, caps);
  rep.agree = (replay.verdict == Verdict::False) == !rep.oracle.conforming;
  return rep;
}

}  // namespace tracematch
