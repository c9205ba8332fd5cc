#include <doctest.h>

#include <algorithm>

#include "tracematch/fuzz.hpp"
#include "tracematch/oracle.hpp"

using namespace tracematch;

namespace {

AbstractionConfig fanin_config() {
  AbstractionConfig cfg;
  cfg.slack.dt_minus = {{"a", 2}, {"b", 1}, {"c", 3}, {"d", 2}};
  cfg.slack.dt_plus = {{"a", 0}, {"b", 1}, {"c", 1}, {"d", 2}};
  cfg.slack.bound_minus = 3;
  cfg.slack.bound_plus = 2;
  return cfg;
}

SpecTrace fanin_trace() {
  TimedWord w;
  w.push(EventLabel{"a", ""}, 2);
  w.push(EventLabel{"b", ""}, 2);
  w.push(EventLabel{"c", ""}, 3);
  w.push(EventLabel{"d", ""}, 3);
  return abstract_word(w, DependencyDecl{{{0, 2}, {1, 2}, {0, 3}, {1, 3}}}, {},
                       fanin_config());
}

MonitorConfig fanin_monitor_config() {
  MonitorConfig cfg;
  cfg.slack = fanin_config().slack;
  return cfg;
}

TimedWord impl_word(std::initializer_list<std::pair<const char*, Tick>> events) {
  TimedWord w;
  for (const auto& [name, tick] : events) w.push(EventLabel{name, ""}, tick);
  return w;
}

}  // namespace

TEST_CASE("critical times") {
  MonitorConfig cfg;
  CHECK(critical_times(SpecTrace{}, TimedWord{}, cfg) == std::vector<Tick>{0});

  // Single vertex theta=1, interval [0,3]: stamps, endpoints, one beyond.
  AbstractionConfig acfg;
  acfg.slack.dt_minus_default = 1;
  acfg.slack.dt_plus_default = 2;
  acfg.slack.bound_minus = 1;
  acfg.slack.bound_plus = 2;
  TimedWord w;
  w.push(EventLabel{"x", ""}, 1);
  auto spec = abstract_word(w, {}, {}, acfg);
  MonitorConfig mcfg;
  mcfg.slack = acfg.slack;
  CHECK(critical_times(spec, TimedWord{}, mcfg) ==
        std::vector<Tick>{0, 1, 3, 4});

  auto times = critical_times(fanin_trace(),
                              impl_word({{"b", 1}, {"a", 2}, {"c", 3}, {"d", 4}}),
                              fanin_monitor_config());
  for (Tick t : {0, 1, 2, 3, 4, 5, 6})
    CHECK(std::find(times.begin(), times.end(), t) != times.end());
}

TEST_CASE("matching search on the fan-in instance") {
  auto spec = fanin_trace();
  auto cfg = fanin_monitor_config();
  auto impl = impl_word({{"b", 1}, {"a", 2}, {"c", 3}});

  auto m = find_matching(spec, impl, 4, cfg);
  REQUIRE(m.has_value());
  std::set<std::pair<VertexId, EventId>> pairs(m->pairs.begin(), m->pairs.end());
  CHECK(pairs == std::set<std::pair<VertexId, EventId>>{{0, 1}, {1, 0}, {2, 2}});
  CHECK(check_matching(spec, impl, 4, *m, cfg, false));

  CHECK(find_matching(SpecTrace{}, TimedWord{}, 0, cfg).has_value());

  // Expired obligatory vertex without any implementation event.
  CHECK_FALSE(find_matching(spec, TimedWord{}, 2, cfg).has_value());
}

TEST_CASE("matching cap") {
  MonitorConfig cfg;
  TimedWord big;
  for (int i = 0; i < 13; ++i) big.push(EventLabel{"x", ""}, 0);
  CHECK_THROWS_AS(find_matching(SpecTrace{}, big, 0, cfg), CapExceeded);
}

TEST_CASE("optional matching requires the cancellation closure") {
  // Chain of two optional vertices; only the descendant's event arrives.
  AbstractionConfig acfg;
  acfg.optional_mode = true;
  acfg.dep_window = 4;
  acfg.slack.dt_plus_default = 1;
  acfg.slack.bound_plus = 1;
  TimedWord w;
  w.push(EventLabel{"a", ""}, 0);
  w.push(EventLabel{"b", ""}, 2);
  auto spec = abstract_word(w, DependencyDecl{{{0, 1}}}, {0, 1}, acfg);
  MonitorConfig cfg;
  cfg.slack = acfg.slack;
  cfg.dep_window = acfg.dep_window;
  cfg.optional_mode = true;

  // Both unmatched: fine, the whole cone is silent.
  CHECK(find_matching_optional(spec, TimedWord{}, 10, cfg).has_value());

  // The descendant's event must be matched once expired, which violates the
  // closure of the expired unmatched ancestor.
  auto impl = impl_word({{"b", 2}});
  CHECK_FALSE(find_matching_optional(spec, impl, 10, cfg).has_value());

  auto res = conforms(spec, impl, cfg);
  CHECK_FALSE(res.conforming);
  CHECK(res.counterexample->clause == Clause::OptionalClosure);
}

TEST_CASE("optional semantics with no marks reduces to the plain one") {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    Instance inst = random_instance(seed, FuzzCaps{4, 4, 10}, false);
    MonitorConfig opt_cfg = inst.mcfg;
    opt_cfg.optional_mode = true;
    opt_cfg.dep_window = 32;
    for (Tick t : critical_times(inst.spec, inst.impl, opt_cfg)) {
      CAPTURE(seed);
      CHECK(find_matching(inst.spec, inst.impl, t, inst.mcfg).has_value() ==
            find_matching_optional(inst.spec, inst.impl, t, opt_cfg).has_value());
    }
  }
}

TEST_CASE("conformance of the worked instances") {
  auto spec = fanin_trace();
  auto cfg = fanin_monitor_config();

  auto good = conforms(spec, impl_word({{"b", 1}, {"a", 2}, {"c", 3}, {"d", 4}}),
                       cfg);
  CHECK(good.conforming);

  // y_a moved outside [0,2]: x_a expires unmatched.
  auto bad = conforms(spec, impl_word({{"b", 1}, {"a", 3}, {"c", 3}, {"d", 4}}),
                      cfg);
  REQUIRE_FALSE(bad.conforming);
  CHECK(bad.counterexample->clause == Clause::SpecUnmatched);
  CHECK(bad.counterexample->spec_vertex == VertexId{0});
  CHECK(bad.counterexample->time == 2);

  CHECK(conforms(SpecTrace{}, TimedWord{}, cfg).conforming);
}

TEST_CASE("returned witnesses always revalidate") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    Instance inst = random_instance(seed, FuzzCaps{5, 5, 12}, seed % 2 == 0);
    for (Tick t : critical_times(inst.spec, inst.impl, inst.mcfg)) {
      auto m = inst.mcfg.optional_mode
                   ? find_matching_optional(inst.spec, inst.impl, t, inst.mcfg)
                   : find_matching(inst.spec, inst.impl, t, inst.mcfg);
      if (!m) continue;
      CAPTURE(seed);
      CHECK(check_matching(inst.spec, inst.impl, t, *m, inst.mcfg,
                           inst.mcfg.optional_mode));
    }
  }
}

TEST_CASE("non-conformance persists at later times") {
  std::size_t found = 0;
  for (std::uint64_t seed = 1; seed <= 200 && found < 40; ++seed) {
    Instance inst = random_instance(seed, FuzzCaps{4, 4, 10}, seed % 2 == 0);
    auto res = conforms(inst.spec, inst.impl, inst.mcfg);
    if (res.conforming) continue;
    ++found;
    bool failing = false;
    for (Tick t : critical_times(inst.spec, inst.impl, inst.mcfg)) {
      auto m = inst.mcfg.optional_mode
                   ? find_matching_optional(inst.spec, inst.impl, t, inst.mcfg)
                   : find_matching(inst.spec, inst.impl, t, inst.mcfg);
      if (t < res.counterexample->time) {
        CAPTURE(seed);
        CHECK(m.has_value());
      }
      if (!m) failing = true;
      if (failing) {
        CAPTURE(seed);
        CHECK_FALSE(m.has_value());
      }
    }
  }
  CHECK(found > 0);
}

TEST_CASE("oracle is invariant under reordering equal-time independent events") {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    Instance inst = random_instance(seed, FuzzCaps{5, 5, 8}, false);
    // Reverse the emission order inside every tick group.
    std::vector<TimedEvent> events(inst.impl.events().begin(),
                                   inst.impl.events().end());
    std::stable_sort(events.begin(), events.end(),
                     [](const TimedEvent& a, const TimedEvent& b) {
                       if (a.tick != b.tick) return a.tick < b.tick;
                       return a.seq > b.seq;
                     });
    TimedWord permuted;
    for (const auto& e : events) permuted.push(e.label, e.tick);
    CAPTURE(seed);
    CHECK(conforms(inst.spec, inst.impl, inst.mcfg).conforming ==
          conforms(inst.spec, permuted, inst.mcfg).conforming);
  }
}

TEST_CASE("monitor and oracle agree on seeded batches") {
  FuzzCaps caps{5, 5, 12};
  auto plain = run_fuzz(42, 500, caps, false);
  CHECK(plain.agreed == plain.total);
  auto optional_mode = run_fuzz(43, 500, caps, true);
  CHECK(optional_mode.agreed == optional_mode.total);
}

TEST_CASE("injected faults fail on both sides with matching kinds") {
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 120 && checked < 30; ++seed) {
    Instance inst = random_instance(seed, FuzzCaps{4, 4, 10}, false);
    if (inst.spec.empty()) continue;
    TimedWord conforming;
    for (VertexId v = 0; v < inst.spec.size(); ++v)
      conforming.push(inst.spec.pomset.label(v), inst.spec.theta[v]);
    FaultSpec fault{FaultSpec::Kind::DropOutput, seed % conforming.size(), seed};
    TimedWord faulty = inject(fault, conforming, inst.spec, inst.mcfg);
    auto rep = compare_with_monitor(inst.spec, faulty, inst.mcfg);
    CAPTURE(seed);
    CHECK(rep.agree);
    if (rep.monitor_verdict == Verdict::False) {
      ++checked;
      REQUIRE(rep.oracle.counterexample.has_value());
      const auto kind = rep.monitor_failure->kind;
      const auto clause = rep.oracle.counterexample->clause;
      if (clause == Clause::SpecUnmatched)
        CHECK(kind == FailureReport::Kind::MissingOutput);
      if (clause == Clause::ImplUnmatched)
        CHECK(kind == FailureReport::Kind::UnexpectedOutput);
    }
  }
  CHECK(checked > 0);
}
