#include <doctest.h>

#include "tracematch/fuzz.hpp"
#include "tracematch/harness.hpp"
#include "tracematch/oracle.hpp"

using namespace tracematch;

TEST_CASE("identical fifo models conform") {
  auto model = make_builtin_model("fifo_buffer");
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto stimuli = make_stimuli("fifo_buffer", seed, 6);
    auto run = co_execute(*model.spec, *model.impl, stimuli, model.config,
                          model.ports, seed);
    CAPTURE(seed);
    CHECK(run.verdict == Verdict::True);
    CHECK(run.matches.size() == 6);
    CHECK(conforms(run.spec_trace, run.impl_word, model.config).conforming);
  }
}

TEST_CASE("fifo with a dropped output fails as missing; the oracle agrees") {
  auto model = make_builtin_model("fifo_buffer");
  auto stimuli = make_stimuli("fifo_buffer", 5, 5);
  auto run = co_execute(*model.spec, *model.impl, stimuli, model.config,
                        model.ports, 5);
  TimedWord faulty = inject(FaultSpec{FaultSpec::Kind::DropOutput, 2, 0},
                            run.impl_word, run.spec_trace, model.config);
  auto res = run_replay(run.spec_trace, faulty, model.config);
  CHECK(res.verdict == Verdict::False);
  CHECK(res.failure->kind == FailureReport::Kind::MissingOutput);
  auto oracle = conforms(run.spec_trace, faulty, model.config);
  CHECK_FALSE(oracle.conforming);
  CHECK(oracle.counterexample->clause == Clause::SpecUnmatched);
}

TEST_CASE("jittered echo reorders across ports and still conforms") {
  auto model = make_builtin_model("untimed_echo");
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto stimuli = make_stimuli("untimed_echo", seed, 8);
    auto run = co_execute(*model.spec, *model.impl, stimuli, model.config,
                          model.ports, seed);
    CAPTURE(seed);
    CHECK(run.verdict == Verdict::True);
    CHECK(conforms(run.spec_trace, run.impl_word, model.config).conforming);
  }
}

TEST_CASE("stabilization detection") {
  StabilizationDetector det{4};
  TimedWord outputs;
  outputs.push(EventLabel{"x", ""}, 3);
  outputs.push(EventLabel{"x", ""}, 5);
  CHECK(detect_stabilization(outputs, 2, det) == 9);

  CHECK(detect_stabilization(TimedWord{}, 2, det) == 6);

  // An output inside the window pushes the estimate out.
  TimedWord more = outputs;
  more.push(EventLabel{"x", ""}, 8);
  CHECK(detect_stabilization(more, 2, det) == 12);
}

TEST_CASE("convergent runs reach a verdict") {
  auto model = make_builtin_model("fifo_buffer");
  MonitorConfig cfg = model.config;
  cfg.termination.mode = TerminationPolicy::Mode::Convergent;
  cfg.termination.stabilization_window = 4;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto stimuli = make_stimuli("fifo_buffer", seed, 4);
    auto run = co_execute(*model.spec, *model.impl, stimuli, cfg, model.ports,
                          seed);
    CAPTURE(seed);
    CHECK(run.verdict != Verdict::Inconclusive);
    CHECK(run.stabilization.has_value());
  }
}

TEST_CASE("fault injection mutates deterministically") {
  auto model = make_builtin_model("fifo_buffer");
  auto stimuli = make_stimuli("fifo_buffer", 9, 5);
  auto run = co_execute(*model.spec, *model.impl, stimuli, model.config,
                        model.ports, 9);

  SUBCASE("duplicate fails as unexpected on the copy") {
    TimedWord faulty = inject(FaultSpec{FaultSpec::Kind::DuplicateOutput, 1, 0},
                              run.impl_word, run.spec_trace, model.config);
    CHECK(faulty.size() == run.impl_word.size() + 1);
    auto rep = compare_with_monitor(run.spec_trace, faulty, model.config);
    CHECK(rep.agree);
    CHECK(rep.monitor_verdict == Verdict::False);
  }

  SUBCASE("delay lands outside every interval") {
    TimedWord faulty =
        inject(FaultSpec{FaultSpec::Kind::DelayBeyondSlack, 0, 0}, run.impl_word,
               run.spec_trace, model.config);
    auto rep = compare_with_monitor(run.spec_trace, faulty, model.config);
    CHECK(rep.agree);
    CHECK(rep.monitor_verdict == Verdict::False);
  }

  SUBCASE("relabel fails") {
    TimedWord faulty =
        inject(FaultSpec{FaultSpec::Kind::RelabelPayload, 3, 0}, run.impl_word,
               run.spec_trace, model.config);
    auto rep = compare_with_monitor(run.spec_trace, faulty, model.config);
    CHECK(rep.agree);
    CHECK(rep.monitor_verdict == Verdict::False);
  }

  SUBCASE("reorder within slack conforms") {
    for (std::uint64_t fseed = 0; fseed < 5; ++fseed) {
      TimedWord faulty =
          inject(FaultSpec{FaultSpec::Kind::ReorderWithinSlack, 0, fseed},
                 run.impl_word, run.spec_trace, model.config);
      CAPTURE(fseed);
      CHECK(conforms(run.spec_trace, faulty, model.config).conforming);
      CHECK(run_replay(run.spec_trace, faulty, model.config).verdict ==
            Verdict::True);
    }
  }

  SUBCASE("reorder against the declared order fails") {
    TimedWord faulty =
        inject(FaultSpec{FaultSpec::Kind::ReorderBeyondOrder, 0, 0},
               run.impl_word, run.spec_trace, model.config);
    auto rep = compare_with_monitor(run.spec_trace, faulty, model.config);
    CHECK(rep.agree);
    CHECK(rep.monitor_verdict == Verdict::False);
  }

  SUBCASE("empty selector is rejected") {
    CHECK_THROWS_AS(inject(FaultSpec{FaultSpec::Kind::DropOutput, 0, 0},
                           TimedWord{}, run.spec_trace, model.config),
                    std::invalid_argument);
  }
}

TEST_CASE("store cancellation scenarios") {
  auto model = make_builtin_model("cancellable_store");

  // Two writes to one location back to back: the first ack disappears on the
  // implementation side and the run still conforms.
  TimedWord stimuli;
  stimuli.push(EventLabel{"write", std::string("\x01""a", 2)}, 0);
  stimuli.push(EventLabel{"write", std::string("\x01""b", 2)}, 1);
  auto run = co_execute(*model.spec, *model.impl, stimuli, model.config,
                        model.ports, 1);
  CHECK(run.spec_word.size() == 2);   // both acks promised
  CHECK(run.impl_word.size() == 1);   // one delivered
  CHECK(run.verdict == Verdict::True);
  CHECK(conforms(run.spec_trace, run.impl_word, model.config).conforming);

  // Writes to different locations never cancel each other.
  TimedWord two_locs;
  two_locs.push(EventLabel{"write", std::string("\x01""a", 2)}, 0);
  two_locs.push(EventLabel{"write", std::string("\x02""b", 2)}, 1);
  auto run2 = co_execute(*model.spec, *model.impl, two_locs, model.config,
                         model.ports, 1);
  CHECK(run2.impl_word.size() == 2);
  CHECK(run2.verdict == Verdict::True);

  // Random store workloads conform.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto random_writes = make_stimuli("cancellable_store", seed, 6);
    auto r = co_execute(*model.spec, *model.impl, random_writes, model.config,
                        model.ports, seed);
    CAPTURE(seed);
    CHECK(r.verdict == Verdict::True);
    CHECK(conforms(r.spec_trace, r.impl_word, model.config).conforming);
  }
}

TEST_CASE("matched descendant of a cancelled optional vertex fails") {
  // ack -> done chain, both cancellable; the implementation loses the ack
  // but still emits the dependent completion.
  AbstractionConfig acfg;
  acfg.optional_mode = true;
  acfg.dep_window = 3;
  acfg.slack.dt_minus_default = 1;
  acfg.slack.dt_plus_default = 1;
  acfg.slack.bound_minus = 1;
  acfg.slack.bound_plus = 1;
  TimedWord spec_word;
  spec_word.push(EventLabel{"ack", "\x01"}, 3);
  spec_word.push(EventLabel{"done", "\x01"}, 4);
  auto spec = abstract_word(spec_word, DependencyDecl{{{0, 1}}}, {0, 1}, acfg);

  MonitorConfig cfg;
  cfg.slack = acfg.slack;
  cfg.dep_window = acfg.dep_window;
  cfg.optional_mode = true;

  TimedWord impl;
  impl.push(EventLabel{"done", "\x01"}, 4);

  auto res = run_replay(spec, impl, cfg);
  CHECK(res.verdict == Verdict::False);
  CHECK(res.failure->kind == FailureReport::Kind::UnexpectedOutput);

  auto oracle = conforms(spec, impl, cfg);
  REQUIRE_FALSE(oracle.conforming);
  CHECK(oracle.counterexample->clause == Clause::OptionalClosure);

  // Dropping the whole cone conforms instead.
  CHECK(conforms(spec, TimedWord{}, cfg).conforming);
}

TEST_CASE("unknown model name is rejected") {
  CHECK_THROWS_AS(make_builtin_model("no_such_model"), std::invalid_argument);
}
