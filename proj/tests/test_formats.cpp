#include <doctest.h>

#include <sstream>

#include "tracematch/formats.hpp"
#include "tracematch/fuzz.hpp"

using namespace tracematch;

TEST_CASE("record round trip") {
  const std::string line =
      "EVT id=3 side=S t=7 label=ack port=2 payload=01ff opt=1 deps=0,1";
  auto rec = parse_record_line(line, 1);
  CHECK(rec.id == 3);
  CHECK(rec.side == 'S');
  CHECK(rec.t == 7);
  CHECK(rec.label == "ack");
  CHECK(rec.port == 2);
  CHECK(rec.payload == std::string("\x01\xff", 2));
  CHECK(rec.opt);
  CHECK(rec.deps == std::vector<EventId>{0, 1});
  CHECK(serialize_record(rec) == line);

  const std::string bare = "EVT id=0 side=I t=0 label=out port=1";
  CHECK(serialize_record(parse_record_line(bare, 1)) == bare);
}

TEST_CASE("malformed records are rejected") {
  CHECK_THROWS_AS(parse_record_line("EVT id=0 side=X t=0 label=a port=0", 1),
                  ParseError);
  CHECK_THROWS_AS(parse_record_line("EVT id=0 side=S t=0 label=a", 1), ParseError);
  CHECK_THROWS_AS(parse_record_line("REC id=0 side=S t=0 label=a port=0", 1),
                  ParseError);
  CHECK_THROWS_AS(
      parse_record_line("EVT id=0 side=S t=0 label=a port=0 payload=0", 1),
      ParseError);
  CHECK_THROWS_AS(
      parse_record_line("EVT id=0 side=S t=0 label=a port=0 junk=1", 1),
      ParseError);
  CHECK_THROWS_AS(parse_record_line("EVT id=x side=S t=0 label=a port=0", 1),
                  ParseError);
}

TEST_CASE("trace stream validation") {
  {
    std::istringstream in(
        "# comment\n"
        "EVT id=0 side=S t=1 label=a port=1\n"
        "\n"
        "EVT id=0 side=I t=1 label=a port=1\n"
        "EVT id=1 side=S t=2 label=b port=2 deps=0\n");
    auto recs = parse_trace(in);
    CHECK(recs.size() == 3);
  }
  {
    std::istringstream in(
        "EVT id=0 side=S t=2 label=a port=1\n"
        "EVT id=1 side=S t=1 label=b port=2\n");
    CHECK_THROWS_AS(parse_trace(in), ParseError);
  }
  {
    std::istringstream in(
        "EVT id=0 side=S t=1 label=a port=1\n"
        "EVT id=0 side=S t=2 label=b port=2\n");
    CHECK_THROWS_AS(parse_trace(in), ParseError);
  }
  {
    std::istringstream in("EVT id=0 side=S t=1 label=a port=1 deps=4\n");
    CHECK_THROWS_AS(parse_trace(in), ParseError);
  }
  {
    std::istringstream in("EVT id=0 side=I t=1 label=a port=1 opt=1\n");
    CHECK_THROWS_AS(parse_trace(in), ParseError);
  }
}

TEST_CASE("side splitting keeps ids and dependencies") {
  std::istringstream in(
      "EVT id=10 side=S t=1 label=a port=1\n"
      "EVT id=4 side=I t=1 label=a port=1\n"
      "EVT id=11 side=S t=3 label=b port=2 opt=1 deps=10\n"
      "EVT id=5 side=I t=3 label=b port=2\n");
  auto st = split_sides(parse_trace(in));
  CHECK(st.spec_word.size() == 2);
  CHECK(st.impl_word.size() == 2);
  CHECK(st.spec_file_ids == std::vector<EventId>{10, 11});
  CHECK(st.impl_file_ids == std::vector<EventId>{4, 5});
  CHECK(st.deps.edges == std::vector<std::pair<EventId, EventId>>{{0, 1}});
  CHECK(st.optional_ids == std::set<EventId>{1});
  CHECK(st.ports.port_of("a") == 1);
  CHECK(st.ports.port_of("b") == 2);
}

TEST_CASE("instances serialize to parseable canonical records") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Instance inst = random_instance(seed, FuzzCaps{5, 5, 12}, seed % 2 == 0);
    auto specs =
        spec_records(inst.spec_word, inst.deps, inst.optional_ids, inst.acfg.ports);
    auto impls = impl_records(inst.impl, inst.acfg.ports);
    const std::string spec_text = serialize_trace(specs);
    const std::string impl_text = serialize_trace(impls);

    std::istringstream spec_in(spec_text), impl_in(impl_text);
    auto spec_back = split_sides(parse_trace(spec_in));
    auto impl_back = split_sides(parse_trace(impl_in));

    CHECK(spec_back.spec_word.size() == inst.spec_word.size());
    CHECK(impl_back.impl_word.size() == inst.impl.size());
    CHECK(spec_back.optional_ids == inst.optional_ids);
    for (std::size_t i = 0; i < inst.spec_word.size(); ++i) {
      CHECK(spec_back.spec_word[i].label == inst.spec_word[i].label);
      CHECK(spec_back.spec_word[i].tick == inst.spec_word[i].tick);
    }
    // Byte-identical round trip of the canonical form.
    std::istringstream again_in(spec_text);
    CHECK(serialize_trace(parse_trace(again_in)) == spec_text);
    std::istringstream again_impl(impl_text);
    CHECK(serialize_trace(parse_trace(again_impl)) == impl_text);
  }
}

TEST_CASE("config parsing") {
  std::istringstream in(
      "# demo config\n"
      "dtminus.default=2\n"
      "dtplus.default=1\n"
      "dtminus.a=3\n"
      "dtplus.a=2\n"
      "bound.minus=3\n"
      "bound.plus=2\n"
      "ddep=6\n"
      "mode=optional\n"
      "term=convergent\n"
      "stabilization.window=4\n"
      "independent=a:b\n"
      "ports.a=1\n"
      "ports.b=2\n");
  auto cfg = parse_config(in);
  CHECK(cfg.monitor.slack.minus_for("a") == 3);
  CHECK(cfg.monitor.slack.minus_for("z") == 2);
  CHECK(cfg.monitor.slack.plus_for("a") == 2);
  CHECK(cfg.monitor.slack.bound_minus == 3);
  CHECK(cfg.monitor.dep_window == 6);
  CHECK(cfg.monitor.optional_mode);
  CHECK(cfg.monitor.termination.mode == TerminationPolicy::Mode::Convergent);
  CHECK(cfg.monitor.termination.stabilization_window == 4);
  CHECK(cfg.alphabet.independent("a", "b"));
  CHECK(cfg.ports.port_of("b") == 2);

  // Round trip through the serializer.
  std::istringstream again(serialize_config(cfg));
  auto cfg2 = parse_config(again);
  CHECK(serialize_config(cfg2) == serialize_config(cfg));
}

TEST_CASE("config validation") {
  {
    std::istringstream in("dtminus.default=1\ndtplus.default=1\n");
    CHECK_THROWS_AS(parse_config(in), ParseError);  // bounds missing
  }
  {
    std::istringstream in(
        "dtminus.default=1\ndtplus.default=1\nbound.minus=1\nbound.plus=1\n"
        "dtplus.x=5\n");
    CHECK_THROWS_AS(parse_config(in), ParseError);  // slack above bound
  }
  {
    std::istringstream in(
        "dtminus.default=0\ndtplus.default=0\nbound.minus=0\nbound.plus=0\n"
        "nonsense=1\n");
    CHECK_THROWS_AS(parse_config(in), ParseError);
  }
  {
    std::istringstream in(
        "dtminus.default=0\ndtplus.default=0\nbound.minus=0\nbound.plus=0\n"
        "independent=a:a\n");
    CHECK_THROWS_AS(parse_config(in), ParseError);  // irreflexive
  }
}

TEST_CASE("report lines") {
  std::ostringstream out;
  std::vector<EventId> spec_ids{10, 11};
  std::vector<EventId> impl_ids{20};
  ReportWriter w(out, &spec_ids, &impl_ids);
  w.match(MatchRecord{1, 0, 4, 5});
  w.failure(FailureReport{FailureReport::Kind::MissingOutput, 0, 9, {}});
  w.verdict(Verdict::False, 9);
  CHECK(out.str() ==
        "MATCH s=11 i=20 ts=4 ti=5\n"
        "FAIL kind=missing id=10 t=9\n"
        "VERDICT false t=9\n");
}
