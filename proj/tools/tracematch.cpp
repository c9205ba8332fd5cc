// Command-line front end: batch checking, streaming monitoring, model
// simulation with fault injection, the offline conformance oracle and the
// randomized monitor/oracle agreement suite.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tracematch/formats.hpp"
#include "tracematch/fuzz.hpp"
#include "tracematch/harness.hpp"
#include "tracematch/oracle.hpp"

namespace tmt = tracematch;

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 3;

int exit_code_of(tmt::Verdict v) {
  switch (v) {
    case tmt::Verdict::True: return kExitTrue;
    case tmt::Verdict::False: return kExitFalse;
    case tmt::Verdict::Inconclusive: return kExitInconclusive;
  }
  return kExitUsage;
}

std::vector<tmt::TraceRecord> load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return tmt::parse_trace(in);
}

tmt::FileConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return tmt::parse_config(in);
}

struct CheckArgs {
  std::string spec_path, impl_path, config_path;
  std::optional<tmt::Tick> horizon;
};

int run_check(const CheckArgs& args) {
  auto cfg = load_config(args.config_path);
  auto spec_recs = load_trace(args.spec_path);
  auto impl_recs = load_trace(args.impl_path);
  for (const auto& r : spec_recs)
    if (r.side != 'S') throw tmt::ParseError(0, "spec file carries side=I records");
  for (const auto& r : impl_recs)
    if (r.side != 'I') throw tmt::ParseError(0, "impl file carries side=S records");

  auto spec_side = tmt::split_sides(spec_recs);
  auto impl_side = tmt::split_sides(impl_recs);

  tmt::AbstractionConfig acfg;
  acfg.alphabet = cfg.alphabet;
  acfg.ports = spec_side.ports;
  acfg.slack = cfg.monitor.slack;
  acfg.dep_window = cfg.monitor.dep_window;
  acfg.optional_mode = cfg.monitor.optional_mode;
  tmt::SpecTrace spec = tmt::abstract_word(spec_side.spec_word, spec_side.deps,
                                         spec_side.optional_ids, acfg);

  tmt::ReportWriter report(std::cout, &spec_side.spec_file_ids,
                          &impl_side.impl_file_ids);
  tmt::Monitor monitor(cfg.monitor);
  monitor.on_match = [&](const tmt::MatchRecord& m) { report.match(m); };
  monitor.on_failure = [&](const tmt::FailureReport& f) { report.failure(f); };

  auto res = tmt::run_replay(spec, impl_side.impl_word, cfg.monitor, args.horizon,
                            &monitor);
  report.verdict(res.verdict, res.verdict == tmt::Verdict::Inconclusive
                                  ? args.horizon.value_or(res.verdict_time)
                                  : res.verdict_time);
  return exit_code_of(res.verdict);
}

int run_monitor_stream(const std::string& config_path) {
  auto cfg = load_config(config_path);
  tmt::AbstractionConfig acfg;
  acfg.alphabet = cfg.alphabet;
  acfg.slack = cfg.monitor.slack;
  acfg.dep_window = cfg.monitor.dep_window;
  acfg.optional_mode = cfg.monitor.optional_mode;
  acfg.ports = cfg.ports;
  tmt::AbstractionBuilder builder(acfg);

  tmt::Monitor monitor(cfg.monitor);
  std::vector<tmt::EventId> spec_ids, impl_ids;
  tmt::ReportWriter report(std::cout, &spec_ids, &impl_ids);
  monitor.on_match = [&](const tmt::MatchRecord& m) { report.match(m); };
  monitor.on_failure = [&](const tmt::FailureReport& f) { report.failure(f); };

  std::map<tmt::EventId, tmt::EventId> spec_pos;
  std::optional<tmt::Tick> slot;
  std::vector<tmt::SpecArrival> spec_batch;
  std::vector<tmt::ImplArrival> impl_batch;
  std::set<std::pair<char, tmt::EventId>> seen_ids;
  tmt::Tick last_t = 0;

  auto flush_slot = [&]() {
    if (!slot || monitor.terminated()) {
      spec_batch.clear();
      impl_batch.clear();
      return;
    }
    monitor.step(*slot, spec_batch, impl_batch);
    spec_batch.clear();
    impl_batch.clear();
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(std::cin, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    tmt::TraceRecord rec = tmt::parse_record_line(line, line_no);
    if (rec.t < last_t) throw tmt::ParseError(line_no, "out-of-order record");
    last_t = rec.t;
    if (!seen_ids.insert({rec.side, rec.id}).second)
      throw tmt::ParseError(line_no, "duplicate id on side");
    if (slot && rec.t != *slot) flush_slot();
    slot = rec.t;
    if (monitor.terminated()) break;

    if (rec.side == 'S') {
      std::vector<tmt::EventId> deps;
      for (tmt::EventId d : rec.deps) {
        auto it = spec_pos.find(d);
        if (it == spec_pos.end())
          throw tmt::ParseError(line_no, "deps must reference earlier spec ids");
        deps.push_back(it->second);
      }
      tmt::VertexId v;
      try {
        v = builder.add_event(tmt::EventLabel{rec.label, rec.payload}, rec.t, deps,
                              rec.opt);
      } catch (const tmt::AbstractionError& e) {
        throw tmt::ParseError(line_no, e.what());
      }
      spec_pos[rec.id] = v;
      spec_ids.push_back(rec.id);
      const auto& trace = builder.trace();
      tmt::SpecArrival a;
      a.vertex = v;
      a.label = trace.pomset.label(v);
      a.theta = rec.t;
      a.delta = trace.delta[v];
      a.optional_mark = rec.opt;
      for (tmt::VertexId u = 0; u < v; ++u)
        if (trace.pomset.precedes(u, v)) a.ancestors.push_back(u);
      spec_batch.push_back(std::move(a));
    } else {
      impl_ids.push_back(rec.id);
      impl_batch.push_back(tmt::ImplArrival{
          static_cast<tmt::EventId>(impl_ids.size() - 1),
          tmt::EventLabel{rec.label, rec.payload}, rec.t});
    }
  }
  flush_slot();
  if (!monitor.terminated()) {
    monitor.end_streams();
    if (cfg.monitor.termination.mode == tmt::TerminationPolicy::Mode::Convergent)
      monitor.set_stabilization(
          tmt::sat_add(last_t, cfg.monitor.termination.stabilization_window));
    monitor.finish();
  }
  report.verdict(monitor.verdict(), monitor.verdict_time());
  return exit_code_of(monitor.verdict());
}

struct SimulateArgs {
  std::string model;
  std::uint64_t seed = 0;
  std::size_t count = 8;
  std::string out_spec, out_impl;
  std::string fault;
  std::size_t fault_target = 0;
  std::uint64_t fault_seed = 0;
  std::string config_path;  // optional override
};

int run_simulate(const SimulateArgs& args) {
  tmt::BuiltinModel model = tmt::make_builtin_model(args.model, args.seed);
  tmt::MonitorConfig mcfg = model.config;
  tmt::PortAssignment ports = model.ports;
  if (!args.config_path.empty()) {
    auto file_cfg = load_config(args.config_path);
    mcfg = file_cfg.monitor;
    if (!file_cfg.ports.all().empty()) ports = file_cfg.ports;
  }
  tmt::TimedWord stimuli = tmt::make_stimuli(args.model, args.seed, args.count);
  auto run = tmt::co_execute(*model.spec, *model.impl, stimuli, mcfg, ports,
                            args.seed);

  tmt::TimedWord impl_word = run.impl_word;
  if (!args.fault.empty()) {
    auto kind = tmt::fault_kind_of(args.fault);
    if (!kind) throw std::runtime_error("unknown fault kind: " + args.fault);
    tmt::FaultSpec fault{*kind, args.fault_target, args.fault_seed};
    impl_word = tmt::inject(fault, impl_word, run.spec_trace, mcfg);
  }

  if (!args.out_spec.empty()) {
    std::ofstream out(args.out_spec);
    out << tmt::serialize_trace(tmt::spec_records(run.spec_word, run.spec_deps,
                                                run.spec_optional, ports));
  }
  if (!args.out_impl.empty()) {
    std::ofstream out(args.out_impl);
    out << tmt::serialize_trace(tmt::impl_records(impl_word, ports));
  }

  // Replay so a fault-mutated trace gets a fresh verdict.
  tmt::ReportWriter report(std::cout);
  tmt::Monitor monitor(mcfg);
  monitor.on_match = [&](const tmt::MatchRecord& m) { report.match(m); };
  monitor.on_failure = [&](const tmt::FailureReport& f) { report.failure(f); };
  auto res = tmt::run_replay(run.spec_trace, impl_word, mcfg, std::nullopt,
                            &monitor);
  report.verdict(res.verdict, res.verdict_time);
  return exit_code_of(res.verdict);
}

struct OracleArgs {
  std::string spec_path, impl_path, config_path;
  bool compare = false;
};

int run_oracle(const OracleArgs& args) {
  auto cfg = load_config(args.config_path);
  auto spec_side = tmt::split_sides(load_trace(args.spec_path));
  auto impl_side = tmt::split_sides(load_trace(args.impl_path));

  tmt::AbstractionConfig acfg;
  acfg.alphabet = cfg.alphabet;
  acfg.ports = spec_side.ports;
  acfg.slack = cfg.monitor.slack;
  acfg.dep_window = cfg.monitor.dep_window;
  acfg.optional_mode = cfg.monitor.optional_mode;
  tmt::SpecTrace spec = tmt::abstract_word(spec_side.spec_word, spec_side.deps,
                                         spec_side.optional_ids, acfg);

  auto result = tmt::conforms(spec, impl_side.impl_word, cfg.monitor);
  if (result.conforming) {
    std::cout << "ORACLE conforming\n";
    for (auto [x, y] : result.final_witness.pairs)
      std::cout << "WITNESS s=" << spec_side.spec_file_ids[x]
                << " i=" << impl_side.impl_file_ids[y] << "\n";
  } else {
    const auto& ce = *result.counterexample;
    std::cout << "ORACLE nonconforming t=" << ce.time
              << " clause=" << tmt::to_string(ce.clause);
    if (ce.spec_vertex)
      std::cout << " s=" << spec_side.spec_file_ids[*ce.spec_vertex];
    if (ce.impl_event)
      std::cout << " i=" << impl_side.impl_file_ids[*ce.impl_event];
    std::cout << "\n";
  }
  if (args.compare) {
    auto rep = tmt::compare_with_monitor(spec, impl_side.impl_word, cfg.monitor);
    std::cout << "MONITOR " << tmt::to_string(rep.monitor_verdict) << "\n";
    std::cout << (rep.agree ? "AGREE\n" : "DISAGREE\n");
    if (!rep.agree) return kExitFalse;
  }
  return result.conforming ? kExitTrue : kExitFalse;
}

struct FuzzArgs {
  std::uint64_t seed = 1;
  std::size_t count = 1000;
  std::size_t max_spec = 6;
  std::size_t max_impl = 6;
  tmt::Tick max_tick = 16;
  std::string mode = "plain";
};

int run_fuzz_cmd(const FuzzArgs& args) {
  tmt::FuzzCaps caps{args.max_spec, args.max_impl, args.max_tick};
  const bool optional_mode = args.mode == "optional";
  auto out =
      tmt::run_fuzz(args.seed, args.count, caps, optional_mode, &std::cerr);
  std::cout << "agreement " << out.agreed << "/" << out.total << "\n";
  return out.agreed == out.total ? kExitTrue : kExitFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"timed-trace conformance monitoring"};
  app.require_subcommand(1);

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "replay trace files through the monitor");
  check->add_option("--spec", check_args.spec_path)->required();
  check->add_option("--impl", check_args.impl_path)->required();
  check->add_option("--config", check_args.config_path)->required();
  std::int64_t horizon = -1;
  check->add_option("--horizon", horizon,
                    "stop after this slot and leave the streams open");

  auto* mon = app.add_subcommand("monitor", "check an interleaved record stream");
  std::string mon_config;
  mon->add_option("--config", mon_config)->required();

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "co-execute a built-in model pair");
  sim->add_option("--model", sim_args.model)->required();
  sim->add_option("--seed", sim_args.seed);
  sim->add_option("--count", sim_args.count);
  sim->add_option("--out-spec", sim_args.out_spec);
  sim->add_option("--out-impl", sim_args.out_impl);
  sim->add_option("--fault", sim_args.fault);
  sim->add_option("--fault-target", sim_args.fault_target);
  sim->add_option("--fault-seed", sim_args.fault_seed);
  sim->add_option("--config", sim_args.config_path);

  OracleArgs oracle_args;
  auto* orc = app.add_subcommand("oracle", "offline brute-force conformance");
  orc->add_option("--spec", oracle_args.spec_path)->required();
  orc->add_option("--impl", oracle_args.impl_path)->required();
  orc->add_option("--config", oracle_args.config_path)->required();
  orc->add_flag("--compare", oracle_args.compare);

  FuzzArgs fuzz_args;
  auto* fz = app.add_subcommand("fuzz", "randomized monitor/oracle agreement");
  fz->add_option("--seed", fuzz_args.seed);
  fz->add_option("--count", fuzz_args.count);
  fz->add_option("--max-spec", fuzz_args.max_spec);
  fz->add_option("--max-impl", fuzz_args.max_impl);
  fz->add_option("--max-tick", fuzz_args.max_tick);
  fz->add_option("--mode", fuzz_args.mode)
      ->check(CLI::IsMember({"plain", "optional"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (check->parsed()) {
      if (horizon >= 0) check_args.horizon = static_cast<tmt::Tick>(horizon);
      return run_check(check_args);
    }
    if (mon->parsed()) return run_monitor_stream(mon_config);
    if (sim->parsed()) return run_simulate(sim_args);
    if (orc->parsed()) return run_oracle(oracle_args);
    if (fz->parsed()) return run_fuzz_cmd(fuzz_args);
  } catch (const tmt::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const tmt::CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
