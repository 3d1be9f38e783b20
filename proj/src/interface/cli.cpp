#include "cspmon/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "cspmon/bench.hpp"
#include "cspmon/config.hpp"
#include "cspmon/error.hpp"
#include "cspmon/mapping.hpp"
#include "cspmon/monitor.hpp"
#include "cspmon/parser.hpp"
#include "cspmon/pipeline.hpp"
#include "cspmon/server.hpp"

namespace cspmon {

namespace {

using clock = std::chrono::steady_clock;

// Command-line view of a Config: every field may come from a config file and
// be overridden by a flag.
struct Options {
  std::string config;
  std::string spec;
  std::string entry;
  std::string mode;
  std::vector<std::string> observable;
  std::string mapping;
  std::string trace;
  std::string report;
  std::string protocol;
  std::string host;
  int port = -1;
  std::size_t max_states = 0;
  std::size_t max_transitions = 0;
  std::size_t max_sessions = 0;
  bool csv = false;
  std::string dump;
  bool names = false;
};

struct Settings {
  std::filesystem::path spec_path;
  std::string entry;
  Mode mode = Mode::Strict;
  std::optional<std::vector<std::string>> observable;
  std::optional<std::filesystem::path> mapping_path;
  std::optional<std::filesystem::path> trace_path;
  ListenInput listen;
  SynthesisLimits limits;
  std::optional<std::filesystem::path> report_path;
};

Settings resolve_settings(const Options& o) {
  Settings s;
  if (!o.config.empty()) {
    Config cfg = load_config(o.config);
    s.spec_path = cfg.spec_path;
    s.entry = cfg.entry_process;
    s.mode = cfg.mode;
    s.observable = cfg.observable_events;
    s.mapping_path = cfg.mapping_path;
    if (const auto* f = std::get_if<TraceFileInput>(&cfg.input)) s.trace_path = f->path;
    if (const auto* l = std::get_if<ListenInput>(&cfg.input)) s.listen = *l;
    s.limits = cfg.limits;
    s.report_path = cfg.report_path;
  }
  if (!o.spec.empty()) s.spec_path = o.spec;
  if (!o.entry.empty()) s.entry = o.entry;
  if (!o.mode.empty()) {
    auto m = parse_mode(o.mode);
    if (!m) throw ConfigError("mode", "expected strict or permissive, got '" + o.mode + "'");
    s.mode = *m;
  }
  if (!o.observable.empty()) s.observable = o.observable;
  if (!o.mapping.empty()) s.mapping_path = o.mapping;
  if (!o.trace.empty()) s.trace_path = o.trace;
  if (!o.report.empty()) s.report_path = o.report;
  if (!o.protocol.empty()) {
    if (o.protocol == "tcp") {
      s.listen.protocol = Protocol::Tcp;
    } else if (o.protocol == "websocket") {
      s.listen.protocol = Protocol::WebSocket;
    } else {
      throw ConfigError("input.listen.protocol", "expected tcp or websocket");
    }
  }
  if (!o.host.empty()) s.listen.host = o.host;
  if (o.port >= 0) s.listen.port = static_cast<std::uint16_t>(o.port);
  if (o.max_states) s.limits.max_states = o.max_states;
  if (o.max_transitions) s.limits.max_transitions = o.max_transitions;
  if (s.spec_path.empty()) throw ConfigError("spec_path", "missing (use --config or --spec)");
  if (s.entry.empty()) throw ConfigError("entry_process", "missing (use --config or --entry)");
  return s;
}

struct Loaded {
  Spec spec;
  EntryPoint entry;
};

Loaded load(const Settings& s) {
  Loaded l{load_spec_file(s.spec_path), {}};
  l.entry = resolve_entry(l.spec, s.entry);
  return l;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f || !(f << text)) throw IoError("cannot write " + path.string());
}

int gate_failure(const OracleBuild& b, std::ostream& err) {
  err << "determinism check failed: " << render_witness(*b.model, *b.gate.witness) << "\n";
  return kExitNondeterministic;
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  auto t0 = clock::now();
  Settings s = resolve_settings(o);
  if (!s.trace_path) throw ConfigError("input.trace_file", "missing (use --trace)");
  Loaded l = load(s);
  OracleBuild b = build_oracle(l.spec, l.entry, s.observable, s.limits);
  if (!b.oracle) return gate_failure(b, err);
  Mapping mapping;
  if (s.mapping_path) {
    mapping = load_mapping(*s.mapping_path);
    validate_mapping(mapping, *b.oracle);
  }
  TraceReader reader(*s.trace_path, mapping);
  const Lts& oracle = *b.oracle;
  CheckResult r = check_stream(b.oracle, s.mode, [&]() -> std::optional<TraceEvent> {
    auto m = reader.next();
    if (!m) return std::nullopt;
    return to_trace_event(oracle, *m);
  });
  // Count the rest of the file so the report shows checked/total.
  while (reader.next()) ++r.stats.total_events;

  RunReport rep;
  rep.synth_s = b.synth_seconds;
  rep.check_s = r.stats.check_seconds;
  rep.mean_event_s = r.stats.mean_event_seconds;
  rep.events_checked = r.stats.events_checked;
  rep.total_events = r.stats.total_events;
  rep.verdict = is_pass(r.verdict) ? "pass" : "fail";
  rep.total_s = std::chrono::duration<double>(clock::now() - t0).count();

  std::string text = report_text(rep);
  if (const auto* f = std::get_if<Fail>(&r.verdict)) text += render_counterexample(oracle, *f);
  out << text;
  if (o.csv) out << report_csv_header() << "\n" << report_csv_row(rep) << "\n";
  if (s.report_path) {
    write_file(*s.report_path, text + "\n" + report_csv_header() + "\n" + report_csv_row(rep) + "\n");
  }
  return is_pass(r.verdict) ? kExitPass : kExitFail;
}

int cmd_listen(const Options& o, std::ostream& out, std::ostream& err) {
  Settings s = resolve_settings(o);
  Loaded l = load(s);
  OracleBuild b = build_oracle(l.spec, l.entry, s.observable, s.limits);
  if (!b.oracle) return gate_failure(b, err);
  Mapping mapping;
  if (s.mapping_path) {
    mapping = load_mapping(*s.mapping_path);
    validate_mapping(mapping, *b.oracle);
  }
  std::mutex out_mu;
  bool any_failed = false;
  std::ofstream report;
  if (s.report_path) {
    report.open(*s.report_path);
    if (!report) throw IoError("cannot write " + s.report_path->string());
  }
  ServerOptions opts{s.listen, s.mode, o.max_sessions};
  MonitorServer server(b.oracle, std::move(mapping), opts, [&](const SessionSummary& sum) {
    std::lock_guard lock(out_mu);
    any_failed = any_failed || !sum.passed;
    out << render_summary(sum) << std::endl;
    if (report) report << render_summary(sum) << std::endl;
  });
  server.start();
  {
    std::lock_guard lock(out_mu);
    out << "listening on " << (s.listen.protocol == Protocol::Tcp ? "tcp" : "websocket") << "://"
        << s.listen.host << ":" << server.port() << std::endl;
  }
  server.run();
  return any_failed ? kExitFail : kExitPass;
}

int cmd_synth(const Options& o, std::ostream& out, std::ostream&) {
  Settings s = resolve_settings(o);
  Loaded l = load(s);
  auto t0 = clock::now();
  Lts lts = synthesize_lts(l.spec, l.entry, s.limits);
  double secs = std::chrono::duration<double>(clock::now() - t0).count();
  out << "states " << lts.num_states() << "\n";
  out << "transitions " << lts.num_transitions() << "\n";
  out << "alphabet " << lts.alphabet().size() << "\n";
  out << "synthesis_s " << secs << "\n";
  if (!o.dump.empty()) write_file(o.dump, dump_lts(lts, o.names));
  return kExitPass;
}

int cmd_detcheck(const Options& o, std::ostream& out, std::ostream& err) {
  Settings s = resolve_settings(o);
  Loaded l = load(s);
  OracleBuild b = build_oracle(l.spec, l.entry, s.observable, s.limits);
  if (!b.oracle) return gate_failure(b, err);
  out << "deterministic: " << b.oracle->num_states() << " oracle states\n";
  return kExitPass;
}

std::vector<std::size_t> parse_sizes(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ConfigError(what, "expected a comma-separated list of positive integers");
    }
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CSP runtime-verification monitor", "cspmon"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", o.config, "YAML configuration file");
    sub->add_option("--spec", o.spec, "CSP specification file");
    sub->add_option("--entry", o.entry, "entry process, e.g. MAIN or P(1, {0..2})");
    sub->add_option("--observable", o.observable, "observable events (chan.* allowed)");
    sub->add_option("--max-states", o.max_states, "synthesis state limit");
    sub->add_option("--max-transitions", o.max_transitions, "synthesis transition limit");
  };
  auto* check = app.add_subcommand("check", "check a trace file offline");
  common(check);
  check->add_option("--trace", o.trace, "trace file, one event per line");
  check->add_option("--mode", o.mode, "strict or permissive");
  check->add_option("--mapping", o.mapping, "JSON event-name mapping");
  check->add_option("--report", o.report, "write the report to this file");
  check->add_flag("--csv", o.csv, "also print the CSV report row");

  auto* listen = app.add_subcommand("listen", "monitor events arriving over a socket");
  common(listen);
  listen->add_option("--mode", o.mode, "strict or permissive");
  listen->add_option("--mapping", o.mapping, "JSON event-name mapping");
  listen->add_option("--protocol", o.protocol, "tcp or websocket");
  listen->add_option("--host", o.host, "address to bind");
  listen->add_option("--port", o.port, "port to bind (0 picks one)");
  listen->add_option("--max-sessions", o.max_sessions, "exit after this many sessions");
  listen->add_option("--report", o.report, "append session summaries to this file");

  auto* synth = app.add_subcommand("synth", "synthesize the LTS and print its size");
  common(synth);
  synth->add_option("--dump", o.dump, "write the LTS text dump to this file");
  synth->add_flag("--names", o.names, "include state names in the dump");

  auto* det = app.add_subcommand("detcheck", "run the determinism gate only");
  common(det);

  auto* bench = app.add_subcommand("bench", "worst-case synthesis and checking benchmark");
  std::string sizes = "100,200,500,1000,2000", lengths = "1000,10000,100000", output;
  std::size_t reps = 10;
  std::uint64_t seed = 1;
  bench->add_option("--sizes", sizes, "model sizes N");
  bench->add_option("--lengths", lengths, "trace lengths L");
  bench->add_option("--reps", reps, "repetitions");
  bench->add_option("--seed", seed, "random seed");
  bench->add_option("-o,--output", output, "CSV output file (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(o, out, err);
    if (listen->parsed()) return cmd_listen(o, out, err);
    if (synth->parsed()) return cmd_synth(o, out, err);
    if (det->parsed()) return cmd_detcheck(o, out, err);
    BenchPlan plan;
    plan.model_sizes = parse_sizes(sizes, "sizes");
    plan.trace_lengths = parse_sizes(lengths, "lengths");
    plan.repetitions = reps;
    plan.seed = seed;
    if (!output.empty()) plan.output = output;
    auto rows = run_bench(plan, &err);
    if (output.empty()) write_bench_csv(out, rows);
    return kExitPass;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const LexError& e) {
    err << "spec error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "spec error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResolveError& e) {
    err << "spec error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MappingError& e) {
    err << "mapping error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const LimitExceeded& e) {
    err << "limit exceeded: " << e.what() << "\n";
    return kExitLimitOrIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitLimitOrIo;
  }
}

}  // namespace cspmon
