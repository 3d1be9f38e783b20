#include "cspmon/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "cspmon/error.hpp"
#include "cspmon/monitor.hpp"
#include "cspmon/parser.hpp"
#include "cspmon/resolve.hpp"

namespace cspmon {

std::string generate_worst_case_model(std::size_t n) {
  std::string body;
  for (std::size_t j = 0; j < n; ++j) {
    if (j) body += " [] ";
    body += "e_" + std::to_string(j) + " -> S_" + std::to_string(j);
  }
  std::string out = "channel ";
  for (std::size_t j = 0; j < n; ++j) {
    if (j) out += ", ";
    out += "e_" + std::to_string(j);
  }
  out += "\n";
  out.reserve(out.size() + n * (body.size() + 16));
  for (std::size_t i = 0; i < n; ++i) {
    out += "S_" + std::to_string(i) + " = ";
    out += body;
    out += '\n';
  }
  return out;
}

std::string worst_case_entry() { return "S_0"; }

std::vector<std::string> generate_trace(std::size_t n, std::size_t length, std::uint64_t seed) {
  if (n == 0) throw Error("generate_trace: alphabet size must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::string> out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) out.push_back("e_" + std::to_string(pick(rng)));
  return out;
}

std::vector<BenchRow> run_bench(const BenchPlan& plan, std::ostream* progress) {
  if (plan.model_sizes.empty()) throw Error("bench: no model sizes");
  if (plan.repetitions == 0) throw Error("bench: repetitions must be at least 1");
  for (auto n : plan.model_sizes) {
    if (n == 0) throw Error("bench: model sizes must be positive");
  }
  for (auto l : plan.trace_lengths) {
    if (l == 0) throw Error("bench: trace lengths must be positive");
  }
  using clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  for (std::size_t n : plan.model_sizes) {
    Spec spec = load_spec_text(generate_worst_case_model(n));
    EntryPoint entry = resolve_entry(spec, worst_case_entry());
    SynthesisLimits limits;
    limits.max_transitions = std::max(limits.max_transitions, n * n + 1);
    std::shared_ptr<const Lts> lts;
    double total = 0;
    for (std::size_t rep = 0; rep < plan.repetitions; ++rep) {
      lts.reset();
      auto t0 = clock::now();
      Lts built = synthesize_lts(spec, entry, limits);
      total += std::chrono::duration<double>(clock::now() - t0).count();
      lts = std::make_shared<const Lts>(std::move(built));
    }
    BenchRow synth;
    synth.n_states = lts->num_states();
    synth.n_transitions = lts->num_transitions();
    synth.seed = plan.seed;
    synth.synth_s = total / static_cast<double>(plan.repetitions);
    rows.push_back(synth);
    if (progress) {
      *progress << "n=" << n << " states=" << synth.n_states
                << " transitions=" << synth.n_transitions << " synth_s=" << synth.synth_s << "\n";
    }
    for (std::size_t len : plan.trace_lengths) {
      for (std::size_t rep = 1; rep <= plan.repetitions; ++rep) {
        const std::uint64_t seed = plan.seed + rep;
        std::vector<TraceEvent> trace;
        trace.reserve(len);
        for (auto& text : generate_trace(n, len, seed)) trace.push_back(resolve_event(*lts, text));
        CheckResult r = check_trace(lts, Mode::Strict, trace);
        if (!is_pass(r.verdict)) throw Error("bench: generated trace failed");
        BenchRow row = synth;
        row.trace_len = len;
        row.rep = rep;
        row.seed = seed;
        row.synth_s = 0;
        row.check_s = r.stats.check_seconds;
        row.mean_event_s = r.stats.mean_event_seconds;
        rows.push_back(row);
      }
    }
  }
  if (plan.output) {
    std::ofstream out(*plan.output);
    if (!out) throw IoError("cannot write " + plan.output->string());
    write_bench_csv(out, rows);
    if (!out) throw IoError("error writing " + plan.output->string());
  }
  return rows;
}

std::string bench_csv_header() {
  return "n_states,n_transitions,trace_len,rep,seed,synth_s,check_s,mean_event_s";
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << bench_csv_header() << '\n';
  for (const auto& r : rows) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.9f,%.9f,%.12f", r.synth_s, r.check_s, r.mean_event_s);
    out << r.n_states << ',' << r.n_transitions << ',' << r.trace_len << ',' << r.rep << ','
        << r.seed << ',' << buf << '\n';
  }
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("fit_linear: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw Error("fit_linear: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += e * e;
  }
  fit.r2 = syy == 0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

MutatedTrace inject_fault(const std::vector<std::string>& trace, const FaultKind& kind) {
  MutatedTrace out{trace, {}, 0};
  if (const auto* rad = std::get_if<RadiationViolation>(&kind)) {
    for (std::size_t i = rad->from; i < trace.size(); ++i) {
      if (trace[i] == "radiation_level.Green") {
        out.trace[i] = "radiation_level.Red";
        out.position = i;
        out.description = "radiation_level.Green at " + std::to_string(i) + " replaced by Red";
        return out;
      }
    }
    throw PositionError("no radiation_level.Green at or after " + std::to_string(rad->from));
  }
  if (const auto* sw = std::get_if<SwapAdjacent>(&kind)) {
    if (sw->position + 1 >= trace.size()) {
      throw PositionError("cannot swap at " + std::to_string(sw->position) + " in a trace of " +
                          std::to_string(trace.size()) + " events");
    }
    std::swap(out.trace[sw->position], out.trace[sw->position + 1]);
    out.position = sw->position;
    out.description = "swapped " + trace[sw->position] + " and " + trace[sw->position + 1] +
                      " at " + std::to_string(sw->position);
    return out;
  }
  const auto& pm = std::get<ParamMismatch>(kind);
  if (pm.position >= trace.size()) {
    throw PositionError("position " + std::to_string(pm.position) + " is past the end");
  }
  auto ev = parse_event_text(trace[pm.position]);
  if (!ev || ev->values.empty()) {
    throw PositionError("event at " + std::to_string(pm.position) + " carries no parameter");
  }
  ev->values.back() = pm.substitute;
  out.trace[pm.position] = ev->to_string();
  out.position = pm.position;
  out.description = trace[pm.position] + " at " + std::to_string(pm.position) + " replaced by " +
                    out.trace[pm.position];
  return out;
}

std::vector<std::string> build_rover_trace() {
  static const char* const kNoise[] = {"/odom", "/cmd_vel", "/scan", "/amcl_pose", "/tf"};
  std::size_t tick = 0;
  auto noise = [&](std::vector<std::string>& out, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) out.emplace_back(kNoise[tick++ % 5]);
  };
  std::vector<std::string> out{"mission_start"};
  for (int wp = 0; wp < 5; ++wp) {
    noise(out, 40);
    out.push_back("radiation_level.Green");
    out.push_back("inspect." + std::to_string(wp));
    out.push_back("move." + std::to_string(wp));
  }
  noise(out, 25);
  out.push_back("radiation_level.Green");
  out.push_back("mission_complete");
  return out;
}

std::vector<RoverScenario> rover_scenarios() {
  const auto base = build_rover_trace();
  std::vector<RoverScenario> out;
  out.push_back({"pass", base, "unmodified run"});
  auto red = inject_fault(base, RadiationViolation{0});
  out.push_back({"red_radiation", red.trace, red.description});
  // inspect.1 / move.1 of the second round.
  auto swap = inject_fault(base, SwapAdjacent{85});
  out.push_back({"swap_inspect_move", swap.trace, swap.description});
  // move.3 of the fourth round becomes move.5.
  auto mismatch = inject_fault(base, ParamMismatch{172, Value::integer(5)});
  out.push_back({"param_mismatch", mismatch.trace, mismatch.description});
  return out;
}

}  // namespace cspmon
