#include "cspmon/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "cspmon/error.hpp"
#include "cspmon/resolve.hpp"

namespace cspmon {

std::vector<EventId> expand_observable(const EventTable& table,
                                       const std::vector<std::string>& observable) {
  std::vector<bool> keep(table.size(), false);
  for (const std::string& entry : observable) {
    bool matched = false;
    if (entry.size() > 2 && entry.ends_with(".*")) {
      std::string_view chan(entry.data(), entry.size() - 2);
      for (EventId id = 0; id < table.size(); ++id) {
        if (table.event(id).channel == chan) {
          keep[id] = true;
          matched = true;
        }
      }
    } else if (auto id = table.find(entry)) {
      keep[*id] = true;
      matched = true;
    }
    if (!matched) throw ConfigError("observable_events", "'" + entry + "' names no event");
  }
  std::vector<EventId> ids;
  for (EventId id = 0; id < table.size(); ++id) {
    if (keep[id]) ids.push_back(id);
  }
  return ids;
}

OracleBuild build_oracle(const Spec& spec, const EntryPoint& entry,
                         const std::optional<std::vector<std::string>>& observable,
                         const SynthesisLimits& limits) {
  auto t0 = std::chrono::steady_clock::now();
  OracleBuild out;
  Lts model = synthesize_lts(spec, entry, limits);
  if (observable) {
    std::vector<EventId> visible = expand_observable(model.event_table(), *observable);
    std::vector<bool> is_visible(model.event_table().size(), false);
    for (EventId id : visible) is_visible[id] = true;
    std::vector<EventId> hidden;
    for (EventId id : model.alphabet()) {
      if (!is_visible[id]) hidden.push_back(id);
    }
    if (!hidden.empty()) model = hide(model, hidden);
  }
  out.model = std::make_shared<const Lts>(std::move(model));
  out.gate = check_determinism(*out.model, limits);
  if (out.gate.deterministic) {
    out.oracle = out.model->has_tau() || !out.model->is_deterministic()
                     ? std::make_shared<const Lts>(determinize(*out.model, limits))
                     : out.model;
  }
  out.synth_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

Spec load_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read spec file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_spec_text(ss.str());
}

std::string render_witness(const Lts& model, const DeterminismWitness& w) {
  std::string out = "non-deterministic after trace <";
  for (std::size_t i = 0; i < w.trace.size(); ++i) {
    if (i) out += ", ";
    out += model.event_text(w.trace[i]);
  }
  out += ">: event " + model.event_text(w.ambiguous) + " may be both accepted and refused";
  return out;
}

std::string report_csv_header() {
  return "total_s,synth_s,check_s,mean_event_s,events_checked,total_events,verdict";
}

namespace {

std::string seconds(double s) {
  std::ostringstream os;
  os.precision(9);
  os << std::fixed << s;
  return os.str();
}

}  // namespace

std::string report_csv_row(const RunReport& r) {
  return seconds(r.total_s) + "," + seconds(r.synth_s) + "," + seconds(r.check_s) + "," +
         seconds(r.mean_event_s) + "," + std::to_string(r.events_checked) + "," +
         std::to_string(r.total_events) + "," + r.verdict;
}

std::string report_text(const RunReport& r) {
  std::string out;
  out += "verdict: " + r.verdict + "\n";
  out += "events checked: " + std::to_string(r.events_checked) + "/" +
         std::to_string(r.total_events) + "\n";
  out += "total time: " + seconds(r.total_s) + " s\n";
  out += "synthesis time: " + seconds(r.synth_s) + " s\n";
  out += "checking time: " + seconds(r.check_s) + " s\n";
  out += "mean time/event: " + seconds(r.mean_event_s) + " s\n";
  return out;
}

}  // namespace cspmon
