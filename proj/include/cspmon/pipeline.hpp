#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cspmon/ast.hpp"
#include "cspmon/lts.hpp"
#include "cspmon/monitor.hpp"

namespace cspmon {

/// Result of turning a spec into a monitorable oracle. When the determinism
/// gate rejects the (hidden) model, `oracle` is null and `gate` carries the
/// witness.
struct OracleBuild {
  std::shared_ptr<const Lts> model;  // synthesized, after hiding
  std::shared_ptr<const Lts> oracle;  // determinized, null if rejected
  DeterminismReport gate;
  double synth_seconds = 0;
};

/// Expands observable entries (`chan.*` or exact event text) to event ids.
/// Throws ConfigError for names that match nothing.
std::vector<EventId> expand_observable(const EventTable& table,
                                       const std::vector<std::string>& observable);

/// synthesize -> hide the complement of `observable` -> gate -> determinize.
OracleBuild build_oracle(const Spec& spec, const EntryPoint& entry,
                         const std::optional<std::vector<std::string>>& observable,
                         const SynthesisLimits& limits);

Spec load_spec_file(const std::filesystem::path& path);

std::string render_witness(const Lts& model, const DeterminismWitness& w);

/// Table-style run summary.
struct RunReport {
  double total_s = 0;
  double synth_s = 0;
  double check_s = 0;
  double mean_event_s = 0;
  std::size_t events_checked = 0;
  std::size_t total_events = 0;
  std::string verdict;  // "pass" or "fail"
};

std::string report_csv_header();
std::string report_csv_row(const RunReport& r);
std::string report_text(const RunReport& r);

}  // namespace cspmon
