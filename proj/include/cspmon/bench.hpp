#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "cspmon/value.hpp"

namespace cspmon {

/// Spec text of the complete graph on n states: channels e_0..e_{n-1} and
/// S_i = e_0 -> S_0 [] ... [] e_{n-1} -> S_{n-1}, entry S_0.
std::string generate_worst_case_model(std::size_t n);
std::string worst_case_entry();

/// `length` events drawn uniformly from e_0..e_{n-1}; same seed, same trace.
std::vector<std::string> generate_trace(std::size_t n, std::size_t length, std::uint64_t seed);

struct BenchPlan {
  std::vector<std::size_t> model_sizes;
  std::vector<std::size_t> trace_lengths;
  std::size_t repetitions = 10;
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> output;
};

/// One CSV row. Synthesis rows have trace_len = 0 and rep = 0 and carry the
/// mean synthesis time over all repetitions; check rows carry one repetition.
struct BenchRow {
  std::size_t n_states = 0;
  std::size_t n_transitions = 0;
  std::size_t trace_len = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  double synth_s = 0;
  double check_s = 0;
  double mean_event_s = 0;
};

/// Throws Error for invalid plans, IoError if the output cannot be written.
std::vector<BenchRow> run_bench(const BenchPlan& plan, std::ostream* progress = nullptr);

std::string bench_csv_header();
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

/// Ordinary least squares of y on x.
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

// ---- fault injection ------------------------------------------------------

/// The first radiation_level.Green at index >= from becomes Red.
struct RadiationViolation {
  std::size_t from = 0;
};
/// Events at position and position+1 trade places.
struct SwapAdjacent {
  std::size_t position = 0;
};
/// The event at position keeps its channel but carries `substitute` as its
/// last parameter.
struct ParamMismatch {
  std::size_t position = 0;
  Value substitute;
};

using FaultKind = std::variant<RadiationViolation, SwapAdjacent, ParamMismatch>;

struct MutatedTrace {
  std::vector<std::string> trace;
  std::string description;
  std::size_t position = 0;  // index of the first changed event
};

/// Throws PositionError when the fault does not fit the trace.
MutatedTrace inject_fault(const std::vector<std::string>& trace, const FaultKind& kind);

/// The reconstructed 243-line rover run: mission_start, five
/// radiation/inspect/move rounds over waypoints 0..4 separated by raw
/// middleware messages the model does not know, a final Green reading and
/// mission_complete.
std::vector<std::string> build_rover_trace();

struct RoverScenario {
  std::string name;
  std::vector<std::string> trace;
  std::string description;
};

/// pass, red_radiation, swap_inspect_move, param_mismatch.
std::vector<RoverScenario> rover_scenarios();

}  // namespace cspmon
