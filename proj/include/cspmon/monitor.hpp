#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cspmon/lts.hpp"

namespace cspmon {

enum class Mode : std::uint8_t { Strict, Permissive };

const char* mode_name(Mode m);
std::optional<Mode> parse_mode(std::string_view text);

/// One observed event: the text as received from the system, plus the oracle
/// event it maps to. An absent id means the text named nothing in the alphabet
/// (an unmapped raw name or an event the oracle does not know).
struct TraceEvent {
  std::string text;
  std::optional<EventId> event;

  static TraceEvent unmapped(std::string raw) { return {std::move(raw), std::nullopt}; }
};

/// Resolves canonical event text against the oracle's event table. Events of
/// declared channels that were hidden are still resolved to their id; the
/// monitor checks alphabet membership itself.
TraceEvent resolve_event(const Lts& oracle, std::string text);

/// Next state in strict mode; nullopt is the Error state.
std::optional<StateId> next_strict(const Lts& oracle, StateId s, const TraceEvent& e);
/// Next state in permissive mode: out-of-alphabet events leave `s` unchanged.
std::optional<StateId> next_permissive(const Lts& oracle, StateId s, const TraceEvent& e);
std::optional<StateId> next_state(const Lts& oracle, Mode mode, StateId s, const TraceEvent& e);

enum class FailReason : std::uint8_t { NotInAlphabet, NotAvailableHere };
const char* reason_name(FailReason r);

struct Counterexample {
  std::vector<std::string> failing_trace;  // as received, failing event last
  std::vector<bool> stuttered;             // parallel: ignored by permissive mode
  std::vector<EventId> acceptable;         // events_of the pre-failure state
  StateId failure_state = 0;               // the pre-failure state
  FailReason reason = FailReason::NotAvailableHere;
};

struct PassSoFar {
  StateId current = 0;
};

struct Fail {
  std::string failing_event;
  Counterexample counterexample;
};

using Verdict = std::variant<PassSoFar, Fail>;

inline bool is_pass(const Verdict& v) { return std::holds_alternative<PassSoFar>(v); }

/// Monitoring context over a shared, deterministic oracle. Not thread-safe;
/// any number of sessions may share one oracle.
class Session {
 public:
  /// Throws NondeterministicOracle unless the oracle is Tau-free and
  /// deterministic.
  Session(std::shared_ptr<const Lts> oracle, Mode mode);

  Verdict step(const TraceEvent& e);
  Verdict step(std::string text) { return step(resolve_event(*oracle_, std::move(text))); }

  Mode mode() const { return mode_; }
  const Lts& oracle() const { return *oracle_; }
  /// nullopt once failed.
  std::optional<StateId> current() const { return current_; }
  bool failed() const { return fail_.has_value(); }
  const std::vector<std::string>& trace() const { return trace_; }
  std::size_t steps_checked() const { return checked_; }
  Verdict verdict() const;

 private:
  std::shared_ptr<const Lts> oracle_;
  Mode mode_;
  std::optional<StateId> current_;
  std::vector<std::string> trace_;
  std::vector<bool> stuttered_;
  std::size_t checked_ = 0;
  std::optional<Fail> fail_;
};

Session new_session(std::shared_ptr<const Lts> oracle, Mode mode);

struct CheckStats {
  std::size_t total_events = 0;
  std::size_t events_checked = 0;
  double check_seconds = 0;       // summed next-state time
  double mean_event_seconds = 0;  // check_seconds / events_checked
};

struct CheckResult {
  Verdict verdict;
  CheckStats stats;
};

/// Folds step over `trace`, stopping at the first failure.
CheckResult check_trace(std::shared_ptr<const Lts> oracle, Mode mode,
                        std::span<const TraceEvent> trace);

/// Pulls events from `next` until it returns nullopt or the check fails.
/// total_events counts only the events pulled. Only stepping is timed.
template <typename Source>
CheckResult check_stream(std::shared_ptr<const Lts> oracle, Mode mode, Source&& next) {
  Session session(std::move(oracle), mode);
  CheckStats stats;
  std::chrono::steady_clock::duration spent{};
  while (auto e = next()) {
    ++stats.total_events;
    auto t0 = std::chrono::steady_clock::now();
    Verdict v = session.step(*e);
    spent += std::chrono::steady_clock::now() - t0;
    ++stats.events_checked;
    if (!is_pass(v)) break;
  }
  stats.check_seconds = std::chrono::duration<double>(spent).count();
  if (stats.events_checked) stats.mean_event_seconds = stats.check_seconds / stats.events_checked;
  return {session.verdict(), stats};
}

/// Multi-line human-readable rendering: failing trace (stuttered events
/// marked) and acceptable events.
std::string render_counterexample(const Lts& oracle, const Fail& fail);

}  // namespace cspmon
