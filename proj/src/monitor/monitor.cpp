#include "cspmon/monitor.hpp"

#include "cspmon/error.hpp"

namespace cspmon {

const char* mode_name(Mode m) { return m == Mode::Strict ? "strict" : "permissive"; }

std::optional<Mode> parse_mode(std::string_view text) {
  if (text == "strict") return Mode::Strict;
  if (text == "permissive") return Mode::Permissive;
  return std::nullopt;
}

const char* reason_name(FailReason r) {
  return r == FailReason::NotInAlphabet ? "not in alphabet" : "not available here";
}

TraceEvent resolve_event(const Lts& oracle, std::string text) {
  auto id = oracle.event_table().find(text);
  return {std::move(text), id};
}

namespace {

bool in_alphabet(const Lts& oracle, const TraceEvent& e) {
  return e.event && oracle.in_alphabet(*e.event);
}

}  // namespace

std::optional<StateId> next_strict(const Lts& oracle, StateId s, const TraceEvent& e) {
  if (!in_alphabet(oracle, e)) return std::nullopt;
  return oracle.successor(s, Label::event(*e.event));
}

std::optional<StateId> next_permissive(const Lts& oracle, StateId s, const TraceEvent& e) {
  if (!in_alphabet(oracle, e)) return s;
  return oracle.successor(s, Label::event(*e.event));
}

std::optional<StateId> next_state(const Lts& oracle, Mode mode, StateId s, const TraceEvent& e) {
  return mode == Mode::Strict ? next_strict(oracle, s, e) : next_permissive(oracle, s, e);
}

Session::Session(std::shared_ptr<const Lts> oracle, Mode mode)
    : oracle_(std::move(oracle)), mode_(mode) {
  if (!oracle_) throw NondeterministicOracle("no oracle");
  if (!oracle_->is_deterministic()) {
    throw NondeterministicOracle("oracle has Tau transitions or ambiguous labels");
  }
  current_ = oracle_->initial();
}

Session new_session(std::shared_ptr<const Lts> oracle, Mode mode) {
  return Session(std::move(oracle), mode);
}

Verdict Session::verdict() const {
  if (fail_) return *fail_;
  return PassSoFar{*current_};
}

Verdict Session::step(const TraceEvent& e) {
  trace_.push_back(e.text);
  const bool known = in_alphabet(*oracle_, e);
  stuttered_.push_back(!known && mode_ == Mode::Permissive);
  if (fail_) return *fail_;
  ++checked_;
  const StateId s = *current_;
  auto next = next_state(*oracle_, mode_, s, e);
  if (next) {
    current_ = next;
    return PassSoFar{*next};
  }
  Fail f;
  f.failing_event = e.text;
  f.counterexample.failing_trace = trace_;
  f.counterexample.stuttered = stuttered_;
  f.counterexample.acceptable = oracle_->events_of(s);
  f.counterexample.failure_state = s;
  f.counterexample.reason = known ? FailReason::NotAvailableHere : FailReason::NotInAlphabet;
  current_.reset();
  fail_ = std::move(f);
  return *fail_;
}

CheckResult check_trace(std::shared_ptr<const Lts> oracle, Mode mode,
                        std::span<const TraceEvent> trace) {
  std::size_t i = 0;
  CheckResult r = check_stream(std::move(oracle), mode, [&]() -> const TraceEvent* {
    return i < trace.size() ? &trace[i++] : nullptr;
  });
  r.stats.total_events = trace.size();
  return r;
}

std::string render_counterexample(const Lts& oracle, const Fail& fail) {
  const Counterexample& cx = fail.counterexample;
  std::string out = "FAIL at event " + std::to_string(cx.failing_trace.size()) + ": " +
                    fail.failing_event + " (" + reason_name(cx.reason) + ")\n";
  out += "failing trace:";
  for (std::size_t i = 0; i < cx.failing_trace.size(); ++i) {
    out += "\n  " + cx.failing_trace[i];
    if (cx.stuttered[i]) out += "  (ignored)";
  }
  out += "\nacceptable events: {";
  for (std::size_t i = 0; i < cx.acceptable.size(); ++i) {
    if (i) out += ", ";
    out += oracle.event_text(cx.acceptable[i]);
  }
  out += "}\n";
  return out;
}

}  // namespace cspmon
