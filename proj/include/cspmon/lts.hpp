#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cspmon/ast.hpp"
#include "cspmon/value.hpp"

namespace cspmon {

using EventId = std::uint32_t;
using StateId = std::uint32_t;

/// Transition label: a visible event, the internal Tau, or the Tick that marks
/// successful termination.
class Label {
 public:
  static constexpr Label tau() { return Label(kTau); }
  static constexpr Label tick() { return Label(kTick); }
  static constexpr Label event(EventId id) { return Label(static_cast<std::int32_t>(id)); }

  constexpr bool is_tau() const { return raw_ == kTau; }
  constexpr bool is_tick() const { return raw_ == kTick; }
  constexpr bool is_event() const { return raw_ >= 0; }
  constexpr EventId event_id() const { return static_cast<EventId>(raw_); }
  constexpr std::int32_t raw() const { return raw_; }

  friend constexpr auto operator<=>(Label, Label) = default;

 private:
  static constexpr std::int32_t kTau = -2;
  static constexpr std::int32_t kTick = -1;

  constexpr explicit Label(std::int32_t raw) : raw_(raw) {}
  std::int32_t raw_;
};

struct Transition {
  StateId source = 0;
  Label label = Label::tau();
  StateId target = 0;
};

struct Edge {
  Label label = Label::tau();
  StateId target = 0;
};

/// Every instantiation of every declared channel, indexed densely. Ids are
/// assigned channel by channel in declaration order, and within a channel in
/// lexicographic order of the (sorted) parameter domains.
class EventTable {
 public:
  /// Throws DomainError when a channel has an empty parameter domain.
  static EventTable from_spec(const Spec& spec);

  std::size_t size() const { return events_.size(); }
  const std::vector<Event>& events() const { return events_; }
  const Event& event(EventId id) const { return events_[id]; }
  const std::string& text(EventId id) const { return texts_[id]; }

  std::optional<EventId> find(std::string_view text) const;
  std::optional<EventId> find(const Event& ev) const { return find(ev.to_string()); }

  /// Id of the instantiation of `channel` whose parameter at position i is
  /// the value_index[i]-th element of that parameter's domain.
  EventId id_of(std::uint32_t channel, std::span<const std::uint32_t> value_index) const;

  std::size_t channel_count() const { return channel_base_.size(); }

 private:
  std::vector<Event> events_;
  std::vector<std::string> texts_;
  std::unordered_map<std::string, EventId> by_text_;
  std::vector<EventId> channel_base_;
  std::vector<std::vector<std::uint32_t>> strides_;
};

/// Cartesian expansion of every channel over its declared domains.
std::vector<Event> enumerate_alphabet(const Spec& spec);

/// An explicit labelled transition system. Immutable once built; safe to
/// share across threads.
class Lts {
 public:
  Lts(std::shared_ptr<const EventTable> events, std::size_t num_states, StateId initial,
      std::vector<Transition> transitions, std::vector<bool> alphabet,
      std::vector<std::string> state_names);

  StateId initial() const { return initial_; }
  std::size_t num_states() const { return offsets_.size() - 1; }
  std::size_t num_transitions() const { return edges_.size(); }
  /// Transitions labelled with a visible event.
  std::size_t num_event_transitions() const;

  /// Outgoing edges of `s`, sorted by (label, target).
  std::span<const Edge> out(StateId s) const {
    return {edges_.data() + offsets_[s], offsets_[s + 1] - offsets_[s]};
  }
  std::vector<Transition> transitions() const;

  const EventTable& event_table() const { return *events_; }
  std::shared_ptr<const EventTable> shared_event_table() const { return events_; }

  bool in_alphabet(EventId id) const { return id < alphabet_.size() && alphabet_[id]; }
  const std::vector<bool>& alphabet_mask() const { return alphabet_; }
  std::vector<EventId> alphabet() const;

  /// Events labelling visible transitions leaving `s`. Throws UnknownState.
  std::vector<EventId> events_of(StateId s) const;
  /// First target of `s` on `label`, if any.
  std::optional<StateId> successor(StateId s, Label label) const;
  bool can_tick(StateId s) const;

  bool has_tau() const;
  /// Tau-free and no state has two outgoing edges with the same label.
  bool is_deterministic() const;

  const std::string& state_name(StateId s) const { return names_[s]; }

  std::string label_text(Label label) const;
  std::string event_text(EventId id) const { return events_->text(id); }

 private:
  std::shared_ptr<const EventTable> events_;
  StateId initial_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Edge> edges_;
  std::vector<bool> alphabet_;
  std::vector<std::string> names_;
};

struct SynthesisLimits {
  std::size_t max_states = 1'000'000;
  std::size_t max_transitions = 10'000'000;
};

/// Builds the LTS of `entry` by breadth-first expansion of the operational
/// semantics. Throws LimitExceeded, EvalError or DomainError.
Lts synthesize_lts(const Spec& spec, const EntryPoint& entry, const SynthesisLimits& limits = {});

/// Relabels transitions on `hidden` events as Tau and removes them from the
/// alphabet. Throws AlphabetError if an event is not in the alphabet.
Lts hide(const Lts& lts, std::span<const EventId> hidden);
Lts hide(const Lts& lts, std::span<const Event> hidden);

/// Tau-closure subset construction. Result states are the sets of source
/// states reachable through Tau, omitting members whose only transitions are
/// Tau (they contribute nothing observable). Tick is determinized like a
/// visible label.
Lts determinize(const Lts& lts, const SynthesisLimits& limits = {});

struct DeterminismWitness {
  std::vector<EventId> trace;
  EventId ambiguous = 0;
};

struct DeterminismReport {
  bool deterministic = true;
  std::optional<DeterminismWitness> witness;
};

/// A process is reported non-deterministic when, after some visible trace,
/// one Tau-stable state it may be in refuses an event that another possible
/// state offers. The witness trace is a shortest such trace.
DeterminismReport check_determinism(const Lts& lts, const SynthesisLimits& limits = {});

/// Text dump: a header with the initial state, state count and alphabet, then
/// one `<src> --<label>--> <dst>` line per transition.
std::string dump_lts(const Lts& lts, bool with_state_names = false);

}  // namespace cspmon
