#include "cspmon/lts.hpp"

#include <algorithm>

#include "cspmon/error.hpp"

namespace cspmon {

EventTable EventTable::from_spec(const Spec& spec) {
  EventTable table;
  for (std::uint32_t c = 0; c < spec.channels.size(); ++c) {
    const ChannelDecl& ch = spec.channels[c];
    const std::string& name = spec.name(ch.name);
    std::size_t count = 1;
    for (const auto& dom : ch.domains) {
      if (dom.empty()) throw DomainError("channel '" + name + "' has an empty parameter domain");
      count *= dom.size();
    }
    if (ch.domains.size() != ch.params.size()) {
      throw DomainError("channel '" + name + "' is not resolved");
    }
    std::vector<std::uint32_t> strides(ch.domains.size(), 1);
    for (std::size_t i = ch.domains.size(); i-- > 1;) {
      strides[i - 1] = strides[i] * static_cast<std::uint32_t>(ch.domains[i].size());
    }
    table.channel_base_.push_back(static_cast<EventId>(table.events_.size()));
    table.strides_.push_back(strides);
    std::vector<std::uint32_t> digits(ch.domains.size(), 0);
    for (std::size_t k = 0; k < count; ++k) {
      Event ev{name, {}};
      for (std::size_t i = 0; i < digits.size(); ++i) ev.values.push_back(ch.domains[i][digits[i]]);
      // Advance the mixed-radix counter, last position fastest.
      for (std::size_t i = digits.size(); i-- > 0;) {
        if (++digits[i] < ch.domains[i].size()) break;
        digits[i] = 0;
      }
      auto id = static_cast<EventId>(table.events_.size());
      table.texts_.push_back(ev.to_string());
      table.by_text_.emplace(table.texts_.back(), id);
      table.events_.push_back(std::move(ev));
    }
  }
  return table;
}

std::optional<EventId> EventTable::find(std::string_view text) const {
  if (auto it = by_text_.find(std::string(text)); it != by_text_.end()) return it->second;
  return std::nullopt;
}

EventId EventTable::id_of(std::uint32_t channel, std::span<const std::uint32_t> value_index) const {
  EventId id = channel_base_[channel];
  const auto& strides = strides_[channel];
  for (std::size_t i = 0; i < value_index.size(); ++i) id += value_index[i] * strides[i];
  return id;
}

std::vector<Event> enumerate_alphabet(const Spec& spec) {
  return EventTable::from_spec(spec).events();
}

Lts::Lts(std::shared_ptr<const EventTable> events, std::size_t num_states, StateId initial,
         std::vector<Transition> transitions, std::vector<bool> alphabet,
         std::vector<std::string> state_names)
    : events_(std::move(events)),
      initial_(initial),
      alphabet_(std::move(alphabet)),
      names_(std::move(state_names)) {
  names_.resize(num_states);
  offsets_.assign(num_states + 1, 0);
  for (const auto& t : transitions) ++offsets_[t.source + 1];
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
  edges_.resize(transitions.size());
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& t : transitions) edges_[fill[t.source]++] = Edge{t.label, t.target};
  for (std::size_t s = 0; s < num_states; ++s) {
    auto first = edges_.begin() + offsets_[s];
    auto last = edges_.begin() + offsets_[s + 1];
    std::sort(first, last, [](const Edge& a, const Edge& b) {
      return a.label != b.label ? a.label < b.label : a.target < b.target;
    });
  }
}

std::size_t Lts::num_event_transitions() const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.label.is_event(); }));
}

std::vector<Transition> Lts::transitions() const {
  std::vector<Transition> result;
  result.reserve(edges_.size());
  for (StateId s = 0; s < num_states(); ++s) {
    for (const Edge& e : out(s)) result.push_back({s, e.label, e.target});
  }
  return result;
}

std::vector<EventId> Lts::alphabet() const {
  std::vector<EventId> result;
  for (EventId i = 0; i < alphabet_.size(); ++i) {
    if (alphabet_[i]) result.push_back(i);
  }
  return result;
}

std::vector<EventId> Lts::events_of(StateId s) const {
  if (s >= num_states()) throw UnknownState("unknown state " + std::to_string(s));
  std::vector<EventId> result;
  for (const Edge& e : out(s)) {
    if (e.label.is_event() && (result.empty() || result.back() != e.label.event_id())) {
      result.push_back(e.label.event_id());
    }
  }
  return result;
}

std::optional<StateId> Lts::successor(StateId s, Label label) const {
  auto edges = out(s);
  auto it = std::lower_bound(edges.begin(), edges.end(), label,
                             [](const Edge& e, Label l) { return e.label < l; });
  if (it == edges.end() || it->label != label) return std::nullopt;
  return it->target;
}

bool Lts::can_tick(StateId s) const { return successor(s, Label::tick()).has_value(); }

bool Lts::has_tau() const {
  return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.label.is_tau(); });
}

bool Lts::is_deterministic() const {
  for (StateId s = 0; s < num_states(); ++s) {
    auto edges = out(s);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (edges[i].label.is_tau()) return false;
      if (i > 0 && edges[i].label == edges[i - 1].label) return false;
    }
  }
  return true;
}

std::string Lts::label_text(Label label) const {
  if (label.is_tau()) return "tau";
  if (label.is_tick()) return "tick";
  return events_->text(label.event_id());
}

std::string dump_lts(const Lts& lts, bool with_state_names) {
  std::string out = "lts initial " + std::to_string(lts.initial()) + " states " +
                    std::to_string(lts.num_states()) + " transitions " +
                    std::to_string(lts.num_transitions()) + "\nalphabet";
  for (EventId e : lts.alphabet()) out += " " + lts.event_text(e);
  out += '\n';
  if (with_state_names) {
    for (StateId s = 0; s < lts.num_states(); ++s) {
      out += "state " + std::to_string(s) + " " + lts.state_name(s) + '\n';
    }
  }
  for (StateId s = 0; s < lts.num_states(); ++s) {
    for (const Edge& e : lts.out(s)) {
      out += std::to_string(s) + " --" + lts.label_text(e.label) + "--> " +
             std::to_string(e.target) + '\n';
    }
  }
  return out;
}

}  // namespace cspmon
