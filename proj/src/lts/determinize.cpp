#include <algorithm>
#include <deque>
#include <unordered_map>

#include "cspmon/error.hpp"
#include "cspmon/lts.hpp"

namespace cspmon {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<StateId>& v) const {
    std::size_t h = v.size();
    for (StateId s : v) h = (h ^ s) * 0x100000001b3ULL;
    return h;
  }
};

bool only_tau(std::span<const Edge> edges) {
  return !edges.empty() &&
         std::all_of(edges.begin(), edges.end(), [](const Edge& e) { return e.label.is_tau(); });
}

bool stable(std::span<const Edge> edges) {
  return edges.empty() || !edges.front().label.is_tau();  // tau sorts first
}

// Interns tau-closed sets of source states as macro-states.
class SubsetSpace {
 public:
  SubsetSpace(const Lts& lts, const SynthesisLimits& limits)
      : lts_(lts), limits_(limits), mark_(lts.num_states(), 0) {}

  std::pair<StateId, bool> intern(std::vector<StateId> seeds) {
    std::vector<StateId> key = closure(std::move(seeds));
    auto [it, inserted] = ids_.try_emplace(key, static_cast<StateId>(members_.size()));
    if (inserted) {
      if (members_.size() >= limits_.max_states) throw LimitExceeded("state", members_.size() + 1);
      members_.push_back(std::move(key));
    }
    return {it->second, inserted};
  }

  const std::vector<StateId>& members(StateId m) const { return members_[m]; }
  std::size_t size() const { return members_.size(); }

  // Visible (non-tau) edges of all members, grouped by label.
  std::vector<std::pair<Label, std::vector<StateId>>> moves(StateId m) const {
    std::vector<Edge> all;
    for (StateId s : members_[m]) {
      for (const Edge& e : lts_.out(s)) {
        if (!e.label.is_tau()) all.push_back(e);
      }
    }
    std::sort(all.begin(), all.end(), [](const Edge& a, const Edge& b) {
      return a.label != b.label ? a.label < b.label : a.target < b.target;
    });
    std::vector<std::pair<Label, std::vector<StateId>>> grouped;
    for (const Edge& e : all) {
      if (grouped.empty() || grouped.back().first != e.label) grouped.push_back({e.label, {}});
      auto& targets = grouped.back().second;
      if (targets.empty() || targets.back() != e.target) targets.push_back(e.target);
    }
    return grouped;
  }

 private:
  std::vector<StateId> closure(std::vector<StateId> stack) {
    if (++stamp_ == 0) {
      std::fill(mark_.begin(), mark_.end(), 0);
      stamp_ = 1;
    }
    std::vector<StateId> kept;
    for (StateId s : stack) mark_[s] = stamp_;
    while (!stack.empty()) {
      StateId s = stack.back();
      stack.pop_back();
      auto edges = lts_.out(s);
      if (!only_tau(edges)) kept.push_back(s);
      for (const Edge& e : edges) {
        if (!e.label.is_tau()) break;
        if (mark_[e.target] != stamp_) {
          mark_[e.target] = stamp_;
          stack.push_back(e.target);
        }
      }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
  }

  const Lts& lts_;
  SynthesisLimits limits_;
  std::vector<std::uint32_t> mark_;
  std::uint32_t stamp_ = 0;
  std::vector<std::vector<StateId>> members_;
  std::unordered_map<std::vector<StateId>, StateId, VecHash> ids_;
};

}  // namespace

Lts hide(const Lts& lts, std::span<const EventId> hidden) {
  std::vector<bool> mask = lts.alphabet_mask();
  for (EventId e : hidden) {
    if (!lts.in_alphabet(e)) {
      std::string shown = e < lts.event_table().size() ? lts.event_text(e) : std::to_string(e);
      throw AlphabetError("event '" + shown + "' is not in the alphabet");
    }
    mask[e] = false;
  }
  std::vector<Transition> ts = lts.transitions();
  for (auto& t : ts) {
    if (t.label.is_event() && !mask[t.label.event_id()]) t.label = Label::tau();
  }
  std::vector<std::string> names;
  names.reserve(lts.num_states());
  for (StateId s = 0; s < lts.num_states(); ++s) names.push_back(lts.state_name(s));
  return Lts(lts.shared_event_table(), lts.num_states(), lts.initial(), std::move(ts),
             std::move(mask), std::move(names));
}

Lts hide(const Lts& lts, std::span<const Event> hidden) {
  std::vector<EventId> ids;
  for (const Event& ev : hidden) {
    auto id = lts.event_table().find(ev);
    if (!id) throw AlphabetError("event '" + ev.to_string() + "' is not in the alphabet");
    ids.push_back(*id);
  }
  return hide(lts, ids);
}

Lts determinize(const Lts& lts, const SynthesisLimits& limits) {
  SubsetSpace space(lts, limits);
  std::vector<Transition> ts;
  StateId initial = space.intern({lts.initial()}).first;
  for (StateId m = 0; m < space.size(); ++m) {
    for (auto& [label, targets] : space.moves(m)) {
      StateId dst = space.intern(std::move(targets)).first;
      if (ts.size() >= limits.max_transitions) throw LimitExceeded("transition", ts.size() + 1);
      ts.push_back({m, label, dst});
    }
  }
  std::vector<std::string> names;
  names.reserve(space.size());
  for (StateId m = 0; m < space.size(); ++m) {
    const auto& mem = space.members(m);
    if (mem.size() == 1) {
      names.push_back(lts.state_name(mem.front()));
      continue;
    }
    std::string n = "{";
    for (std::size_t i = 0; i < mem.size(); ++i) {
      if (i) n += " | ";
      n += mem[i] < lts.num_states() ? lts.state_name(mem[i]) : "";
    }
    names.push_back(n + "}");
  }
  return Lts(lts.shared_event_table(), space.size(), initial, std::move(ts), lts.alphabet_mask(),
             std::move(names));
}

DeterminismReport check_determinism(const Lts& lts, const SynthesisLimits& limits) {
  SubsetSpace space(lts, limits);
  struct Parent {
    StateId from;
    EventId via;
  };
  std::vector<Parent> parent;
  StateId root = space.intern({lts.initial()}).first;
  parent.push_back({root, 0});
  std::deque<StateId> queue{root};
  while (!queue.empty()) {
    StateId m = queue.front();
    queue.pop_front();
    auto moves = space.moves(m);
    std::vector<EventId> offered;
    for (const auto& [label, targets] : moves) {
      if (label.is_event()) offered.push_back(label.event_id());
    }
    for (StateId s : space.members(m)) {
      auto edges = lts.out(s);
      if (!stable(edges)) continue;
      std::vector<EventId> own = lts.events_of(s);
      if (own.size() == offered.size()) continue;
      EventId missing = offered.front();
      for (std::size_t i = 0; i < offered.size(); ++i) {
        if (i >= own.size() || own[i] != offered[i]) {
          missing = offered[i];
          break;
        }
      }
      DeterminismWitness w;
      w.ambiguous = missing;
      for (StateId cur = m; cur != root; cur = parent[cur].from) w.trace.push_back(parent[cur].via);
      std::reverse(w.trace.begin(), w.trace.end());
      return {false, std::move(w)};
    }
    for (auto& [label, targets] : moves) {
      if (!label.is_event()) continue;
      auto [next, fresh] = space.intern(std::move(targets));
      if (fresh) {
        parent.push_back({m, label.event_id()});
        queue.push_back(next);
      }
    }
  }
  return {true, std::nullopt};
}

}  // namespace cspmon
