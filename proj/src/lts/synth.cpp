#include <algorithm>
#include <set>
#include <unordered_map>

#include "cspmon/error.hpp"
#include "cspmon/lts.hpp"
#include "cspmon/resolve.hpp"

namespace cspmon {

namespace {

// Canonical closed form of a process term, used to memoize states.
//   Terminal: after Tick.   Skip: the SKIP process.
//   Call: process index + argument values.
//   Node: a compound AST node + the values of its free variables.
enum class StateKind : std::uint8_t { Terminal, Skip, Call, Node };

struct StateKey {
  StateKind kind = StateKind::Terminal;
  std::uint32_t id = 0;
  std::vector<Value> values;

  bool operator==(const StateKey&) const = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const {
    std::size_t h = hash_values(k.values);
    h ^= (static_cast<std::size_t>(k.kind) << 32 | k.id) * 0x9e3779b97f4a7c15ULL;
    return h;
  }
};

struct FreeVars {
  std::vector<std::uint32_t> slots;  // sorted
  std::vector<SymbolId> names;       // parallel to slots
};

constexpr std::size_t kMaxCallDepth = 10'000;

class Synthesizer {
 public:
  Synthesizer(const Spec& spec, const SynthesisLimits& limits)
      : spec_(spec),
        limits_(limits),
        table_(std::make_shared<EventTable>(EventTable::from_spec(spec))) {}

  Lts run(const EntryPoint& entry) {
    if (!spec_.resolved) throw EvalError("spec must be resolved before synthesis");
    if (entry.process >= spec_.processes.size()) throw EvalError("entry process out of range");
    if (spec_.processes[entry.process].arity() != entry.args.size()) {
      throw EvalError("entry '" + spec_.name(spec_.processes[entry.process].name) + "' takes " +
                      std::to_string(spec_.processes[entry.process].arity()) + " argument(s)");
    }
    StateId initial = intern({StateKind::Call, entry.process, entry.args}, {});
    for (StateId s = 0; s < states_.size(); ++s) expand(s);
    std::vector<std::string> names;
    names.reserve(states_.size());
    for (const auto& st : states_) names.push_back(describe(st));
    return Lts(table_, states_.size(), initial, std::move(transitions_),
               std::vector<bool>(table_->size(), true), std::move(names));
  }

 private:
  struct State {
    StateKey key;
    std::vector<Value> env;  // full environment for Node states
  };

  StateId intern(StateKey key, const std::vector<Value>& env) {
    auto [it, inserted] = ids_.try_emplace(std::move(key), static_cast<StateId>(states_.size()));
    if (inserted) {
      if (states_.size() >= limits_.max_states) {
        throw LimitExceeded("state", states_.size() + 1);
      }
      states_.push_back({it->first, it->first.kind == StateKind::Node ? env : std::vector<Value>{}});
    }
    return it->second;
  }

  StateId terminal() { return intern({StateKind::Terminal, 0, {}}, {}); }

  StateId continuation(ProcId next, const std::vector<Value>& env) {
    const ProcNode& node = spec_.proc(next);
    switch (node.kind) {
      case ProcKind::Skip: return intern({StateKind::Skip, 0, {}}, {});
      case ProcKind::Call: {
        const CallExpr& call = spec_.calls[node.a];
        std::vector<Value> args;
        args.reserve(call.args_count);
        for (ExprId a : spec_.args(call)) args.push_back(evaluate(spec_, a, env));
        return intern({StateKind::Call, call.process_index, std::move(args)}, {});
      }
      default: {
        const FreeVars& fv = free_vars(next);
        std::vector<Value> vals;
        vals.reserve(fv.slots.size());
        for (std::uint32_t slot : fv.slots) vals.push_back(env[slot]);
        return intern({StateKind::Node, index_of(next), std::move(vals)}, env);
      }
    }
  }

  void expand(StateId s) {
    buffer_.clear();
    // Copy: interning new states may reallocate states_.
    const StateKind kind = states_[s].key.kind;
    switch (kind) {
      case StateKind::Terminal: break;
      case StateKind::Skip: buffer_.push_back({s, Label::tick(), terminal()}); break;
      case StateKind::Call: {
        std::vector<Value> args = states_[s].key.values;
        call_chain_.clear();
        collect_call(s, states_[s].key.id, args);
        break;
      }
      case StateKind::Node: {
        std::vector<Value> env = states_[s].env;
        call_chain_.clear();
        collect(s, ProcId{states_[s].key.id}, env);
        break;
      }
    }
    std::sort(buffer_.begin(), buffer_.end(), [](const Transition& a, const Transition& b) {
      return a.label != b.label ? a.label < b.label : a.target < b.target;
    });
    buffer_.erase(std::unique(buffer_.begin(), buffer_.end(),
                              [](const Transition& a, const Transition& b) {
                                return a.label == b.label && a.target == b.target;
                              }),
                  buffer_.end());
    if (transitions_.size() + buffer_.size() > limits_.max_transitions) {
      throw LimitExceeded("transition", transitions_.size() + buffer_.size());
    }
    transitions_.insert(transitions_.end(), buffer_.begin(), buffer_.end());
  }

  void collect_call(StateId src, std::uint32_t process, const std::vector<Value>& args) {
    for (const auto& [p, a] : call_chain_) {
      if (p == process && a == args) {
        throw EvalError("unguarded recursion through '" +
                        spec_.name(spec_.processes[process].name) + "'");
      }
    }
    if (call_chain_.size() >= kMaxCallDepth) throw EvalError("call nesting too deep");
    call_chain_.emplace_back(process, args);
    const ProcessDef& def = spec_.processes[process];
    for (const Clause& clause : def.clauses) {
      std::vector<Value> env(clause.slot_count);
      bool matched = true;
      for (std::size_t i = 0; i < clause.patterns.size() && matched; ++i) {
        const Pattern& p = clause.patterns[i];
        switch (p.kind) {
          case Pattern::Kind::Wildcard: break;
          case Pattern::Kind::Binder: env[p.slot] = args[i]; break;
          case Pattern::Kind::Literal: matched = p.literal == args[i]; break;
        }
      }
      if (matched) {
        collect(src, clause.body, env);
        return;
      }
    }
    std::string shown;
    for (const auto& a : args) shown += (shown.empty() ? "" : ", ") + a.to_string();
    throw EvalError("no clause of '" + spec_.name(def.name) + "' matches (" + shown + ")");
  }

  void collect(StateId src, ProcId root, std::vector<Value>& env) {
    std::vector<ProcId> pending{root};
    while (!pending.empty()) {
      ProcId cur = pending.back();
      pending.pop_back();
      const ProcNode& node = spec_.proc(cur);
      switch (node.kind) {
        case ProcKind::Skip: buffer_.push_back({src, Label::tick(), terminal()}); break;
        case ProcKind::Choice:
          pending.push_back(ProcId{node.b});
          pending.push_back(ProcId{node.a});
          break;
        case ProcKind::Guarded:
          if (evaluate(spec_, ExprId{node.a}, env).as_bool()) pending.push_back(ProcId{node.b});
          break;
        case ProcKind::Call: {
          const CallExpr& call = spec_.calls[node.a];
          std::vector<Value> args;
          for (ExprId a : spec_.args(call)) args.push_back(evaluate(spec_, a, env));
          const std::size_t depth = call_chain_.size();
          collect_call(src, call.process_index, args);
          call_chain_.resize(depth);
          break;
        }
        case ProcKind::Prefix: {
          const EventExpr& ev = spec_.event_exprs[node.a];
          digits_.assign(ev.items_count, 0);
          instantiate(src, ev, 0, env, ProcId{node.b});
          break;
        }
      }
    }
  }

  void instantiate(StateId src, const EventExpr& ev, std::uint32_t i, std::vector<Value>& env,
                   ProcId next) {
    if (i == ev.items_count) {
      EventId id = table_->id_of(ev.channel_index, digits_);
      buffer_.push_back({src, Label::event(id), continuation(next, env)});
      return;
    }
    const ChannelDecl& ch = spec_.channels[ev.channel_index];
    const std::vector<Value>& dom = ch.domains[i];
    const EventItem& item = spec_.event_items[ev.items_begin + i];
    switch (item.kind) {
      case ItemKind::Dot: {
        Value v = evaluate(spec_, item.expr, env);
        auto it = std::lower_bound(dom.begin(), dom.end(), v);
        if (it == dom.end() || *it != v) {
          throw EvalError("value " + v.to_string() + " is outside the domain of channel '" +
                          spec_.name(ch.name) + "'");
        }
        digits_[i] = static_cast<std::uint32_t>(it - dom.begin());
        instantiate(src, ev, i + 1, env, next);
        break;
      }
      case ItemKind::Input:
        for (std::uint32_t k = 0; k < dom.size(); ++k) {
          env[item.slot] = dom[k];
          digits_[i] = k;
          instantiate(src, ev, i + 1, env, next);
        }
        break;
      case ItemKind::RestrictedInput: {
        Value allowed = evaluate(spec_, item.expr, env);
        for (const Value& v : allowed.elements()) {
          auto it = std::lower_bound(dom.begin(), dom.end(), v);
          if (it == dom.end() || *it != v) continue;
          env[item.slot] = v;
          digits_[i] = static_cast<std::uint32_t>(it - dom.begin());
          instantiate(src, ev, i + 1, env, next);
        }
        break;
      }
    }
  }

  // ---- free variables ----------------------------------------------------

  void free_in_expr(ExprId id, std::map<std::uint32_t, SymbolId>& out) const {
    const ExprNode& n = spec_.expr(id);
    switch (n.kind) {
      case ExprKind::Int:
      case ExprKind::Bool: return;
      case ExprKind::Name:
        if (n.name_kind == NameKind::Variable) out.emplace(n.b, n.a);
        return;
      case ExprKind::SetLit:
        for (ExprId e : spec_.set_elements(n)) free_in_expr(e, out);
        return;
      case ExprKind::Not: free_in_expr(ExprId{n.a}, out); return;
      default:
        free_in_expr(ExprId{n.a}, out);
        free_in_expr(ExprId{n.b}, out);
        return;
    }
  }

  void free_in_proc(ProcId id, std::map<std::uint32_t, SymbolId>& out) const {
    const ProcNode& n = spec_.proc(id);
    switch (n.kind) {
      case ProcKind::Skip: return;
      case ProcKind::Choice:
        free_in_proc(ProcId{n.a}, out);
        free_in_proc(ProcId{n.b}, out);
        return;
      case ProcKind::Guarded:
        free_in_expr(ExprId{n.a}, out);
        free_in_proc(ProcId{n.b}, out);
        return;
      case ProcKind::Call:
        for (ExprId a : spec_.args(spec_.calls[n.a])) free_in_expr(a, out);
        return;
      case ProcKind::Prefix: {
        const EventExpr& ev = spec_.event_exprs[n.a];
        std::set<std::uint32_t> bound;
        std::map<std::uint32_t, SymbolId> inner;
        for (const EventItem& item : spec_.items(ev)) {
          if (item.kind != ItemKind::Input) free_in_expr(item.expr, inner);
          if (item.kind != ItemKind::Dot) bound.insert(item.slot);
        }
        free_in_proc(ProcId{n.b}, inner);
        for (const auto& [slot, name] : inner) {
          if (!bound.contains(slot)) out.emplace(slot, name);
        }
        return;
      }
    }
  }

  const FreeVars& free_vars(ProcId id) {
    auto it = free_cache_.find(index_of(id));
    if (it != free_cache_.end()) return it->second;
    std::map<std::uint32_t, SymbolId> found;
    free_in_proc(id, found);
    FreeVars fv;
    for (const auto& [slot, name] : found) {
      fv.slots.push_back(slot);
      fv.names.push_back(name);
    }
    return free_cache_.emplace(index_of(id), std::move(fv)).first->second;
  }

  std::string describe(const State& st) {
    switch (st.key.kind) {
      case StateKind::Terminal: return "(terminated)";
      case StateKind::Skip: return "SKIP";
      case StateKind::Call: {
        std::string out = spec_.name(spec_.processes[st.key.id].name);
        if (!st.key.values.empty()) {
          out += '(';
          for (std::size_t i = 0; i < st.key.values.size(); ++i) {
            if (i) out += ", ";
            out += st.key.values[i].to_string();
          }
          out += ')';
        }
        return out;
      }
      case StateKind::Node: {
        std::string text = print_proc(spec_, ProcId{st.key.id});
        std::string flat;
        for (std::size_t i = 0; i < text.size(); ++i) {
          if (text[i] == '\n') {
            flat += ' ';
            while (i + 1 < text.size() && text[i + 1] == ' ') ++i;
          } else {
            flat += text[i];
          }
        }
        const FreeVars& fv = free_vars(ProcId{st.key.id});
        if (!fv.slots.empty()) {
          flat += " [";
          for (std::size_t i = 0; i < fv.slots.size(); ++i) {
            if (i) flat += ", ";
            flat += spec_.name(fv.names[i]) + "=" + st.key.values[i].to_string();
          }
          flat += ']';
        }
        return flat;
      }
    }
    return {};
  }

  const Spec& spec_;
  SynthesisLimits limits_;
  std::shared_ptr<EventTable> table_;
  std::unordered_map<StateKey, StateId, StateKeyHash> ids_;
  std::vector<State> states_;
  std::vector<Transition> transitions_;
  std::vector<Transition> buffer_;
  std::vector<std::uint32_t> digits_;
  std::vector<std::pair<std::uint32_t, std::vector<Value>>> call_chain_;
  std::unordered_map<std::uint32_t, FreeVars> free_cache_;
};

}  // namespace

Lts synthesize_lts(const Spec& spec, const EntryPoint& entry, const SynthesisLimits& limits) {
  return Synthesizer(spec, limits).run(entry);
}

}  // namespace cspmon
