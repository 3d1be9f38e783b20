#include "cspmon/resolve.hpp"

#include <algorithm>
#include <set>

#include "cspmon/parser.hpp"

namespace cspmon {

namespace {

class Resolver {
 public:
  explicit Resolver(Spec& spec) : spec_(spec) {}

  std::vector<std::string> run() {
    spec_.constants.clear();
    spec_.process_index.clear();
    spec_.channel_index.clear();
    declare_datatypes();
    declare_named_sets();
    declare_channels();
    declare_processes();
    for (std::size_t i = 0; i < spec_.processes.size(); ++i) resolve_process(i);
    return std::move(problems_);
  }

 private:
  struct Scope {
    std::vector<std::pair<SymbolId, std::uint32_t>> vars;
    std::uint32_t next_slot = 0;

    std::optional<std::uint32_t> find(SymbolId name) const {
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        if (it->first == name) return it->second;
      }
      return std::nullopt;
    }
    std::uint32_t bind(SymbolId name) {
      vars.emplace_back(name, next_slot);
      return next_slot++;
    }
  };

  void problem(SourcePos pos, const std::string& msg) {
    problems_.push_back(to_string(pos) + ": " + msg);
  }

  const std::string& name(SymbolId id) const { return spec_.name(id); }

  std::uint32_t add_constant(Value v) {
    spec_.constants.push_back(std::move(v));
    return static_cast<std::uint32_t>(spec_.constants.size() - 1);
  }

  void declare_datatypes() {
    std::set<SymbolId> types;
    for (const auto& dt : spec_.datatypes) {
      if (!types.insert(dt.name).second) {
        problem(dt.pos, "duplicate datatype '" + name(dt.name) + "'");
      }
      if (dt.constructors.empty()) {
        problem(dt.pos, "datatype '" + name(dt.name) + "' has no constructors");
      }
      for (SymbolId c : dt.constructors) {
        if (constant_ids_.contains(c)) {
          problem(dt.pos, "duplicate constructor '" + name(c) + "'");
          continue;
        }
        constant_ids_[c] = add_constant(Value::constructor(name(c)));
        constructors_.insert(c);
      }
      datatype_ids_[dt.name] = static_cast<std::uint32_t>(&dt - spec_.datatypes.data());
    }
  }

  std::optional<Value> constant_by_name(std::string_view text) const {
    auto sym = spec_.symbols.find(text);
    if (!sym) return std::nullopt;
    auto it = constant_ids_.find(*sym);
    if (it == constant_ids_.end()) return std::nullopt;
    return spec_.constants[it->second];
  }

  void declare_named_sets() {
    for (auto& ns : spec_.named_sets) {
      if (constant_ids_.contains(ns.name)) {
        problem(ns.pos, "duplicate name '" + name(ns.name) + "'");
        continue;
      }
      try {
        const ExprNode& node = spec_.expr(ns.value);
        if (node.kind == ExprKind::Range) {
          auto lookup = [this](std::string_view n) { return constant_by_name(n); };
          auto lo = evaluate_constant(spec_, ExprId{node.a}, lookup).as_int();
          auto hi = evaluate_constant(spec_, ExprId{node.b}, lookup).as_int();
          if (lo > hi) {
            problem(ns.pos, "range of '" + name(ns.name) + "' has lower bound above upper bound");
            continue;
          }
        }
        Value v = evaluate_constant(spec_, ns.value,
                                    [this](std::string_view n) { return constant_by_name(n); });
        if (!v.is_set()) {
          problem(ns.pos, "'" + name(ns.name) + "' is not a set");
          continue;
        }
        ns.resolved = v;
        constant_ids_[ns.name] = add_constant(std::move(v));
        named_sets_.insert(ns.name);
      } catch (const ResolveError& e) {
        for (const auto& p : e.problems()) problems_.push_back(p);
      } catch (const EvalError& e) {
        problem(ns.pos, std::string("in set '") + name(ns.name) + "': " + e.what());
      }
    }
  }

  std::optional<std::vector<Value>> domain_of(const ChannelDecl& ch, const TypeRef& ref) {
    Value set;
    if (ref.kind == TypeRef::Kind::Named) {
      const std::string& type = name(ref.name);
      if (auto dt = datatype_ids_.find(ref.name); dt != datatype_ids_.end()) {
        std::vector<Value> vals;
        for (SymbolId c : spec_.datatypes[dt->second].constructors) {
          vals.push_back(Value::constructor(name(c)));
        }
        return Value::set(std::move(vals)).elements();
      }
      if (named_sets_.contains(ref.name)) {
        set = spec_.constants[constant_ids_.at(ref.name)];
      } else if (type == "Bool") {
        return std::vector<Value>{Value::boolean(false), Value::boolean(true)};
      } else if (type == "Int") {
        problem(ch.pos, "channel '" + name(ch.name) +
                            "' uses non-finite domain 'Int'; use a finite set such as {0..9}");
        return std::nullopt;
      } else {
        problem(ch.pos, "undeclared type '" + type + "' in channel '" + name(ch.name) + "'");
        return std::nullopt;
      }
    } else {
      try {
        set = evaluate_constant(spec_, ref.set,
                                [this](std::string_view n) { return constant_by_name(n); });
      } catch (const ResolveError& e) {
        for (const auto& p : e.problems()) problems_.push_back(p);
        return std::nullopt;
      } catch (const EvalError& e) {
        problem(ch.pos, std::string("in channel '") + name(ch.name) + "' type: " + e.what());
        return std::nullopt;
      }
      if (!set.is_set()) {
        problem(ch.pos, "channel '" + name(ch.name) + "' type is not a set");
        return std::nullopt;
      }
    }
    for (const auto& v : set.elements()) {
      if (!v.is_int() && !v.is_constructor() && !v.is_bool()) {
        problem(ch.pos, "channel '" + name(ch.name) +
                            "' domain must contain integers or constructors, found " +
                            v.to_string());
        return std::nullopt;
      }
    }
    return set.elements();
  }

  void declare_channels() {
    for (std::size_t i = 0; i < spec_.channels.size(); ++i) {
      auto& ch = spec_.channels[i];
      if (!spec_.channel_index.emplace(ch.name, static_cast<std::uint32_t>(i)).second) {
        problem(ch.pos, "duplicate channel '" + name(ch.name) + "'");
      }
      ch.domains.clear();
      for (const auto& ref : ch.params) {
        auto dom = domain_of(ch, ref);
        ch.domains.push_back(dom ? std::move(*dom) : std::vector<Value>{});
      }
    }
  }

  void declare_processes() {
    for (std::size_t i = 0; i < spec_.processes.size(); ++i) {
      const auto& def = spec_.processes[i];
      if (!spec_.process_index.emplace(def.name, static_cast<std::uint32_t>(i)).second) {
        problem(def.pos, "duplicate process '" + name(def.name) + "'");
      }
    }
  }

  void resolve_process(std::size_t index) {
    auto& def = spec_.processes[index];
    const std::size_t arity = def.arity();
    for (auto& clause : def.clauses) {
      if (clause.patterns.size() != arity) {
        problem(clause.pos, "clause of '" + name(def.name) + "' has " +
                                std::to_string(clause.patterns.size()) + " pattern(s), expected " +
                                std::to_string(arity));
      }
      Scope scope;
      for (auto& pat : clause.patterns) {
        if (pat.kind != Pattern::Kind::Binder) continue;
        if (constructors_.contains(pat.name)) {
          pat.kind = Pattern::Kind::Literal;
          pat.literal = Value::constructor(name(pat.name));
          continue;
        }
        if (scope.find(pat.name)) {
          problem(clause.pos, "variable '" + name(pat.name) + "' bound twice in clause of '" +
                                  name(def.name) + "'");
        }
        pat.slot = scope.bind(pat.name);
      }
      resolve_proc(clause.body, scope);
      clause.slot_count = scope.next_slot;
    }
  }

  void resolve_proc(ProcId id, Scope& scope) {
    // Iterate down choice spines so long generated chains do not recurse deeply.
    std::vector<ProcId> pending{id};
    while (!pending.empty()) {
      ProcId cur = pending.back();
      pending.pop_back();
      const ProcNode node = spec_.proc(cur);
      switch (node.kind) {
        case ProcKind::Skip: break;
        case ProcKind::Choice:
          pending.push_back(ProcId{node.b});
          pending.push_back(ProcId{node.a});
          break;
        case ProcKind::Guarded:
          resolve_expr(ExprId{node.a}, scope);
          pending.push_back(ProcId{node.b});
          break;
        case ProcKind::Call: resolve_call(node, scope); break;
        case ProcKind::Prefix: {
          std::size_t bound = resolve_event(node.a, node.pos, scope);
          resolve_proc(ProcId{node.b}, scope);
          scope.vars.resize(scope.vars.size() - bound);
          break;
        }
      }
    }
  }

  std::size_t resolve_event(std::uint32_t event_index, SourcePos pos, Scope& scope) {
    EventExpr& ev = spec_.event_exprs[event_index];
    auto ch = spec_.channel_index.find(ev.channel);
    if (ch == spec_.channel_index.end()) {
      problem(pos, "undeclared channel '" + name(ev.channel) + "'");
      ev.channel_index = kUnresolved;
    } else {
      ev.channel_index = ch->second;
      std::size_t arity = spec_.channels[ch->second].params.size();
      if (arity != ev.items_count) {
        problem(pos, "channel '" + name(ev.channel) + "' takes " + std::to_string(arity) +
                         " parameter(s), event has " + std::to_string(ev.items_count));
      }
    }
    std::size_t bound = 0;
    const std::uint32_t begin = ev.items_begin;
    const std::uint32_t count = ev.items_count;
    for (std::uint32_t i = begin; i < begin + count; ++i) {
      EventItem item = spec_.event_items[i];
      switch (item.kind) {
        case ItemKind::Dot: resolve_expr(item.expr, scope); break;
        case ItemKind::Input:
          if (constructors_.contains(item.var)) {
            // `c?Green` with a constructor is a match on that value.
            ExprNode n;
            n.kind = ExprKind::Name;
            n.name_kind = NameKind::Constant;
            n.a = item.var;
            n.b = constant_ids_.at(item.var);
            n.pos = pos;
            item.kind = ItemKind::Dot;
            item.expr = spec_.add_expr(n);
            break;
          }
          item.slot = scope.bind(item.var);
          ++bound;
          break;
        case ItemKind::RestrictedInput:
          resolve_expr(item.expr, scope);
          item.slot = scope.bind(item.var);
          ++bound;
          break;
      }
      spec_.event_items[i] = item;
    }
    return bound;
  }

  void resolve_call(const ProcNode& node, Scope& scope) {
    CallExpr& call = spec_.calls[node.a];
    auto it = spec_.process_index.find(call.process);
    if (it == spec_.process_index.end()) {
      problem(node.pos, "undeclared process '" + name(call.process) + "'");
      call.process_index = kUnresolved;
    } else {
      call.process_index = it->second;
      std::size_t arity = spec_.processes[it->second].arity();
      if (arity != call.args_count) {
        problem(node.pos, "process '" + name(call.process) + "' takes " + std::to_string(arity) +
                              " argument(s), " + std::to_string(call.args_count) + " given");
      }
    }
    const std::uint32_t begin = call.args_begin;
    const std::uint32_t count = call.args_count;
    for (std::uint32_t i = begin; i < begin + count; ++i) {
      resolve_expr(spec_.expr_lists[i], scope);
    }
  }

  void resolve_expr(ExprId id, const Scope& scope) {
    ExprNode& n = spec_.exprs[index_of(id)];
    switch (n.kind) {
      case ExprKind::Int:
      case ExprKind::Bool: return;
      case ExprKind::Name: {
        if (auto slot = scope.find(n.a)) {
          n.name_kind = NameKind::Variable;
          n.b = *slot;
        } else if (auto c = constant_ids_.find(n.a); c != constant_ids_.end()) {
          n.name_kind = NameKind::Constant;
          n.b = c->second;
        } else {
          n.name_kind = NameKind::Unresolved;
          problem(n.pos, "unbound or undeclared name '" + name(n.a) + "'");
        }
        return;
      }
      case ExprKind::SetLit: {
        const std::uint32_t begin = n.a;
        const std::uint32_t count = n.b;
        for (std::uint32_t i = begin; i < begin + count; ++i) {
          resolve_expr(spec_.expr_lists[i], scope);
        }
        return;
      }
      case ExprKind::Not: resolve_expr(ExprId{n.a}, scope); return;
      default: {
        const std::uint32_t a = n.a;
        const std::uint32_t b = n.b;
        resolve_expr(ExprId{a}, scope);
        resolve_expr(ExprId{b}, scope);
        return;
      }
    }
  }

  Spec& spec_;
  std::vector<std::string> problems_;
  std::unordered_map<SymbolId, std::uint32_t> constant_ids_;
  std::unordered_map<SymbolId, std::uint32_t> datatype_ids_;
  std::set<SymbolId> constructors_;
  std::set<SymbolId> named_sets_;
};

}  // namespace

Spec validate_spec(Spec spec) {
  auto problems = Resolver(spec).run();
  if (!problems.empty()) throw ResolveError(std::move(problems));
  spec.resolved = true;
  return spec;
}

Spec load_spec_text(std::string_view source) { return validate_spec(parse_spec(source)); }

std::optional<Value> lookup_constant(const Spec& spec, std::string_view name) {
  auto sym = spec.symbols.find(name);
  if (!sym) return std::nullopt;
  for (const auto& dt : spec.datatypes) {
    for (SymbolId c : dt.constructors) {
      if (c == *sym) return Value::constructor(std::string(name));
    }
  }
  for (const auto& ns : spec.named_sets) {
    if (ns.name == *sym) return ns.resolved;
  }
  return std::nullopt;
}

}  // namespace cspmon
