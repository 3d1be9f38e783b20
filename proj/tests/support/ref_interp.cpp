#include "ref_interp.hpp"

#include <stdexcept>

#include "cspmon/error.hpp"

namespace cspref {

using namespace cspmon;

namespace {

std::vector<std::vector<Value>> cartesian(const std::vector<std::vector<Value>>& doms) {
  std::vector<std::vector<Value>> out{{}};
  for (const auto& d : doms) {
    std::vector<std::vector<Value>> next;
    for (const auto& prefix : out) {
      for (const auto& v : d) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

Interpreter::Interpreter(const Spec& spec) : spec_(spec) {
  for (const auto& dt : spec.datatypes) {
    for (SymbolId c : dt.constructors) constants_[spec.name(c)] = Value::constructor(spec.name(c));
  }
  // Named sets may refer to earlier ones; declaration order suffices.
  for (const auto& ns : spec.named_sets) constants_[spec.name(ns.name)] = eval(ns.value, {});
  for (const auto& ch : spec.channels) {
    std::vector<std::vector<Value>> doms;
    for (const auto& t : ch.params) doms.push_back(domain(t));
    for (auto& values : cartesian(doms)) alphabet_.insert(Event{spec.name(ch.name), values});
    domains_[ch.name] = std::move(doms);
  }
}

std::vector<Value> Interpreter::domain(const TypeRef& t) const {
  if (t.kind == TypeRef::Kind::Inline) return eval(t.set, {}).elements();
  const std::string& name = spec_.name(t.name);
  if (name == "Bool") return {Value::boolean(false), Value::boolean(true)};
  for (const auto& dt : spec_.datatypes) {
    if (dt.name == t.name) {
      std::vector<Value> out;
      for (SymbolId c : dt.constructors) out.push_back(Value::constructor(spec_.name(c)));
      return Value::set(out).elements();
    }
  }
  return constants_.at(name).elements();
}

Value Interpreter::eval(ExprId id, const Env& env) const {
  const ExprNode& n = spec_.expr(id);
  auto sub = [&](std::uint32_t c) { return eval(ExprId{c}, env); };
  switch (n.kind) {
    case ExprKind::Int: return Value::integer(n.number);
    case ExprKind::Bool: return Value::boolean(n.number != 0);
    case ExprKind::Name: {
      if (auto it = env.find(n.a); it != env.end()) return it->second;
      if (auto it = constants_.find(spec_.name(n.a)); it != constants_.end()) return it->second;
      throw std::logic_error("reference: unbound name " + spec_.name(n.a));
    }
    case ExprKind::SetLit: {
      std::vector<Value> xs;
      for (ExprId e : spec_.set_elements(n)) xs.push_back(eval(e, env));
      return Value::set(xs);
    }
    case ExprKind::Range: {
      std::vector<Value> xs;
      for (auto v = sub(n.a).as_int(); v <= sub(n.b).as_int(); ++v) xs.push_back(Value::integer(v));
      return Value::set(xs);
    }
    case ExprKind::Member: return Value::boolean(sub(n.b).contains(sub(n.a)));
    case ExprKind::Diff: {
      std::vector<Value> xs;
      Value s = sub(n.a);
      Value t = sub(n.b);
      for (const auto& v : s.elements()) {
        if (!t.contains(v)) xs.push_back(v);
      }
      return Value::set(xs);
    }
    case ExprKind::Union: {
      std::vector<Value> xs = sub(n.a).elements();
      Value t = sub(n.b);
      for (const auto& v : t.elements()) xs.push_back(v);
      return Value::set(xs);
    }
    case ExprKind::Eq: return Value::boolean(sub(n.a) == sub(n.b));
    case ExprKind::Neq: return Value::boolean(!(sub(n.a) == sub(n.b)));
    case ExprKind::And: return Value::boolean(sub(n.a).as_bool() && sub(n.b).as_bool());
    case ExprKind::Or: return Value::boolean(sub(n.a).as_bool() || sub(n.b).as_bool());
    case ExprKind::Not: return Value::boolean(!sub(n.a).as_bool());
  }
  throw std::logic_error("reference: bad expression");
}

const ChannelDecl& Interpreter::channel(SymbolId name) const {
  for (const auto& ch : spec_.channels) {
    if (ch.name == name) return ch;
  }
  throw std::logic_error("reference: unknown channel");
}

const ProcessDef& Interpreter::process(SymbolId name) const {
  for (const auto& p : spec_.processes) {
    if (p.name == name) return p;
  }
  throw std::logic_error("reference: unknown process");
}

InterpState Interpreter::initial(const std::string& name, const std::vector<Value>& args) const {
  auto sym = spec_.symbols.find(name);
  if (!sym) throw std::logic_error("reference: unknown entry " + name);
  return CallState{*sym, args};
}

InterpState Interpreter::continue_with(std::uint32_t node, const Env& env) const {
  const ProcNode& p = spec_.procs[node];
  if (p.kind == ProcKind::Call) {
    const CallExpr& c = spec_.calls[p.a];
    std::vector<Value> args;
    for (ExprId a : spec_.args(c)) args.push_back(eval(a, env));
    return CallState{c.process, args};
  }
  return OpenState{node, env};
}

void Interpreter::moves_of_call(const CallState& c, std::vector<Move>& out, int depth) const {
  if (depth > 200) throw EvalError("reference: unguarded recursion");
  const ProcessDef& def = process(c.process);
  for (const Clause& clause : def.clauses) {
    Env env;
    bool ok = true;
    for (std::size_t i = 0; i < clause.patterns.size() && ok; ++i) {
      const Pattern& pat = clause.patterns[i];
      if (pat.kind == Pattern::Kind::Binder) env[pat.name] = c.args[i];
      if (pat.kind == Pattern::Kind::Literal) ok = pat.literal == c.args[i];
    }
    if (ok) {
      moves_of(index_of(clause.body), env, out, depth + 1);
      return;
    }
  }
  throw EvalError("reference: no clause matches");
}

void Interpreter::moves_of(std::uint32_t node, const Env& env, std::vector<Move>& out,
                           int depth) const {
  const ProcNode& p = spec_.procs[node];
  switch (p.kind) {
    case ProcKind::Skip: out.push_back({std::nullopt, DoneState{}}); return;
    case ProcKind::Choice:
      moves_of(p.a, env, out, depth);
      moves_of(p.b, env, out, depth);
      return;
    case ProcKind::Guarded:
      if (eval(ExprId{p.a}, env).as_bool()) moves_of(p.b, env, out, depth);
      return;
    case ProcKind::Call: {
      InterpState c = continue_with(node, env);
      moves_of_call(std::get<CallState>(c), out, depth);
      return;
    }
    case ProcKind::Prefix: {
      const EventExpr& ev = spec_.event_exprs[p.a];
      const auto& doms = domains_.at(ev.channel);
      // Enumerate instantiations item by item, extending the environment.
      struct Partial {
        std::vector<Value> values;
        Env env;
      };
      std::vector<Partial> partials{{{}, env}};
      std::size_t i = 0;
      for (const EventItem& item : spec_.items(ev)) {
        std::vector<Partial> next;
        for (const auto& part : partials) {
          std::vector<Value> choices;
          if (item.kind == ItemKind::Dot) {
            Value v = eval(item.expr, part.env);
            bool ok = false;
            for (const auto& d : doms[i]) ok = ok || d == v;
            if (!ok) throw EvalError("reference: value outside domain");
            choices.push_back(v);
          } else if (item.kind == ItemKind::Input) {
            choices = doms[i];
          } else {
            Value allowed = eval(item.expr, part.env);
            for (const auto& d : doms[i]) {
              if (allowed.contains(d)) choices.push_back(d);
            }
          }
          for (const auto& v : choices) {
            Partial q = part;
            q.values.push_back(v);
            if (item.kind != ItemKind::Dot) q.env[item.var] = v;
            next.push_back(std::move(q));
          }
        }
        partials = std::move(next);
        ++i;
      }
      for (const auto& part : partials) {
        out.push_back({Event{spec_.name(ev.channel), part.values}, continue_with(p.b, part.env)});
      }
      return;
    }
  }
}

std::vector<Interpreter::Move> Interpreter::moves(const InterpState& s) const {
  std::vector<Move> out;
  if (const auto* c = std::get_if<CallState>(&s)) moves_of_call(*c, out, 0);
  if (const auto* o = std::get_if<OpenState>(&s)) moves_of(o->node, o->env, out, 0);
  return out;
}

std::set<Event> Interpreter::initials(const InterpState& s) const {
  std::set<Event> out;
  for (auto& m : moves(s)) {
    if (m.event) out.insert(*m.event);
  }
  return out;
}

StateSet Interpreter::after(const InterpState& s, const Event& e) const {
  StateSet out;
  for (auto& m : moves(s)) {
    if (m.event && *m.event == e) out.insert(m.target);
  }
  return out;
}

bool Interpreter::can_terminate(const InterpState& s) const {
  for (auto& m : moves(s)) {
    if (!m.event) return true;
  }
  return false;
}

StateSet Interpreter::saturate(StateSet states, const std::set<Event>& hidden) const {
  if (hidden.empty()) return states;
  std::vector<InterpState> todo(states.begin(), states.end());
  while (!todo.empty()) {
    InterpState s = todo.back();
    todo.pop_back();
    for (auto& m : moves(s)) {
      if (m.event && hidden.contains(*m.event) && states.insert(m.target).second) {
        todo.push_back(m.target);
      }
    }
  }
  return states;
}

RefVerdict accepts(const Spec& spec, const std::string& entry_process,
                   const std::vector<Value>& entry_args, Mode mode,
                   const std::optional<std::set<std::string>>& observable,
                   const std::vector<std::string>& trace) {
  Interpreter in(spec);
  std::set<Event> hidden;
  std::map<std::string, Event> visible;
  for (const auto& e : in.alphabet()) {
    if (!observable || observable->contains(e.to_string())) {
      visible.emplace(e.to_string(), e);
    } else {
      hidden.insert(e);
    }
  }
  StateSet current = in.saturate({in.initial(entry_process, entry_args)}, hidden);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    auto it = visible.find(trace[i]);
    if (it == visible.end()) {
      if (mode == Mode::Strict) return {false, i};
      continue;
    }
    StateSet next;
    for (const auto& s : current) {
      for (auto& t : in.after(s, it->second)) next.insert(t);
    }
    if (next.empty()) return {false, i};
    current = in.saturate(std::move(next), hidden);
  }
  return {true, 0};
}

}  // namespace cspref
