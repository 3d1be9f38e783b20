#pragma once

// Abstract syntax of the supported CSP subset.
//
// Nodes live in flat arenas owned by Spec and refer to each other by index,
// which keeps very large generated specs (millions of prefix terms) compact.
// Parsing fills the structural fields; validate_spec fills the resolution
// fields (channel/process indices, variable slots, constants, domains).

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cspmon/error.hpp"
#include "cspmon/value.hpp"

namespace cspmon {

using SymbolId = std::uint32_t;
enum class ExprId : std::uint32_t {};
enum class ProcId : std::uint32_t {};

constexpr std::uint32_t kUnresolved = 0xffffffffu;

constexpr std::uint32_t index_of(ExprId id) { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t index_of(ProcId id) { return static_cast<std::uint32_t>(id); }

class SymbolTable {
 public:
  SymbolId intern(std::string_view name);
  std::optional<SymbolId> find(std::string_view name) const;
  const std::string& name(SymbolId id) const { return names_[id]; }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::map<std::string, SymbolId, std::less<>> ids_;
};

enum class ExprKind : std::uint8_t {
  Int,
  Bool,
  Name,
  SetLit,
  Range,
  Member,
  Diff,
  Union,
  Eq,
  Neq,
  And,
  Or,
  Not,
};

enum class NameKind : std::uint8_t { Unresolved, Variable, Constant };

/// Expression node. Field use by kind:
///   Int/Bool: number
///   Name: a = symbol; b = slot (Variable) or constant index (Constant)
///   SetLit: a = first index into Spec::expr_lists, b = element count
///   Range, Member, Diff, Union, Eq, Neq, And, Or: a, b = operand ExprIds
///   Not: a = operand
struct ExprNode {
  ExprKind kind = ExprKind::Int;
  NameKind name_kind = NameKind::Unresolved;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::int64_t number = 0;
  SourcePos pos;
};

enum class ProcKind : std::uint8_t { Skip, Prefix, Choice, Guarded, Call };

/// Process node. Field use by kind:
///   Prefix: a = index into Spec::event_exprs, b = continuation ProcId
///   Choice: a, b = left and right ProcIds
///   Guarded: a = guard ExprId, b = body ProcId
///   Call: a = index into Spec::calls
struct ProcNode {
  ProcKind kind = ProcKind::Skip;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  SourcePos pos;
};

enum class ItemKind : std::uint8_t { Dot, Input, RestrictedInput };

/// One `.e`, `?x` or `?x:(S)` component of an event expression. `!e` is
/// stored as Dot.
struct EventItem {
  ItemKind kind = ItemKind::Dot;
  ExprId expr{};  // Dot value or restriction set
  SymbolId var = 0;
  std::uint32_t slot = kUnresolved;
};

struct EventExpr {
  SymbolId channel = 0;
  std::uint32_t items_begin = 0;
  std::uint32_t items_count = 0;
  std::uint32_t channel_index = kUnresolved;
  SourcePos pos;
};

struct CallExpr {
  SymbolId process = 0;
  std::uint32_t args_begin = 0;  // into Spec::expr_lists
  std::uint32_t args_count = 0;
  std::uint32_t process_index = kUnresolved;
};

struct Pattern {
  enum class Kind : std::uint8_t { Wildcard, Binder, Literal };
  Kind kind = Kind::Wildcard;
  SymbolId name = 0;
  std::uint32_t slot = kUnresolved;
  Value literal;
};

struct Clause {
  std::vector<Pattern> patterns;
  ProcId body{};
  std::uint32_t slot_count = 0;
  SourcePos pos;
};

struct ProcessDef {
  SymbolId name = 0;
  std::vector<Clause> clauses;
  SourcePos pos;

  std::size_t arity() const { return clauses.empty() ? 0 : clauses.front().patterns.size(); }
};

struct DatatypeDecl {
  SymbolId name = 0;
  std::vector<SymbolId> constructors;
  SourcePos pos;
};

struct NamedSetDecl {
  SymbolId name = 0;
  ExprId value{};
  Value resolved;
  bool declared_with_nametype = false;
  SourcePos pos;
};

struct TypeRef {
  enum class Kind : std::uint8_t { Named, Inline };
  Kind kind = Kind::Named;
  SymbolId name = 0;
  ExprId set{};
};

struct ChannelDecl {
  SymbolId name = 0;
  std::vector<TypeRef> params;
  std::vector<std::vector<Value>> domains;  // sorted, filled by validate_spec
  SourcePos pos;
};

/// A parsed (and, after validate_spec, resolved) specification.
class Spec {
 public:
  SymbolTable symbols;

  std::vector<DatatypeDecl> datatypes;
  std::vector<NamedSetDecl> named_sets;
  std::vector<ChannelDecl> channels;
  std::vector<ProcessDef> processes;

  std::vector<ExprNode> exprs;
  std::vector<ExprId> expr_lists;
  std::vector<ProcNode> procs;
  std::vector<EventExpr> event_exprs;
  std::vector<EventItem> event_items;
  std::vector<CallExpr> calls;
  std::vector<Value> constants;

  bool resolved = false;
  std::unordered_map<SymbolId, std::uint32_t> process_index;
  std::unordered_map<SymbolId, std::uint32_t> channel_index;

  const ExprNode& expr(ExprId id) const { return exprs[index_of(id)]; }
  const ProcNode& proc(ProcId id) const { return procs[index_of(id)]; }
  const std::string& name(SymbolId id) const { return symbols.name(id); }

  std::span<const ExprId> set_elements(const ExprNode& set_lit) const {
    return {expr_lists.data() + set_lit.a, set_lit.b};
  }
  std::span<const EventItem> items(const EventExpr& ev) const {
    return {event_items.data() + ev.items_begin, ev.items_count};
  }
  std::span<const ExprId> args(const CallExpr& call) const {
    return {expr_lists.data() + call.args_begin, call.args_count};
  }

  std::optional<std::uint32_t> find_process(std::string_view name) const;
  std::optional<std::uint32_t> find_channel(std::string_view name) const;

  ExprId add_expr(ExprNode node);
  ProcId add_proc(ProcNode node);
};

/// A process instantiation used as the root of synthesis: `NAME` or
/// `NAME(arg, ...)` with concrete argument values.
struct EntryPoint {
  std::uint32_t process = 0;
  std::vector<Value> args;
};

/// Source-level rendering that reparses to the same tree. Choice operands and
/// guarded bodies are parenthesised so the output does not depend on operator
/// precedence.
std::string print_spec(const Spec& spec);
std::string print_proc(const Spec& spec, ProcId id);
std::string print_expr(const Spec& spec, ExprId id);

}  // namespace cspmon
