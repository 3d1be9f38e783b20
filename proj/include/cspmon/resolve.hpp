#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "cspmon/ast.hpp"

namespace cspmon {

/// Resolves every name in `raw`, checks arities and binding, evaluates named
/// sets and channel domains, and assigns variable slots. Throws ResolveError
/// listing every problem found. Idempotent on already-resolved specs.
Spec validate_spec(Spec raw);

/// Convenience: parse_spec followed by validate_spec.
Spec load_spec_text(std::string_view source);

/// Value of a constructor or named set declared in a resolved spec.
std::optional<Value> lookup_constant(const Spec& spec, std::string_view name);

using ConstantLookup = std::function<std::optional<Value>(std::string_view)>;

/// Evaluates an expression with no variables, resolving names via `lookup`.
/// Throws ResolveError for unknown names and EvalError for ill-typed input.
Value evaluate_constant(const Spec& owner, ExprId id, const ConstantLookup& lookup);

/// Evaluates a resolved expression under a slot environment. Throws
/// EvalError on ill-typed operands.
Value evaluate(const Spec& spec, ExprId id, std::span<const Value> env);

}  // namespace cspmon
