#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cspmon {

/// A data value carried by events and process parameters: an integer, a
/// boolean, a nullary datatype constructor, or a finite set of values.
/// Sets are kept sorted and duplicate-free, so equality is structural.
class Value {
 public:
  enum class Kind : std::uint8_t { Int, Bool, Constructor, Set };

  Value() : data_(std::int64_t{0}) {}

  static Value integer(std::int64_t v);
  static Value boolean(bool v);
  static Value constructor(std::string name);
  /// Sorts and deduplicates; throws EvalError on mixed element kinds.
  static Value set(std::vector<Value> elements);
  static Value empty_set() { return set({}); }

  Kind kind() const { return static_cast<Kind>(data_.index()); }
  bool is_int() const { return kind() == Kind::Int; }
  bool is_bool() const { return kind() == Kind::Bool; }
  bool is_constructor() const { return kind() == Kind::Constructor; }
  bool is_set() const { return kind() == Kind::Set; }

  // Accessors throw EvalError when the kind does not match.
  std::int64_t as_int() const;
  bool as_bool() const;
  const std::string& constructor_name() const;
  const std::vector<Value>& elements() const;

  bool contains(const Value& v) const;

  /// `3`, `true`, `Green`, `{0, 1}`.
  std::string to_string() const;
  std::size_t hash() const;

  friend std::strong_ordering operator<=>(const Value& a, const Value& b);
  friend bool operator==(const Value& a, const Value& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  struct Ctor {
    std::string name;
  };
  struct SetData {
    std::vector<Value> elems;
  };

  std::variant<std::int64_t, bool, Ctor, SetData> data_;
};

struct ValueHash {
  std::size_t operator()(const Value& v) const { return v.hash(); }
};

std::size_t hash_values(std::span<const Value> values);

Value set_union(const Value& a, const Value& b);
Value set_difference(const Value& a, const Value& b);

/// A concrete communication: a channel name plus its fully instantiated
/// parameter values. Canonical text is `chan` or `chan.v1.v2`.
struct Event {
  std::string channel;
  std::vector<Value> values;

  std::string to_string() const;

  friend auto operator<=>(const Event&, const Event&) = default;
  friend bool operator==(const Event&, const Event&) = default;
};

/// Parses canonical event text. Value segments are integers, `true`/`false`
/// or constructor identifiers. Returns nullopt for anything else.
std::optional<Event> parse_event_text(std::string_view text);

}  // namespace cspmon
