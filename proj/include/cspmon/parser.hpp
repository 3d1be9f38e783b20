#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cspmon/ast.hpp"

namespace cspmon {

enum class TokenKind : std::uint8_t {
  Ident,
  Int,
  KwSkip,
  KwChannel,
  KwDatatype,
  KwNametype,
  KwMember,
  KwDiff,
  KwUnion,
  KwTrue,
  KwFalse,
  KwNot,
  KwAnd,
  KwOr,
  Dot,
  DotDot,
  Arrow,
  Choice,
  Amp,
  Question,
  Bang,
  Colon,
  Comma,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Equals,
  EqEq,
  NotEq,
  Pipe,
  Underscore,
  Unsupported,  // CSP operator or keyword outside the supported subset
  End,
};

const char* token_kind_name(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string_view text;
  std::int64_t number = 0;
  SourcePos pos;
  std::size_t offset = 0;
};

/// Pull lexer over a source buffer that must outlive it. `--` comments run to
/// the end of the line and are skipped.
class Lexer {
 public:
  struct State {
    std::size_t offset = 0;
    SourcePos pos;
  };

  explicit Lexer(std::string_view source) : src_(source) {}

  Token next();
  State state() const { return {off_, pos_}; }
  void reset(State s) {
    off_ = s.offset;
    pos_ = s.pos;
  }

 private:
  void skip_space_and_comments();
  char peek(std::size_t ahead = 0) const {
    return off_ + ahead < src_.size() ? src_[off_ + ahead] : '\0';
  }
  void advance(std::size_t n = 1);

  std::string_view src_;
  std::size_t off_ = 0;
  SourcePos pos_;
};

/// All tokens of `source`, without the trailing End token.
std::vector<Token> tokenize(std::string_view source);

/// Parses a whole specification file. The result is unresolved.
Spec parse_spec(std::string_view source);

/// Parses `NAME` or `NAME(expr, ...)` into a Call node appended to `spec`.
ProcId parse_entry(Spec& spec, std::string_view text);

/// Parses an entry such as `ROVER({0..4}, Green)` and evaluates its arguments
/// as constant expressions against a resolved spec. Throws ParseError or
/// ResolveError.
EntryPoint resolve_entry(const Spec& spec, std::string_view text);

}  // namespace cspmon
