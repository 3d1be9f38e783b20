#include <array>
#include <utility>

#include "cspmon/parser.hpp"

namespace cspmon {

namespace {

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9') || c == '\''; }
bool digit(char c) { return c >= '0' && c <= '9'; }

struct Keyword {
  std::string_view text;
  TokenKind kind;
};

constexpr std::array kKeywords{
    Keyword{"SKIP", TokenKind::KwSkip},       Keyword{"channel", TokenKind::KwChannel},
    Keyword{"datatype", TokenKind::KwDatatype}, Keyword{"nametype", TokenKind::KwNametype},
    Keyword{"member", TokenKind::KwMember},   Keyword{"diff", TokenKind::KwDiff},
    Keyword{"union", TokenKind::KwUnion},     Keyword{"true", TokenKind::KwTrue},
    Keyword{"false", TokenKind::KwFalse},     Keyword{"not", TokenKind::KwNot},
    Keyword{"and", TokenKind::KwAnd},         Keyword{"or", TokenKind::KwOr},
    // Recognised so that the parser can name them, but not supported.
    Keyword{"STOP", TokenKind::Unsupported},  Keyword{"CHAOS", TokenKind::Unsupported},
    Keyword{"if", TokenKind::Unsupported},    Keyword{"then", TokenKind::Unsupported},
    Keyword{"else", TokenKind::Unsupported},  Keyword{"let", TokenKind::Unsupported},
    Keyword{"within", TokenKind::Unsupported}, Keyword{"assert", TokenKind::Unsupported},
    Keyword{"include", TokenKind::Unsupported},
};

// Longest match first.
constexpr std::array<std::pair<std::string_view, TokenKind>, 27> kPunct{{
    {"|~|", TokenKind::Unsupported},
    {"|||", TokenKind::Unsupported},
    {"[|", TokenKind::Unsupported},
    {"|]", TokenKind::Unsupported},
    {"||", TokenKind::Unsupported},
    {"[>", TokenKind::Unsupported},
    {"[[", TokenKind::Unsupported},
    {"]]", TokenKind::Unsupported},
    {"/\\", TokenKind::Unsupported},
    {"\\", TokenKind::Unsupported},
    {";", TokenKind::Unsupported},
    {"[]", TokenKind::Choice},
    {"->", TokenKind::Arrow},
    {"..", TokenKind::DotDot},
    {"==", TokenKind::EqEq},
    {"!=", TokenKind::NotEq},
    {".", TokenKind::Dot},
    {"&", TokenKind::Amp},
    {"?", TokenKind::Question},
    {"!", TokenKind::Bang},
    {":", TokenKind::Colon},
    {",", TokenKind::Comma},
    {"(", TokenKind::LParen},
    {")", TokenKind::RParen},
    {"{", TokenKind::LBrace},
    {"}", TokenKind::RBrace},
    {"=", TokenKind::Equals},
}};

}  // namespace

const char* token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::Int: return "integer";
    case TokenKind::KwSkip: return "'SKIP'";
    case TokenKind::KwChannel: return "'channel'";
    case TokenKind::KwDatatype: return "'datatype'";
    case TokenKind::KwNametype: return "'nametype'";
    case TokenKind::KwMember: return "'member'";
    case TokenKind::KwDiff: return "'diff'";
    case TokenKind::KwUnion: return "'union'";
    case TokenKind::KwTrue: return "'true'";
    case TokenKind::KwFalse: return "'false'";
    case TokenKind::KwNot: return "'not'";
    case TokenKind::KwAnd: return "'and'";
    case TokenKind::KwOr: return "'or'";
    case TokenKind::Dot: return "'.'";
    case TokenKind::DotDot: return "'..'";
    case TokenKind::Arrow: return "'->'";
    case TokenKind::Choice: return "'[]'";
    case TokenKind::Amp: return "'&'";
    case TokenKind::Question: return "'?'";
    case TokenKind::Bang: return "'!'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Comma: return "','";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Equals: return "'='";
    case TokenKind::EqEq: return "'=='";
    case TokenKind::NotEq: return "'!='";
    case TokenKind::Pipe: return "'|'";
    case TokenKind::Underscore: return "'_'";
    case TokenKind::Unsupported: return "unsupported operator";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

void Lexer::advance(std::size_t n) {
  for (std::size_t i = 0; i < n && off_ < src_.size(); ++i) {
    if (src_[off_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else if ((static_cast<unsigned char>(src_[off_]) & 0xC0) != 0x80) {
      ++pos_.column;
    }
    ++off_;
  }
}

void Lexer::skip_space_and_comments() {
  while (off_ < src_.size()) {
    char c = peek();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
    } else if (c == '-' && peek(1) == '-') {
      while (off_ < src_.size() && peek() != '\n') advance();
    } else {
      break;
    }
  }
}

Token Lexer::next() {
  skip_space_and_comments();
  Token tok;
  tok.pos = pos_;
  tok.offset = off_;
  if (off_ >= src_.size()) {
    tok.kind = TokenKind::End;
    return tok;
  }
  const char c = peek();
  if (ident_start(c)) {
    std::size_t len = 1;
    while (ident_char(peek(len))) ++len;
    tok.text = src_.substr(off_, len);
    tok.kind = tok.text == "_" ? TokenKind::Underscore : TokenKind::Ident;
    for (const auto& kw : kKeywords) {
      if (kw.text == tok.text) tok.kind = kw.kind;
    }
    advance(len);
    return tok;
  }
  if (digit(c)) {
    std::size_t len = 0;
    std::int64_t value = 0;
    while (digit(peek(len))) {
      value = value * 10 + (peek(len) - '0');
      ++len;
    }
    tok.kind = TokenKind::Int;
    tok.text = src_.substr(off_, len);
    tok.number = value;
    advance(len);
    return tok;
  }
  if (c == '|' && peek(1) != '|' && peek(1) != '~' && peek(1) != ']') {
    tok.kind = TokenKind::Pipe;
    tok.text = src_.substr(off_, 1);
    advance();
    return tok;
  }
  for (const auto& [text, kind] : kPunct) {
    if (src_.substr(off_, text.size()) == text) {
      tok.kind = kind;
      tok.text = src_.substr(off_, text.size());
      advance(text.size());
      return tok;
    }
  }
  // Report the whole UTF-8 sequence of the offending character.
  std::size_t len = 1;
  while ((static_cast<unsigned char>(peek(len)) & 0xC0) == 0x80) ++len;
  throw LexError(pos_, std::string(src_.substr(off_, len)));
}

std::vector<Token> tokenize(std::string_view source) {
  Lexer lex(source);
  std::vector<Token> out;
  for (Token t = lex.next(); t.kind != TokenKind::End; t = lex.next()) out.push_back(t);
  return out;
}

}  // namespace cspmon
