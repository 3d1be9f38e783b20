#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cspmon {

struct SourcePos {
  int line = 1;
  int column = 1;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

std::string to_string(SourcePos pos);

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LexError : public Error {
 public:
  LexError(SourcePos pos, std::string offending);

  SourcePos position() const { return pos_; }
  const std::string& offending() const { return offending_; }

 private:
  SourcePos pos_;
  std::string offending_;
};

class ParseError : public Error {
 public:
  ParseError(SourcePos pos, std::string message, bool unsupported = false);

  SourcePos position() const { return pos_; }
  /// True when the input used a CSP operator outside the supported subset.
  bool unsupported_operator() const { return unsupported_; }

 private:
  SourcePos pos_;
  bool unsupported_;
};

/// Collects every problem found while resolving a parsed spec.
class ResolveError : public Error {
 public:
  explicit ResolveError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

class AlphabetError : public Error {
 public:
  using Error::Error;
};

class UnknownState : public Error {
 public:
  using Error::Error;
};

class LimitExceeded : public Error {
 public:
  LimitExceeded(std::string what_limit, std::size_t reached);

  std::size_t reached() const { return reached_; }

 private:
  std::size_t reached_;
};

class NondeterministicOracle : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, std::string reason);

  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

class MappingError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class BindError : public Error {
 public:
  using Error::Error;
};

class PositionError : public Error {
 public:
  using Error::Error;
};

}  // namespace cspmon
