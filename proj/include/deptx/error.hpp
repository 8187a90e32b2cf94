#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deptx {

/// Malformed input text (CoNLL-U, prefixes, logical forms).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An operation was called on input that violates its precondition
/// (for example an invalid dependency tree).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid user configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Data-dependent failure that is neither a parse nor a config problem.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace deptx
