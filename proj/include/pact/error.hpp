#pragma once

#include <stdexcept>
#include <string>

namespace pact {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An object violates a documented invariant (bad fluent, bad probability,
/// malformed action, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Applying an effect produced a value outside the fluent's domain.
class DomainOverflowError : public Error {
 public:
  DomainOverflowError(std::string fluent, const std::string& what)
      : Error(what), fluent_(std::move(fluent)) {}
  const std::string& fluent() const { return fluent_; }

 private:
  std::string fluent_;
};

/// Lower/upper probability requested over an empty state set.
class DegenerateEffectError : public Error {
 public:
  using Error::Error;
};

/// A reached state satisfies no condition of the next action.
class IncompletenessError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed the configured size limit.
class BoundError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in a domain file or query, with a 1-based position.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace pact
