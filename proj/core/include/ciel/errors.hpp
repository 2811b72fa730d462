#ifndef CIEL_ERRORS_HPP
#define CIEL_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ciel {

// Base class for everything this library throws on purpose.
class CielError : public std::runtime_error {
 public:
  explicit CielError(const std::string& what) : std::runtime_error(what) {}
};

// Raised by the formula / theory / derivation parsers; carries a 1-based
// source position.
class ParseError : public CielError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : CielError(what + " at line " + std::to_string(line) + ", column " +
                  std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A configured cap (closure size, type count, valuation count, ...) was
// exceeded. The input is beyond desk scale; nothing is silently truncated.
class ResourceLimitError : public CielError {
 public:
  using CielError::CielError;
};

// A model (or theory) failed validation: non-equivalence relation in strict
// mode, unknown world, unsatisfiable theory, missing atom, and so on.
class ModelError : public CielError {
 public:
  using CielError::CielError;
};

}  // namespace ciel

#endif  // CIEL_ERRORS_HPP
