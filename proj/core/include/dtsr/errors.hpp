#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dtsr {

/// Input document could not be parsed. `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Dimension mismatch between an object and the input paired with it.
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value outside the domain an operation is defined on.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A tree arena violates structural invariants (cycles, dangling ids).
class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration or size budget was exhausted. Distinct from "no result
/// exists": callers must not conflate the two.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dtsr
