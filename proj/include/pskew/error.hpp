#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pskew {

// Error from a line-oriented text format. `line` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// An oracle-side operation grew past its explicit budget.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& message)
      : std::runtime_error(message) {}
};

}  // namespace pskew
