#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mq {

// Instance/solution file rejected; line is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& cause)
      : std::runtime_error("line " + std::to_string(line) + ": " + cause),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// n below the solvable range for m (or not underdefined at all).
class ApplicabilityError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Triangularization gave up after exhausting the precondition retry budget.
class ReductionFailedError : public std::runtime_error {
 public:
  ReductionFailedError(const std::string& what, std::string trace_log)
      : std::runtime_error(what), trace_(std::move(trace_log)) {}
  const std::string& trace_log() const { return trace_; }

 private:
  std::string trace_;
};

// Exhaustive enumeration would exceed the configured point budget.
class BudgetExceededError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mq
