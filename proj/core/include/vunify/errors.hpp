// Error types shared across the library.
#ifndef VUNIFY_ERRORS_HPP
#define VUNIFY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vunify {

/// Ill-sorted term or sort-violating declaration.
struct SortError : std::runtime_error {
  explicit SortError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Surface-syntax error with position information.
struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(const std::string& msg, int line_, int column_)
      : std::runtime_error(msg + " (line " + std::to_string(line_) + ", column " +
                           std::to_string(column_) + ")"),
        line(line_),
        column(column_) {}
};

/// A theory violated a decomposition condition (variable lhs, bad axiom set, ...).
struct TheoryError : std::runtime_error {
  explicit TheoryError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Rewriting exceeded the step budget; names the last rule applied.
struct NonTerminationError : std::runtime_error {
  std::string last_rule;
  NonTerminationError(const std::string& msg, std::string rule)
      : std::runtime_error(msg), last_rule(std::move(rule)) {}
};

/// Variant generation exhausted its node budget without closing.
struct VariantBudgetError : std::runtime_error {
  explicit VariantBudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Ground oracle exceeded its combinatorial budget.
struct OracleBudgetError : std::runtime_error {
  explicit OracleBudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Cooperative deadline hit inside an engine loop.
struct TimeoutError : std::runtime_error {
  explicit TimeoutError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace vunify

#endif
