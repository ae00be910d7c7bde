#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace nlgame {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An axis label or axis index that does not exist, or a label collision.
class AxisError : public Error {
 public:
  using Error::Error;
};

/// Incompatible table/channel shapes or malformed table data.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A requested computation exceeds the configured size budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or unknown builtin name.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// LP solver failure (numerical stall, iteration cap, unexpected status).
class SolverError : public Error {
 public:
  using Error::Error;
};

/// An audit precondition failed; carries the name of the failing step.
class AuditError : public Error {
 public:
  AuditError(std::string step, const std::string& what)
      : Error(what), step_(std::move(step)) {}
  const std::string& step() const { return step_; }

 private:
  std::string step_;
};

/// Cell budget for dense tables and enumeration loops. Defaults to 1e7 cells;
/// the NLGAME_BUDGET_CELLS environment variable overrides it.
inline long long cell_budget() {
  static const long long budget = [] {
    if (const char* env = std::getenv("NLGAME_BUDGET_CELLS")) {
      long long v = std::atoll(env);
      if (v > 0) return v;
    }
    return 10'000'000LL;
  }();
  return budget;
}

/// Entry budget for dense LP tableaus (rows x columns), derived from the cell
/// budget so NLGAME_BUDGET_CELLS scales both.
inline long long lp_entry_budget() { return 6 * cell_budget(); }

}  // namespace nlgame
