#pragma once

#include <iosfwd>
#include <vector>

#include "nlgame/errors.hpp"
#include "nlgame/rational.hpp"

namespace nlgame {

enum class Cmp : int { Le, Eq, Ge };

struct LpRow {
  std::vector<double> coeffs;  // dense, one per variable
  Cmp cmp = Cmp::Le;
  double rhs = 0.0;
};

/// Dense maximization LP. Variables default to [0, +inf); upper bounds are
/// optional and finite lower bounds may be set per variable.
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;
  std::vector<double> lower;  // size num_vars
  std::vector<double> upper;  // size num_vars, +inf when unbounded

  explicit LinearProgram(int nvars = 0);
  void add_row(std::vector<double> coeffs, Cmp cmp, double rhs);
  long long tableau_entries() const;

  /// Plain-text dump (objective then one constraint per line) for external
  /// cross-validation.
  void dump(std::ostream& os) const;
};

enum class LpStatus : int { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  double objective = 0.0;
  std::vector<double> x;
  double max_residual = 0.0;
  long iterations = 0;
};

/// Bounded-variable primal simplex (two phases, dense tableau). Dantzig
/// pricing with Bland's rule engaged to break degenerate cycling; iteration
/// cap 1e6, after which SolverError is thrown.
LpSolution solve(const LinearProgram& lp);

struct RationalRow {
  std::vector<Rational> coeffs;
  Cmp cmp = Cmp::Le;
  Rational rhs = 0;
};

/// Exact maximization LP over nonnegative variables; bounds beyond x >= 0 are
/// expressed as rows.
struct RationalProgram {
  int num_vars = 0;
  std::vector<Rational> objective;
  std::vector<RationalRow> rows;

  explicit RationalProgram(int nvars = 0);
  void add_row(std::vector<Rational> coeffs, Cmp cmp, Rational rhs);
};

struct RationalSolution {
  LpStatus status = LpStatus::Optimal;
  Rational objective = 0;
  std::vector<Rational> x;
  long iterations = 0;
};

/// Exact two-phase simplex with Bland's rule throughout. Independent of the
/// floating solver; used as the oracle for derived values.
RationalSolution solve_exact(const RationalProgram& lp);

}  // namespace nlgame
