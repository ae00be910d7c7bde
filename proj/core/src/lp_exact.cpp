#include <algorithm>
#include <vector>

#include "nlgame/lp.hpp"

namespace nlgame {

namespace {

constexpr long kIterationCap = 1'000'000;
constexpr int kDegenerateRun = 32;

// Exact two-phase simplex in standard form (x >= 0, rows as given). Dense
// rational tableau; Dantzig pricing falling back to Bland's rule after a run
// of degenerate pivots, which guarantees termination.
class ExactSimplex {
 public:
  explicit ExactSimplex(const RationalProgram& lp) : lp_(lp) { build(); }

  RationalSolution run() {
    RationalSolution sol;
    if (nart_ > 0) {
      set_phase1_objective();
      if (!optimize()) throw SolverError("exact phase-1 unbounded");
      if (obj_value() < 0) {
        sol.status = LpStatus::Infeasible;
        sol.iterations = iterations_;
        return sol;
      }
      remove_artificials();
    }
    set_phase2_objective();
    bool bounded = optimize();
    sol.status = bounded ? LpStatus::Optimal : LpStatus::Unbounded;
    sol.iterations = iterations_;
    if (!bounded) return sol;
    sol.x.assign(lp_.num_vars, Rational(0));
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i] < lp_.num_vars) sol.x[basis_[i]] = rhs(i);
    sol.objective = 0;
    for (int j = 0; j < lp_.num_vars; ++j) sol.objective += lp_.objective[j] * sol.x[j];
    return sol;
  }

 private:
  const RationalProgram& lp_;
  int n_ = 0;       // structural
  int nslack_ = 0;  // one per Le/Ge row
  int nart_ = 0;
  int ncols_ = 0;  // structural + slack + artificial (rhs held separately)
  std::vector<std::vector<Rational>> tab_;  // m rows
  std::vector<Rational> b_;
  std::vector<Rational> d_;  // reduced costs
  Rational d0_ = 0;          // objective value offset (c_B^T xB)
  std::vector<int> basis_;
  std::vector<bool> dead_;  // columns barred from entering (artificials in phase 2)
  long iterations_ = 0;
  int degenerate_run_ = 0;
  bool bland_ = false;
  bool phase1_ = false;

  Rational& rhs(std::size_t i) { return b_[i]; }
  const Rational& rhs(std::size_t i) const { return b_[i]; }

  void build() {
    n_ = lp_.num_vars;
    const int m = static_cast<int>(lp_.rows.size());
    // b >= 0 after optional row flips; count slacks and artificials.
    std::vector<int> slack_of(m, -1), art_of(m, -1);
    std::vector<Rational> sign(m, Rational(1));
    for (int i = 0; i < m; ++i) {
      Cmp cmp = lp_.rows[i].cmp;
      Rational b = lp_.rows[i].rhs;
      if (b < 0) {
        sign[i] = -1;
        b = -b;
        cmp = cmp == Cmp::Le ? Cmp::Ge : cmp == Cmp::Ge ? Cmp::Le : Cmp::Eq;
      }
      if (cmp != Cmp::Eq) slack_of[i] = nslack_++;
      if (cmp != Cmp::Le) art_of[i] = nart_++;
    }
    ncols_ = n_ + nslack_ + nart_;
    tab_.assign(m, std::vector<Rational>(ncols_, Rational(0)));
    b_.assign(m, Rational(0));
    basis_.assign(m, -1);
    dead_.assign(ncols_, false);

    int art_seen = 0;
    for (int i = 0; i < m; ++i) {
      const RationalRow& r = lp_.rows[i];
      Cmp cmp = r.cmp;
      Rational rb = r.rhs;
      if (sign[i] < 0) {
        rb = -rb;
        cmp = cmp == Cmp::Le ? Cmp::Ge : cmp == Cmp::Ge ? Cmp::Le : Cmp::Eq;
      }
      for (int j = 0; j < n_; ++j) tab_[i][j] = sign[i] * r.coeffs[j];
      b_[i] = rb;
      if (slack_of[i] >= 0)
        tab_[i][n_ + slack_of[i]] = cmp == Cmp::Le ? Rational(1) : Rational(-1);
      if (art_of[i] >= 0) {
        int a = n_ + nslack_ + art_seen++;
        tab_[i][a] = 1;
        basis_[i] = a;
      } else {
        basis_[i] = n_ + slack_of[i];
      }
    }
  }

  void set_objective(const std::vector<Rational>& c) {
    d_ = c;
    d_.resize(ncols_, Rational(0));
    d0_ = 0;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      const Rational& cb = d_[basis_[i]];
      if (cb == 0) continue;
      Rational f = cb;  // copy: d_ mutates below
      for (int j = 0; j < ncols_; ++j)
        if (tab_[i][j] != 0) d_[j] -= f * tab_[i][j];
      d0_ += f * b_[i];
      d_[basis_[i]] = 0;
    }
  }

  void set_phase1_objective() {
    phase1_ = true;
    std::vector<Rational> c(ncols_, Rational(0));
    for (int a = n_ + nslack_; a < ncols_; ++a) c[a] = -1;
    set_objective(c);
    bland_ = false;
    degenerate_run_ = 0;
  }

  void set_phase2_objective() {
    phase1_ = false;
    std::vector<Rational> c(ncols_, Rational(0));
    for (int j = 0; j < n_; ++j) c[j] = lp_.objective[j];
    set_objective(c);
    bland_ = false;
    degenerate_run_ = 0;
  }

  Rational obj_value() const { return d0_; }

  void remove_artificials() {
    // Pivot basic artificials out where possible; a fully zero row is
    // redundant and the artificial stays basic at zero, barred from entering.
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (basis_[i] < n_ + nslack_) continue;
      int piv = -1;
      for (int j = 0; j < n_ + nslack_; ++j)
        if (tab_[i][j] != 0 && !dead_[j]) { piv = j; break; }
      if (piv >= 0) pivot(static_cast<int>(i), piv);
    }
    for (int a = n_ + nslack_; a < ncols_; ++a) dead_[a] = true;
  }

  void pivot(int r, int c) {
    Rational inv = tab_[r][c];
    for (int j = 0; j < ncols_; ++j)
      if (tab_[r][j] != 0) tab_[r][j] /= inv;
    b_[r] /= inv;
    tab_[r][c] = 1;
    for (std::size_t i = 0; i < tab_.size(); ++i) {
      if (static_cast<int>(i) == r) continue;
      Rational f = tab_[i][c];
      if (f == 0) continue;
      for (int j = 0; j < ncols_; ++j)
        if (tab_[r][j] != 0) tab_[i][j] -= f * tab_[r][j];
      b_[i] -= f * b_[r];
      tab_[i][c] = 0;
    }
    {
      Rational f = d_[c];
      if (f != 0) {
        for (int j = 0; j < ncols_; ++j)
          if (tab_[r][j] != 0) d_[j] -= f * tab_[r][j];
        d0_ += f * b_[r];
        d_[c] = 0;
      }
    }
    basis_[r] = c;
  }

  // Returns false when unbounded.
  bool optimize() {
    const int m = static_cast<int>(tab_.size());
    for (;;) {
      if (++iterations_ > kIterationCap)
        throw SolverError("exact simplex iteration cap reached");
      int q = -1;
      if (bland_) {
        for (int j = 0; j < ncols_; ++j)
          if (!dead_[j] && d_[j] > 0) { q = j; break; }
      } else {
        const Rational* best = nullptr;
        for (int j = 0; j < ncols_; ++j) {
          if (dead_[j] || d_[j] <= 0) continue;
          if (best == nullptr || d_[j] > *best) {
            best = &d_[j];
            q = j;
          }
        }
      }
      if (q < 0) return true;

      int r = -1;
      Rational best_ratio = 0;
      for (int i = 0; i < m; ++i) {
        if (tab_[i][q] <= 0) continue;
        Rational ratio = b_[i] / tab_[i][q];
        if (r < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[r])) {
          r = i;
          best_ratio = ratio;
        }
      }
      if (r < 0) return false;

      if (best_ratio > 0)
        degenerate_run_ = 0;
      else if (++degenerate_run_ >= kDegenerateRun)
        bland_ = true;

      pivot(r, q);
    }
  }
};

}  // namespace

RationalSolution solve_exact(const RationalProgram& lp) {
  for (const RationalRow& r : lp.rows)
    if (static_cast<int>(r.coeffs.size()) != lp.num_vars)
      throw ShapeError("LP row length != variable count");
  ExactSimplex s(lp);
  return s.run();
}

}  // namespace nlgame
