#include "nlgame/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace nlgame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-9;
constexpr double kOptTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr long kIterationCap = 1'000'000;
constexpr int kDegenerateRun = 64;  // consecutive degenerate pivots before Bland

enum class VarState : char { Basic, AtLower, AtUpper };

// Full-tableau bounded-variable primal simplex. Columns are the structural
// variables, one slack per row, then artificials for rows whose clamped slack
// cannot absorb the initial residual. The reduced-cost row is carried along
// with the tableau and rebuilt at the phase switch.
class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp) { build(); }

  LpSolution run() {
    LpSolution sol;
    if (need_phase1_) {
      set_phase1_objective();
      optimize();
      if (phase1_infeasible()) {
        sol.status = LpStatus::Infeasible;
        sol.iterations = iterations_;
        return sol;
      }
      freeze_artificials();
    }
    set_phase2_objective();
    bool bounded = optimize();
    sol.status = bounded ? LpStatus::Optimal : LpStatus::Unbounded;
    sol.iterations = iterations_;
    if (bounded) extract(sol);
    return sol;
  }

 private:
  const LinearProgram& lp_;
  int m_ = 0;        // rows
  int n_ = 0;        // structural vars
  int ncols_ = 0;    // structural + slack + artificial
  int nart_ = 0;
  bool need_phase1_ = false;
  bool phase1_ = false;

  std::vector<double> tab_;    // m_ x ncols_
  std::vector<double> d_;      // reduced costs, ncols_
  std::vector<double> lo_, up_;
  std::vector<VarState> state_;
  std::vector<int> basis_;     // basis_[i] = column basic in row i
  std::vector<double> xb_;     // value of basis_[i]
  std::vector<double> art_sign_;  // per row: 0 when no artificial, else +/-1
  std::vector<int> art_col_;      // per row: artificial column or -1
  long iterations_ = 0;
  int degenerate_run_ = 0;
  bool bland_ = false;

  double* row(int i) { return tab_.data() + static_cast<std::size_t>(i) * ncols_; }

  double nonbasic_value(int j) const {
    return state_[j] == VarState::AtUpper ? up_[j] : lo_[j];
  }

  void build() {
    m_ = static_cast<int>(lp_.rows.size());
    n_ = lp_.num_vars;
    for (const LpRow& r : lp_.rows)
      if (static_cast<int>(r.coeffs.size()) != n_)
        throw ShapeError("LP row length != variable count");
    for (int j = 0; j < n_; ++j) {
      if (!std::isfinite(lp_.lower[j]))
        throw ShapeError("structural lower bounds must be finite");
      if (lp_.upper[j] < lp_.lower[j]) throw ShapeError("upper bound below lower bound");
    }

    // Initial nonbasic structural values sit at their lower bound. Residuals
    // decide which rows need an artificial column.
    std::vector<double> resid(m_);
    std::vector<int> art_of_row(m_, -1);
    nart_ = 0;
    for (int i = 0; i < m_; ++i) {
      const LpRow& r = lp_.rows[i];
      double v = r.rhs;
      for (int j = 0; j < n_; ++j) v -= r.coeffs[j] * lp_.lower[j];
      resid[i] = v;
      double slo = r.cmp == Cmp::Ge ? -kInf : 0.0;
      double sup = r.cmp == Cmp::Le ? kInf : 0.0;
      double clamped = std::min(std::max(v, slo), sup);
      if (std::abs(v - clamped) > 0.0) {
        art_of_row[i] = nart_++;
        need_phase1_ = true;
      }
    }

    ncols_ = n_ + m_ + nart_;
    if (static_cast<long long>(m_) * ncols_ > lp_entry_budget())
      throw BudgetError("LP tableau would have " +
                        std::to_string(static_cast<long long>(m_) * ncols_) +
                        " entries, over budget");
    tab_.assign(static_cast<std::size_t>(m_) * ncols_, 0.0);
    d_.assign(ncols_, 0.0);
    lo_.assign(ncols_, 0.0);
    up_.assign(ncols_, kInf);
    state_.assign(ncols_, VarState::AtLower);
    basis_.assign(m_, -1);
    xb_.assign(m_, 0.0);
    art_sign_.assign(m_, 0.0);
    art_col_.assign(m_, -1);

    for (int j = 0; j < n_; ++j) {
      lo_[j] = lp_.lower[j];
      up_[j] = lp_.upper[j];
      state_[j] = VarState::AtLower;
    }
    for (int i = 0; i < m_; ++i) {
      const LpRow& r = lp_.rows[i];
      double* t = row(i);
      for (int j = 0; j < n_; ++j) t[j] = r.coeffs[j];
      int s = n_ + i;
      t[s] = 1.0;
      lo_[s] = r.cmp == Cmp::Ge ? -kInf : 0.0;
      up_[s] = r.cmp == Cmp::Le ? kInf : 0.0;

      if (art_of_row[i] < 0) {
        basis_[i] = s;
        xb_[i] = resid[i];
        state_[s] = VarState::Basic;
      } else {
        int a = n_ + m_ + art_of_row[i];
        double slo = r.cmp == Cmp::Ge ? -kInf : 0.0;
        double sup = r.cmp == Cmp::Le ? kInf : 0.0;
        double clamped = std::min(std::max(resid[i], slo), sup);
        double viol = resid[i] - clamped;
        art_sign_[i] = viol > 0 ? 1.0 : -1.0;
        art_col_[i] = a;
        // Negative violations flip the whole row so the artificial's basis
        // column is +1 and the tableau stays canonical (tab == B^{-1}[A|I|G]).
        if (viol < 0)
          for (int j = 0; j < ncols_; ++j) t[j] = -t[j];
        t[a] = 1.0;
        lo_[a] = 0.0;
        up_[a] = kInf;
        basis_[i] = a;
        xb_[i] = std::abs(viol);
        state_[a] = VarState::Basic;
        state_[s] = r.cmp == Cmp::Ge ? VarState::AtUpper : VarState::AtLower;
      }
    }
  }

  void set_objective(const std::vector<double>& c) {
    // d_j = c_j - c_B^T B^{-1} A_j over the current tableau.
    d_ = c;
    for (int i = 0; i < m_; ++i) {
      double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      const double* t = row(i);
      for (int j = 0; j < ncols_; ++j) d_[j] -= cb * t[j];
    }
    for (int i = 0; i < m_; ++i) d_[basis_[i]] = 0.0;
  }

  void set_phase1_objective() {
    phase1_ = true;
    std::vector<double> c(ncols_, 0.0);
    for (int a = n_ + m_; a < ncols_; ++a) c[a] = -1.0;
    set_objective(c);
  }

  void set_phase2_objective() {
    phase1_ = false;
    std::vector<double> c(ncols_, 0.0);
    for (int j = 0; j < n_; ++j) c[j] = lp_.objective[j];
    set_objective(c);
    bland_ = false;
    degenerate_run_ = 0;
  }

  bool phase1_infeasible() const {
    double total = 0.0;
    for (int i = 0; i < m_; ++i)
      if (basis_[i] >= n_ + m_) total += std::abs(xb_[i]);
    return total > 1e-7;
  }

  void freeze_artificials() {
    for (int a = n_ + m_; a < ncols_; ++a) {
      lo_[a] = 0.0;
      up_[a] = 0.0;
      if (state_[a] != VarState::Basic) state_[a] = VarState::AtLower;
    }
  }

  int pick_entering() const {
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < ncols_; ++j) {
      if (state_[j] == VarState::Basic) continue;
      if (lo_[j] == up_[j]) continue;  // fixed
      double dj = d_[j];
      bool eligible = (state_[j] == VarState::AtLower && dj > kOptTol) ||
                      (state_[j] == VarState::AtUpper && dj < -kOptTol);
      if (!eligible) continue;
      if (bland_) return j;
      double score = std::abs(dj);
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  enum class StepResult { PhaseOptimal, Pivoted, Unbounded };

  // One bounded-variable pivot (or bound flip).
  StepResult step() {
    int q = pick_entering();
    if (q < 0) return StepResult::PhaseOptimal;
    double dir = state_[q] == VarState::AtLower ? 1.0 : -1.0;

    double t_limit = up_[q] - lo_[q];  // bound-flip distance, may be inf
    int leave_row = -1;
    double leave_t = kInf;
    double leave_coef = 0.0;
    bool leave_to_upper = false;

    for (int i = 0; i < m_; ++i) {
      double coef = row(i)[q] * dir;
      if (std::abs(coef) <= kPivotTol) continue;
      double t;
      bool to_upper;
      if (coef > 0) {  // basic value decreases toward its lower bound
        if (lo_[basis_[i]] == -kInf) continue;
        t = (xb_[i] - lo_[basis_[i]]) / coef;
        to_upper = false;
      } else {  // basic value increases toward its upper bound
        if (up_[basis_[i]] == kInf) continue;
        t = (up_[basis_[i]] - xb_[i]) / (-coef);
        to_upper = true;
      }
      if (t < 0) t = 0;
      bool better = false;
      if (t < leave_t - 1e-15) {
        better = true;
      } else if (t <= leave_t + 1e-15 && leave_row >= 0) {
        if (bland_) {
          better = basis_[i] < basis_[leave_row];
        } else {
          better = std::abs(coef) > std::abs(leave_coef);
        }
      }
      if (better || leave_row < 0) {
        leave_row = i;
        leave_t = t;
        leave_coef = coef;
        leave_to_upper = to_upper;
      }
    }

    double t_star = std::min(t_limit, leave_t);
    if (t_star == kInf) {
      if (phase1_) throw SolverError("phase-1 objective unbounded (numerical failure)");
      return StepResult::Unbounded;
    }

    if (t_star > 1e-12)
      degenerate_run_ = 0;
    else if (++degenerate_run_ >= kDegenerateRun)
      bland_ = true;

    if (t_limit <= leave_t) {
      // Bound flip: q moves across its range, basis unchanged.
      for (int i = 0; i < m_; ++i) xb_[i] -= row(i)[q] * dir * t_star;
      state_[q] = state_[q] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
      return StepResult::Pivoted;
    }

    // Pivot q into the basis at row leave_row.
    int p = basis_[leave_row];
    double enter_value = nonbasic_value(q) + dir * t_star;
    for (int i = 0; i < m_; ++i)
      if (i != leave_row) xb_[i] -= row(i)[q] * dir * t_star;

    double* pr = row(leave_row);
    double inv = 1.0 / pr[q];
    for (int j = 0; j < ncols_; ++j) pr[j] *= inv;
    pr[q] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == leave_row) continue;
      double* t = row(i);
      double f = t[q];
      if (f == 0.0) continue;
      for (int j = 0; j < ncols_; ++j) t[j] -= f * pr[j];
      t[q] = 0.0;
    }
    {
      double f = d_[q];
      if (f != 0.0) {
        for (int j = 0; j < ncols_; ++j) d_[j] -= f * pr[j];
        d_[q] = 0.0;
      }
    }

    state_[p] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
    state_[q] = VarState::Basic;
    basis_[leave_row] = q;
    xb_[leave_row] = enter_value;
    return StepResult::Pivoted;
  }

  // Runs the active phase to optimality. Returns false if unbounded.
  bool optimize() {
    for (;;) {
      if (++iterations_ > kIterationCap)
        throw SolverError("simplex iteration cap reached");
      switch (step()) {
        case StepResult::PhaseOptimal: return true;
        case StepResult::Unbounded: return false;
        case StepResult::Pivoted: break;
      }
    }
  }

  // One pass of iterative refinement. The slack block of the tableau equals
  // B^{-1}, so a fresh residual of the equality system b - [A|I|G] z can be
  // mapped back onto the basic values in O(m^2).
  void refine() {
    std::vector<double> z(ncols_, 0.0);
    for (int j = 0; j < ncols_; ++j)
      if (state_[j] != VarState::Basic) z[j] = nonbasic_value(j);
    for (int i = 0; i < m_; ++i) z[basis_[i]] = xb_[i];

    std::vector<double> rho(m_);
    for (int i = 0; i < m_; ++i) {
      const LpRow& r = lp_.rows[i];
      double v = r.rhs;
      for (int j = 0; j < n_; ++j) v -= r.coeffs[j] * z[j];
      v -= z[n_ + i];
      if (art_col_[i] >= 0) v -= art_sign_[i] * z[art_col_[i]];
      rho[i] = v;
    }
    for (int i = 0; i < m_; ++i) {
      const double* t = row(i);
      double delta = 0.0;
      for (int k = 0; k < m_; ++k) delta += t[n_ + k] * rho[k];
      xb_[i] += delta;
    }
  }

  void extract(LpSolution& sol) {
    refine();
    sol.x.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j)
      sol.x[j] = state_[j] == VarState::AtUpper ? up_[j] : lo_[j];
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) sol.x[basis_[i]] = xb_[i];

    double obj = 0.0;
    for (int j = 0; j < n_; ++j) obj += lp_.objective[j] * sol.x[j];
    sol.objective = obj;

    double resid = 0.0;
    for (int j = 0; j < n_; ++j) {
      resid = std::max(resid, lp_.lower[j] - sol.x[j]);
      if (lp_.upper[j] != kInf) resid = std::max(resid, sol.x[j] - lp_.upper[j]);
    }
    for (const LpRow& r : lp_.rows) {
      double v = 0.0;
      for (int j = 0; j < n_; ++j) v += r.coeffs[j] * sol.x[j];
      switch (r.cmp) {
        case Cmp::Le: resid = std::max(resid, v - r.rhs); break;
        case Cmp::Ge: resid = std::max(resid, r.rhs - v); break;
        case Cmp::Eq: resid = std::max(resid, std::abs(v - r.rhs)); break;
      }
    }
    sol.max_residual = std::max(resid, 0.0);
    if (sol.max_residual > 1e-8)
      throw SolverError("optimal solution residual " + std::to_string(sol.max_residual));
  }
};

}  // namespace

LinearProgram::LinearProgram(int nvars)
    : num_vars(nvars), objective(nvars, 0.0), lower(nvars, 0.0), upper(nvars, kInf) {}

void LinearProgram::add_row(std::vector<double> coeffs, Cmp cmp, double rhs) {
  if (static_cast<int>(coeffs.size()) != num_vars)
    throw ShapeError("LP row length != variable count");
  rows.push_back(LpRow{std::move(coeffs), cmp, rhs});
}

long long LinearProgram::tableau_entries() const {
  long long cols = num_vars + 2LL * static_cast<long long>(rows.size());
  return static_cast<long long>(rows.size()) * cols;
}

void LinearProgram::dump(std::ostream& os) const {
  os << "maximize:";
  for (int j = 0; j < num_vars; ++j)
    if (objective[j] != 0.0) os << " " << objective[j] << "*x" << j;
  os << "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << "r" << i << ":";
    for (int j = 0; j < num_vars; ++j)
      if (rows[i].coeffs[j] != 0.0) os << " " << rows[i].coeffs[j] << "*x" << j;
    os << (rows[i].cmp == Cmp::Le ? " <= " : rows[i].cmp == Cmp::Eq ? " == " : " >= ")
       << rows[i].rhs << "\n";
  }
  for (int j = 0; j < num_vars; ++j) {
    os << "x" << j << " in [" << lower[j] << ", ";
    if (upper[j] == kInf)
      os << "inf";
    else
      os << upper[j];
    os << "]\n";
  }
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

LpSolution solve(const LinearProgram& lp) {
  Simplex s(lp);
  return s.run();
}

RationalProgram::RationalProgram(int nvars) : num_vars(nvars), objective(nvars, 0) {}

void RationalProgram::add_row(std::vector<Rational> coeffs, Cmp cmp, Rational rhs) {
  if (static_cast<int>(coeffs.size()) != num_vars)
    throw ShapeError("LP row length != variable count");
  rows.push_back(RationalRow{std::move(coeffs), cmp, std::move(rhs)});
}

}  // namespace nlgame
