#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "nlgame/lp.hpp"
#include "nlgame/rng.hpp"

using namespace nlgame;

TEST_CASE("box maximum") {
  LinearProgram lp(2);
  lp.objective = {1.0, 1.0};
  lp.upper = {1.0, 1.0};
  LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sol.max_residual <= 1e-8);
}

TEST_CASE("infeasible rows") {
  LinearProgram lp(1);
  lp.objective = {1.0};
  lp.add_row({1.0}, Cmp::Le, -1.0);  // x <= -1 with x >= 0
  CHECK(solve(lp).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded ray") {
  LinearProgram lp(1);
  lp.objective = {1.0};
  CHECK(solve(lp).status == LpStatus::Unbounded);
}

TEST_CASE("equality with negative coefficients") {
  // max x0 + x1 s.t. x0 - x1 = 0, x0 + x1 <= 4 -> 4 at (2, 2)
  LinearProgram lp(2);
  lp.objective = {1.0, 1.0};
  lp.add_row({1.0, -1.0}, Cmp::Eq, 0.0);
  lp.add_row({1.0, 1.0}, Cmp::Le, 4.0);
  LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(4.0));
  CHECK(sol.x[0] == doctest::Approx(2.0));
}

TEST_CASE("ge rows need a feasibility phase") {
  // max -x s.t. x >= 3 -> -3
  LinearProgram lp(1);
  lp.objective = {-1.0};
  lp.add_row({1.0}, Cmp::Ge, 3.0);
  LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-3.0));
}

TEST_CASE("exact box maximum") {
  RationalProgram lp(2);
  lp.objective = {Rational(1), Rational(1)};
  lp.add_row({Rational(1), Rational(0)}, Cmp::Le, Rational(1));
  lp.add_row({Rational(0), Rational(1)}, Cmp::Le, Rational(1));
  RationalSolution sol = solve_exact(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == Rational(2));
}

TEST_CASE("exact equality and ge rows") {
  // max x0 s.t. x0 + x1 = 1, x0 - x1 >= 0 -> 1 at (1, 0)
  RationalProgram lp(2);
  lp.objective = {Rational(1), Rational(0)};
  lp.add_row({Rational(1), Rational(1)}, Cmp::Eq, Rational(1));
  lp.add_row({Rational(1), Rational(-1)}, Cmp::Ge, Rational(0));
  RationalSolution sol = solve_exact(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == Rational(1));
  CHECK(sol.x[0] == Rational(1));
}

TEST_CASE("exact thirds stay exact") {
  // max x s.t. 3x <= 1 -> exactly 1/3
  RationalProgram lp(1);
  lp.objective = {Rational(1)};
  lp.add_row({Rational(3)}, Cmp::Le, Rational(1));
  RationalSolution sol = solve_exact(lp);
  CHECK(sol.objective == Rational(1, 3));
}

TEST_CASE("exact infeasible") {
  RationalProgram lp(1);
  lp.objective = {Rational(1)};
  lp.add_row({Rational(1)}, Cmp::Le, Rational(-1));
  CHECK(solve_exact(lp).status == LpStatus::Infeasible);
}

TEST_CASE("random cross-check floating vs exact") {
  // Seeded 2-variable LPs with integer data solved along both routes.
  Rng rng(20240817);
  int compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int c0 = rng.next_int(11) - 5, c1 = rng.next_int(11) - 5;
    LinearProgram fl(2);
    RationalProgram ex(2);
    fl.objective = {static_cast<double>(c0), static_cast<double>(c1)};
    ex.objective = {Rational(c0), Rational(c1)};
    for (int r = 0; r < 3; ++r) {
      int a0 = rng.next_int(7) - 3, a1 = rng.next_int(7) - 3;
      int b = rng.next_int(9);
      fl.add_row({static_cast<double>(a0), static_cast<double>(a1)}, Cmp::Le,
                 static_cast<double>(b));
      ex.add_row({Rational(a0), Rational(a1)}, Cmp::Le, Rational(b));
    }
    LpSolution fs = solve(fl);
    RationalSolution es = solve_exact(ex);
    REQUIRE(fs.status == es.status);
    if (fs.status == LpStatus::Optimal) {
      CHECK(fs.objective == doctest::Approx(to_double(es.objective)).epsilon(1e-9));
      // Weak-duality spot check: the float optimum cannot exceed the exact one.
      CHECK(fs.objective <= to_double(es.objective) + 1e-8);
      ++compared;
    }
  }
  CHECK(compared > 50);
}

TEST_CASE("determinism: identical program, identical solution") {
  LinearProgram lp(3);
  lp.objective = {1.0, 2.0, 0.5};
  lp.add_row({1.0, 1.0, 1.0}, Cmp::Le, 2.0);
  lp.add_row({1.0, -1.0, 0.0}, Cmp::Ge, -1.0);
  lp.add_row({0.0, 1.0, 1.0}, Cmp::Eq, 1.0);
  LpSolution a = solve(lp);
  LpSolution b = solve(lp);
  CHECK(a.objective == b.objective);
  CHECK(a.x == b.x);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("dump format lists objective, rows, bounds") {
  LinearProgram lp(2);
  lp.objective = {1.0, 0.0};
  lp.upper[1] = 3.0;
  lp.add_row({1.0, 2.0}, Cmp::Le, 5.0);
  std::ostringstream os;
  lp.dump(os);
  std::string text = os.str();
  CHECK(text.find("maximize:") != std::string::npos);
  CHECK(text.find("r0:") != std::string::npos);
  CHECK(text.find("<=") != std::string::npos);
  CHECK(text.find("x1 in [0, 3]") != std::string::npos);
}
