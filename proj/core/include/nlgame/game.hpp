#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlgame/rng.hpp"
#include "nlgame/tensor.hpp"

namespace nlgame {

/// A multiprover game: a query distribution over the parties' query alphabets
/// plus a binary win predicate over (query, response) cells. The predicate is
/// stored dense, query-outer / response-inner.
struct Game {
  int m = 0;
  AlphabetShape query_shape;     // m axes, X[p, 0]
  AlphabetShape response_shape;  // m axes, U[p, 0]
  JointTable query;
  std::vector<double> predicate;  // 0/1 values once validated
  std::optional<RationalTable> query_exact;
  std::string name;

  std::size_t query_cells() const { return query_shape.cell_count(); }
  std::size_t response_cells() const { return response_shape.cell_count(); }
  double predicate_at(std::size_t xflat, std::size_t uflat) const {
    return predicate[xflat * response_cells() + uflat];
  }
  bool wins(std::size_t xflat, std::size_t uflat) const {
    return predicate_at(xflat, uflat) != 0.0;
  }
};

struct Violation {
  std::string kind;  // "query-normalization", "predicate-not-binary", ...
  std::size_t cell = 0;
  double value = 0.0;
};

/// Structural checks: query sums to 1 within 1e-12, predicate entries are
/// exactly 0 or 1, m >= 2, table lengths match the shapes. Empty result means
/// the game is valid.
std::vector<Violation> validate(const Game& game);

/// The n-fold parallel repetition of a base game. Axes are party-major,
/// coordinate-minor: party p's axis for coordinate j sits at position p*n+j,
/// so each party's repeated alphabet is a contiguous index block.
struct RepeatedGame {
  Game base;
  int n = 1;
  AlphabetShape query_shape;     // m*n axes
  AlphabetShape response_shape;  // m*n axes
  JointTable query;              // n-fold product of base.query

  std::size_t query_cells() const { return query_shape.cell_count(); }
  std::size_t response_cells() const { return response_shape.cell_count(); }

  /// Number of coordinates j whose base predicate holds; range [0, n].
  int win_count(std::span<const int> x_multi, std::span<const int> u_multi) const;
  int win_count_flat(std::size_t xflat, std::size_t uflat) const;
};

/// Builds the repeated game; throws BudgetError when the derived query table
/// would exceed the cell budget (the message names the cell count).
RepeatedGame tensor_power(const Game& game, int n);

/// Dense indicator of the threshold event N >= n*delta (inclusive, exact real
/// comparison), query-outer / response-inner. Requires 0 < delta <= 1.
std::vector<std::uint8_t> threshold_event(const RepeatedGame& rg, double delta);

/// Builtin games with exact rational query masses:
///   chsh                     u1 xor u2 = x1 and x2, uniform binary queries
///   anticorrelation          3 parties, uniform weight-2 queries, responses
///                            must differ at the two query-1 positions
///   anticorrelation_literal  same queries, responses must agree wherever the
///                            queries agree
///   constant_win             predicate identically 1
///   constant_lose            predicate identically 0
Game builtin(const std::string& name);

/// Seeded random game: Dirichlet(1) query, fair-coin predicate.
Game random_game(Rng& rng, int m, std::span<const int> xsizes, std::span<const int> usizes);

}  // namespace nlgame
