#include "nlgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nlgame {

std::vector<Violation> validate(const Game& game) {
  std::vector<Violation> out;
  if (game.m < 2) out.push_back({"party-count", 0, static_cast<double>(game.m)});
  if (game.query_shape.rank() != game.m || game.response_shape.rank() != game.m)
    out.push_back({"shape-rank", 0, 0.0});
  if (game.query.shape() != game.query_shape)
    out.push_back({"query-shape", 0, 0.0});
  double sum = game.query.total_mass();
  if (std::abs(sum - 1.0) > 1e-12) out.push_back({"query-normalization", 0, sum});
  const std::size_t want = game.query_cells() * game.response_cells();
  if (game.predicate.size() != want) {
    out.push_back({"predicate-length", game.predicate.size(), static_cast<double>(want)});
    return out;
  }
  for (std::size_t i = 0; i < game.predicate.size(); ++i)
    if (game.predicate[i] != 0.0 && game.predicate[i] != 1.0)
      out.push_back({"predicate-not-binary", i, game.predicate[i]});
  return out;
}

int RepeatedGame::win_count(std::span<const int> x_multi, std::span<const int> u_multi) const {
  if (static_cast<int>(x_multi.size()) != base.m * n ||
      static_cast<int>(u_multi.size()) != base.m * n)
    throw ShapeError("repeated index rank mismatch");
  const std::size_t rcells = base.response_cells();
  int wins = 0;
  for (int j = 0; j < n; ++j) {
    std::size_t xf = 0, uf = 0;
    for (int p = 0; p < base.m; ++p) {
      xf = xf * static_cast<std::size_t>(base.query_shape.size(p)) +
           static_cast<std::size_t>(x_multi[p * n + j]);
      uf = uf * static_cast<std::size_t>(base.response_shape.size(p)) +
           static_cast<std::size_t>(u_multi[p * n + j]);
    }
    if (base.predicate[xf * rcells + uf] != 0.0) ++wins;
  }
  return wins;
}

int RepeatedGame::win_count_flat(std::size_t xflat, std::size_t uflat) const {
  std::vector<int> x(base.m * n), u(base.m * n);
  query_shape.unflatten(xflat, x);
  response_shape.unflatten(uflat, u);
  return win_count(x, u);
}

RepeatedGame tensor_power(const Game& game, int n) {
  if (n < 1) throw ShapeError("repetition count must be >= 1");
  // Budget: the derived query table.
  double cells = 1.0;
  for (int p = 0; p < game.m; ++p)
    cells *= std::pow(static_cast<double>(game.query_shape.size(p)), n);
  if (cells > static_cast<double>(cell_budget()))
    throw BudgetError("repeated query table would have about " +
                      std::to_string(static_cast<long long>(cells)) +
                      " cells, over budget");

  RepeatedGame rg;
  rg.base = game;
  rg.n = n;

  std::vector<int> qsizes, rsizes;
  std::vector<AxisLabel> qlabels, rlabels;
  for (int p = 0; p < game.m; ++p)
    for (int j = 0; j < n; ++j) {
      qsizes.push_back(game.query_shape.size(p));
      qlabels.push_back(AxisLabel{p, j, Role::Query});
      rsizes.push_back(game.response_shape.size(p));
      rlabels.push_back(AxisLabel{p, j, Role::Response});
    }
  rg.query_shape = AlphabetShape(qsizes, qlabels);
  rg.response_shape = AlphabetShape(rsizes, rlabels);

  // n-fold product (coordinate-major as built), then permute to party-major.
  std::vector<AxisLabel> copy_labels(game.m);
  JointTable q;
  for (int j = 0; j < n; ++j) {
    std::vector<int> sizes = game.query_shape.sizes();
    std::vector<AxisLabel> labels;
    for (int p = 0; p < game.m; ++p) labels.push_back(AxisLabel{p, j, Role::Query});
    JointTable copy = JointTable::distribution(AlphabetShape(sizes, labels),
                                               game.query.mass());
    q = j == 0 ? copy : product(q, copy);
  }
  std::vector<int> perm(game.m * n);
  for (int p = 0; p < game.m; ++p)
    for (int j = 0; j < n; ++j) perm[p * n + j] = j * game.m + p;
  rg.query = permute_axes(q, perm);
  return rg;
}

std::vector<std::uint8_t> threshold_event(const RepeatedGame& rg, double delta) {
  if (!(delta > 0.0) || delta > 1.0) throw ShapeError("threshold must lie in (0, 1]");
  const std::size_t qc = rg.query_cells(), rc = rg.response_cells();
  const double bar = static_cast<double>(rg.n) * delta;
  std::vector<std::uint8_t> event(qc * rc, 0);
  std::vector<int> x(rg.base.m * rg.n), u(rg.base.m * rg.n);
  for (std::size_t xf = 0; xf < qc; ++xf) {
    rg.query_shape.unflatten(xf, x);
    for (std::size_t uf = 0; uf < rc; ++uf) {
      rg.response_shape.unflatten(uf, u);
      event[xf * rc + uf] = static_cast<double>(rg.win_count(x, u)) >= bar ? 1 : 0;
    }
  }
  return event;
}

namespace {

Game make_game(std::string name, int m, std::span<const int> xsizes,
               std::span<const int> usizes, std::vector<Rational> query_mass,
               std::vector<double> predicate) {
  Game g;
  g.m = m;
  g.name = std::move(name);
  g.query_shape = make_party_shape(xsizes, Role::Query);
  g.response_shape = make_party_shape(usizes, Role::Response);
  RationalTable exact{g.query_shape, std::move(query_mass)};
  g.query = exact.to_distribution();
  g.query_exact = std::move(exact);
  g.predicate = std::move(predicate);
  return g;
}

Game make_chsh_like(const std::string& name, int predicate_mode) {
  // predicate_mode: 0 = chsh, 1 = constant win, 2 = constant lose
  const int sizes[2] = {2, 2};
  std::vector<Rational> q(4, Rational(1, 4));
  std::vector<double> w(16, 0.0);
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      for (int u1 = 0; u1 < 2; ++u1)
        for (int u2 = 0; u2 < 2; ++u2) {
          bool win = predicate_mode == 1   ? true
                     : predicate_mode == 2 ? false
                                           : ((u1 ^ u2) == (x1 & x2));
          w[static_cast<std::size_t>(x1 * 2 + x2) * 4 + (u1 * 2 + u2)] = win ? 1.0 : 0.0;
        }
  return make_game(name, 2, sizes, sizes, std::move(q), std::move(w));
}

Game make_anticorrelation(const std::string& name, bool literal) {
  const int sizes[3] = {2, 2, 2};
  std::vector<Rational> q(8, Rational(0));
  q[0b110] = Rational(1, 3);
  q[0b101] = Rational(1, 3);
  q[0b011] = Rational(1, 3);
  std::vector<double> w(64, 0.0);
  for (std::size_t xf = 0; xf < 8; ++xf) {
    int x[3] = {static_cast<int>(xf >> 2) & 1, static_cast<int>(xf >> 1) & 1,
                static_cast<int>(xf) & 1};
    for (std::size_t uf = 0; uf < 8; ++uf) {
      int u[3] = {static_cast<int>(uf >> 2) & 1, static_cast<int>(uf >> 1) & 1,
                  static_cast<int>(uf) & 1};
      bool win;
      if (literal) {
        // Responses agree wherever the queries agree.
        win = true;
        for (int i = 0; i < 3 && win; ++i)
          for (int j = i + 1; j < 3; ++j)
            if (x[i] == x[j] && u[i] != u[j]) { win = false; break; }
      } else {
        // Weight-2 query: responses differ at the two query-1 positions.
        win = false;
        if (x[0] + x[1] + x[2] == 2) {
          int i = x[0] == 1 ? 0 : 1;
          int j = x[2] == 1 ? 2 : 1;
          win = u[i] != u[j];
        }
      }
      w[xf * 8 + uf] = win ? 1.0 : 0.0;
    }
  }
  return make_game(name, 3, sizes, sizes, std::move(q), std::move(w));
}

}  // namespace

Game builtin(const std::string& name) {
  if (name == "chsh") return make_chsh_like(name, 0);
  if (name == "constant_win") return make_chsh_like(name, 1);
  if (name == "constant_lose") return make_chsh_like(name, 2);
  if (name == "anticorrelation") return make_anticorrelation(name, false);
  if (name == "anticorrelation_literal") return make_anticorrelation(name, true);
  throw ParseError("unknown builtin game: " + name);
}

Game random_game(Rng& rng, int m, std::span<const int> xsizes,
                 std::span<const int> usizes) {
  Game g;
  g.m = m;
  g.name = "random";
  g.query_shape = make_party_shape(xsizes, Role::Query);
  g.response_shape = make_party_shape(usizes, Role::Response);
  std::vector<double> q(g.query_shape.cell_count());
  double sum = 0.0;
  for (double& v : q) {
    v = rng.next_exponential();
    sum += v;
  }
  for (double& v : q) v /= sum;
  // Renormalize the largest entry so the total is exactly 1 to within 1 ulp.
  double drift = 1.0 - std::accumulate(q.begin(), q.end(), 0.0);
  *std::max_element(q.begin(), q.end()) += drift;
  g.query = JointTable::distribution(g.query_shape, std::move(q));
  g.predicate.resize(g.query_cells() * g.response_cells());
  for (double& w : g.predicate) w = rng.next_int(2) == 1 ? 1.0 : 0.0;
  return g;
}

}  // namespace nlgame
