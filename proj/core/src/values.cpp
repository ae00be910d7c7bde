#include "nlgame/values.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "nlgame/audit.hpp"

namespace nlgame {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Per-party flattened view of a (possibly repeated) game: one letter per
// party, query-outer / response-inner variable order for LP purposes.
struct FlatView {
  int m = 0;
  std::vector<int> xsizes, usizes;
  std::size_t xc = 1, uc = 1;
};

FlatView flat_view(const Game& g) {
  FlatView v;
  v.m = g.m;
  v.xsizes = g.query_shape.sizes();
  v.usizes = g.response_shape.sizes();
  v.xc = g.query_cells();
  v.uc = g.response_cells();
  return v;
}

FlatView flat_view(const RepeatedGame& rg) {
  FlatView v;
  v.m = rg.base.m;
  for (int p = 0; p < v.m; ++p) {
    long long xs = 1, us = 1;
    for (int j = 0; j < rg.n; ++j) {
      xs *= rg.base.query_shape.size(p);
      us *= rg.base.response_shape.size(p);
    }
    if (xs > cell_budget() || us > cell_budget())
      throw BudgetError("per-party repeated alphabet over budget");
    v.xsizes.push_back(static_cast<int>(xs));
    v.usizes.push_back(static_cast<int>(us));
  }
  v.xc = rg.query_cells();
  v.uc = rg.response_cells();
  return v;
}

// Mixed-radix composition tables for one party subset: full letters from
// (subset letter, complement letter).
struct SubsetIndexer {
  std::size_t a_cells = 1, c_cells = 1;
  std::vector<std::size_t> compose;  // [a * c_cells + c] -> full flat

  SubsetIndexer(const std::vector<int>& sizes, const std::vector<bool>& in_subset) {
    const int m = static_cast<int>(sizes.size());
    for (int i = 0; i < m; ++i)
      (in_subset[i] ? a_cells : c_cells) *= static_cast<std::size_t>(sizes[i]);
    compose.assign(a_cells * c_cells, 0);
    std::vector<int> digit(m, 0);
    // Enumerate full flats once; derive both sub-flats as we go.
    std::size_t total = 1;
    for (int s : sizes) total *= static_cast<std::size_t>(s);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rem = flat;
      for (int i = m - 1; i >= 0; --i) {
        digit[i] = static_cast<int>(rem % static_cast<std::size_t>(sizes[i]));
        rem /= static_cast<std::size_t>(sizes[i]);
      }
      std::size_t a = 0, c = 0;
      for (int i = 0; i < m; ++i) {
        if (in_subset[i])
          a = a * static_cast<std::size_t>(sizes[i]) + static_cast<std::size_t>(digit[i]);
        else
          c = c * static_cast<std::size_t>(sizes[i]) + static_cast<std::size_t>(digit[i]);
      }
      compose[a * c_cells + c] = flat;
    }
  }
};

std::vector<bool> subset_mask(int m, const std::vector<int>& subset) {
  std::vector<bool> mask(m, false);
  for (int p : subset) mask[p] = true;
  return mask;
}

// Builds the nonsignalling value LP (scalar type T selects float vs exact).
// Variables: channel cells, query-outer / response-inner.
template <typename Program, typename T, typename WeightFn>
Program build_ns_lp(const FlatView& v, WeightFn&& weight) {
  const int nvars = static_cast<int>(v.xc * v.uc);
  Program lp(nvars);
  for (std::size_t x = 0; x < v.xc; ++x)
    for (std::size_t u = 0; u < v.uc; ++u)
      lp.objective[x * v.uc + u] = weight(x, u);

  for (std::size_t x = 0; x < v.xc; ++x) {
    std::vector<T> row(nvars, T(0));
    for (std::size_t u = 0; u < v.uc; ++u) row[x * v.uc + u] = T(1);
    lp.add_row(std::move(row), Cmp::Eq, T(1));
  }

  std::vector<int> all(v.m);
  for (int i = 0; i < v.m; ++i) all[i] = i;
  for (const auto& subset : proper_nonempty_subsets(all)) {
    auto mask = subset_mask(v.m, subset);
    SubsetIndexer xi(v.xsizes, mask), ui(v.usizes, mask);
    for (std::size_t xa = 0; xa < xi.a_cells; ++xa) {
      std::size_t x_ref = xi.compose[xa * xi.c_cells + 0];
      for (std::size_t xc2 = 1; xc2 < xi.c_cells; ++xc2) {
        std::size_t x_alt = xi.compose[xa * xi.c_cells + xc2];
        for (std::size_t ua = 0; ua < ui.a_cells; ++ua) {
          std::vector<T> row(nvars, T(0));
          for (std::size_t uc2 = 0; uc2 < ui.c_cells; ++uc2) {
            std::size_t u = ui.compose[ua * ui.c_cells + uc2];
            row[x_alt * v.uc + u] += T(1);
            row[x_ref * v.uc + u] -= T(1);
          }
          lp.add_row(std::move(row), Cmp::Eq, T(0));
        }
      }
    }
  }
  return lp;
}

// Builds the sub-nonsignalling value LP: subchannel cells plus one dominating
// channel block per proper nonempty subset.
template <typename Program, typename T, typename WeightFn>
Program build_sns_lp(const FlatView& v, WeightFn&& weight) {
  std::vector<int> all(v.m);
  for (int i = 0; i < v.m; ++i) all[i] = i;
  auto subsets = proper_nonempty_subsets(all);

  const std::size_t pvars = v.xc * v.uc;
  std::vector<std::size_t> q_offset;
  std::size_t nvars = pvars;
  std::vector<SubsetIndexer> xis, uis;
  for (const auto& subset : subsets) {
    auto mask = subset_mask(v.m, subset);
    xis.emplace_back(v.xsizes, mask);
    uis.emplace_back(v.usizes, mask);
    q_offset.push_back(nvars);
    nvars += xis.back().a_cells * uis.back().a_cells;
  }

  Program lp(static_cast<int>(nvars));
  for (std::size_t x = 0; x < v.xc; ++x)
    for (std::size_t u = 0; u < v.uc; ++u)
      lp.objective[x * v.uc + u] = weight(x, u);

  // Subnormalized rows of P.
  for (std::size_t x = 0; x < v.xc; ++x) {
    std::vector<T> row(nvars, T(0));
    for (std::size_t u = 0; u < v.uc; ++u) row[x * v.uc + u] = T(1);
    lp.add_row(std::move(row), Cmp::Le, T(1));
  }

  for (std::size_t k = 0; k < subsets.size(); ++k) {
    const SubsetIndexer& xi = xis[k];
    const SubsetIndexer& ui = uis[k];
    const std::size_t off = q_offset[k];
    // Unit rows of Q_A.
    for (std::size_t xa = 0; xa < xi.a_cells; ++xa) {
      std::vector<T> row(nvars, T(0));
      for (std::size_t ua = 0; ua < ui.a_cells; ++ua)
        row[off + xa * ui.a_cells + ua] = T(1);
      lp.add_row(std::move(row), Cmp::Eq, T(1));
    }
    // Domination rows: marginal of P over the complement responses <= Q_A.
    for (std::size_t xa = 0; xa < xi.a_cells; ++xa)
      for (std::size_t xc2 = 0; xc2 < xi.c_cells; ++xc2) {
        std::size_t x = xi.compose[xa * xi.c_cells + xc2];
        for (std::size_t ua = 0; ua < ui.a_cells; ++ua) {
          std::vector<T> row(nvars, T(0));
          for (std::size_t uc2 = 0; uc2 < ui.c_cells; ++uc2)
            row[x * v.uc + ui.compose[ua * ui.c_cells + uc2]] = T(1);
          row[off + xa * ui.a_cells + ua] -= T(1);
          lp.add_row(std::move(row), Cmp::Le, T(0));
        }
      }
  }
  return lp;
}

Channel channel_from_solution(const FlatView& v, const AlphabetShape& in,
                              const AlphabetShape& out, const std::vector<double>& x,
                              bool subchannel) {
  std::vector<double> mass(x.begin(), x.begin() + static_cast<long>(v.xc * v.uc));
  for (double& c : mass) c = std::max(c, 0.0);
  for (std::size_t q = 0; q < v.xc; ++q) {
    double sum = 0.0;
    for (std::size_t u = 0; u < v.uc; ++u) sum += mass[q * v.uc + u];
    if (subchannel) {
      if (sum > 1.0)
        for (std::size_t u = 0; u < v.uc; ++u) mass[q * v.uc + u] /= sum;
    } else if (sum > 0.0) {
      for (std::size_t u = 0; u < v.uc; ++u) mass[q * v.uc + u] /= sum;
    } else {
      for (std::size_t u = 0; u < v.uc; ++u) mass[q * v.uc + u] = 1.0 / static_cast<double>(v.uc);
    }
  }
  return subchannel ? Channel::subchannel(in, out, std::move(mass))
                    : Channel::channel(in, out, std::move(mass), 1e-9);
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

template <typename Fn>
ValueResult lp_value(const Game& game, bool exact, bool sns, Fn&& weight_double) {
  FlatView v = flat_view(game);
  auto t0 = Clock::now();
  ValueResult res;
  if (exact) {
    if (!game.query_exact)
      throw ShapeError("exact solve needs exact rational query masses");
    const auto& q = game.query_exact->mass;
    auto weight = [&](std::size_t x, std::size_t u) -> Rational {
      return game.predicate_at(x, u) != 0.0 ? q[x] : Rational(0);
    };
    RationalProgram lp =
        sns ? build_sns_lp<RationalProgram, Rational>(v, weight)
            : build_ns_lp<RationalProgram, Rational>(v, weight);
    RationalSolution sol = solve_exact(lp);
    if (sol.status != LpStatus::Optimal)
      throw SolverError("value LP ended " + std::string(to_string(sol.status)));
    res.exact_value = sol.objective;
    res.value = clamp01(to_double(sol.objective));
    std::vector<double> xs(v.xc * v.uc);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = to_double(sol.x[i]);
    res.channel = channel_from_solution(v, game.query_shape, game.response_shape, xs, sns);
    res.meta = SolveMeta{sol.status, 0.0, sol.iterations, seconds_since(t0), true};
    return res;
  }
  LinearProgram lp = sns ? build_sns_lp<LinearProgram, double>(v, weight_double)
                         : build_ns_lp<LinearProgram, double>(v, weight_double);
  LpSolution sol = solve(lp);
  if (sol.status != LpStatus::Optimal)
    throw SolverError("value LP ended " + std::string(to_string(sol.status)));
  res.value = clamp01(sol.objective);
  res.channel = channel_from_solution(v, game.query_shape, game.response_shape, sol.x, sns);
  res.meta = SolveMeta{sol.status, sol.max_residual, sol.iterations, seconds_since(t0), false};
  return res;
}

}  // namespace

StrategyClass parse_strategy_class(const std::string& name) {
  if (name == "classical") return StrategyClass::Classical;
  if (name == "ns") return StrategyClass::Ns;
  if (name == "sns") return StrategyClass::Sns;
  throw ParseError("unknown strategy class: " + name);
}

const char* to_string(StrategyClass cls) {
  switch (cls) {
    case StrategyClass::Classical: return "classical";
    case StrategyClass::Ns: return "ns";
    case StrategyClass::Sns: return "sns";
  }
  return "unknown";
}

ValueResult classical_value(const Game& game) {
  auto t0 = Clock::now();
  const FlatView v = flat_view(game);
  double tuples = 1.0;
  for (int p = 0; p < v.m; ++p)
    tuples *= std::pow(static_cast<double>(v.usizes[p]), v.xsizes[p]);
  if (tuples > static_cast<double>(cell_budget()))
    throw BudgetError("about " + std::to_string(tuples) +
                      " deterministic tuples exceed the enumeration budget; "
                      "use the LP relaxations instead");

  // Per-party digit of each query cell.
  std::vector<std::vector<int>> xdigit(v.xc, std::vector<int>(v.m));
  for (std::size_t x = 0; x < v.xc; ++x) {
    std::size_t rem = x;
    for (int p = v.m - 1; p >= 0; --p) {
      xdigit[x][p] = static_cast<int>(rem % static_cast<std::size_t>(v.xsizes[p]));
      rem /= static_cast<std::size_t>(v.xsizes[p]);
    }
  }

  DeterministicStrategy s;
  s.maps.resize(v.m);
  for (int p = 0; p < v.m; ++p) s.maps[p].assign(v.xsizes[p], 0);

  double best = -1.0;
  DeterministicStrategy best_s = s;
  for (;;) {
    double value = 0.0;
    for (std::size_t x = 0; x < v.xc; ++x) {
      double q = game.query.at(x);
      if (q == 0.0) continue;
      std::size_t u = 0;
      for (int p = 0; p < v.m; ++p)
        u = u * static_cast<std::size_t>(v.usizes[p]) +
            static_cast<std::size_t>(s.maps[p][xdigit[x][p]]);
      value += q * game.predicate_at(x, u);
    }
    if (value > best) {
      best = value;
      best_s = s;
    }
    // Odometer over all response maps.
    int p = 0, slot = 0;
    for (;;) {
      if (p == v.m) break;
      if (++s.maps[p][slot] < v.usizes[p]) break;
      s.maps[p][slot] = 0;
      if (++slot == v.xsizes[p]) {
        slot = 0;
        ++p;
      }
    }
    if (p == v.m) break;
  }

  ValueResult res;
  res.value = clamp01(best);
  res.strategy = best_s;
  res.meta.runtime_sec = seconds_since(t0);
  return res;
}

ValueResult ns_value(const Game& game, bool exact) {
  return lp_value(game, exact, false, [&](std::size_t x, std::size_t u) {
    return game.query.at(x) * game.predicate_at(x, u);
  });
}

ValueResult sns_value(const Game& game, bool exact) {
  return lp_value(game, exact, true, [&](std::size_t x, std::size_t u) {
    return game.query.at(x) * game.predicate_at(x, u);
  });
}

ValueResult threshold_value(const Game& game, int n, double delta, StrategyClass cls) {
  if (cls == StrategyClass::Classical)
    throw BudgetError("repeated classical values are unsupported (doubly exponential "
                      "strategy space); use class ns or sns");
  RepeatedGame rg = tensor_power(game, n);
  std::vector<std::uint8_t> event = threshold_event(rg, delta);
  FlatView v = flat_view(rg);
  auto weight = [&](std::size_t x, std::size_t u) {
    return rg.query.at(x) * static_cast<double>(event[x * v.uc + u]);
  };
  auto t0 = Clock::now();
  LinearProgram lp = cls == StrategyClass::Sns
                         ? build_sns_lp<LinearProgram, double>(v, weight)
                         : build_ns_lp<LinearProgram, double>(v, weight);
  LpSolution sol = solve(lp);
  if (sol.status != LpStatus::Optimal)
    throw SolverError("threshold LP ended " + std::string(to_string(sol.status)));
  ValueResult res;
  res.value = clamp01(sol.objective);
  res.channel = channel_from_solution(v, rg.query_shape, rg.response_shape, sol.x,
                                      cls == StrategyClass::Sns);
  res.meta = SolveMeta{sol.status, sol.max_residual, sol.iterations, seconds_since(t0), false};
  return res;
}

Channel optimal_product_strategy(const Game& game, StrategyClass cls, int n) {
  if (cls == StrategyClass::Classical)
    throw ShapeError("product strategies are built from ns or sns optimizers");
  bool exact = game.query_exact.has_value();
  ValueResult single =
      cls == StrategyClass::Sns ? sns_value(game, exact) : ns_value(game, exact);
  return power_channel(*single.channel, n);
}

double value_of_channel(const Game& game, const Channel& ch) {
  if (ch.input_shape().sizes() != game.query_shape.sizes() ||
      ch.output_shape().sizes() != game.response_shape.sizes())
    throw ShapeError("channel shape does not match the game");
  double value = 0.0;
  for (std::size_t x = 0; x < game.query_cells(); ++x) {
    double q = game.query.at(x);
    if (q == 0.0) continue;
    for (std::size_t u = 0; u < game.response_cells(); ++u)
      value += q * ch.at(x, u) * game.predicate_at(x, u);
  }
  return value;
}

double event_probability(const RepeatedGame& rg, const Channel& ch,
                         const std::vector<std::uint8_t>& event) {
  const std::size_t xc = rg.query_cells(), uc = rg.response_cells();
  if (ch.input_shape().cell_count() != xc || ch.output_shape().cell_count() != uc ||
      event.size() != xc * uc)
    throw ShapeError("event/channel shapes do not match the repeated game");
  double p = 0.0;
  for (std::size_t x = 0; x < xc; ++x) {
    double q = rg.query.at(x);
    if (q == 0.0) continue;
    for (std::size_t u = 0; u < uc; ++u)
      if (event[x * uc + u]) p += q * ch.at(x, u);
  }
  return p;
}

double eta_upper_bound(const Game& game, double delta) {
  if (delta < 0.0) throw ShapeError("delta must be nonnegative");
  RepetitionConstants c = constants(game.m);
  return sns_value(game).value + c.c_prime * pinsker_bound(delta);
}

AlphabetShape joint_shape(const Game& game) {
  return concat(game.response_shape, game.query_shape);
}

AlphabetShape joint_shape(const RepeatedGame& rg) {
  return concat(rg.response_shape, rg.query_shape);
}

namespace {

JointTable make_joint(const AlphabetShape& shape, std::vector<double> mass) {
  double sum = 0.0;
  for (double v : mass) sum += v;
  for (double& v : mass) v /= sum;
  return JointTable::distribution(shape, std::move(mass));
}

}  // namespace

JointTable anchor_joint(const Game& game) {
  ValueResult ns = ns_value(game);
  const std::size_t xc = game.query_cells(), uc = game.response_cells();
  std::vector<double> mass(xc * uc);
  for (std::size_t u = 0; u < uc; ++u)
    for (std::size_t x = 0; x < xc; ++x)
      mass[u * xc + x] = game.query.at(x) * ns.channel->at(x, u);
  return make_joint(joint_shape(game), std::move(mass));
}

double joint_value(const Game& game, const JointTable& joint) {
  const std::size_t xc = game.query_cells(), uc = game.response_cells();
  if (joint.cell_count() != xc * uc) throw ShapeError("joint size mismatch");
  double v = 0.0;
  for (std::size_t u = 0; u < uc; ++u)
    for (std::size_t x = 0; x < xc; ++x)
      v += joint.at(u * xc + x) * game.predicate_at(x, u);
  return v;
}

JointTable random_feasible_joint(const JointTable& query, const JointTable& anchor,
                                 double delta, Rng& rng) {
  const AlphabetShape& shape = anchor.shape();
  const std::size_t xc = query.cell_count();
  const std::size_t uc = shape.cell_count() / xc;
  std::vector<double> mass(shape.cell_count());
  for (std::size_t u = 0; u < uc; ++u)
    for (std::size_t x = 0; x < xc; ++x)
      mass[u * xc + x] =
          query.at(x) == 0.0 ? 0.0 : std::exp(2.0 * (2.0 * rng.next_double() - 1.0));
  JointTable noise = make_joint(shape, std::move(mass));
  if (approx_ns_check(noise, query, delta).pass) return noise;

  // Blend toward the anchor until membership holds, then sharpen by bisection.
  double lo = 0.0, hi = 1.0;
  auto blend = [&](double lambda) {
    std::vector<double> b(shape.cell_count());
    for (std::size_t i = 0; i < b.size(); ++i)
      b[i] = (1.0 - lambda) * noise.at(i) + lambda * anchor.at(i);
    return make_joint(shape, std::move(b));
  };
  for (int it = 0; it < 24; ++it) {
    double mid = 0.5 * (lo + hi);
    if (approx_ns_check(blend(mid), query, delta).pass)
      hi = mid;
    else
      lo = mid;
  }
  JointTable out = blend(hi);
  if (!approx_ns_check(out, query, delta).pass) return anchor;
  return out;
}

ValueResult eta_lower_search(const Game& game, double delta, int restarts,
                             std::uint64_t seed) {
  if (delta < 0.0) throw ShapeError("delta must be nonnegative");
  auto t0 = Clock::now();
  const AlphabetShape shape = joint_shape(game);
  const std::size_t xc = game.query_cells(), uc = game.response_cells();
  const JointTable anchor = anchor_joint(game);

  double best = joint_value(game, anchor);
  JointTable best_joint = anchor;

  // Winning point masses cheap enough in divergence are always feasible.
  for (std::size_t x = 0; x < xc; ++x) {
    double q = game.query.at(x);
    if (q == 0.0 || std::log2(1.0 / q) > delta + 1e-9) continue;
    for (std::size_t u = 0; u < uc; ++u) {
      if (!game.wins(x, u)) continue;
      std::vector<double> mass(shape.cell_count(), 0.0);
      mass[u * xc + x] = 1.0;
      JointTable point = JointTable::distribution(shape, std::move(mass));
      if (joint_value(game, point) > best && approx_ns_check(point, game.query, delta).pass) {
        best = joint_value(game, point);
        best_joint = point;
      }
      break;  // any winning response at this query has value 1
    }
    if (best >= 1.0 - 1e-12) break;
  }

  auto project = [&](const JointTable& t) -> JointTable {
    if (approx_ns_check(t, game.query, delta).pass) return t;
    double lo = 0.0, hi = 1.0;
    auto blend = [&](double lambda) {
      std::vector<double> b(shape.cell_count());
      for (std::size_t i = 0; i < b.size(); ++i)
        b[i] = (1.0 - lambda) * t.at(i) + lambda * anchor.at(i);
      double sum = 0.0;
      for (double v : b) sum += v;
      for (double& v : b) v /= sum;
      return JointTable::distribution(shape, std::move(b));
    };
    for (int it = 0; it < 20; ++it) {
      double mid = 0.5 * (lo + hi);
      if (approx_ns_check(blend(mid), game.query, delta).pass)
        hi = mid;
      else
        lo = mid;
    }
    return blend(hi);
  };

  for (int r = 0; r < restarts; ++r) {
    Rng rng(seed * 1000003ULL + static_cast<std::uint64_t>(r));
    std::vector<double> theta(shape.cell_count());
    for (std::size_t u = 0; u < uc; ++u)
      for (std::size_t x = 0; x < xc; ++x)
        theta[u * xc + x] = 2.0 * (2.0 * rng.next_double() - 1.0);

    auto realize = [&](const std::vector<double>& th) {
      std::vector<double> mass(shape.cell_count());
      for (std::size_t u = 0; u < uc; ++u)
        for (std::size_t x = 0; x < xc; ++x)
          mass[u * xc + x] = game.query.at(x) == 0.0 ? 0.0 : std::exp(th[u * xc + x]);
      return project(make_joint(shape, std::move(mass)));
    };

    JointTable current = realize(theta);
    double current_value = joint_value(game, current);
    for (double step : {1.0, 0.25}) {
      for (std::size_t cell = 0; cell < theta.size(); ++cell) {
        if (game.query.at(cell % xc) == 0.0) continue;
        for (double dir : {+step, -step}) {
          std::vector<double> trial = theta;
          trial[cell] += dir;
          JointTable t = realize(trial);
          double tv = joint_value(game, t);
          if (tv > current_value + 1e-12) {
            theta = std::move(trial);
            current = std::move(t);
            current_value = tv;
            break;
          }
        }
      }
    }
    if (current_value > best + 1e-12) {
      best = current_value;
      best_joint = current;
    }
  }

  if (!approx_ns_check(best_joint, game.query, delta).pass)
    throw SolverError("eta search produced an infeasible witness");
  ValueResult res;
  res.value = clamp01(best);
  res.joint = std::move(best_joint);
  res.meta.runtime_sec = seconds_since(t0);
  return res;
}

}  // namespace nlgame
