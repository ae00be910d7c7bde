#include "nlgame/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "nlgame/format.hpp"
#include "nlgame/info.hpp"
#include "nlgame/lp.hpp"
#include "nlgame/values.hpp"

namespace nlgame {

namespace {

const double kLog2 = std::log(2.0);
constexpr double kEqTol = 1e-9;    // equality steps
constexpr double kIneqTol = 1e-9;  // allowed slack on inequality steps

double log2_ratio(double p, double q) { return (std::log(p) - std::log(q)) / kLog2; }

}  // namespace

RepetitionConstants constants(int m) {
  if (m < 2) throw ShapeError("constants need m >= 2");
  RepetitionConstants c;
  c.m = m;
  c.c_prime = 2.0 * (std::pow(2.0, m + 1) - 3.0);
  c.c = 2.0 * kLog2 * (c.c_prime + 1.0) * (c.c_prime + 1.0);
  return c;
}

double repetition_bound(int m, long long n, double nu) {
  if (!(nu > 0.0) || nu > 1.0) throw ShapeError("nu must lie in (0, 1]");
  if (n < 1) throw ShapeError("n must be >= 1");
  return std::exp(-static_cast<double>(n) * nu * nu / constants(m).c);
}

ConditionedMeasure condition_on_event(const Channel& strategy, const RepeatedGame& rg,
                                      const std::vector<std::uint8_t>& event) {
  const std::size_t xc = rg.query_cells(), uc = rg.response_cells();
  if (strategy.input_shape().cell_count() != xc ||
      strategy.output_shape().cell_count() != uc || event.size() != xc * uc)
    throw ShapeError("strategy/event shapes do not match the repeated game");

  AlphabetShape shape = joint_shape(rg);
  std::vector<double> original(uc * xc, 0.0);
  double pc = 0.0;
  for (std::size_t x = 0; x < xc; ++x) {
    double q = rg.query.at(x);
    if (q == 0.0) continue;
    for (std::size_t u = 0; u < uc; ++u) {
      double mass = q * strategy.at(x, u);
      original[u * xc + x] = mass;
      if (event[x * uc + u]) pc += mass;
    }
  }
  if (!(pc > 0.0)) throw ShapeError("zero-probability event");

  std::vector<double> conditioned(uc * xc, 0.0);
  for (std::size_t x = 0; x < xc; ++x)
    for (std::size_t u = 0; u < uc; ++u)
      if (event[x * uc + u]) conditioned[u * xc + x] = original[u * xc + x] / pc;
  double drift = 1.0;
  for (double v : conditioned) drift -= v;
  // Pin the total to 1 exactly so divergence preconditions hold downstream.
  if (drift != 0.0)
    *std::max_element(conditioned.begin(), conditioned.end()) += drift;

  ConditionedMeasure out{JointTable::distribution(shape, std::move(conditioned)), 0.0,
                         0.0, pc};
  out.exponent_bits = std::log2(1.0 / pc);
  JointTable original_joint = JointTable::subnormalized(shape, std::move(original));
  out.kl_bits = kl(out.joint, original_joint);
  if (std::abs(out.kl_bits - out.exponent_bits) > 1e-9)
    throw SolverError("change-of-measure identity violated: " +
                      std::to_string(out.kl_bits) + " vs " +
                      std::to_string(out.exponent_bits));
  return out;
}

JointTable single_letterize(const JointTable& joint, const Game& base) {
  const AlphabetShape& shape = joint.shape();
  // Repetition count from the coordinate labels.
  int n = 0;
  for (const AxisLabel& l : shape.labels()) n = std::max(n, l.coord + 1);
  const int m = base.m;
  for (int p = 0; p < m; ++p)
    for (int j = 0; j < n; ++j)
      if (!shape.has_axis(AxisLabel{p, j, Role::Query}) ||
          !shape.has_axis(AxisLabel{p, j, Role::Response}))
        throw ShapeError("joint lacks an axis for party " + std::to_string(p) +
                         ", coordinate " + std::to_string(j));

  AlphabetShape single_shape = joint_shape(base);
  std::vector<double> acc(single_shape.cell_count(), 0.0);
  for (int j = 0; j < n; ++j) {
    std::vector<int> axes;
    for (int p = 0; p < m; ++p) axes.push_back(shape.axis_of(AxisLabel{p, j, Role::Response}));
    for (int p = 0; p < m; ++p) axes.push_back(shape.axis_of(AxisLabel{p, j, Role::Query}));
    JointTable marg = marginalize(joint, axes);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += marg.at(i);
  }
  for (double& v : acc) v /= static_cast<double>(n);
  double drift = 1.0;
  for (double v : acc) drift -= v;
  if (joint.normalization() == Normalization::Distribution && drift != 0.0)
    *std::max_element(acc.begin(), acc.end()) += drift;
  JointTable single = JointTable::distribution(single_shape, std::move(acc));

  // Per-copy expected-win identity against the n-fold expectation.
  RepeatedGame rg = tensor_power(base, n);
  const std::size_t xc = rg.query_cells();
  double expected_wins = 0.0;
  for (std::size_t cell = 0; cell < joint.cell_count(); ++cell) {
    double p = joint.at(cell);
    if (p == 0.0) continue;
    std::size_t u = cell / xc, x = cell % xc;
    expected_wins += p * static_cast<double>(rg.win_count_flat(x, u));
  }
  double per_copy = joint_value(base, single);
  if (std::abs(expected_wins - n * per_copy) > 1e-9)
    throw SolverError("additivity identity violated in single_letterize");
  return single;
}

JointTable repeat_joint(const JointTable& single, int n) {
  const AlphabetShape& s = single.shape();
  const int axes = s.rank();
  const int m = axes / 2;
  JointTable prod;
  for (int j = 0; j < n; ++j) {
    std::vector<AxisLabel> labels;
    for (const AxisLabel& l : s.labels()) labels.push_back(AxisLabel{l.party, j, l.role});
    JointTable copy = JointTable::distribution(AlphabetShape(s.sizes(), labels),
                                               single.mass());
    prod = j == 0 ? copy : product(prod, copy);
  }
  // Copies are coordinate-major; reorder to the repeated-game layout
  // (response block then query block, each party-major coordinate-minor).
  std::vector<int> perm(axes * n);
  for (int p = 0; p < m; ++p)
    for (int j = 0; j < n; ++j) {
      perm[p * n + j] = j * axes + p;              // U(p, j)
      perm[m * n + p * n + j] = j * axes + m + p;  // X(p, j)
    }
  return permute_axes(prod, perm);
}

Channel power_channel(const Channel& single, int n) {
  RepeatedGame layout;  // only used for its shapes
  Game g;
  g.m = single.input_shape().rank();
  g.query_shape = single.input_shape();
  g.response_shape = single.output_shape();
  g.query = JointTable::uniform(single.input_shape());
  g.predicate.assign(g.query_cells() * g.response_cells(), 0.0);
  layout = tensor_power(g, n);

  const std::size_t xc = layout.query_cells(), uc = layout.response_cells();
  const int m = g.m;
  std::vector<double> mass(xc * uc);
  std::vector<int> x(m * n), u(m * n), xj(m), uj(m);
  for (std::size_t xf = 0; xf < xc; ++xf) {
    layout.query_shape.unflatten(xf, x);
    for (std::size_t uf = 0; uf < uc; ++uf) {
      layout.response_shape.unflatten(uf, u);
      double v = 1.0;
      for (int j = 0; j < n && v != 0.0; ++j) {
        for (int p = 0; p < m; ++p) {
          xj[p] = x[p * n + j];
          uj[p] = u[p * n + j];
        }
        v *= single.at(single.input_shape().flatten(xj),
                       single.output_shape().flatten(uj));
      }
      mass[xf * uc + uf] = v;
    }
  }
  if (single.normalization() == Normalization::Distribution)
    return Channel::channel(layout.query_shape, layout.response_shape, std::move(mass), 1e-9);
  return Channel::subchannel(layout.query_shape, layout.response_shape, std::move(mass), 1e-9);
}

RoundingResult round_to_sns(const JointTable& target, const Game& game) {
  const std::size_t xc = game.query_cells(), uc = game.response_cells();
  if (target.cell_count() != xc * uc || std::abs(target.total_mass() - 1.0) > 1e-9)
    throw ShapeError("target must be a normalized joint over (responses, queries)");
  const AlphabetShape& shape = target.shape();

  RoundingResult out;
  // eps for the empty set: distance between the query marginals.
  std::vector<int> x_axes;
  for (const AxisLabel& l : game.query_shape.labels()) x_axes.push_back(shape.axis_of(l));
  out.subsets.push_back({});
  out.eps.push_back(dvar(marginalize(target, x_axes), game.query));

  auto parties = parties_of(game.query_shape);
  const auto subsets = proper_nonempty_subsets(parties);

  // Per-subset best approximation by query x channel-on-A.
  for (const auto& subset : subsets) {
    std::vector<int> axes;
    for (int p : subset) axes.push_back(shape.axis_of(AxisLabel{p, 0, Role::Response}));
    std::vector<int> ua_axes_in_joint = axes;
    std::vector<int> keep = axes;
    keep.insert(keep.end(), x_axes.begin(), x_axes.end());
    JointTable ta = marginalize(target, keep);  // (U_A, X) with U_A leading

    std::size_t ua_cells = 1;
    for (int a : ua_axes_in_joint) ua_cells *= static_cast<std::size_t>(shape.size(a));
    std::size_t xa_cells = 1;
    for (int p : subset)
      xa_cells *= static_cast<std::size_t>(game.query_shape.size(
          game.query_shape.axis_of(AxisLabel{p, 0, Role::Query})));

    // x -> x_A flat, consistent with Q's variable order.
    std::vector<int> xa_axes;
    for (int p : subset)
      xa_axes.push_back(game.query_shape.axis_of(AxisLabel{p, 0, Role::Query}));
    auto x_to_xa = flat_projection(game.query_shape, xa_axes);

    const int nq = static_cast<int>(xa_cells * ua_cells);
    const int nt = static_cast<int>(ua_cells * xc);
    LinearProgram lp(nq + nt);
    for (int t = 0; t < nt; ++t) lp.objective[nq + t] = -1.0;
    for (std::size_t xa = 0; xa < xa_cells; ++xa) {
      std::vector<double> row(nq + nt, 0.0);
      for (std::size_t ua = 0; ua < ua_cells; ++ua) row[xa * ua_cells + ua] = 1.0;
      lp.add_row(std::move(row), Cmp::Eq, 1.0);
    }
    for (std::size_t ua = 0; ua < ua_cells; ++ua)
      for (std::size_t x = 0; x < xc; ++x) {
        double tgt = ta.at(ua * xc + x);
        double qx = game.query.at(x);
        std::size_t qvar = x_to_xa[x] * ua_cells + ua;
        std::vector<double> row(nq + nt, 0.0);
        row[qvar] = qx;
        row[nq + ua * xc + x] = 1.0;
        lp.add_row(std::move(row), Cmp::Ge, tgt);  // t >= tgt - q*Q
        std::vector<double> row2(nq + nt, 0.0);
        row2[qvar] = -qx;
        row2[nq + ua * xc + x] = 1.0;
        lp.add_row(std::move(row2), Cmp::Ge, -tgt);  // t >= q*Q - tgt
      }
    LpSolution sol = solve(lp);
    if (sol.status != LpStatus::Optimal)
      throw SolverError("rounding eps LP ended " + std::string(to_string(sol.status)));
    out.subsets.push_back(subset);
    out.eps.push_back(std::max(0.0, -sol.objective));
  }

  out.bound = out.eps[0];
  for (std::size_t k = 1; k < out.eps.size(); ++k) out.bound += 2.0 * out.eps[k];

  // One LP for the closest sub-nonsignalling subchannel.
  {
    // Variables: P'(x,u) cells, then Q blocks, then |.| slacks per (u,x).
    struct Block {
      std::vector<int> subset;
      std::size_t xa_cells, ua_cells, offset;
      std::vector<std::size_t> x_to_xa, u_to_ua;
    };
    std::vector<Block> blocks;
    std::size_t nvars = xc * uc;
    for (const auto& subset : subsets) {
      Block b;
      b.subset = subset;
      std::vector<int> xa_axes, ua_axes;
      for (int p : subset) {
        xa_axes.push_back(game.query_shape.axis_of(AxisLabel{p, 0, Role::Query}));
        ua_axes.push_back(game.response_shape.axis_of(AxisLabel{p, 0, Role::Response}));
      }
      b.x_to_xa = flat_projection(game.query_shape, xa_axes);
      b.u_to_ua = flat_projection(game.response_shape, ua_axes);
      b.xa_cells = game.query_shape.select(xa_axes).cell_count();
      b.ua_cells = game.response_shape.select(ua_axes).cell_count();
      b.offset = nvars;
      nvars += b.xa_cells * b.ua_cells;
      blocks.push_back(std::move(b));
    }
    const std::size_t t_offset = nvars;
    nvars += xc * uc;

    LinearProgram lp(static_cast<int>(nvars));
    for (std::size_t t = 0; t < xc * uc; ++t) lp.objective[t_offset + t] = -1.0;
    for (std::size_t x = 0; x < xc; ++x) {
      std::vector<double> row(nvars, 0.0);
      for (std::size_t u = 0; u < uc; ++u) row[x * uc + u] = 1.0;
      lp.add_row(std::move(row), Cmp::Le, 1.0);
    }
    for (const Block& b : blocks) {
      for (std::size_t xa = 0; xa < b.xa_cells; ++xa) {
        std::vector<double> row(nvars, 0.0);
        for (std::size_t ua = 0; ua < b.ua_cells; ++ua)
          row[b.offset + xa * b.ua_cells + ua] = 1.0;
        lp.add_row(std::move(row), Cmp::Eq, 1.0);
      }
      for (std::size_t x = 0; x < xc; ++x)
        for (std::size_t ua = 0; ua < b.ua_cells; ++ua) {
          std::vector<double> row(nvars, 0.0);
          for (std::size_t u = 0; u < uc; ++u)
            if (b.u_to_ua[u] == ua) row[x * uc + u] = 1.0;
          row[b.offset + b.x_to_xa[x] * b.ua_cells + ua] -= 1.0;
          lp.add_row(std::move(row), Cmp::Le, 0.0);
        }
    }
    for (std::size_t x = 0; x < xc; ++x)
      for (std::size_t u = 0; u < uc; ++u) {
        double tgt = target.at(u * xc + x);
        double qx = game.query.at(x);
        std::vector<double> row(nvars, 0.0);
        row[x * uc + u] = qx;
        row[t_offset + x * uc + u] = 1.0;
        lp.add_row(std::move(row), Cmp::Ge, tgt);
        std::vector<double> row2(nvars, 0.0);
        row2[x * uc + u] = -qx;
        row2[t_offset + x * uc + u] = 1.0;
        lp.add_row(std::move(row2), Cmp::Ge, -tgt);
      }
    LpSolution sol = solve(lp);
    if (sol.status != LpStatus::Optimal)
      throw SolverError("rounding LP ended " + std::string(to_string(sol.status)));
    out.achieved = std::max(0.0, -sol.objective);
    std::vector<double> mass(sol.x.begin(), sol.x.begin() + static_cast<long>(xc * uc));
    for (double& v : mass) v = std::max(v, 0.0);
    for (std::size_t x = 0; x < xc; ++x) {
      double s = 0.0;
      for (std::size_t u = 0; u < uc; ++u) s += mass[x * uc + u];
      if (s > 1.0)
        for (std::size_t u = 0; u < uc; ++u) mass[x * uc + u] /= s;
    }
    out.sns = Channel::subchannel(game.query_shape, game.response_shape, std::move(mass));
  }
  return out;
}

namespace {

struct SubsetDivergences {
  double mi = 0.0;          // I(U_A and X_{A^c} | X_A) under the conditioned joint
  double gap = 0.0;         // mi + marginal KL
  double cond_vs_q = 0.0;   // D(P~_{U_A|X_A} || Q_A | P~_{X_A})
  double full_vs_q = 0.0;   // D(P~_{U_A|X} || Q_A | P~_X)
  double full_vs_p = 0.0;   // D(P~_{U_A|X} || P_{U_A|X} | P~_X)
  double joint_kl = 0.0;    // D(P~_{U_A X} || P_{U_A X})
};

SubsetDivergences subset_divergences(const JointTable& conditioned,
                                     const RepeatedGame& rg, const Channel& strategy,
                                     const std::vector<int>& subset, const Channel& q_a,
                                     double marginal_kl) {
  SubsetDivergences d;
  const AlphabetShape& shape = conditioned.shape();
  auto parties = parties_of(rg.query_shape);
  std::vector<int> comp;
  for (int p : parties)
    if (std::find(subset.begin(), subset.end(), p) == subset.end()) comp.push_back(p);

  auto axes_for = [&](Role role, const std::vector<int>& ps) {
    std::vector<int> axes;
    for (int a = 0; a < shape.rank(); ++a) {
      const AxisLabel& l = shape.label(a);
      if (l.role == role &&
          std::find(ps.begin(), ps.end(), l.party) != ps.end())
        axes.push_back(a);
    }
    return axes;
  };
  auto ua_axes = axes_for(Role::Response, subset);
  auto xa_axes = axes_for(Role::Query, subset);
  auto xac_axes = axes_for(Role::Query, comp);
  std::vector<int> x_axes = xa_axes;
  x_axes.insert(x_axes.end(), xac_axes.begin(), xac_axes.end());
  // Keep the query axes in the repeated game's own order.
  std::vector<int> x_axes_ordered;
  for (const AxisLabel& l : rg.query_shape.labels())
    x_axes_ordered.push_back(shape.axis_of(l));

  d.mi = cond_mutual_info(conditioned, ua_axes, xac_axes, xa_axes);
  d.gap = d.mi + marginal_kl;

  // Tables: (U_A, X) marginal and conditionals of the conditioned measure.
  std::vector<int> ua_x = ua_axes;
  ua_x.insert(ua_x.end(), x_axes_ordered.begin(), x_axes_ordered.end());
  JointTable t_uax = marginalize(conditioned, ua_x);
  const std::size_t xc = rg.query_cells();
  const std::size_t ua_cells = t_uax.cell_count() / xc;

  std::vector<double> px(xc, 0.0);  // conditioned query marginal
  for (std::size_t ua = 0; ua < ua_cells; ++ua)
    for (std::size_t x = 0; x < xc; ++x) px[x] += t_uax.at(ua * xc + x);

  // x -> x_A in Q's input order; u_A flat in Q's output order matches the
  // marginalization order (both party-ascending).
  std::vector<int> xa_axes_in_q;
  for (const AxisLabel& l : q_a.input_shape().labels())
    xa_axes_in_q.push_back(rg.query_shape.axis_of(l));
  auto x_to_xa = flat_projection(rg.query_shape, xa_axes_in_q);

  // Conditioned P~(u_A | x_A): aggregate over x with the same x_A.
  const std::size_t xa_cells = q_a.input_shape().cell_count();
  std::vector<double> pxa(xa_cells, 0.0);
  std::vector<double> pua_xa(xa_cells * ua_cells, 0.0);
  for (std::size_t ua = 0; ua < ua_cells; ++ua)
    for (std::size_t x = 0; x < xc; ++x)
      pua_xa[x_to_xa[x] * ua_cells + ua] += t_uax.at(ua * xc + x);
  for (std::size_t x = 0; x < xc; ++x) pxa[x_to_xa[x]] += px[x];

  // Strategy marginal M_A(u_A | x): response order must match t_uax's u_A
  // order (party-ascending within the subset, repeated coords minor).
  std::vector<int> ua_axes_resp;
  for (int a = 0; a < rg.response_shape.rank(); ++a) {
    const AxisLabel& l = rg.response_shape.label(a);
    if (std::find(subset.begin(), subset.end(), l.party) != subset.end())
      ua_axes_resp.push_back(a);
  }
  auto u_to_ua = flat_projection(rg.response_shape, ua_axes_resp);
  const std::size_t uc = rg.response_cells();
  std::vector<double> m_a(xc * ua_cells, 0.0);
  for (std::size_t x = 0; x < xc; ++x)
    for (std::size_t u = 0; u < uc; ++u)
      m_a[x * ua_cells + u_to_ua[u]] += strategy.at(x, u);

  for (std::size_t ua = 0; ua < ua_cells; ++ua)
    for (std::size_t x = 0; x < xc; ++x) {
      double p = t_uax.at(ua * xc + x);
      if (p == 0.0) continue;
      double cond_x = p / px[x];                     // P~(u_A | x)
      std::size_t xa = x_to_xa[x];
      double cond_xa = pua_xa[xa * ua_cells + ua] / pxa[xa];  // P~(u_A | x_A)
      double qv = q_a.at(xa, ua);
      double mv = m_a[x * ua_cells + ua];
      d.full_vs_q += p * log2_ratio(cond_x, qv);
      d.cond_vs_q += p * log2_ratio(cond_xa, qv);
      d.full_vs_p += p * log2_ratio(cond_x, mv);
      d.joint_kl += p * log2_ratio(p, rg.query.at(x) * mv);
    }
  return d;
}

void push_eq(AuditReport& r, std::string name, double lhs, double rhs) {
  AuditStep s{std::move(name), lhs, rhs, std::abs(lhs - rhs), false};
  s.pass = s.slack <= kEqTol;
  r.steps.push_back(std::move(s));
}

void push_le(AuditReport& r, std::string name, double lhs, double rhs) {
  AuditStep s{std::move(name), lhs, rhs, rhs - lhs, false};
  s.pass = s.slack >= -kIneqTol;
  r.steps.push_back(std::move(s));
}

std::string subset_name(const std::vector<int>& subset) {
  std::string s = "A={";
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(subset[i]);
  }
  return s + "}";
}

}  // namespace

std::string to_json_string(const AuditReport& report, int indent) {
  nlohmann::ordered_json j;
  j["overall"] = report.overall;
  j["n"] = report.n;
  j["threshold"] = round_sig(report.threshold);
  j["event_probability"] = round_sig(report.event_probability);
  j["exponent_bits"] = round_sig(report.exponent_bits);
  j["delta_hat"] = round_sig(report.delta_hat);
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const AuditStep& s : report.steps) {
    nlohmann::ordered_json step;
    step["name"] = s.name;
    step["lhs"] = round_sig(s.lhs);
    step["rhs"] = round_sig(s.rhs);
    step["slack"] = round_sig(s.slack);
    step["pass"] = s.pass;
    steps.push_back(std::move(step));
  }
  j["steps"] = std::move(steps);
  return indent < 0 ? j.dump() : j.dump(indent);
}

AuditReport audit_theorem4(const Game& game, int n, double threshold,
                           const Channel& strategy, int jobs) {
  RepeatedGame rg = tensor_power(game, n);
  std::vector<std::uint8_t> event = threshold_event(rg, threshold);

  SnsReport sns = is_sub_nonsignalling(strategy, 1e-7, jobs);
  if (!sns.sub_nonsignalling)
    throw AuditError("precondition:sub-nonsignalling",
                     "strategy is not sub-nonsignalling (violation " +
                         std::to_string(sns.max_violation) + ")");

  double pc = event_probability(rg, strategy, event);
  if (!(pc > 0.0))
    throw AuditError("precondition:event-probability",
                     "threshold event has zero probability");

  AuditReport report;
  report.n = n;
  report.threshold = threshold;

  ConditionedMeasure cm = condition_on_event(strategy, rg, event);
  report.event_probability = cm.event_probability;
  report.exponent_bits = cm.exponent_bits;
  report.delta_hat = std::max(0.0, cm.exponent_bits / static_cast<double>(n));
  const double n_delta = cm.exponent_bits;

  // (1) change of measure: D(P~ || P) = log2 1/P(C).
  push_eq(report, "change-of-measure-identity", cm.kl_bits, cm.exponent_bits);

  // Conditioned query marginal divergence, shared by every subset.
  std::vector<int> x_axes;
  for (const AxisLabel& l : rg.query_shape.labels())
    x_axes.push_back(cm.joint.shape().axis_of(l));
  double marginal_kl = kl(marginalize(cm.joint, x_axes), rg.query);

  // (2) per-subset inequality chains through the dominating channels.
  const SubNsWitness& witness = *sns.witness;
  for (std::size_t k = 0; k < witness.subsets.size(); ++k) {
    const auto& subset = witness.subsets[k];
    SubsetDivergences d = subset_divergences(cm.joint, rg, strategy, subset,
                                             witness.dominating[k], marginal_kl);
    const std::string tag = subset_name(subset);
    push_le(report, tag + ":add-nonneg-divergence", d.gap, d.mi + d.cond_vs_q + marginal_kl);
    push_eq(report, tag + ":chain-rule-equality", d.mi + d.cond_vs_q, d.full_vs_q);
    push_le(report, tag + ":domination-inequality", d.full_vs_q, d.full_vs_p);
    push_eq(report, tag + ":joint-decomposition", d.full_vs_p + marginal_kl, d.joint_kl);
    push_le(report, tag + ":data-processing", d.joint_kl, cm.kl_bits);
    push_le(report, tag + ":soft-constraint", d.gap, n_delta);
  }

  // (3) expected wins under the conditioned measure.
  const std::size_t xc = rg.query_cells();
  double expected_wins = 0.0;
  for (std::size_t cell = 0; cell < cm.joint.cell_count(); ++cell) {
    double p = cm.joint.at(cell);
    if (p == 0.0) continue;
    expected_wins += p * static_cast<double>(rg.win_count_flat(cell % xc, cell / xc));
  }
  push_le(report, "conditioned-expected-wins", static_cast<double>(n) * threshold,
          expected_wins);

  // (4) single-letter feasibility and per-copy value.
  JointTable single = single_letterize(cm.joint, game);
  ApproxNsReport approx = approx_ns_check(single, game, report.delta_hat);
  push_le(report, "single-letter-feasibility", approx.max_gap, report.delta_hat);
  double per_copy = joint_value(game, single);
  push_le(report, "single-letter-value", threshold, per_copy);

  // (5) the eta upper bound at the realized exponent.
  double bound = eta_upper_bound(game, report.delta_hat);
  push_le(report, "value-upper-bound", per_copy, bound);

  // (6) contrapositive consistency: the threshold cannot beat the bound.
  push_le(report, "contrapositive-consistency", threshold, bound);

  report.overall = true;
  for (const AuditStep& s : report.steps) report.overall = report.overall && s.pass;
  return report;
}

}  // namespace nlgame
