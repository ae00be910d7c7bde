#include "nlgame/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>

#include "nlgame/lp.hpp"

namespace nlgame {

namespace {

// Axis positions of a shape belonging to the given party set.
std::vector<int> axes_of_parties(const AlphabetShape& shape, const std::vector<int>& parties) {
  std::vector<int> axes;
  for (int a = 0; a < shape.rank(); ++a)
    if (std::find(parties.begin(), parties.end(), shape.label(a).party) != parties.end())
      axes.push_back(a);
  return axes;
}

std::vector<int> complement(const std::vector<int>& parties, const std::vector<int>& subset) {
  std::vector<int> out;
  for (int p : parties)
    if (std::find(subset.begin(), subset.end(), p) == subset.end()) out.push_back(p);
  return out;
}

// Projections used by both membership checkers for one party subset A.
struct SubsetView {
  AlphabetShape xa_shape, ua_shape;
  std::vector<std::size_t> x_to_a, x_to_ac, u_to_a;
  std::size_t xa_cells = 1, xac_cells = 1, ua_cells = 1;
};

SubsetView subset_view(const Channel& ch, const std::vector<int>& subset,
                       const std::vector<int>& parties) {
  SubsetView v;
  const auto& in = ch.input_shape();
  const auto& out = ch.output_shape();
  auto xa_axes = axes_of_parties(in, subset);
  auto xac_axes = axes_of_parties(in, complement(parties, subset));
  auto ua_axes = axes_of_parties(out, subset);
  v.xa_shape = in.select(xa_axes);
  v.ua_shape = out.select(ua_axes);
  v.x_to_a = flat_projection(in, xa_axes);
  v.x_to_ac = flat_projection(in, xac_axes);
  v.u_to_a = flat_projection(out, ua_axes);
  v.xa_cells = v.xa_shape.cell_count();
  v.xac_cells = in.select(xac_axes).cell_count();
  v.ua_cells = v.ua_shape.cell_count();
  return v;
}

// Marginal response table M[(x, u_A)] = sum_{u off A} ch(u|x).
std::vector<double> subset_marginal(const Channel& ch, const SubsetView& v) {
  const std::size_t xc = ch.input_shape().cell_count();
  const std::size_t uc = ch.output_shape().cell_count();
  std::vector<double> marg(xc * v.ua_cells, 0.0);
  for (std::size_t x = 0; x < xc; ++x)
    for (std::size_t u = 0; u < uc; ++u)
      marg[x * v.ua_cells + v.u_to_a[u]] += ch.at(x, u);
  return marg;
}

}  // namespace

std::vector<int> parties_of(const AlphabetShape& shape) {
  std::set<int> set;
  for (const AxisLabel& l : shape.labels()) set.insert(l.party);
  return std::vector<int>(set.begin(), set.end());
}

std::vector<std::vector<int>> proper_nonempty_subsets(const std::vector<int>& parties) {
  const int m = static_cast<int>(parties.size());
  std::vector<std::vector<int>> subsets;
  for (unsigned mask = 1; mask + 1 < (1u << m); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) s.push_back(parties[i]);
    subsets.push_back(std::move(s));
  }
  return subsets;
}

Channel to_channel(const DeterministicStrategy& s, const AlphabetShape& query_shape,
                   const AlphabetShape& response_shape) {
  const int m = query_shape.rank();
  if (static_cast<int>(s.maps.size()) != m)
    throw ShapeError("strategy party count != query shape rank");
  for (int p = 0; p < m; ++p) {
    if (static_cast<int>(s.maps[p].size()) != query_shape.size(p))
      throw ShapeError("strategy map for party " + std::to_string(p) + " is not total");
    for (int u : s.maps[p])
      if (u < 0 || u >= response_shape.size(p))
        throw ShapeError("strategy maps outside the response alphabet");
  }
  const std::size_t xc = query_shape.cell_count();
  const std::size_t uc = response_shape.cell_count();
  std::vector<double> mass(xc * uc, 0.0);
  std::vector<int> x(m), u(m);
  for (std::size_t xf = 0; xf < xc; ++xf) {
    query_shape.unflatten(xf, x);
    for (int p = 0; p < m; ++p) u[p] = s.maps[p][x[p]];
    mass[xf * uc + response_shape.flatten(u)] = 1.0;
  }
  return Channel::channel(query_shape, response_shape, std::move(mass));
}

Channel to_channel(const HvtMixture& mix, const AlphabetShape& query_shape,
                   const AlphabetShape& response_shape) {
  if (mix.components.empty() || mix.weights.size() != mix.components.size())
    throw ShapeError("mixture needs matching weights and components");
  double total = 0.0;
  for (double w : mix.weights) {
    if (w < 0.0) throw ShapeError("negative mixture weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ShapeError("mixture weights must sum to 1");
  const std::size_t xc = query_shape.cell_count();
  const std::size_t uc = response_shape.cell_count();
  std::vector<double> mass(xc * uc, 0.0);
  for (std::size_t k = 0; k < mix.components.size(); ++k) {
    Channel c = to_channel(mix.components[k], query_shape, response_shape);
    for (std::size_t i = 0; i < mass.size(); ++i) mass[i] += mix.weights[k] * c.mass()[i];
  }
  return Channel::channel(query_shape, response_shape, std::move(mass), 1e-9);
}

NsReport is_nonsignalling(const Channel& ch, double tol) {
  auto parties = parties_of(ch.input_shape());
  NsReport report;
  report.max_violation = 0.0;
  const std::size_t xc = ch.input_shape().cell_count();
  for (const auto& subset : proper_nonempty_subsets(parties)) {
    SubsetView v = subset_view(ch, subset, parties);
    std::vector<double> marg = subset_marginal(ch, v);
    // Spread of M[(x, u_A)] over x_{A^c} for each (x_A, u_A).
    std::vector<double> lo(v.xa_cells * v.ua_cells, 2.0);
    std::vector<double> hi(v.xa_cells * v.ua_cells, -1.0);
    std::vector<std::size_t> lo_at(v.xa_cells * v.ua_cells, 0);
    std::vector<std::size_t> hi_at(v.xa_cells * v.ua_cells, 0);
    for (std::size_t x = 0; x < xc; ++x) {
      std::size_t xa = v.x_to_a[x];
      for (std::size_t ua = 0; ua < v.ua_cells; ++ua) {
        double m = marg[x * v.ua_cells + ua];
        std::size_t key = xa * v.ua_cells + ua;
        if (m < lo[key]) { lo[key] = m; lo_at[key] = x; }
        if (m > hi[key]) { hi[key] = m; hi_at[key] = x; }
      }
    }
    for (std::size_t key = 0; key < lo.size(); ++key) {
      double spread = hi[key] - lo[key];
      if (spread > report.max_violation) {
        report.max_violation = spread;
        report.subset = subset;
        report.u_subset_flat = key % v.ua_cells;
        report.x_flat_a = hi_at[key];
        report.x_flat_b = lo_at[key];
      }
    }
  }
  report.nonsignalling = report.max_violation <= tol;
  return report;
}

namespace {

struct SubsetSolve {
  double violation = 0.0;
  Channel dominating;
};

SubsetSolve solve_subset(const Channel& ch, const SubsetView& v, double tol) {
  const std::size_t xc = ch.input_shape().cell_count();
  std::vector<double> marg = subset_marginal(ch, v);

  // Variables: Q[(x_A, u_A)] then the max-violation slack s. Rows: unit
  // rows per x_A, then Q(u_A|x_A) + s >= M(u_A | x) per (x, u_A).
  const int nq = static_cast<int>(v.xa_cells * v.ua_cells);
  LinearProgram lp(nq + 1);
  lp.objective[nq] = -1.0;
  for (std::size_t xa = 0; xa < v.xa_cells; ++xa) {
    std::vector<double> row(nq + 1, 0.0);
    for (std::size_t ua = 0; ua < v.ua_cells; ++ua) row[xa * v.ua_cells + ua] = 1.0;
    lp.add_row(std::move(row), Cmp::Eq, 1.0);
  }
  for (std::size_t x = 0; x < xc; ++x) {
    std::size_t xa = v.x_to_a[x];
    for (std::size_t ua = 0; ua < v.ua_cells; ++ua) {
      std::vector<double> row(nq + 1, 0.0);
      row[xa * v.ua_cells + ua] = 1.0;
      row[nq] = 1.0;
      lp.add_row(std::move(row), Cmp::Ge, marg[x * v.ua_cells + ua]);
    }
  }
  LpSolution sol = solve(lp);
  if (sol.status != LpStatus::Optimal)
    throw SolverError("sub-nonsignalling feasibility LP ended " +
                      std::string(to_string(sol.status)));
  double viol = std::max(sol.x[nq], 0.0);

  // Repair the witness cellwise so domination holds outright in binary64.
  // Only meaningful when this subset actually admits a dominating channel.
  std::vector<double> q(sol.x.begin(), sol.x.begin() + nq);
  if (viol <= tol) {
    for (std::size_t x = 0; x < xc; ++x) {
      std::size_t xa = v.x_to_a[x];
      for (std::size_t ua = 0; ua < v.ua_cells; ++ua) {
        double m = marg[x * v.ua_cells + ua];
        double& cell = q[xa * v.ua_cells + ua];
        if (cell < m) cell = m;
      }
    }
  }
  return SubsetSolve{viol, Channel::channel(v.xa_shape, v.ua_shape, std::move(q), 1e-6)};
}

}  // namespace

SnsReport is_sub_nonsignalling(const Channel& ch, double tol, int jobs) {
  auto parties = parties_of(ch.input_shape());
  auto subsets = proper_nonempty_subsets(parties);
  std::vector<SubsetView> views;
  views.reserve(subsets.size());
  for (const auto& subset : subsets) views.push_back(subset_view(ch, subset, parties));

  std::vector<SubsetSolve> solved(subsets.size());
  if (jobs > 1) {
    std::vector<std::future<SubsetSolve>> futures;
    futures.reserve(subsets.size());
    for (std::size_t k = 0; k < subsets.size(); ++k)
      futures.push_back(std::async(std::launch::async,
                                   [&, k] { return solve_subset(ch, views[k], tol); }));
    for (std::size_t k = 0; k < subsets.size(); ++k) solved[k] = futures[k].get();
  } else {
    for (std::size_t k = 0; k < subsets.size(); ++k)
      solved[k] = solve_subset(ch, views[k], tol);
  }

  SnsReport report;
  SubNsWitness witness;
  report.max_violation = 0.0;
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    report.max_violation = std::max(report.max_violation, solved[k].violation);
    witness.subsets.push_back(subsets[k]);
    witness.violations.push_back(solved[k].violation);
    witness.dominating.push_back(std::move(solved[k].dominating));
  }
  report.sub_nonsignalling = report.max_violation <= tol;
  if (report.sub_nonsignalling) report.witness = std::move(witness);
  return report;
}

Channel pr_box() {
  const int sizes[2] = {2, 2};
  AlphabetShape in = make_party_shape(sizes, Role::Query);
  AlphabetShape out = make_party_shape(sizes, Role::Response);
  std::vector<double> mass(16, 0.0);
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      for (int u1 = 0; u1 < 2; ++u1)
        for (int u2 = 0; u2 < 2; ++u2)
          if ((u1 ^ u2) == (x1 & x2))
            mass[static_cast<std::size_t>(x1 * 2 + x2) * 4 + (u1 * 2 + u2)] = 0.5;
  return Channel::channel(std::move(in), std::move(out), std::move(mass));
}

DeterministicStrategy random_deterministic(Rng& rng, const AlphabetShape& query_shape,
                                           const AlphabetShape& response_shape) {
  DeterministicStrategy s;
  s.maps.resize(query_shape.rank());
  for (int p = 0; p < query_shape.rank(); ++p) {
    s.maps[p].resize(query_shape.size(p));
    for (int& u : s.maps[p]) u = rng.next_int(response_shape.size(p));
  }
  return s;
}

HvtMixture random_hvt(Rng& rng, const AlphabetShape& query_shape,
                      const AlphabetShape& response_shape, int components) {
  HvtMixture mix;
  mix.weights.resize(components);
  double sum = 0.0;
  for (double& w : mix.weights) {
    w = rng.next_exponential();
    sum += w;
  }
  for (double& w : mix.weights) w /= sum;
  double drift = 1.0;
  for (double w : mix.weights) drift -= w;
  *std::max_element(mix.weights.begin(), mix.weights.end()) += drift;
  for (int k = 0; k < components; ++k)
    mix.components.push_back(random_deterministic(rng, query_shape, response_shape));
  return mix;
}

}  // namespace nlgame
