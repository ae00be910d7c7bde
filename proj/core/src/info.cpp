#include "nlgame/info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlgame/strategy.hpp"

namespace nlgame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog2 = std::log(2.0);

double log2_ratio(double p, double q) { return (std::log(p) - std::log(q)) / kLog2; }

// Axis positions with the given role, belonging to the party set when given.
std::vector<int> role_axes(const AlphabetShape& shape, Role role,
                           const std::vector<int>* parties = nullptr) {
  std::vector<int> axes;
  for (int a = 0; a < shape.rank(); ++a) {
    const AxisLabel& l = shape.label(a);
    if (l.role != role) continue;
    if (parties && std::find(parties->begin(), parties->end(), l.party) == parties->end())
      continue;
    axes.push_back(a);
  }
  return axes;
}

void check_normalized(const JointTable& joint) {
  if (std::abs(joint.total_mass() - 1.0) > 1e-9)
    throw ShapeError("table must be normalized, mass = " +
                     std::to_string(joint.total_mass()));
}

}  // namespace

double kl(const JointTable& p, const JointTable& q, std::size_t* witness) {
  if (p.shape().sizes() != q.shape().sizes())
    throw ShapeError("kl: shape mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.cell_count(); ++i) {
    double pi = p.at(i);
    if (pi == 0.0) continue;
    double qi = q.at(i);
    if (qi == 0.0) {
      if (witness) *witness = i;
      return kInf;
    }
    sum += pi * log2_ratio(pi, qi);
  }
  return sum;
}

double entropy(const JointTable& table) {
  double h = 0.0;
  for (std::size_t i = 0; i < table.cell_count(); ++i) {
    double p = table.at(i);
    if (p > 0.0) h -= p * std::log(p);
  }
  return h / kLog2;
}

double cond_mutual_info(const JointTable& joint, std::span<const int> a_axes,
                        std::span<const int> b_axes, std::span<const int> c_axes) {
  check_normalized(joint);
  std::vector<bool> used(joint.shape().rank(), false);
  auto mark = [&](std::span<const int> axes) {
    for (int a : axes) {
      if (a < 0 || a >= joint.shape().rank())
        throw AxisError("axis index " + std::to_string(a) + " out of range");
      if (used[a]) throw AxisError("axis sets overlap on axis " + std::to_string(a));
      used[a] = true;
    }
  };
  mark(a_axes);
  mark(b_axes);
  mark(c_axes);

  std::vector<int> ac(a_axes.begin(), a_axes.end());
  ac.insert(ac.end(), c_axes.begin(), c_axes.end());
  std::vector<int> bc(b_axes.begin(), b_axes.end());
  bc.insert(bc.end(), c_axes.begin(), c_axes.end());
  std::vector<int> abc(a_axes.begin(), a_axes.end());
  abc.insert(abc.end(), b_axes.begin(), b_axes.end());
  abc.insert(abc.end(), c_axes.begin(), c_axes.end());
  std::vector<int> c(c_axes.begin(), c_axes.end());

  double mi = entropy(marginalize(joint, ac)) + entropy(marginalize(joint, bc)) -
              entropy(marginalize(joint, abc)) - entropy(marginalize(joint, c));
  if (mi < 0.0 && mi >= -1e-12) mi = 0.0;
  return mi;
}

double dvar(const JointTable& p, const JointTable& q) {
  if (p.shape().sizes() != q.shape().sizes())
    throw ShapeError("dvar: shape mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.cell_count(); ++i) sum += std::abs(p.at(i) - q.at(i));
  return sum;
}

double pinsker_bound(double kl_bits) {
  if (kl_bits < 0.0) throw ShapeError("pinsker_bound needs a nonnegative divergence");
  return std::sqrt(2.0 * kLog2 * kl_bits);
}

ApproxNsReport approx_ns_check(const JointTable& joint, const JointTable& query,
                               double delta) {
  check_normalized(joint);
  const AlphabetShape& shape = joint.shape();
  // The joint's query axes must match the query table's axes cellwise.
  std::vector<int> x_axes;
  for (const AxisLabel& l : query.shape().labels()) {
    if (!shape.has_axis(l)) throw ShapeError("joint lacks query axis " + to_string(l));
    x_axes.push_back(shape.axis_of(l));
  }
  if (shape.select(x_axes) != query.shape())
    throw ShapeError("joint query axes do not match the query table");

  auto parties = parties_of(query.shape());
  ApproxNsReport report;
  report.delta = delta;
  report.marginal_kl = kl(marginalize(joint, x_axes), query);

  for (const auto& subset : proper_nonempty_subsets(parties)) {
    std::vector<int> comp;
    for (int p : parties)
      if (std::find(subset.begin(), subset.end(), p) == subset.end()) comp.push_back(p);
    auto ua_axes = role_axes(shape, Role::Response, &subset);
    auto xa_axes = role_axes(shape, Role::Query, &subset);
    auto xac_axes = role_axes(shape, Role::Query, &comp);
    double mi = cond_mutual_info(joint, ua_axes, xac_axes, xa_axes);
    report.subsets.push_back(subset);
    report.gaps.push_back(mi + report.marginal_kl);
  }
  report.max_gap = *std::max_element(report.gaps.begin(), report.gaps.end());
  report.pass = report.max_gap <= delta + 1e-9;
  return report;
}

ApproxNsReport approx_ns_check(const JointTable& joint, const Game& game, double delta) {
  return approx_ns_check(joint, game.query, delta);
}

std::pair<double, double> combined_divergence_identity(const JointTable& joint,
                                                       const JointTable& query,
                                                       std::span<const int> subset_parties) {
  check_normalized(joint);
  const AlphabetShape& shape = joint.shape();
  std::vector<int> subset(subset_parties.begin(), subset_parties.end());
  auto parties = parties_of(query.shape());
  std::vector<int> comp;
  for (int p : parties)
    if (std::find(subset.begin(), subset.end(), p) == subset.end()) comp.push_back(p);

  std::vector<int> x_axes;
  for (const AxisLabel& l : query.shape().labels()) x_axes.push_back(shape.axis_of(l));
  auto ua_axes = role_axes(shape, Role::Response, &subset);
  auto xa_axes = role_axes(shape, Role::Query, &subset);
  auto xac_axes = role_axes(shape, Role::Query, &comp);

  // Split route: conditional MI plus the query-marginal divergence.
  double lhs = cond_mutual_info(joint, ua_axes, xac_axes, xa_axes) +
               kl(marginalize(joint, x_axes), query);

  // Direct route: D(P_{U_A X} || Q_X * P_{U_A|X_A}) summed cell by cell.
  std::vector<int> ua_x_axes(ua_axes.begin(), ua_axes.end());
  ua_x_axes.insert(ua_x_axes.end(), x_axes.begin(), x_axes.end());
  JointTable ua_x = marginalize(joint, ua_x_axes);

  std::vector<int> ua_xa_axes(ua_axes.begin(), ua_axes.end());
  ua_xa_axes.insert(ua_xa_axes.end(), xa_axes.begin(), xa_axes.end());
  JointTable ua_xa = marginalize(joint, ua_xa_axes);
  // Conditional P(u_A | x_A) within the (U_A, X_A) marginal.
  std::vector<int> given_axes;
  for (int a = 0; a < ua_xa.shape().rank(); ++a)
    if (ua_xa.shape().label(a).role == Role::Query) given_axes.push_back(a);
  ConditionResult cond = condition(ua_xa, given_axes);

  // Projection maps from (U_A, X) cells onto the query table, the channel
  // input and the channel output, matched by axis label.
  const AlphabetShape& s = ua_x.shape();
  std::vector<int> s_x_axes, s_xa_axes, s_ua_axes;
  for (const AxisLabel& l : query.shape().labels()) s_x_axes.push_back(s.axis_of(l));
  for (const AxisLabel& l : cond.channel.input_shape().labels())
    s_xa_axes.push_back(s.axis_of(l));
  for (const AxisLabel& l : cond.channel.output_shape().labels())
    s_ua_axes.push_back(s.axis_of(l));
  auto map_x = flat_projection(s, s_x_axes);
  auto map_xa = flat_projection(s, s_xa_axes);
  auto map_ua = flat_projection(s, s_ua_axes);

  double rhs = 0.0;
  for (std::size_t cell = 0; cell < s.cell_count(); ++cell) {
    double p = ua_x.at(cell);
    if (p == 0.0) continue;
    double qx = query.at(map_x[cell]);
    double c = cond.channel.at(map_xa[cell], map_ua[cell]);
    double ref = qx * c;
    if (ref == 0.0) return {lhs, kInf};
    rhs += p * log2_ratio(p, ref);
  }
  return {lhs, rhs};
}

}  // namespace nlgame
