#pragma once

#include <span>
#include <utility>
#include <vector>

#include "nlgame/game.hpp"
#include "nlgame/tensor.hpp"

namespace nlgame {

/// KL divergence sum p log2(p/q) in bits, with 0 log 0 = 0. Both arguments
/// may be subnormalized (plain sum, no normalization correction). Returns
/// +inf when p puts mass where q has none; *witness then names such a cell.
double kl(const JointTable& p, const JointTable& q, std::size_t* witness = nullptr);

/// Shannon entropy of the table's cells, in bits.
double entropy(const JointTable& table);

/// I(A and B | C) in bits via entropy differences; requires a normalized
/// table and disjoint axis sets. Clamped to 0 when within -1e-12 of zero.
double cond_mutual_info(const JointTable& joint, std::span<const int> a_axes,
                        std::span<const int> b_axes, std::span<const int> c_axes);

/// Full L1 distance sum |p - q|; subnormalized tables allowed.
double dvar(const JointTable& p, const JointTable& q);

/// sqrt((2 ln 2) d): the L1 bound implied by a KL divergence of d bits.
double pinsker_bound(double kl_bits);

/// Per-subset feasibility record for a delta-approximate nonsignalling test.
struct ApproxNsReport {
  std::vector<std::vector<int>> subsets;  // proper nonempty, mask order
  std::vector<double> gaps;               // bits, one per subset
  double marginal_kl = 0.0;               // D(X-marginal || query), bits
  double max_gap = 0.0;
  double delta = 0.0;
  bool pass = false;
};

/// Checks I(U_A and X_{A^c} | X_A) + D(X-marginal || query) <= delta + 1e-9
/// for every proper nonempty party subset A. The joint must be a normalized
/// distribution over the response axes and the query's axes.
ApproxNsReport approx_ns_check(const JointTable& joint, const JointTable& query,
                               double delta);
ApproxNsReport approx_ns_check(const JointTable& joint, const Game& game, double delta);

/// Both sides of the decomposition
///   D(P_{U_A X} || Q_X * P_{U_A|X_A}) = I(U_A and X_{A^c}|X_A) + D(P_X || Q_X)
/// computed by independent routes (entropy sums vs a direct divergence).
/// Returns {lhs, rhs}; they must agree within 1e-9 on normalized joints.
std::pair<double, double> combined_divergence_identity(const JointTable& joint,
                                                       const JointTable& query,
                                                       std::span<const int> subset_parties);

}  // namespace nlgame
