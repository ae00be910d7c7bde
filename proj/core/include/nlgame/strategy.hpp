#pragma once

#include <optional>
#include <vector>

#include "nlgame/game.hpp"
#include "nlgame/rng.hpp"
#include "nlgame/tensor.hpp"

namespace nlgame {

/// One total response map per party: maps[i][x_i] = u_i.
struct DeterministicStrategy {
  std::vector<std::vector<int>> maps;
};

/// Convex mixture of deterministic strategy tuples.
struct HvtMixture {
  std::vector<double> weights;  // nonnegative, sums to 1 within 1e-12
  std::vector<DeterministicStrategy> components;
};

/// 0/1 channel induced by a deterministic strategy on the given alphabets.
Channel to_channel(const DeterministicStrategy& s, const AlphabetShape& query_shape,
                   const AlphabetShape& response_shape);

/// Convex mixture of the components' channels; always a normalized channel.
Channel to_channel(const HvtMixture& mix, const AlphabetShape& query_shape,
                   const AlphabetShape& response_shape);

/// Largest nonsignalling violation found, with the cells achieving it.
struct NsReport {
  bool nonsignalling = false;
  double max_violation = 0.0;
  std::vector<int> subset;           // party subset A of the worst violation
  std::size_t u_subset_flat = 0;     // u_A cell
  std::size_t x_flat_a = 0;          // full input achieving the max marginal
  std::size_t x_flat_b = 0;          // full input achieving the min marginal
};

/// Checks, for every proper nonempty party subset A, that the marginal
/// response of A does not depend on the complementary queries (within tol).
NsReport is_nonsignalling(const Channel& ch, double tol = 1e-9);

/// Dominating channels Q_{U_A|X_A}, one per proper nonempty subset A.
struct SubNsWitness {
  std::vector<std::vector<int>> subsets;
  std::vector<Channel> dominating;
  std::vector<double> violations;  // LP minimum violation per subset
};

struct SnsReport {
  bool sub_nonsignalling = false;
  double max_violation = 0.0;
  std::optional<SubNsWitness> witness;
};

/// For each proper nonempty subset A solves a small LP for a channel
/// Q_{U_A|X_A} dominating the A-marginal of `ch` cellwise. Passes when every
/// subset admits a dominating channel within tol. The per-subset LPs are
/// independent; jobs > 1 solves them concurrently with a deterministic merge.
SnsReport is_sub_nonsignalling(const Channel& ch, double tol = 1e-9, int jobs = 1);

/// The extremal nonsignalling box (1/2) 1[u1 xor u2 = x1 and x2].
Channel pr_box();

/// Uniformly random response maps.
DeterministicStrategy random_deterministic(Rng& rng, const AlphabetShape& query_shape,
                                           const AlphabetShape& response_shape);

/// Dirichlet(1) weights over `components` uniformly random deterministic tuples.
HvtMixture random_hvt(Rng& rng, const AlphabetShape& query_shape,
                      const AlphabetShape& response_shape, int components);

/// Party ids appearing in a shape's labels, sorted ascending.
std::vector<int> parties_of(const AlphabetShape& shape);

/// All proper nonempty subsets of `parties`, in mask order (deterministic).
std::vector<std::vector<int>> proper_nonempty_subsets(const std::vector<int>& parties);

}  // namespace nlgame
