#pragma once

#include <optional>
#include <string>

#include "nlgame/game.hpp"
#include "nlgame/info.hpp"
#include "nlgame/lp.hpp"
#include "nlgame/rng.hpp"
#include "nlgame/strategy.hpp"
#include "nlgame/tensor.hpp"

namespace nlgame {

enum class StrategyClass : int { Classical, Ns, Sns };

StrategyClass parse_strategy_class(const std::string& name);
const char* to_string(StrategyClass cls);

struct SolveMeta {
  LpStatus status = LpStatus::Optimal;
  double max_residual = 0.0;
  long iterations = 0;
  double runtime_sec = 0.0;
  bool exact = false;
};

struct ValueResult {
  double value = 0.0;  // clamped into [0,1]
  std::optional<Rational> exact_value;
  std::optional<Channel> channel;                 // LP optimizer witness
  std::optional<DeterministicStrategy> strategy;  // enumeration witness
  std::optional<JointTable> joint;                // search witness
  SolveMeta meta;
};

/// Exact maximum over all deterministic strategy tuples, with an argmax
/// witness. Throws BudgetError when the tuple count exceeds the cell budget.
ValueResult classical_value(const Game& game);

/// LP over channel variables with per-input unit rows and nonsignalling
/// equality rows for every proper nonempty party subset.
ValueResult ns_value(const Game& game, bool exact = false);

/// LP over subchannel variables plus, per proper nonempty subset, a
/// dominating channel with unit rows and cellwise domination rows.
ValueResult sns_value(const Game& game, bool exact = false);

/// Threshold value of the n-fold repetition: the same LP family with the
/// objective weighted by the event N >= n*delta.
ValueResult threshold_value(const Game& game, int n, double delta, StrategyClass cls);

/// n-fold product of the single-copy ns/sns optimizer. Solved exactly when
/// the game carries exact query masses, so product strategies are clean
/// vertices rather than float approximations.
Channel optimal_product_strategy(const Game& game, StrategyClass cls, int n);

/// E[omega] under the given (sub)channel.
double value_of_channel(const Game& game, const Channel& ch);

/// Success probability of an event indicator under query x channel.
double event_probability(const RepeatedGame& rg, const Channel& ch,
                         const std::vector<std::uint8_t>& event);

/// sns_value + C'_m sqrt((2 ln 2) delta); may exceed 1 and is returned raw.
double eta_upper_bound(const Game& game, double delta);

/// Joint-table layout shared by the eta machinery and the audit: response
/// axes first, then query axes, so flat = u * query_cells + x.
AlphabetShape joint_shape(const Game& game);
AlphabetShape joint_shape(const RepeatedGame& rg);

/// P_X x (nonsignalling optimizer), rows renormalized; feasible at any
/// delta >= 0 and worth ns_value.
JointTable anchor_joint(const Game& game);

/// E[omega] of a joint in the joint_shape layout.
double joint_value(const Game& game, const JointTable& joint);

/// Seeded draw from the delta-feasible set: masked softmax noise blended
/// toward `anchor` until approx_ns_check passes. Always succeeds (the anchor
/// itself is feasible).
JointTable random_feasible_joint(const JointTable& query, const JointTable& anchor,
                                 double delta, Rng& rng);

/// Multi-start projected coordinate ascent over delta-approximate
/// nonsignalling joints. Returns the best feasible point found (a certified
/// lower bound on eta); the witness is re-verified before returning.
ValueResult eta_lower_search(const Game& game, double delta, int restarts = 64,
                             std::uint64_t seed = 1);

}  // namespace nlgame
