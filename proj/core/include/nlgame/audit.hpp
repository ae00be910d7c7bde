#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlgame/game.hpp"
#include "nlgame/strategy.hpp"
#include "nlgame/tensor.hpp"

namespace nlgame {

/// The explicit constants governing the repetition bound:
/// c_prime = 2(2^{m+1} - 3) and c = (2 ln 2)(c_prime + 1)^2.
struct RepetitionConstants {
  int m = 2;
  double c_prime = 0.0;
  double c = 0.0;
};

RepetitionConstants constants(int m);

/// exp(-n nu^2 / C_m), natural exponential. Requires 0 < nu <= 1, n >= 1.
double repetition_bound(int m, long long n, double nu);

struct ConditionedMeasure {
  JointTable joint;  // normalized, response axes then query axes
  double exponent_bits = 0.0;       // log2(1 / P(event))
  double kl_bits = 0.0;             // D(conditioned || original), recomputed
  double event_probability = 0.0;
};

/// Conditions query x strategy on the event; the divergence from the original
/// (possibly subnormalized) measure equals the exponent within 1e-9.
ConditionedMeasure condition_on_event(const Channel& strategy, const RepeatedGame& rg,
                                      const std::vector<std::uint8_t>& event);

/// Coordinate-averaged single-copy joint of an n-fold joint (uniform random
/// coordinate). Preserves the per-copy expected-win identity.
JointTable single_letterize(const JointTable& joint, const Game& base);

/// n-fold product of a single-copy joint, in the repeated-game layout.
JointTable repeat_joint(const JointTable& single, int n);

/// Coordinate-wise product strategy on the repeated game.
Channel power_channel(const Channel& single, int n);

struct RoundingResult {
  Channel sns;        // sub-nonsignalling subchannel closest to the target
  double achieved = 0.0;  // d_var(target, query x sns)
  std::vector<std::vector<int>> subsets;  // empty set first, then mask order
  std::vector<double> eps;                // best d_var per subset
  double bound = 0.0;                     // eps_empty + 2 sum other eps
};

/// Best sub-nonsignalling approximation of a joint target (one LP), plus the
/// per-subset approximation levels (one LP each).
RoundingResult round_to_sns(const JointTable& target, const Game& game);

struct AuditStep {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs for inequalities, |lhs - rhs| deficit for equalities
  bool pass = false;
};

struct AuditReport {
  std::vector<AuditStep> steps;
  bool overall = false;
  double event_probability = 0.0;
  double exponent_bits = 0.0;
  double delta_hat = 0.0;  // exponent / n
  int n = 1;
  double threshold = 1.0;
};

/// JSON serialization with stable key order; indent < 0 emits compact form.
std::string to_json_string(const AuditReport& report, int indent = -1);

/// Runs the full proof-chain audit for one strategy on the n-fold game:
/// change of measure, per-subset inequality chains through the dominating
/// channels, expected wins, single-letterization, and the value bound.
/// Throws AuditError when a precondition fails. jobs > 1 parallelizes the
/// independent witness LPs.
AuditReport audit_theorem4(const Game& game, int n, double threshold,
                           const Channel& strategy, int jobs = 1);

}  // namespace nlgame
