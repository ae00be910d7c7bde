// Acceptance suite: one line per criterion, [PASS] or [FAIL], nonzero exit on
// any failure. Tolerances are pinned in code next to each check.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nlgame/audit.hpp"
#include "nlgame/game.hpp"
#include "nlgame/gamefile.hpp"
#include "nlgame/info.hpp"
#include "nlgame/lp.hpp"
#include "nlgame/strategy.hpp"
#include "nlgame/values.hpp"

using namespace nlgame;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

struct Criterion {
  std::string detail;
  bool ok = true;
  Clock::time_point start = Clock::now();

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void finish(int index, const std::string& title) {
    double dt = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("[%s] criterion %2d: %s (%.1f s)%s%s\n", ok ? "PASS" : "FAIL", index,
                title.c_str(), dt, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

JointTable random_masked_joint(const Game& g, Rng& rng) {
  AlphabetShape shape = joint_shape(g);
  const std::size_t xc = g.query_cells(), uc = g.response_cells();
  std::vector<double> mass(shape.cell_count(), 0.0);
  double sum = 0.0;
  for (std::size_t u = 0; u < uc; ++u)
    for (std::size_t x = 0; x < xc; ++x)
      if (g.query.at(x) > 0.0) sum += (mass[u * xc + x] = rng.next_exponential());
  for (double& v : mass) v /= sum;
  double drift = 1.0;
  for (double v : mass) drift -= v;
  for (std::size_t i = 0; i < mass.size(); ++i)
    if (mass[i] > 0.0) {
      mass[i] += drift;
      break;
    }
  return JointTable::distribution(shape, mass);
}

void criterion1() {
  Criterion c;
  Game chsh = builtin("chsh");
  ValueResult cl = classical_value(chsh);
  c.expect(cl.value == 0.75, "classical " + fmt(cl.value) + " != 3/4");
  double ns = ns_value(chsh).value;
  c.expect(std::abs(ns - 1.0) <= 1e-6, "ns " + fmt(ns));
  double sns = sns_value(chsh).value;
  c.expect(std::abs(sns - 1.0) <= 1e-6, "sns " + fmt(sns));
  double dt = std::chrono::duration<double>(Clock::now() - c.start).count();
  c.expect(dt < 1.0, "runtime " + fmt(dt) + " s >= 1 s");
  c.finish(1, "chsh classical 3/4, ns 1, sns 1 under 1 s");
}

void criterion2() {
  Criterion c;
  Game anti = builtin("anticorrelation");
  double ns = ns_value(anti).value;
  c.expect(std::abs(ns - 2.0 / 3) <= 1e-6, "ns " + fmt(ns));
  ValueResult ex = ns_value(anti, true);
  c.expect(ex.exact_value && *ex.exact_value == Rational(2, 3),
           "exact ns not 2/3");
  double sns = sns_value(anti).value;
  c.expect(std::abs(sns - 1.0) <= 1e-6, "sns " + fmt(sns));
  double dt = std::chrono::duration<double>(Clock::now() - c.start).count();
  c.expect(dt < 5.0, "runtime " + fmt(dt) + " s >= 5 s");
  c.finish(2, "anticorrelation ns 2/3 (exactly, via the rational oracle), sns 1");
}

void criterion3() {
  Criterion c;
  double v = threshold_value(builtin("anticorrelation"), 2, 1.0, StrategyClass::Ns).value;
  c.expect(std::abs(v - 2.0 / 3) <= 1e-6, "value " + fmt(v));
  double dt = std::chrono::duration<double>(Clock::now() - c.start).count();
  c.expect(dt < 600.0, "runtime " + fmt(dt) + " s >= 10 min");
  c.finish(3, "repeated nonsignalling value: anticorrelation n=2 threshold 1 is 2/3");
}

void criterion4() {
  Criterion c;
  Rng rng(8472);
  std::vector<int> xs{2, 2}, us{2, 2};
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Game g = random_game(rng, 2, xs, us);
    double gap = std::abs(sns_value(g).value - ns_value(g).value);
    worst = std::max(worst, gap);
  }
  c.expect(worst <= 1e-6, "max |sns-ns| = " + fmt(worst));
  c.finish(4, "two-prover coincidence on 20 seeded random games");
}

void criterion5() {
  Criterion c;
  std::vector<Game> games;
  for (const char* name : {"chsh", "anticorrelation", "anticorrelation_literal",
                           "constant_win", "constant_lose"})
    games.push_back(builtin(name));
  Rng rng(5150);
  for (int trial = 0; trial < 50; ++trial) {
    int m = 2 + rng.next_int(2);
    std::vector<int> xs(m), us(m);
    for (int p = 0; p < m; ++p) {
      xs[p] = 2 + rng.next_int(2);
      us[p] = 2 + rng.next_int(2);
    }
    games.push_back(random_game(rng, m, xs, us));
  }
  for (std::size_t i = 0; i < games.size() && c.ok; ++i) {
    double cl = classical_value(games[i]).value;
    double ns = ns_value(games[i]).value;
    double sns = sns_value(games[i]).value;
    c.expect(cl <= ns + 1e-8 && ns <= sns + 1e-8,
             "game " + std::to_string(i) + ": " + fmt(cl) + " / " + fmt(ns) + " / " +
                 fmt(sns));
  }
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    int m = 2 + rng.next_int(2);
    std::vector<int> xs(m), us(m);
    for (int p = 0; p < m; ++p) {
      xs[p] = 2 + rng.next_int(2);
      us[p] = 2 + rng.next_int(2);
    }
    AlphabetShape qs = make_party_shape(xs, Role::Query);
    AlphabetShape rs = make_party_shape(us, Role::Response);
    HvtMixture mix = random_hvt(rng, qs, rs, 1 + rng.next_int(6));
    NsReport r = is_nonsignalling(to_channel(mix, qs, rs), 1e-12);
    worst = std::max(worst, r.max_violation);
    if (!r.nonsignalling) break;
  }
  c.expect(worst <= 1e-12, "hvt violation " + fmt(worst));
  c.finish(5, "strategy-class chain and 100 hvt mixtures inside the ns polytope");
}

void criterion6() {
  Criterion c;
  Rng rng(628318);
  // (a) combined divergence identity on 500 random joints.
  double worst_id = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    int m = 2 + rng.next_int(2);
    std::vector<int> xs(m), us(m);
    for (int p = 0; p < m; ++p) {
      xs[p] = 2 + rng.next_int(2);
      us[p] = 2 + rng.next_int(2);
    }
    Game g = random_game(rng, m, xs, us);
    AlphabetShape shape = joint_shape(g);
    std::vector<double> mass(shape.cell_count());
    double sum = 0.0;
    for (double& v : mass) sum += (v = rng.next_exponential());
    for (double& v : mass) v /= sum;
    double drift = 1.0;
    for (double v : mass) drift -= v;
    mass[0] += drift;
    JointTable joint = JointTable::distribution(shape, mass);
    std::vector<int> parties(m);
    for (int p = 0; p < m; ++p) parties[p] = p;
    for (const auto& subset : proper_nonempty_subsets(parties)) {
      auto [lhs, rhs] = combined_divergence_identity(joint, g.query, subset);
      worst_id = std::max(worst_id, std::abs(lhs - rhs));
    }
  }
  c.expect(worst_id <= 1e-9, "identity gap " + fmt(worst_id));

  // (b) Pinsker on 1000 random pairs.
  bool pinsker_ok = true;
  AlphabetShape s({2, 3}, {AxisLabel{0, 0, Role::Query}, AxisLabel{1, 0, Role::Query}});
  for (int trial = 0; trial < 1000 && pinsker_ok; ++trial) {
    std::vector<double> pm(s.cell_count()), qm(s.cell_count());
    double ps = 0, qs = 0;
    for (double& v : pm) ps += (v = rng.next_exponential());
    for (double& v : qm) qs += (v = rng.next_exponential());
    for (double& v : pm) v /= ps;
    for (double& v : qm) v /= qs;
    double pd = 1.0, qd = 1.0;
    for (double v : pm) pd -= v;
    for (double v : qm) qd -= v;
    pm[0] += pd;
    qm[0] += qd;
    JointTable p = JointTable::distribution(s, pm), q = JointTable::distribution(s, qm);
    pinsker_ok = dvar(p, q) <= pinsker_bound(kl(p, q)) + 1e-12;
  }
  c.expect(pinsker_ok, "pinsker violated");

  // (c) change-of-measure identity on 100 cases (half subnormalized).
  double worst_cm = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Game g = builtin(trial % 2 ? "chsh" : "anticorrelation");
    int n = 1 + trial % 2;
    RepeatedGame rg = tensor_power(g, n);
    const std::size_t xc = rg.query_cells(), uc = rg.response_cells();
    std::vector<double> mass(xc * uc);
    for (std::size_t x = 0; x < xc; ++x) {
      double sum = 0.0;
      for (std::size_t u = 0; u < uc; ++u) sum += (mass[x * uc + u] = rng.next_exponential());
      double scale = (trial % 3 == 0 ? 0.6 + 0.3 * rng.next_double() : 1.0) / sum;
      for (std::size_t u = 0; u < uc; ++u) mass[x * uc + u] *= scale;
    }
    Channel ch = trial % 3 == 0
                     ? Channel::subchannel(rg.query_shape, rg.response_shape, mass, 1e-9)
                     : Channel::channel(rg.query_shape, rg.response_shape, mass, 1e-9);
    auto event = threshold_event(rg, 0.25 + 0.5 * rng.next_double());
    if (event_probability(rg, ch, event) <= 0.0) continue;
    ConditionedMeasure cm = condition_on_event(ch, rg, event);
    worst_cm = std::max(worst_cm, std::abs(cm.kl_bits - cm.exponent_bits));
  }
  c.expect(worst_cm <= 1e-9, "change-of-measure gap " + fmt(worst_cm));
  c.finish(6, "information identities (combined divergence, pinsker, change of measure)");
}

void criterion7() {
  Criterion c;
  Rng rng(777);
  // (a) product direction: 50 certified feasible points, n-fold products.
  struct Case { const char* game; int n; };
  const std::array<Case, 3> plan{{{"chsh", 2}, {"chsh", 3}, {"anticorrelation", 2}}};
  int produced = 0;
  double worst_val = 0.0;
  bool feasible_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const Case& pc = plan[trial % plan.size()];
    Game g = builtin(pc.game);
    double delta = std::array<double, 3>{1e-4, 1e-2, 0.1}[trial % 3];
    JointTable anchor = anchor_joint(g);
    JointTable single = random_feasible_joint(g.query, anchor, delta - 5e-9, rng);
    ApproxNsReport cert = approx_ns_check(single, g, delta);
    if (!cert.pass) { feasible_ok = false; break; }
    JointTable folded = repeat_joint(single, pc.n);
    RepeatedGame rg = tensor_power(g, pc.n);
    ApproxNsReport fr = approx_ns_check(folded, rg.query, pc.n * delta);
    if (!fr.pass) { feasible_ok = false; break; }
    // n-times the expected wins, within 1e-9.
    double expected = 0.0;
    const std::size_t xc = rg.query_cells();
    for (std::size_t cell = 0; cell < folded.cell_count(); ++cell) {
      double p = folded.at(cell);
      if (p > 0.0)
        expected += p * static_cast<double>(rg.win_count_flat(cell % xc, cell / xc));
    }
    worst_val = std::max(worst_val,
                         std::abs(expected - pc.n * joint_value(g, single)));
    ++produced;
  }
  c.expect(feasible_ok && produced == 50, "product feasibility failed");
  c.expect(worst_val <= 1e-9, "value additivity gap " + fmt(worst_val));

  // (b) single-letter direction: 100 random feasible n-fold joints.
  bool single_ok = true;
  double worst_copy = 0.0;
  for (int trial = 0; trial < 100 && single_ok; ++trial) {
    const Case& pc = plan[trial % plan.size()];
    Game g = builtin(pc.game);
    double delta = std::array<double, 2>{1e-3, 0.1}[trial % 2];
    RepeatedGame rg = tensor_power(g, pc.n);
    JointTable anchor = repeat_joint(anchor_joint(g), pc.n);
    JointTable folded = random_feasible_joint(rg.query, anchor, pc.n * delta, rng);
    if (!approx_ns_check(folded, rg.query, pc.n * delta).pass) {
      single_ok = false;
      break;
    }
    JointTable single = single_letterize(folded, g);
    if (!approx_ns_check(single, g, delta + 1e-9).pass) {
      single_ok = false;
      break;
    }
    double expected = 0.0;
    const std::size_t xc = rg.query_cells();
    for (std::size_t cell = 0; cell < folded.cell_count(); ++cell) {
      double p = folded.at(cell);
      if (p > 0.0)
        expected += p * static_cast<double>(rg.win_count_flat(cell % xc, cell / xc));
    }
    worst_copy = std::max(
        worst_copy, std::abs(expected / pc.n - joint_value(g, single)));
  }
  c.expect(single_ok, "single-letter feasibility failed");
  c.expect(worst_copy <= 1e-9, "per-copy value gap " + fmt(worst_copy));
  c.finish(7, "tensorization: products stay feasible, single-letterization preserves both");
}

void criterion8() {
  Criterion c;
  Rng rng(33550336);
  for (const char* name : {"chsh", "anticorrelation", "anticorrelation_literal",
                           "constant_win", "constant_lose"}) {
    Game g = builtin(name);
    double sns = sns_value(g).value;
    RepetitionConstants rc = constants(g.m);
    JointTable anchor = anchor_joint(g);
    double worst = -1.0;
    for (double delta : {1e-4, 1e-2, 0.1}) {
      double bound = sns + rc.c_prime * pinsker_bound(delta) + 1e-6;
      for (int trial = 0; trial < 200; ++trial) {
        JointTable t = random_feasible_joint(g.query, anchor, delta, rng);
        worst = std::max(worst, joint_value(g, t) - bound);
      }
    }
    c.expect(worst <= 0.0, std::string(name) + " exceeded by " + fmt(worst));
  }
  c.finish(8, "eta upper bound holds on 200 sampled feasible joints per game and level");
}

void criterion9() {
  Criterion c;
  Rng rng(271828);
  double worst = -1.0;
  for (int trial = 0; trial < 50; ++trial) {
    Game g = builtin(trial % 2 ? "chsh" : "anticorrelation");
    JointTable target =
        trial % 3 == 0 ? random_masked_joint(g, rng)
                       : random_feasible_joint(g.query, anchor_joint(g),
                                               0.05 + rng.next_double(), rng);
    RoundingResult r = round_to_sns(target, g);
    worst = std::max(worst, r.achieved - (r.bound + 1e-8));
  }
  c.expect(worst <= 0.0, "bound exceeded by " + fmt(worst));
  c.finish(9, "lemma-1 rounding distance within eps_empty + 2 sum eps on 50 targets");
}

void criterion10() {
  Criterion c;
  for (const char* name : {"anticorrelation", "chsh"}) {
    Game g = builtin(name);
    for (int n : {1, 2}) {
      for (double delta : {2.0 / 3, 1.0}) {
        for (StrategyClass cls : {StrategyClass::Ns, StrategyClass::Sns}) {
          Channel strategy = optimal_product_strategy(g, cls, n);
          AuditReport r = audit_theorem4(g, n, delta, strategy);
          if (!r.overall) {
            std::string bad;
            for (const AuditStep& s : r.steps)
              if (!s.pass) { bad = s.name; break; }
            c.expect(false, std::string(name) + " n=" + std::to_string(n) +
                                " delta=" + fmt(delta) + " " + to_string(cls) +
                                " failed at " + bad);
          }
        }
      }
    }
  }
  // Bound dominance wherever a margin nu exists.
  for (const char* name : {"chsh", "anticorrelation", "anticorrelation_literal",
                           "constant_win", "constant_lose"}) {
    Game g = builtin(name);
    double sns = sns_value(g).value;
    for (int n : {1, 2}) {
      for (double delta : {2.0 / 3, 1.0}) {
        double nu = std::min(1.0, delta - sns);
        if (nu <= 0.0) continue;
        double bound = repetition_bound(g.m, n, nu);
        double tv = threshold_value(g, n, delta, StrategyClass::Sns).value;
        c.expect(bound >= tv - 1e-6, std::string(name) + " n=" + std::to_string(n) +
                                         ": bound " + fmt(bound) + " < " + fmt(tv));
      }
    }
  }
  c.finish(10, "theorem audit chains pass; the repetition bound dominates thresholds");
}

void criterion11() {
  Criterion c;
  for (const char* name : {"chsh", "anticorrelation", "anticorrelation_literal",
                           "constant_win", "constant_lose"}) {
    Game g = builtin(name);
    double ns = ns_value(g).value;
    double at_zero = eta_lower_search(g, 0.0, 64, 1).value;
    c.expect(std::abs(at_zero - ns) <= 1e-4,
             std::string(name) + ": eta(0) " + fmt(at_zero) + " vs ns " + fmt(ns));
    for (double delta : {0.0, 1e-3, 0.1, 10.0}) {
      double lo = eta_lower_search(g, delta, 64, 1).value;
      double hi = eta_upper_bound(g, delta);
      c.expect(lo <= hi + 1e-6, std::string(name) + " delta " + fmt(delta) + ": " +
                                    fmt(lo) + " > " + fmt(hi));
    }
  }
  c.finish(11, "eta search matches ns at zero and stays below the lemma bound");
}

void criterion12() {
  Criterion c;
#ifdef NLGAME_CLI_PATH
  auto run = [](const std::string& args) -> std::string {
    std::string cmd = std::string(NLGAME_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return "";
    std::string out;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
      out.append(buf.data(), got);
    pclose(pipe);
    // Drop the wall-time line; everything else must match byte for byte.
    std::istringstream in(out);
    std::string line, kept;
    while (std::getline(in, line))
      if (line.find("wall_time") == std::string::npos) kept += line + "\n";
    return kept;
  };
  for (const char* args :
       {"value builtin:anticorrelation --class ns",
        "value builtin:chsh --class sns --output csv",
        "repeat builtin:chsh --n 2 --delta 0.5 --class ns",
        "bound --m 3 --n 10000 --nu 0.3",
        "eta builtin:chsh --delta 0.001 --restarts 8",
        "audit builtin:anticorrelation --n 2 --delta 1.0 --strategy ns-opt"}) {
    std::string a = run(args);
    std::string b = run(args);
    c.expect(!a.empty() && a == b, std::string("nondeterministic: ") + args);
  }
#else
  c.expect(false, "CLI path not configured");
#endif
  c.finish(12, "identical CLI invocations yield byte-identical results objects");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  criterion12();
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all 12 criteria passed\n");
  return 0;
}
