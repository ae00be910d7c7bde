#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlgame/audit.hpp"
#include "nlgame/errors.hpp"
#include "nlgame/format.hpp"
#include "nlgame/gamefile.hpp"
#include "nlgame/report.hpp"
#include "nlgame/values.hpp"

namespace {

using nlgame::Report;
using ordered_json = nlohmann::ordered_json;

struct GlobalOpts {
  int jobs = 1;
  bool exact = false;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::string output = "json";
};

void emit(const Report& report, const GlobalOpts& opts) {
  if (opts.output == "csv")
    std::cout << report.to_csv();
  else
    std::cout << report.to_json(2) << "\n";
}

std::string echo_command(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) s += " ";
    s += argv[i];
  }
  return s;
}

ordered_json solver_json(const nlgame::SolveMeta& meta) {
  ordered_json j;
  j["status"] = nlgame::to_string(meta.status);
  j["residual"] = nlgame::round_sig(meta.max_residual);
  j["iterations"] = meta.iterations;
  j["exact"] = meta.exact;
  return j;
}

nlgame::Channel load_strategy_file(const std::string& path,
                                   const nlgame::RepeatedGame& rg) {
  std::ifstream in(path);
  if (!in) throw nlgame::ParseError("cannot open " + path);
  ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw nlgame::ParseError(std::string("bad strategy JSON: ") + e.what());
  }
  std::vector<double> mass = doc.at("mass").get<std::vector<double>>();
  if (mass.size() != rg.query_cells() * rg.response_cells())
    throw nlgame::ParseError("strategy mass length must be query cells x response cells");
  std::string norm = doc.value("normalization", std::string("channel"));
  if (norm == "subchannel")
    return nlgame::Channel::subchannel(rg.query_shape, rg.response_shape,
                                       std::move(mass), 1e-7);
  return nlgame::Channel::channel(rg.query_shape, rg.response_shape, std::move(mass),
                                  1e-7);
}

nlgame::JointTable load_joint_file(const std::string& path, const nlgame::Game& game) {
  std::ifstream in(path);
  if (!in) throw nlgame::ParseError("cannot open " + path);
  ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw nlgame::ParseError(std::string("bad joint JSON: ") + e.what());
  }
  std::vector<double> mass = doc.at("mass").get<std::vector<double>>();
  return nlgame::JointTable::distribution(nlgame::joint_shape(game), std::move(mass));
}

int run(int argc, char** argv) {
  CLI::App app{"nonlocal game values, repetition bounds, and proof audits"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOpts opts;
  app.add_option("--jobs", opts.jobs, "parallel LP solves where independent");
  app.add_flag("--exact", opts.exact, "use the exact rational solver when possible");
  app.add_option("--tol", opts.tol, "membership tolerance");
  app.add_option("--seed", opts.seed, "seed for randomized searches");
  app.add_option("--output", opts.output, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  std::string game_spec, cls = "ns", strategy_spec = "ns-opt", target_path;
  int n = 1, m = 3;
  long long bound_n = 1;
  double delta = 1.0, nu = 0.1, eta_delta = 0.0;
  int restarts = 64;

  CLI::App* value = app.add_subcommand("value", "single-game value");
  value->add_option("game", game_spec, "GameFile path or builtin:<name>")->required();
  value->add_option("--class", cls, "classical, ns, or sns")
      ->check(CLI::IsMember({"classical", "ns", "sns"}));

  CLI::App* repeat = app.add_subcommand("repeat", "threshold value of the n-fold game");
  repeat->add_option("game", game_spec)->required();
  repeat->add_option("--n", n, "repetitions")->required();
  repeat->add_option("--delta", delta, "win fraction threshold")->required();
  repeat->add_option("--class", cls)->check(CLI::IsMember({"ns", "sns"}));

  CLI::App* bound = app.add_subcommand("bound", "repetition bound exp(-n nu^2 / C_m)");
  bound->add_option("--m", m, "party count")->required();
  bound->add_option("--n", bound_n, "repetitions")->required();
  bound->add_option("--nu", nu, "margin above the sns value")->required();

  CLI::App* audit = app.add_subcommand("audit", "theorem proof-chain audit");
  audit->add_option("game", game_spec)->required();
  audit->add_option("--n", n)->required();
  audit->add_option("--delta", delta)->required();
  audit->add_option("--strategy", strategy_spec, "ns-opt, sns-opt, or a strategy file");

  CLI::App* round_cmd = app.add_subcommand("round", "closest sub-nonsignalling strategy");
  round_cmd->add_option("game", game_spec)->required();
  round_cmd->add_option("--target", target_path, "joint-table JSON file")->required();

  CLI::App* eta = app.add_subcommand("eta", "eta lower search and upper bound");
  eta->add_option("game", game_spec)->required();
  eta->add_option("--delta", eta_delta)->required();
  eta->add_option("--restarts", restarts);

  CLI11_PARSE(app, argc, argv);

  auto t0 = std::chrono::steady_clock::now();
  Report report;
  report.command = echo_command(argc, argv);

  if (value->parsed()) {
    nlgame::Game game = nlgame::load_game_spec(game_spec);
    report.input_digest = nlgame::game_digest(game);
    nlgame::StrategyClass sc = nlgame::parse_strategy_class(cls);
    nlgame::ValueResult res;
    switch (sc) {
      case nlgame::StrategyClass::Classical: res = nlgame::classical_value(game); break;
      case nlgame::StrategyClass::Ns: res = nlgame::ns_value(game, opts.exact); break;
      case nlgame::StrategyClass::Sns: res = nlgame::sns_value(game, opts.exact); break;
    }
    ordered_json r;
    r["game"] = game.name;
    r["class"] = cls;
    r["value"] = nlgame::round_sig(res.value);
    if (res.exact_value)
      r["value_exact"] = nlgame::rational_to_string(*res.exact_value);
    ordered_json witness;
    if (res.strategy) {
      witness["kind"] = "deterministic";
      witness["maps"] = res.strategy->maps;
      nlgame::Channel ch = nlgame::to_channel(*res.strategy, game.query_shape,
                                              game.response_shape);
      witness["reevaluated_value"] =
          nlgame::round_sig(nlgame::value_of_channel(game, ch));
    } else if (res.channel) {
      witness["kind"] = res.channel->normalization() == nlgame::Normalization::Distribution
                            ? "channel"
                            : "subchannel";
      witness["reevaluated_value"] =
          nlgame::round_sig(nlgame::value_of_channel(game, *res.channel));
    }
    r["witness"] = std::move(witness);
    r["solver"] = solver_json(res.meta);
    report.results = std::move(r);
  } else if (repeat->parsed()) {
    nlgame::Game game = nlgame::load_game_spec(game_spec);
    report.input_digest = nlgame::game_digest(game);
    nlgame::ValueResult res =
        nlgame::threshold_value(game, n, delta, nlgame::parse_strategy_class(cls));
    ordered_json r;
    r["game"] = game.name;
    r["n"] = n;
    r["delta"] = nlgame::round_sig(delta);
    r["class"] = cls;
    r["value"] = nlgame::round_sig(res.value);
    r["solver"] = solver_json(res.meta);
    report.results = std::move(r);
  } else if (bound->parsed()) {
    nlgame::RepetitionConstants c = nlgame::constants(m);
    ordered_json r;
    r["m"] = m;
    r["n"] = bound_n;
    r["nu"] = nlgame::round_sig(nu);
    r["c_prime"] = nlgame::round_sig(c.c_prime);
    r["c"] = nlgame::round_sig(c.c);
    r["bound"] = nlgame::round_sig(nlgame::repetition_bound(m, bound_n, nu));
    report.results = std::move(r);
  } else if (audit->parsed()) {
    nlgame::Game game = nlgame::load_game_spec(game_spec);
    report.input_digest = nlgame::game_digest(game);
    nlgame::Channel strategy =
        strategy_spec == "ns-opt"
            ? nlgame::optimal_product_strategy(game, nlgame::StrategyClass::Ns, n)
        : strategy_spec == "sns-opt"
            ? nlgame::optimal_product_strategy(game, nlgame::StrategyClass::Sns, n)
            : load_strategy_file(strategy_spec, nlgame::tensor_power(game, n));
    nlgame::AuditReport audit_report =
        nlgame::audit_theorem4(game, n, delta, strategy, opts.jobs);
    ordered_json r;
    r["game"] = game.name;
    r["strategy"] = strategy_spec;
    r["audit"] = nlohmann::ordered_json::parse(nlgame::to_json_string(audit_report));
    report.results = std::move(r);
    report.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(report, opts);
    if (!audit_report.overall) {
      for (const auto& step : audit_report.steps)
        if (!step.pass) {
          std::cerr << "audit failed at step: " << step.name << "\n";
          break;
        }
      return 5;
    }
    return 0;
  } else if (round_cmd->parsed()) {
    nlgame::Game game = nlgame::load_game_spec(game_spec);
    report.input_digest = nlgame::game_digest(game);
    nlgame::JointTable target = load_joint_file(target_path, game);
    nlgame::RoundingResult res = nlgame::round_to_sns(target, game);
    ordered_json r;
    r["game"] = game.name;
    r["achieved"] = nlgame::round_sig(res.achieved);
    ordered_json eps = ordered_json::array();
    for (std::size_t k = 0; k < res.eps.size(); ++k) {
      ordered_json e;
      e["subset"] = res.subsets[k];
      e["eps"] = nlgame::round_sig(res.eps[k]);
      eps.push_back(std::move(e));
    }
    r["eps"] = std::move(eps);
    r["bound"] = nlgame::round_sig(res.bound);
    r["lemma_bound_holds"] = res.achieved <= res.bound + 1e-8;
    report.results = std::move(r);
  } else if (eta->parsed()) {
    nlgame::Game game = nlgame::load_game_spec(game_spec);
    report.input_digest = nlgame::game_digest(game);
    nlgame::ValueResult lower =
        nlgame::eta_lower_search(game, eta_delta, restarts, opts.seed);
    double upper = nlgame::eta_upper_bound(game, eta_delta);
    ordered_json r;
    r["game"] = game.name;
    r["delta"] = nlgame::round_sig(eta_delta);
    r["lower_bound"] = nlgame::round_sig(lower.value);
    r["upper_bound"] = nlgame::round_sig(upper);
    r["restarts"] = restarts;
    r["seed"] = opts.seed;
    report.results = std::move(r);
  }

  report.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(report, opts);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const nlgame::AuditError& e) {
    std::cerr << "audit precondition failed at " << e.step() << ": " << e.what() << "\n";
    return 5;
  } catch (const nlgame::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const nlgame::BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 3;
  } catch (const nlgame::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 4;
  } catch (const nlgame::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
