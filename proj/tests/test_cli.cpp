#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(NLGAME_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

json results_of(const RunResult& r) {
  REQUIRE(r.exit_code == 0);
  return json::parse(r.out).at("results");
}

}  // namespace

TEST_CASE("value subcommand on builtins") {
  json r = results_of(run_cli("value builtin:chsh --class classical"));
  CHECK(r.at("value").get<double>() == doctest::Approx(0.75));
  r = results_of(run_cli("value builtin:anticorrelation --class ns"));
  CHECK(r.at("value").get<double>() == doctest::Approx(2.0 / 3).epsilon(1e-6));
  r = results_of(run_cli("value builtin:anticorrelation --class sns"));
  CHECK(r.at("value").get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  r = results_of(run_cli("value builtin:anticorrelation --class ns --exact"));
  CHECK(r.at("value_exact").get<std::string>() == "2/3");
}

TEST_CASE("repeat subcommand") {
  json r = results_of(run_cli("repeat builtin:chsh --n 2 --delta 1.0 --class ns"));
  CHECK(r.at("value").get<double>() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("bound subcommand echoes the constants") {
  json r = results_of(run_cli("bound --m 3 --n 10000 --nu 0.3"));
  CHECK(r.at("c_prime").get<double>() == 26.0);
  CHECK(r.at("bound").get<double>() == doctest::Approx(0.4105).epsilon(1e-3));
}

TEST_CASE("audit subcommand passes with optimal products") {
  RunResult r = run_cli("audit builtin:chsh --n 2 --delta 1.0 --strategy ns-opt");
  CHECK(r.exit_code == 0);
  json audit = json::parse(r.out).at("results").at("audit");
  CHECK(audit.at("overall").get<bool>());
}

TEST_CASE("audit with a signalling strategy exits 5") {
  std::string path = "signalling_strategy.json";
  {
    // u1 := x2 on the single chsh game.
    json doc;
    std::vector<double> mass(16, 0.0);
    for (int x1 = 0; x1 < 2; ++x1)
      for (int x2 = 0; x2 < 2; ++x2)
        mass[static_cast<std::size_t>(x1 * 2 + x2) * 4 + (x2 * 2)] = 1.0;
    doc["mass"] = mass;
    doc["normalization"] = "channel";
    std::ofstream(path) << doc.dump();
  }
  RunResult r = run_cli("audit builtin:chsh --n 1 --delta 1.0 --strategy " + path);
  CHECK(r.exit_code == 5);
  std::remove(path.c_str());
}

TEST_CASE("eta subcommand reports both bounds") {
  json r = results_of(run_cli("eta builtin:chsh --delta 0 --restarts 4"));
  CHECK(r.at("lower_bound").get<double>() == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.at("lower_bound").get<double>() <= r.at("upper_bound").get<double>() + 1e-6);
}

TEST_CASE("round subcommand on an exactly nonsignalling target") {
  std::string path = "round_target.json";
  {
    // uniform queries times the box, in response-major layout.
    json doc;
    std::vector<double> mass(16, 0.0);
    for (int x1 = 0; x1 < 2; ++x1)
      for (int x2 = 0; x2 < 2; ++x2)
        for (int u1 = 0; u1 < 2; ++u1)
          for (int u2 = 0; u2 < 2; ++u2)
            if ((u1 ^ u2) == (x1 & x2))
              mass[static_cast<std::size_t>(u1 * 2 + u2) * 4 + (x1 * 2 + x2)] = 0.125;
    doc["mass"] = mass;
    std::ofstream(path) << doc.dump();
  }
  json r = results_of(run_cli("round builtin:chsh --target " + path));
  CHECK(r.at("achieved").get<double>() <= 1e-7);
  CHECK(r.at("lemma_bound_holds").get<bool>());
  std::remove(path.c_str());
}

TEST_CASE("exit code 2 on unreadable input") {
  CHECK(run_cli("value /no/such/file.json --class ns").exit_code == 2);
}

TEST_CASE("exit code 3 when the budget is exceeded") {
  RunResult r = run_cli("repeat builtin:anticorrelation --n 9 --delta 1.0 --class ns");
  CHECK(r.exit_code == 3);
}

TEST_CASE("csv output flattens the results") {
  RunResult r = run_cli("value builtin:chsh --class classical --output csv");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("key,value") == 0);
  CHECK(r.out.find("results.value,0.75") != std::string::npos);
}

TEST_CASE("identical invocations produce identical results objects") {
  for (const char* cmd :
       {"value builtin:anticorrelation --class ns",
        "repeat builtin:chsh --n 2 --delta 0.5 --class ns",
        "eta builtin:chsh --delta 0.001 --restarts 4",
        "audit builtin:anticorrelation --n 1 --delta 1.0 --strategy sns-opt"}) {
    RunResult a = run_cli(cmd);
    RunResult b = run_cli(cmd);
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(json::parse(a.out).at("results") == json::parse(b.out).at("results"));
  }
}
