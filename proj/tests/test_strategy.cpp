#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nlgame/game.hpp"
#include "nlgame/strategy.hpp"
#include "nlgame/values.hpp"

using namespace nlgame;

TEST_CASE("constant strategy maps every query to the zero response") {
  Game g = builtin("chsh");
  DeterministicStrategy s{{{0, 0}, {0, 0}}};
  Channel ch = to_channel(s, g.query_shape, g.response_shape);
  for (std::size_t x = 0; x < 4; ++x) {
    CHECK(ch.at(x, 0) == 1.0);
    for (std::size_t u = 1; u < 4; ++u) CHECK(ch.at(x, u) == 0.0);
  }
  CHECK(value_of_channel(g, ch) == doctest::Approx(0.75));
}

TEST_CASE("equal mixture of two deterministic strategies") {
  Game g = builtin("chsh");
  HvtMixture mix{{0.5, 0.5}, {DeterministicStrategy{{{0, 0}, {0, 0}}},
                              DeterministicStrategy{{{1, 1}, {1, 1}}}}};
  Channel ch = to_channel(mix, g.query_shape, g.response_shape);
  for (std::size_t x = 0; x < 4; ++x) {
    CHECK(ch.at(x, 0) == doctest::Approx(0.5));
    CHECK(ch.at(x, 3) == doctest::Approx(0.5));
  }
}

TEST_CASE("partial strategy maps are rejected") {
  Game g = builtin("chsh");
  CHECK_THROWS_AS(to_channel(DeterministicStrategy{{{0}, {0, 0}}}, g.query_shape,
                             g.response_shape),
                  ShapeError);
  CHECK_THROWS_AS(to_channel(DeterministicStrategy{{{0, 2}, {0, 0}}}, g.query_shape,
                             g.response_shape),
                  ShapeError);
}

TEST_CASE("pr box wins chsh outright and is nonsignalling") {
  Game g = builtin("chsh");
  Channel box = pr_box();
  CHECK(value_of_channel(g, box) == doctest::Approx(1.0));
  NsReport ns = is_nonsignalling(box, 1e-12);
  CHECK(ns.nonsignalling);
  CHECK(ns.max_violation <= 1e-15);
  // Party-1 response marginal is uniform for every query pair.
  for (std::size_t x = 0; x < 4; ++x) {
    double m0 = box.at(x, 0) + box.at(x, 1);  // u1 = 0
    CHECK(m0 == doctest::Approx(0.5));
  }
}

TEST_CASE("explicit signalling channel is caught with violation 1") {
  Game g = builtin("chsh");
  // u1 := x2, u2 := 0.
  std::vector<double> mass(16, 0.0);
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      mass[static_cast<std::size_t>(x1 * 2 + x2) * 4 + (x2 * 2 + 0)] = 1.0;
  Channel ch = Channel::channel(g.query_shape, g.response_shape, mass);
  NsReport ns = is_nonsignalling(ch, 1e-9);
  CHECK_FALSE(ns.nonsignalling);
  CHECK(ns.max_violation == doctest::Approx(1.0));
  CHECK(ns.subset == std::vector<int>{0});
}

TEST_CASE("hvt mixtures are nonsignalling with tiny violations") {
  Rng rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    int m = 2 + rng.next_int(2);
    std::vector<int> xs(m), us(m);
    for (int p = 0; p < m; ++p) {
      xs[p] = 2 + rng.next_int(2);
      us[p] = 2 + rng.next_int(2);
    }
    AlphabetShape qs = make_party_shape(xs, Role::Query);
    AlphabetShape rs = make_party_shape(us, Role::Response);
    HvtMixture mix = random_hvt(rng, qs, rs, 1 + rng.next_int(5));
    NsReport ns = is_nonsignalling(to_channel(mix, qs, rs), 1e-12);
    CHECK(ns.nonsignalling);
    CHECK(ns.max_violation <= 1e-12);
  }
}

TEST_CASE("convex combinations preserve the nonsignalling property") {
  Channel box = pr_box();
  Game g = builtin("chsh");
  Channel det = to_channel(DeterministicStrategy{{{0, 1}, {0, 0}}}, g.query_shape,
                           g.response_shape);
  std::vector<double> mass(16);
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t u = 0; u < 4; ++u)
      mass[x * 4 + u] = 0.3 * box.at(x, u) + 0.7 * det.at(x, u);
  Channel mix = Channel::channel(g.query_shape, g.response_shape, mass);
  CHECK(is_nonsignalling(mix, 1e-12).nonsignalling);
}

TEST_CASE("nonsignalling channels pass the sub-nonsignalling check") {
  SnsReport r = is_sub_nonsignalling(pr_box(), 1e-9);
  CHECK(r.sub_nonsignalling);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->subsets.size() == 2);
  // Dominating channels match the box's own marginals (uniform).
  for (const Channel& q : r.witness->dominating)
    for (std::size_t xa = 0; xa < 2; ++xa)
      for (std::size_t ua = 0; ua < 2; ++ua)
        CHECK(q.at(xa, ua) == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("scaled nonsignalling subchannels stay sub-nonsignalling") {
  Channel box = pr_box();
  std::vector<double> mass = box.mass();
  for (double& v : mass) v *= 0.5;
  Channel half = Channel::subchannel(box.input_shape(), box.output_shape(), mass);
  CHECK(is_sub_nonsignalling(half, 1e-9).sub_nonsignalling);
}

TEST_CASE("signalling channels fail the sub-nonsignalling check") {
  Game g = builtin("chsh");
  std::vector<double> mass(16, 0.0);
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      mass[static_cast<std::size_t>(x1 * 2 + x2) * 4 + (x2 * 2 + x1)] = 1.0;
  Channel ch = Channel::channel(g.query_shape, g.response_shape, mass);
  SnsReport r = is_sub_nonsignalling(ch, 1e-9);
  CHECK_FALSE(r.sub_nonsignalling);
  CHECK(r.max_violation > 0.4);
}

TEST_CASE("every nonsignalling channel passes sub-nonsignalling (sampled)") {
  Rng rng(77);
  Game g = builtin("chsh");
  for (int trial = 0; trial < 10; ++trial) {
    HvtMixture mix = random_hvt(rng, g.query_shape, g.response_shape, 3);
    Channel ch = to_channel(mix, g.query_shape, g.response_shape);
    REQUIRE(is_nonsignalling(ch, 1e-9).nonsignalling);
    CHECK(is_sub_nonsignalling(ch, 1e-9).sub_nonsignalling);
  }
}

TEST_CASE("subset enumeration is proper and nonempty") {
  auto subsets = proper_nonempty_subsets({0, 1, 2});
  CHECK(subsets.size() == 6);
  for (const auto& s : subsets) {
    CHECK(!s.empty());
    CHECK(s.size() < 3);
  }
}
