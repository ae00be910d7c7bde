#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nlgame/gamefile.hpp"
#include "nlgame/values.hpp"

using namespace nlgame;

namespace {

const char* kAnticorrelationFile = R"({
  "name": "anticorrelation",
  "m": 3,
  "query_alphabets": [2, 2, 2],
  "response_alphabets": [2, 2, 2],
  "query": {"kind": "support", "mass": [
    [[1, 1, 0], "1/3"], [[1, 0, 1], "1/3"], [[0, 1, 1], "1/3"]
  ]},
  "predicate": {"wins": [
    [[1, 1, 0], [0, 1, 0]], [[1, 1, 0], [0, 1, 1]],
    [[1, 1, 0], [1, 0, 0]], [[1, 1, 0], [1, 0, 1]],
    [[1, 0, 1], [0, 0, 1]], [[1, 0, 1], [0, 1, 1]],
    [[1, 0, 1], [1, 0, 0]], [[1, 0, 1], [1, 1, 0]],
    [[0, 1, 1], [0, 0, 1]], [[0, 1, 1], [1, 0, 1]],
    [[0, 1, 1], [0, 1, 0]], [[0, 1, 1], [1, 1, 0]]
  ]}
})";

}  // namespace

TEST_CASE("support-form file reproduces the builtin game") {
  Game g = parse_game_json(kAnticorrelationFile);
  CHECK(validate(g).empty());
  Game b = builtin("anticorrelation");
  CHECK(g.query.mass() == b.query.mass());
  CHECK(g.predicate == b.predicate);
  REQUIRE(g.query_exact.has_value());
  CHECK(g.query_exact->mass[0b110] == Rational(1, 3));
  // Exact masses survive into the exact oracle.
  CHECK(*ns_value(g, true).exact_value == Rational(2, 3));
}

TEST_CASE("dense query form with integer and string masses") {
  Game g = parse_game_json(R"({
    "m": 2,
    "query_alphabets": [2, 2],
    "response_alphabets": [2, 2],
    "query": {"kind": "dense", "mass": ["1/4", "0.25", "1/4", "1/4"]},
    "predicate": {"dense": [1,0,0,1, 1,0,0,1, 1,0,0,1, 0,1,1,0]}
  })");
  CHECK(validate(g).empty());
  Game chsh = builtin("chsh");
  CHECK(g.query.mass() == chsh.query.mass());
  CHECK(g.predicate == chsh.predicate);
}

TEST_CASE("canonical serialization round-trips to the identical game") {
  Game g = parse_game_json(kAnticorrelationFile);
  std::string canon = canonical_game_json(g);
  Game g2 = parse_game_json(canon);
  CHECK(g2.query.mass() == g.query.mass());
  CHECK(g2.predicate == g.predicate);
  CHECK(canonical_game_json(g2) == canon);
  CHECK(game_digest(g2) == game_digest(g));
}

TEST_CASE("digest tracks content, not formatting") {
  Game a = parse_game_json(kAnticorrelationFile);
  std::string spaced(kAnticorrelationFile);
  spaced.insert(1, "\n\n   ");
  Game b = parse_game_json(spaced);
  CHECK(game_digest(a) == game_digest(b));
  Game c = builtin("chsh");
  CHECK(game_digest(a) != game_digest(c));
}

TEST_CASE("builtin addressing") {
  Game g = load_game_spec("builtin:chsh");
  CHECK(g.name == "chsh");
  CHECK_THROWS_AS(load_game_spec("builtin:nope"), ParseError);
  CHECK_THROWS_AS(load_game_spec("/does/not/exist.json"), ParseError);
}

TEST_CASE("malformed documents raise parse errors") {
  CHECK_THROWS_AS(parse_game_json("not json"), ParseError);
  CHECK_THROWS_AS(parse_game_json(R"({"m": 2})"), ParseError);
  // Wrong arity tuple.
  CHECK_THROWS_AS(parse_game_json(R"({
    "m": 2, "query_alphabets": [2,2], "response_alphabets": [2,2],
    "query": {"kind": "support", "mass": [[[0], "1"]]},
    "predicate": {"dense": [1,1,1,1, 1,1,1,1, 1,1,1,1, 1,1,1,1]}
  })"),
                  ParseError);
  // Negative mass.
  CHECK_THROWS_AS(parse_game_json(R"({
    "m": 2, "query_alphabets": [2,2], "response_alphabets": [2,2],
    "query": {"kind": "dense", "mass": ["-1/4", "1/2", "1/2", "1/4"]},
    "predicate": {"dense": [1,1,1,1, 1,1,1,1, 1,1,1,1, 1,1,1,1]}
  })"),
                  ParseError);
  // Masses exceeding total 1 cannot form a query table.
  CHECK_THROWS_AS(parse_game_json(R"({
    "m": 2, "query_alphabets": [2,2], "response_alphabets": [2,2],
    "query": {"kind": "dense", "mass": ["1/2", "1/2", "1/2", "1/2"]},
    "predicate": {"dense": [1,1,1,1, 1,1,1,1, 1,1,1,1, 1,1,1,1]}
  })"),
                  ParseError);
}

TEST_CASE("deficient masses parse but fail validation") {
  Game g = parse_game_json(R"({
    "m": 2, "query_alphabets": [2,2], "response_alphabets": [2,2],
    "query": {"kind": "dense", "mass": ["1/4", "1/4", "1/4", "0"]},
    "predicate": {"dense": [1,1,1,1, 1,1,1,1, 1,1,1,1, 1,1,1,1]}
  })");
  auto violations = validate(g);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].kind == "query-normalization");
}

TEST_CASE("rational literals") {
  CHECK(parse_rational("1/3") == Rational(1, 3));
  CHECK(parse_rational(" 2 / 6 ") == Rational(1, 3));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("-3") == Rational(-3));
  CHECK(rational_to_string(Rational(2, 6)) == "1/3");
  CHECK(rational_to_string(Rational(4)) == "4");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
}
