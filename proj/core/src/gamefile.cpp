#include "nlgame/gamefile.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nlgame/rational.hpp"

namespace nlgame {

namespace {

using json = nlohmann::json;

Rational mass_entry(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer() || v.is_number_unsigned())
    return Rational(static_cast<long>(v.get<long long>()));
  throw ParseError("query masses must be rational strings or integers");
}

std::vector<int> int_tuple(const json& v, const AlphabetShape& shape) {
  if (!v.is_array() || v.size() != static_cast<std::size_t>(shape.rank()))
    throw ParseError("index tuple has the wrong arity");
  std::vector<int> idx;
  for (const auto& e : v) idx.push_back(e.get<int>());
  return idx;
}

}  // namespace

Game parse_game_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad JSON: ") + e.what());
  }
  try {
    Game g;
    g.m = doc.at("m").get<int>();
    if (g.m < 1) throw ParseError("m must be positive");
    std::vector<int> xs = doc.at("query_alphabets").get<std::vector<int>>();
    std::vector<int> us = doc.at("response_alphabets").get<std::vector<int>>();
    if (static_cast<int>(xs.size()) != g.m || static_cast<int>(us.size()) != g.m)
      throw ParseError("alphabet arrays must have one entry per party");
    g.query_shape = make_party_shape(xs, Role::Query);
    g.response_shape = make_party_shape(us, Role::Response);
    if (doc.contains("name")) g.name = doc.at("name").get<std::string>();

    const json& q = doc.at("query");
    std::vector<Rational> mass(g.query_cells(), Rational(0));
    std::string kind = q.at("kind").get<std::string>();
    if (kind == "dense") {
      const json& arr = q.at("mass");
      if (!arr.is_array() || arr.size() != g.query_cells())
        throw ParseError("dense query mass length must equal the cell count");
      for (std::size_t i = 0; i < mass.size(); ++i) mass[i] = mass_entry(arr[i]);
    } else if (kind == "support") {
      for (const auto& entry : q.at("mass")) {
        if (!entry.is_array() || entry.size() != 2)
          throw ParseError("support entries are [index-tuple, mass]");
        auto idx = int_tuple(entry[0], g.query_shape);
        mass[g.query_shape.flatten(idx)] = mass_entry(entry[1]);
      }
    } else {
      throw ParseError("query kind must be dense or support");
    }
    for (const Rational& r : mass)
      if (r < 0) throw ParseError("negative query mass");
    RationalTable exact{g.query_shape, std::move(mass)};
    // Subnormalized-tolerant so validate() can flag the deficit.
    std::vector<double> qd(exact.mass.size());
    for (std::size_t i = 0; i < qd.size(); ++i) qd[i] = to_double(exact.mass[i]);
    if (exact.total() == 1)
      g.query = JointTable::distribution(g.query_shape, std::move(qd));
    else
      g.query = JointTable::subnormalized(g.query_shape, std::move(qd));
    g.query_exact = std::move(exact);

    const json& pred = doc.at("predicate");
    g.predicate.assign(g.query_cells() * g.response_cells(), 0.0);
    if (pred.contains("dense")) {
      const json& arr = pred.at("dense");
      if (!arr.is_array() || arr.size() != g.predicate.size())
        throw ParseError("dense predicate length must equal query cells x response cells");
      for (std::size_t i = 0; i < g.predicate.size(); ++i)
        g.predicate[i] = arr[i].get<double>();
    } else if (pred.contains("wins")) {
      for (const auto& entry : pred.at("wins")) {
        if (!entry.is_array() || entry.size() != 2)
          throw ParseError("wins entries are [query-tuple, response-tuple]");
        auto x = int_tuple(entry[0], g.query_shape);
        auto u = int_tuple(entry[1], g.response_shape);
        g.predicate[g.query_shape.flatten(x) * g.response_cells() +
                    g.response_shape.flatten(u)] = 1.0;
      }
    } else {
      throw ParseError("predicate needs a dense array or a wins list");
    }
    return g;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad GameFile: ") + e.what());
  } catch (const ShapeError& e) {
    throw ParseError(std::string("bad GameFile: ") + e.what());
  } catch (const AxisError& e) {
    throw ParseError(std::string("bad GameFile: ") + e.what());
  }
}

Game load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_game_json(ss.str());
}

Game load_game_spec(const std::string& spec) {
  if (spec.rfind("builtin:", 0) == 0) return builtin(spec.substr(8));
  return load_game_file(spec);
}

std::string canonical_game_json(const Game& game) {
  nlohmann::ordered_json j;
  j["m"] = game.m;
  j["name"] = game.name;
  j["query_alphabets"] = game.query_shape.sizes();
  j["response_alphabets"] = game.response_shape.sizes();
  nlohmann::ordered_json mass = nlohmann::ordered_json::array();
  if (game.query_exact) {
    for (const Rational& r : game.query_exact->mass)
      mass.push_back(rational_to_string(r));
  } else {
    for (std::size_t i = 0; i < game.query.cell_count(); ++i) {
      std::ostringstream os;
      os.precision(17);
      os << game.query.at(i);
      mass.push_back(os.str());
    }
  }
  j["query"] = {{"kind", "dense"}, {"mass", std::move(mass)}};
  nlohmann::ordered_json pred = nlohmann::ordered_json::array();
  for (double w : game.predicate) pred.push_back(w == 1.0 ? 1 : w == 0.0 ? 0 : -1);
  j["predicate"] = {{"dense", std::move(pred)}};
  return j.dump();
}

std::string game_digest(const Game& game) {
  std::string canon = canonical_game_json(game);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nlgame
