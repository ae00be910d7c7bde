#pragma once

#include <string>

#include "nlgame/game.hpp"

namespace nlgame {

/// Parses a GameFile JSON document. Masses are exact rationals ("1/3",
/// integers, or decimal strings); the exact query mirror is retained on the
/// returned game. Throws ParseError on malformed input.
Game parse_game_json(const std::string& text);

/// Reads a GameFile from disk.
Game load_game_file(const std::string& path);

/// Resolves "builtin:<name>" or a file path.
Game load_game_spec(const std::string& spec);

/// Canonical GameFile serialization: dense query with canonical rational
/// strings, dense 0/1 predicate, fixed key order.
std::string canonical_game_json(const Game& game);

/// FNV-1a 64-bit content digest of the canonical serialization.
std::string game_digest(const Game& game);

}  // namespace nlgame
