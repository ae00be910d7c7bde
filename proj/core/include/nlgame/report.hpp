#pragma once

#include <string>

#include <json.hpp>

namespace nlgame {

inline constexpr const char* kVersion = "0.1.0";

/// Machine-readable command report. The results object is deterministic for
/// identical inputs; wall time lives outside it.
struct Report {
  std::string command;
  std::string input_digest = "none";
  nlohmann::ordered_json results;
  double wall_time_sec = 0.0;

  std::string to_json(int indent = 2) const;
  std::string to_csv() const;
};

}  // namespace nlgame
