#include "nlgame/report.hpp"

#include <sstream>

#include "nlgame/format.hpp"

namespace nlgame {

std::string Report::to_json(int indent) const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["input_digest"] = input_digest;
  j["results"] = results;
  j["versions"] = {{"nlgame", kVersion}};
  j["wall_time_sec"] = round_sig(wall_time_sec, 3);
  return indent < 0 ? j.dump() : j.dump(indent);
}

namespace {

void flatten(const nlohmann::ordered_json& node, const std::string& prefix,
             std::ostringstream& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items())
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
  } else if (node.is_array()) {
    std::size_t i = 0;
    for (const auto& value : node) flatten(value, prefix + "[" + std::to_string(i++) + "]", out);
  } else {
    out << prefix << "," << node.dump() << "\n";
  }
}

}  // namespace

std::string Report::to_csv() const {
  std::ostringstream out;
  out << "key,value\n";
  out << "command," << command << "\n";
  out << "input_digest," << input_digest << "\n";
  flatten(results, "results", out);
  out << "versions.nlgame," << kVersion << "\n";
  return out.str();
}

}  // namespace nlgame
