#include <cmath>

#include "ellscope/io.hpp"

namespace ellscope {

nlohmann::ordered_json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::ordered_json RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["timing"] = {{"wall_seconds", wall_seconds}};
  return j;
}

RunReport RunReport::from_json(const nlohmann::ordered_json& j) {
  RunReport r;
  r.command = j.at("command").get<std::string>();
  r.inputs = j.at("inputs");
  r.outputs = j.at("outputs");
  r.wall_seconds = j.at("timing").at("wall_seconds").get<double>();
  return r;
}

}  // namespace ellscope
