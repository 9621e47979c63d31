#include "settings.hpp"

#include <algorithm>
#include <fstream>
#include <utility>

namespace liberation::cli {

namespace {
const std::vector<std::string> kSections{"evolve", "stationary", "flow", "bridge", "oracle", "verify"};
}

Settings::Settings(std::string section, nlohmann::json values)
    : section_(std::move(section)), values_(std::move(values)) {
  if (!values_.is_object()) throw ValidationError("config: expected a JSON object");
}

Settings Settings::load(const std::string& section, const std::string& config_path) {
  nlohmann::json merged = nlohmann::json::object();
  if (config_path.empty()) return Settings(section, merged);
  std::ifstream in(config_path);
  if (!in) throw ValidationError("config: cannot open " + config_path);
  nlohmann::json file;
  try {
    file = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config: " + config_path + ": " + e.what());
  }
  if (!file.is_object()) throw ValidationError("config: " + config_path + ": expected a JSON object");
  for (const auto& [key, value] : file.items()) {
    const bool is_section = std::find(kSections.begin(), kSections.end(), key) != kSections.end();
    if (!is_section) merged[key] = value;
  }
  if (file.contains(section)) {
    if (!file.at(section).is_object()) {
      throw ValidationError("config: '" + section + "' must be an object");
    }
    for (const auto& [key, value] : file.at(section).items()) merged[key] = value;
  }
  return Settings(section, merged);
}

std::string Settings::flag(const std::string& key) {
  std::string out = key;
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

}  // namespace liberation::cli
