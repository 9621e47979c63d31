#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "liberation/errors.hpp"

namespace liberation::cli {

/// Parameters of one subcommand: the config file's top-level keys, then
/// its section named after the subcommand, then command-line flags, each
/// overriding the previous. Errors name the field as "<section>.<key>".
class Settings {
 public:
  Settings(std::string section, nlohmann::json values);
  /// Empty path: no config file.
  static Settings load(const std::string& section, const std::string& config_path);

  template <class T>
  void set(const std::string& key, const std::optional<T>& value) {
    if (value) values_[key] = *value;
  }

  bool has(const std::string& key) const { return values_.contains(key); }
  std::string path(const std::string& key) const { return section_ + "." + key; }
  const nlohmann::json& values() const noexcept { return values_; }

  template <class T>
  T require(const std::string& key) const {
    if (!has(key)) {
      throw ValidationError("missing field '" + path(key) + "' (flag --" + flag(key) +
                            " or config key \"" + key + "\")");
    }
    return convert<T>(key);
  }

  template <class T>
  T get(const std::string& key, T fallback) const {
    return has(key) ? convert<T>(key) : fallback;
  }

 private:
  static std::string flag(const std::string& key);

  template <class T>
  T convert(const std::string& key) const {
    try {
      return values_.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("field '" + path(key) + "': " + e.what());
    }
  }

  std::string section_;
  nlohmann::json values_;
};

}  // namespace liberation::cli
