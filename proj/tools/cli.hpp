#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "l96sp/error.hpp"

namespace l96sp::cli {

/// Typed access to one JSON object of a config file. Every key read is
/// remembered; finish() rejects whatever was not read.
class ConfigReader {
 public:
  ConfigReader(const nlohmann::json& j, std::string where);

  template <typename T>
  T get(const std::string& key, const T& fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    return as<T>(key);
  }

  template <typename T>
  T require(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(where_ + ": missing required key \"" + key + "\"");
    return as<T>(key);
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  /// Nested object (empty if absent).
  ConfigReader child(const std::string& key);
  /// Raw value; marks the key as read.
  const nlohmann::json& raw(const std::string& key);
  const std::string& where() const { return where_; }

  void finish() const;

 private:
  template <typename T>
  T as(const std::string& key) const {
    try {
      return j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(where_ + ": key \"" + key + "\" has the wrong type");
    }
  }

  nlohmann::json j_;
  std::string where_;
  std::set<std::string> seen_;
};

/// Flags shared by every subcommand.
struct CommonOptions {
  std::string config;             // empty: built-in defaults
  std::optional<std::uint64_t> seed;
  double scale = 1.0;
  std::string out = "out";
};

/// Loads the config file (or an empty object). Throws IoError/ConfigError.
nlohmann::json load_config(const CommonOptions& opt);

int cmd_gen_truth(const CommonOptions& opt);
int cmd_fit_poly(const CommonOptions& opt);
int cmd_train_rnn(const CommonOptions& opt);
int cmd_simulate(const CommonOptions& opt);
int cmd_evaluate(const CommonOptions& opt);
int cmd_cost(const CommonOptions& opt);

/// Maps library exceptions to exit codes: 2 config, 3 blow-up or
/// divergence, 4 IO, 1 anything else.
int exit_code_for(const std::exception& e);

}  // namespace l96sp::cli
