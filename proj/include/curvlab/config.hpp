#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace curvlab::config {

// CURVLAB_SEED when set to a nonnegative integer, 42 otherwise.
std::uint64_t default_seed();

// One resolved invocation: subcommand name plus its parameter object.
struct RunConfig {
  std::string subcommand;
  nlohmann::json params = nlohmann::json::object();

  bool operator==(const RunConfig& other) const {
    return subcommand == other.subcommand && params == other.params;
  }

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

}  // namespace curvlab::config
