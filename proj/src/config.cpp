#include "curvlab/config.hpp"

#include <cstdlib>
#include <stdexcept>

namespace curvlab::config {

std::uint64_t default_seed() {
  const char* env = std::getenv("CURVLAB_SEED");
  if (!env || !*env) return 42;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0')
    throw std::invalid_argument("CURVLAB_SEED must be a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

nlohmann::json RunConfig::to_json() const {
  return {{"subcommand", subcommand}, {"params", params}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  auto it = j.find("subcommand");
  if (it == j.end() || !it->is_string())
    throw std::invalid_argument("config: missing field 'subcommand'");
  c.subcommand = it->get<std::string>();
  auto pit = j.find("params");
  if (pit != j.end()) {
    if (!pit->is_object()) throw std::invalid_argument("config: 'params' must be an object");
    c.params = *pit;
  }
  return c;
}

}  // namespace curvlab::config
