#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace curvlab::suite {

struct SuiteOptions {
  std::string out_dir = "suite_out";
  std::uint64_t seed = 42;
  int paths = 10000;  // Monte Carlo width of the diffusion runs
};

struct SuiteResult {
  std::vector<std::string> files;  // relative to out_dir, in write order
  nlohmann::json summary;
  bool all_pass = false;
};

// Runs one canonical computation per module, writes every artifact under
// out_dir, and aggregates the verdicts. Deliberate negative controls count
// as passing when they fail, and all output is a pure function of the
// options, so two runs with the same options produce identical bytes.
SuiteResult run_suite(const SuiteOptions& opts);

}  // namespace curvlab::suite
