#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace wildknot::cli {

struct SuiteConfig {
  std::size_t n = 30;
  std::size_t orders = 100;
  std::optional<std::size_t> depth;
  std::optional<std::size_t> samples;
  std::size_t pairs = 3;
  std::size_t resolution = 10000;
  std::uint64_t seed = 1;
  std::optional<double> tol;
};

struct SuiteInfo {
  std::string name;
  std::string summary;
  std::vector<std::string> statements;
};

const std::vector<SuiteInfo>& suite_catalog();
bool suite_exists(const std::string& name);

/// Report with "schema", "suite", "config", "checks", "violations" and "ok".
nlohmann::json run_suite(const std::string& name, const SuiteConfig& cfg);

}  // namespace wildknot::cli
