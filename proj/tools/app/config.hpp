#pragma once

// JSON run configuration shared by the `solve`, `converge` and `check` commands.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "stcut/core.hpp"

namespace stcut::app {

/// Invalid or unreadable configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Sweep { K, H };

struct StudyConfig {
  Sweep sweep = Sweep::K;
  std::vector<double> resolutions;
  double fixed = 0.0;  ///< h for a k-sweep, k for an h-sweep
  std::pair<std::size_t, std::size_t> fit_window{1, 0};  ///< 1-based, inclusive; 0 = last
  std::optional<double> reference_slope;
};

struct OutputConfig {
  std::filesystem::path dir = ".";
  std::size_t samples_x = 101;
  std::size_t samples_t = 31;
};

struct RunConfig {
  std::string name = "run";
  bool manufactured = true;
  double final_time = 1.0;
  OverlapSpec overlap;
  Discretization disc;
  std::optional<StudyConfig> study;
  OutputConfig output;
  std::size_t workers = 0;  ///< 0: one per hardware thread

  /// Manufactured problem on [0, 1] or zero data, up to final_time.
  ProblemSpec problem() const;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Discretization of one sweep entry: the swept quantity set to `resolution`,
/// the other one to the fixed value; the overlapping mesh gets h_G close to h_0.
Discretization discretization_for(const RunConfig& cfg, double resolution);

}  // namespace stcut::app
