#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "cphmm/critpoints.hpp"
#include "cphmm/hmm.hpp"
#include "cphmm/modelselect.hpp"
#include "cphmm/pipeline.hpp"

namespace cphmm::cli {

/// Settings of one stats/experiment run. Every field has a default, so "{}"
/// is a valid config file.
struct RunConfig {
  std::filesystem::path dataset_root;
  int resample_length = kDefaultResampleLength;
  int gamma = kDefaultGamma;
  int cluster_low = 4;
  int cluster_high = 11;
  StateRange states{2, 16};
  std::vector<PredictorVariant> variants{kAllVariants[0], kAllVariants[1], kAllVariants[2]};
  /// Empty means default_sensor_ranges(J) once the dataset is known.
  std::vector<SensorRange> sensor_ranges;
  TrainConfig train;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";

  /// Throws Error{ConfigError} naming the violated constraint.
  void validate() const;

  /// Range checks that need the dataset's sensor count.
  void validate_for(int sensors) const;

  std::vector<SensorRange> ranges_for(int sensors) const;
  std::vector<int> clusters() const;
  PipelineConfig pipeline(int jobs) const;
};

/// Parses a JSON document; relative dataset_root / output_dir are resolved
/// against `base_dir`. Throws Error{ConfigError}.
RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace cphmm::cli
