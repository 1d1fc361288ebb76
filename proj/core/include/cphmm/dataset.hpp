#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cphmm {

/// Addresses one sensor row of one execution. All indices are 0-based in the
/// C++ API; on-disk names and report columns are 1-based.
struct SequenceId {
  int gesture = 0;
  int sensor = 0;
  int execution = 0;

  friend auto operator<=>(const SequenceId&, const SequenceId&) = default;
};

/// One execution of a gesture: J sensor rows of equal length l(i,k).
struct Execution {
  std::vector<std::vector<double>> rows;

  std::size_t length() const { return rows.empty() ? 0 : rows.front().size(); }
  friend bool operator==(const Execution&, const Execution&) = default;
};

/// Labeled corpus of sensor matrices, one per (gesture, execution) pair.
/// Validated on construction and immutable afterwards.
class RawDataset {
 public:
  /// `executions` is ordered gesture-major: index = i * K + k.
  /// Throws ShapeError, LengthError, MissingExecution or ParseError (non-finite value).
  RawDataset(int gestures, int sensors, int executions_per_gesture,
             std::vector<Execution> executions);

  int gestures() const { return gestures_; }
  int sensors() const { return sensors_; }
  int executions() const { return executions_per_gesture_; }

  const Execution& execution(int gesture, int execution) const;
  std::span<const double> row(const SequenceId& id) const;
  std::size_t length(int gesture, int execution) const;

  friend bool operator==(const RawDataset&, const RawDataset&) = default;

 private:
  int gestures_;
  int sensors_;
  int executions_per_gesture_;
  std::vector<Execution> data_;
};

/// Recipe for a synthetic corpus with a constructible number of interior
/// extrema per (gesture, sensor).
struct SyntheticSpec {
  int gestures = 1;
  int sensors = 1;
  int executions = 1;
  /// target_cp[i][j]: interior extrema count of every execution's row j.
  std::vector<std::vector<int>> target_cp;
  int min_length = 32;
  int max_length = 64;
  double noise_amplitude = 0.0;
  /// Optional per-sensor override of noise_amplitude (size J when present).
  std::vector<double> sensor_noise;
  std::uint64_t seed = 0;

  double noise_for(int sensor) const {
    return sensor_noise.empty() ? noise_amplitude : sensor_noise[static_cast<std::size_t>(sensor)];
  }

  /// Throws SpecError when the recipe is malformed or unsatisfiable.
  void validate() const;

  friend bool operator==(const SyntheticSpec&, const SyntheticSpec&) = default;
};

SyntheticSpec synthetic_spec_from_json(std::string_view json_text);
std::string synthetic_spec_to_json(const SyntheticSpec& spec);

/// Each row is a chain of half-sine arches between alternating high/low
/// knots placed on sample positions, so a noise-free row has exactly
/// target_cp interior extrema under the gamma = 1 scan. Noise is uniform on
/// [-a, a]. Deterministic in spec.seed.
RawDataset generate_synthetic(const SyntheticSpec& spec);

/// Layout: <root>/manifest.json {"I","J","K"} plus g<i>_e<k>.csv files with J
/// comma-separated rows. Values are written in shortest round-trip form.
/// `synthetic` is echoed into the manifest under "synthetic" when given.
void save_dataset(const RawDataset& dataset, const std::filesystem::path& root,
                  const std::optional<SyntheticSpec>& synthetic = std::nullopt);

RawDataset load_dataset(const std::filesystem::path& root);

}  // namespace cphmm
