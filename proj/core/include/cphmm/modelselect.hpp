#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cphmm/critpoints.hpp"
#include "cphmm/dataset.hpp"
#include "cphmm/hmm.hpp"
#include "cphmm/quantize.hpp"

namespace cphmm {

/// (gesture, sensor, cluster count); gesture and sensor are 0-based, the
/// cluster count is the alphabet size c itself.
struct PairId {
  int gesture = 0;
  int sensor = 0;
  int clusters = 0;

  friend auto operator<=>(const PairId&, const PairId&) = default;
};

/// The executions of one (gesture, sensor) discretized with c clusters,
/// together with the median critical-point count of that (gesture, sensor).
struct TrainingPair {
  PairId id;
  std::vector<SymbolSequence> sequences;
  int cp_median = 2;
};

struct GridSpec {
  int gestures = 0;
  std::vector<int> sensors;  // 0-based sensor indices
  int executions = 0;
  std::vector<int> clusters;
};

/// Groups symbol sequences into one pair per (gesture, sensor, c) of `grid`,
/// ordered by (gesture, sensor, c). Executions listed in `excluded` may be
/// absent. Throws IncompleteGrid when any other sequence or a median is
/// missing, or when a pair would end up empty.
std::vector<TrainingPair> build_pairs(std::span<const SymbolSequence> sequences,
                                      const std::map<std::pair<int, int>, int>& medians,
                                      const GridSpec& grid,
                                      std::span<const SequenceId> excluded = {});

/// -2 * sum_loglik + 2 * n^2. An impossible model (sum_loglik = -inf) scores
/// +inf; NaN or +inf input throws NonFinite.
double aic(double sum_loglik, int states);

struct StateRange {
  int low = 2;
  int high = 16;
};

struct SweepConfig {
  StateRange states;
  TrainConfig train;
  /// Base for the per-(gesture, sensor, c, n) training seeds.
  std::uint64_t seed = 0;
};

struct SweepResult {
  PairId id;
  StateRange states;
  std::map<int, double> aic_by_n;
  double aic_min = 0.0;
  double aic_max = 0.0;
  /// Lowest n attaining aic_min.
  int argmin_n = 0;
};

/// Training seed for one cell of the sweep; fixed by what is trained, not by
/// scheduling.
std::uint64_t sweep_seed(std::uint64_t base, const PairId& id, int states);

/// Trains one model per n in the state range and scores it by AIC over the
/// pair's sequences. A training that throws records +inf for that n.
/// Throws ParamError for an invalid range.
SweepResult sweep_states(const TrainingPair& pair, const SweepConfig& config);

/// sweep_states over every pair, spread over `jobs` worker threads
/// (0 = hardware concurrency). Output order follows `pairs`; results do not
/// depend on `jobs`.
std::vector<SweepResult> sweep_all(std::span<const TrainingPair> pairs, const SweepConfig& config,
                                   int jobs = 1);

/// Relative position of AIC(predicted_n) between the sweep's minimum (0) and
/// maximum (1). predicted_n is clamped into the sweep range. A flat sweep
/// gives 0; a predicted n whose training failed gives 1.
double xi(const SweepResult& sweep, int predicted_n);

struct XiRecord {
  PairId id;
  PredictorVariant variant = PredictorVariant::AllPoints;
  int predicted_n = 0;  // after clamping
  int argmin_n = 0;
  double aic_min = 0.0;
  double aic_max = 0.0;
  double aic_cp = 0.0;
  double xi = 0.0;
};

/// One record per (sweep, predictor table), ordered by sweep then table.
std::vector<XiRecord> score_predictors(std::span<const SweepResult> sweeps,
                                       std::span<const PredictorTable> predictors);

/// Mean xi in record order. Throws EmptyInput.
double aggregate_xi(std::span<const XiRecord> records);

/// Inclusive 1-based sensor range with a report label.
struct SensorRange {
  std::string label;
  int first = 1;
  int last = 1;

  bool contains_sensor(int sensor0) const { return sensor0 + 1 >= first && sensor0 + 1 <= last; }
};

std::vector<SensorRange> default_sensor_ranges(int sensors);

struct AggregateRow {
  std::string range;
  std::optional<int> clusters;  // set for per-c groups
  PredictorVariant variant = PredictorVariant::AllPoints;
  double xi = 0.0;
  std::size_t count = 0;
};

/// One aggregate per (sensor range, variant) over all c.
std::vector<AggregateRow> experiment_a(std::span<const XiRecord> records,
                                       std::span<const PredictorVariant> variants,
                                       std::span<const SensorRange> ranges);

/// One aggregate per (c, sensor range, variant), c ascending.
std::vector<AggregateRow> experiment_b(std::span<const XiRecord> records,
                                       std::span<const PredictorVariant> variants,
                                       std::span<const SensorRange> ranges);

/// Mean xi per gesture or per sensor, for each variant and over all variants.
struct GroupMean {
  int index = 0;  // 0-based gesture or sensor
  std::vector<std::pair<PredictorVariant, double>> by_variant;
  double all_variants = 0.0;
};

std::vector<GroupMean> xi_by_gesture(std::span<const XiRecord> records);
std::vector<GroupMean> xi_by_sensor(std::span<const XiRecord> records);

/// Full sweep + scoring + aggregation for one predictor set.
std::vector<AggregateRow> experiment_a(std::span<const TrainingPair> pairs,
                                       std::span<const PredictorTable> predictors,
                                       std::span<const SensorRange> ranges, const SweepConfig& config,
                                       int jobs = 1);
std::vector<AggregateRow> experiment_b(std::span<const TrainingPair> pairs,
                                       std::span<const PredictorTable> predictors,
                                       std::span<const SensorRange> ranges, const SweepConfig& config,
                                       int jobs = 1);

}  // namespace cphmm
