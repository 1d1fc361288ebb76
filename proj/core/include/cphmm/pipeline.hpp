#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "cphmm/critpoints.hpp"
#include "cphmm/dataset.hpp"
#include "cphmm/modelselect.hpp"
#include "cphmm/preprocess.hpp"
#include "cphmm/quantize.hpp"

namespace cphmm {

/// Critical-point totals for every processed sequence and their per
/// (gesture, sensor) lower medians.
struct CpTable {
  std::map<SequenceId, int> totals;
  std::map<std::pair<int, int>, int> medians;
};

CpTable critical_point_table(const PreprocessResult& processed, int gamma);

/// Average of the per-(gesture, sensor) medians over sensors in
/// [first, last] (1-based), per gesture; and over all gestures, per sensor.
std::vector<double> average_cp_by_gesture(const CpTable& table, int gestures, int first_sensor,
                                          int last_sensor);
std::vector<double> average_cp_by_sensor(const CpTable& table, int gestures, int sensors);

struct PipelineConfig {
  int resample_length = kDefaultResampleLength;
  int gamma = kDefaultGamma;
  std::vector<int> clusters{4, 5, 6, 7, 8, 9, 10, 11};
  std::vector<PredictorVariant> variants{kAllVariants[0], kAllVariants[1], kAllVariants[2]};
  SweepConfig sweep;
  /// Base seed; codebooks and sweeps derive their streams from it.
  std::uint64_t seed = 0;
  int jobs = 1;
};

/// Every intermediate product of one run, in deterministic order.
struct PipelineRun {
  PreprocessResult processed;
  CpTable cps;
  std::map<int, Codebook> codebooks;
  std::vector<TrainingPair> pairs;
  std::vector<PredictorTable> predictors;
  std::vector<SweepResult> sweeps;
  std::vector<XiRecord> records;
};

/// preprocess -> critical points -> one global codebook per c -> pairs over
/// all sensors -> state sweeps -> xi records for every configured variant.
PipelineRun run_pipeline(const RawDataset& dataset, const PipelineConfig& config);

}  // namespace cphmm
