#include "cphmm/pipeline.hpp"

#include "cphmm/error.hpp"
#include "cphmm/random.hpp"

namespace cphmm {

CpTable critical_point_table(const PreprocessResult& processed, int gamma) {
  CpTable table;
  std::map<std::pair<int, int>, std::vector<int>> grouped;
  for (const auto& seq : processed.sequences) {
    const int total = count_critical_points(seq.values, gamma).total;
    table.totals.emplace(seq.id, total);
    grouped[{seq.id.gesture, seq.id.sensor}].push_back(total);
  }
  for (const auto& [key, totals] : grouped) table.medians.emplace(key, median_cp(totals));
  return table;
}

std::vector<double> average_cp_by_gesture(const CpTable& table, int gestures, int first_sensor,
                                          int last_sensor) {
  if (first_sensor < 1 || last_sensor < first_sensor) {
    throw Error(ErrorCode::ConfigError, "empty sensor range");
  }
  std::vector<double> out;
  for (int i = 0; i < gestures; ++i) {
    double sum = 0.0;
    int count = 0;
    for (int j = first_sensor - 1; j < last_sensor; ++j) {
      const auto it = table.medians.find({i, j});
      if (it == table.medians.end()) continue;
      sum += it->second;
      ++count;
    }
    if (count == 0) throw Error(ErrorCode::IncompleteGrid, "no medians for gesture " + std::to_string(i + 1));
    out.push_back(sum / count);
  }
  return out;
}

std::vector<double> average_cp_by_sensor(const CpTable& table, int gestures, int sensors) {
  std::vector<double> out;
  for (int j = 0; j < sensors; ++j) {
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < gestures; ++i) {
      const auto it = table.medians.find({i, j});
      if (it == table.medians.end()) continue;
      sum += it->second;
      ++count;
    }
    if (count == 0) throw Error(ErrorCode::IncompleteGrid, "no medians for sensor " + std::to_string(j + 1));
    out.push_back(sum / count);
  }
  return out;
}

PipelineRun run_pipeline(const RawDataset& dataset, const PipelineConfig& config) {
  PipelineRun run;
  run.processed = preprocess_dataset(dataset, config.resample_length);
  run.cps = critical_point_table(run.processed, config.gamma);

  std::vector<double> pooled;
  pooled.reserve(run.processed.sequences.size() * static_cast<std::size_t>(config.resample_length));
  for (const auto& seq : run.processed.sequences) pooled.insert(pooled.end(), seq.values.begin(), seq.values.end());

  std::vector<SymbolSequence> symbols;
  for (int c : config.clusters) {
    const auto seed = derive_seed(config.seed, {0x636f6465626f6f6bULL, static_cast<std::uint64_t>(c)});
    const auto& cb = run.codebooks.emplace(c, fit_codebook(pooled, c, seed)).first->second;
    for (const auto& seq : run.processed.sequences) symbols.push_back(encode(seq, cb));
  }

  GridSpec grid;
  grid.gestures = dataset.gestures();
  grid.executions = dataset.executions();
  grid.clusters = config.clusters;
  for (int j = 0; j < dataset.sensors(); ++j) grid.sensors.push_back(j);
  run.pairs = build_pairs(symbols, run.cps.medians, grid, run.processed.excluded);

  for (auto v : config.variants) run.predictors.push_back(build_predictor_table(run.cps.medians, v));

  SweepConfig sweep = config.sweep;
  sweep.seed = config.seed;
  run.sweeps = sweep_all(run.pairs, sweep, config.jobs);
  run.records = score_predictors(run.sweeps, run.predictors);
  return run;
}

}  // namespace cphmm
