#include "cphmm/modelselect.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

#include "cphmm/error.hpp"
#include "cphmm/random.hpp"

namespace cphmm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(const PairId& id) {
  return "(i=" + std::to_string(id.gesture + 1) + ", j=" + std::to_string(id.sensor + 1) +
         ", c=" + std::to_string(id.clusters) + ")";
}

void check_range(const StateRange& r) {
  if (r.low < 1 || r.high < r.low) throw Error(ErrorCode::ParamError, "state range must satisfy 1 <= low <= high");
}

// Runs body(index) for index in [0, count) on up to `jobs` threads. The first
// exception is rethrown after all workers stop.
template <class Body>
void parallel_for(std::size_t count, int jobs, Body&& body) {
  std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                 : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t t = 0; t < count; ++t) body(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < count; t = next++) {
          try {
            body(t);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double train_and_score(const TrainingPair& pair, int states, const SweepConfig& config) {
  TrainConfig train = config.train;
  train.seed = sweep_seed(config.seed, pair.id, states);
  try {
    const auto fit = baum_welch(pair.sequences, states, pair.id.clusters, train);
    double total = 0.0;
    for (const auto& seq : pair.sequences) total += forward_log_likelihood(fit.model, seq);
    return aic(total, states);
  } catch (const Error&) {
    return kInf;
  }
}

SweepResult summarize(const PairId& id, const StateRange& range, std::map<int, double> aic_by_n) {
  SweepResult out;
  out.id = id;
  out.states = range;
  out.aic_by_n = std::move(aic_by_n);
  out.aic_min = kInf;
  out.aic_max = -kInf;
  out.argmin_n = range.low;
  for (const auto& [n, value] : out.aic_by_n) {
    if (value < out.aic_min) {
      out.aic_min = value;
      out.argmin_n = n;
    }
    out.aic_max = std::max(out.aic_max, value);
  }
  if (out.aic_min == kInf) out.aic_max = kInf;
  return out;
}

std::vector<GroupMean> group_means(std::span<const XiRecord> records, int PairId::*field) {
  std::map<int, std::map<PredictorVariant, std::pair<double, std::size_t>>> acc;
  std::map<int, std::pair<double, std::size_t>> all;
  for (const auto& r : records) {
    const int key = r.id.*field;
    auto& cell = acc[key][r.variant];
    cell.first += r.xi;
    ++cell.second;
    all[key].first += r.xi;
    ++all[key].second;
  }
  std::vector<GroupMean> out;
  for (const auto& [key, per_variant] : acc) {
    GroupMean g;
    g.index = key;
    for (auto v : kAllVariants) {
      const auto it = per_variant.find(v);
      if (it != per_variant.end()) g.by_variant.emplace_back(v, it->second.first / static_cast<double>(it->second.second));
    }
    g.all_variants = all[key].first / static_cast<double>(all[key].second);
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<PredictorVariant> variants_of(std::span<const PredictorTable> predictors) {
  std::vector<PredictorVariant> out;
  for (const auto& p : predictors) out.push_back(p.variant);
  return out;
}

}  // namespace

std::vector<TrainingPair> build_pairs(std::span<const SymbolSequence> sequences,
                                      const std::map<std::pair<int, int>, int>& medians,
                                      const GridSpec& grid, std::span<const SequenceId> excluded) {
  std::map<std::pair<SequenceId, int>, const SymbolSequence*> index;
  for (const auto& seq : sequences) index.emplace(std::pair{seq.id, seq.alphabet}, &seq);
  const std::set<SequenceId> skipped(excluded.begin(), excluded.end());

  std::vector<TrainingPair> pairs;
  for (int i = 0; i < grid.gestures; ++i) {
    for (int j : grid.sensors) {
      const auto median = medians.find({i, j});
      for (int c : grid.clusters) {
        const PairId id{i, j, c};
        if (median == medians.end()) {
          throw Error(ErrorCode::IncompleteGrid, "no critical-point median for " + describe(id));
        }
        TrainingPair pair;
        pair.id = id;
        pair.cp_median = median->second;
        for (int k = 0; k < grid.executions; ++k) {
          const SequenceId sid{i, j, k};
          const auto it = index.find({sid, c});
          if (it != index.end()) {
            pair.sequences.push_back(*it->second);
          } else if (!skipped.contains(sid)) {
            throw Error(ErrorCode::IncompleteGrid,
                        "missing sequence k=" + std::to_string(k + 1) + " for " + describe(id));
          }
        }
        if (pair.sequences.empty()) {
          throw Error(ErrorCode::IncompleteGrid, "every execution of " + describe(id) + " was excluded");
        }
        pairs.push_back(std::move(pair));
      }
    }
  }
  return pairs;
}

double aic(double sum_loglik, int states) {
  if (std::isnan(sum_loglik) || sum_loglik == kInf) {
    throw Error(ErrorCode::NonFinite, "log-likelihood must be finite or -inf");
  }
  if (sum_loglik == -kInf) return kInf;
  const double n = static_cast<double>(states);
  return -2.0 * sum_loglik + 2.0 * n * n;
}

std::uint64_t sweep_seed(std::uint64_t base, const PairId& id, int states) {
  return derive_seed(base, {static_cast<std::uint64_t>(id.gesture), static_cast<std::uint64_t>(id.sensor),
                            static_cast<std::uint64_t>(id.clusters), static_cast<std::uint64_t>(states)});
}

SweepResult sweep_states(const TrainingPair& pair, const SweepConfig& config) {
  check_range(config.states);
  std::map<int, double> aic_by_n;
  for (int n = config.states.low; n <= config.states.high; ++n) {
    aic_by_n[n] = train_and_score(pair, n, config);
  }
  return summarize(pair.id, config.states, std::move(aic_by_n));
}

std::vector<SweepResult> sweep_all(std::span<const TrainingPair> pairs, const SweepConfig& config, int jobs) {
  check_range(config.states);
  const auto width = static_cast<std::size_t>(config.states.high - config.states.low + 1);
  std::vector<double> cells(pairs.size() * width);
  // Largest models first so the long jobs do not straggle at the end.
  parallel_for(cells.size(), jobs, [&](std::size_t job) {
    const std::size_t offset = width - 1 - job / pairs.size();
    const std::size_t p = job % pairs.size();
    const int n = config.states.low + static_cast<int>(offset);
    cells[p * width + offset] = train_and_score(pairs[p], n, config);
  });

  std::vector<SweepResult> out;
  out.reserve(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    std::map<int, double> aic_by_n;
    for (std::size_t o = 0; o < width; ++o) aic_by_n[config.states.low + static_cast<int>(o)] = cells[p * width + o];
    out.push_back(summarize(pairs[p].id, config.states, std::move(aic_by_n)));
  }
  return out;
}

double xi(const SweepResult& sweep, int predicted_n) {
  const int n = std::clamp(predicted_n, sweep.states.low, sweep.states.high);
  const double at = sweep.aic_by_n.at(n);
  if (sweep.aic_max == sweep.aic_min) return 0.0;
  if (at == kInf) return 1.0;
  double finite_max = sweep.aic_min;
  for (const auto& [m, value] : sweep.aic_by_n) {
    if (value != kInf) finite_max = std::max(finite_max, value);
  }
  if (finite_max == sweep.aic_min) return 0.0;
  return std::clamp((at - sweep.aic_min) / (finite_max - sweep.aic_min), 0.0, 1.0);
}

std::vector<XiRecord> score_predictors(std::span<const SweepResult> sweeps,
                                       std::span<const PredictorTable> predictors) {
  std::vector<XiRecord> out;
  out.reserve(sweeps.size() * predictors.size());
  for (const auto& sweep : sweeps) {
    for (const auto& table : predictors) {
      XiRecord r;
      r.id = sweep.id;
      r.variant = table.variant;
      r.predicted_n = std::clamp(table.at(sweep.id.gesture, sweep.id.sensor), sweep.states.low, sweep.states.high);
      r.argmin_n = sweep.argmin_n;
      r.aic_min = sweep.aic_min;
      r.aic_max = sweep.aic_max;
      r.aic_cp = sweep.aic_by_n.at(r.predicted_n);
      r.xi = xi(sweep, r.predicted_n);
      out.push_back(r);
    }
  }
  return out;
}

double aggregate_xi(std::span<const XiRecord> records) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records to aggregate");
  double sum = 0.0;
  for (const auto& r : records) sum += r.xi;
  return sum / static_cast<double>(records.size());
}

std::vector<SensorRange> default_sensor_ranges(int sensors) {
  std::vector<SensorRange> out{{"All sensors", 1, sensors}};
  if (sensors > 5) out.push_back({"Fingers only", 1, 5});
  return out;
}

std::vector<AggregateRow> experiment_a(std::span<const XiRecord> records,
                                       std::span<const PredictorVariant> variants,
                                       std::span<const SensorRange> ranges) {
  std::vector<AggregateRow> out;
  for (const auto& range : ranges) {
    for (auto v : variants) {
      std::vector<XiRecord> subset;
      for (const auto& r : records) {
        if (r.variant == v && range.contains_sensor(r.id.sensor)) subset.push_back(r);
      }
      out.push_back({range.label, std::nullopt, v, aggregate_xi(subset), subset.size()});
    }
  }
  return out;
}

std::vector<AggregateRow> experiment_b(std::span<const XiRecord> records,
                                       std::span<const PredictorVariant> variants,
                                       std::span<const SensorRange> ranges) {
  std::set<int> clusters;
  for (const auto& r : records) clusters.insert(r.id.clusters);
  std::vector<AggregateRow> out;
  for (int c : clusters) {
    std::vector<XiRecord> at_c;
    for (const auto& r : records) {
      if (r.id.clusters == c) at_c.push_back(r);
    }
    for (auto row : experiment_a(at_c, variants, ranges)) {
      row.clusters = c;
      out.push_back(std::move(row));
    }
  }
  return out;
}

std::vector<GroupMean> xi_by_gesture(std::span<const XiRecord> records) {
  return group_means(records, &PairId::gesture);
}

std::vector<GroupMean> xi_by_sensor(std::span<const XiRecord> records) {
  return group_means(records, &PairId::sensor);
}

std::vector<AggregateRow> experiment_a(std::span<const TrainingPair> pairs,
                                       std::span<const PredictorTable> predictors,
                                       std::span<const SensorRange> ranges, const SweepConfig& config,
                                       int jobs) {
  const auto sweeps = sweep_all(pairs, config, jobs);
  const auto records = score_predictors(sweeps, predictors);
  return experiment_a(records, variants_of(predictors), ranges);
}

std::vector<AggregateRow> experiment_b(std::span<const TrainingPair> pairs,
                                       std::span<const PredictorTable> predictors,
                                       std::span<const SensorRange> ranges, const SweepConfig& config,
                                       int jobs) {
  const auto sweeps = sweep_all(pairs, config, jobs);
  const auto records = score_predictors(sweeps, predictors);
  return experiment_b(records, variants_of(predictors), ranges);
}

}  // namespace cphmm
