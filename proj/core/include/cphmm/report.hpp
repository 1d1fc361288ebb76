#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cphmm/modelselect.hpp"
#include "cphmm/pipeline.hpp"

namespace cphmm {

// CSV renderers for run artifacts. Indices are 1-based; reals use shortest
// round-trip decimal form so equal inputs give byte-identical files.

/// i,j,c,variant,predicted_n,argmin_n,aic_min,aic_max,aic_cp,xi
std::string records_csv(std::span<const XiRecord> records);

/// i,j,c,n,aic
std::string sweeps_csv(std::span<const SweepResult> sweeps);

/// sensors[,c],<variant>... ; the c column appears when rows are per-c groups.
std::string aggregate_csv(std::span<const AggregateRow> rows, std::span<const PredictorVariant> variants);

/// <key>,<variant>...,all_variants
std::string group_means_csv(std::span<const GroupMean> groups, std::string_view key,
                            std::span<const PredictorVariant> variants);

/// gesture,<range label>...
std::string cp_by_gesture_csv(const CpTable& table, int gestures, std::span<const SensorRange> ranges);
/// sensor,avg_cp
std::string cp_by_sensor_csv(const CpTable& table, int gestures, int sensors);
/// gesture,sensor,median_cp
std::string cp_medians_csv(const CpTable& table);

/// Quotes a CSV field when it holds a separator, quote or newline.
std::string csv_field(std::string_view text);

}  // namespace cphmm
