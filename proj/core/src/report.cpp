#include "cphmm/report.hpp"

#include <map>

#include "cphmm/numeric_io.hpp"

namespace cphmm {
namespace {

std::string num(double v) { return format_double(v); }
std::string idx(int zero_based) { return std::to_string(zero_based + 1); }

}  // namespace

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string records_csv(std::span<const XiRecord> records) {
  std::string out = "i,j,c,variant,predicted_n,argmin_n,aic_min,aic_max,aic_cp,xi\n";
  for (const auto& r : records) {
    out += idx(r.id.gesture) + ',' + idx(r.id.sensor) + ',' + std::to_string(r.id.clusters) + ',' +
           std::string(to_string(r.variant)) + ',' + std::to_string(r.predicted_n) + ',' +
           std::to_string(r.argmin_n) + ',' + num(r.aic_min) + ',' + num(r.aic_max) + ',' + num(r.aic_cp) + ',' +
           num(r.xi) + '\n';
  }
  return out;
}

std::string sweeps_csv(std::span<const SweepResult> sweeps) {
  std::string out = "i,j,c,n,aic\n";
  for (const auto& s : sweeps) {
    for (const auto& [n, value] : s.aic_by_n) {
      out += idx(s.id.gesture) + ',' + idx(s.id.sensor) + ',' + std::to_string(s.id.clusters) + ',' +
             std::to_string(n) + ',' + num(value) + '\n';
    }
  }
  return out;
}

std::string aggregate_csv(std::span<const AggregateRow> rows, std::span<const PredictorVariant> variants) {
  const bool per_c = !rows.empty() && rows.front().clusters.has_value();
  std::string out = per_c ? "sensors,c" : "sensors";
  for (auto v : variants) out += ',' + std::string(to_string(v));
  out += '\n';

  // Rows arrive grouped by (c, range) with one entry per variant.
  std::vector<std::pair<std::pair<int, std::string>, std::map<PredictorVariant, double>>> table;
  for (const auto& r : rows) {
    const std::pair<int, std::string> key{r.clusters.value_or(0), r.range};
    if (table.empty() || table.back().first != key) table.push_back({key, {}});
    table.back().second[r.variant] = r.xi;
  }
  for (const auto& [key, cells] : table) {
    out += csv_field(key.second);
    if (per_c) out += ',' + std::to_string(key.first);
    for (auto v : variants) {
      const auto it = cells.find(v);
      out += ',';
      if (it != cells.end()) out += num(it->second);
    }
    out += '\n';
  }
  return out;
}

std::string group_means_csv(std::span<const GroupMean> groups, std::string_view key,
                            std::span<const PredictorVariant> variants) {
  std::string out(key);
  for (auto v : variants) out += ',' + std::string(to_string(v));
  out += ",all_variants\n";
  for (const auto& g : groups) {
    out += idx(g.index);
    for (auto v : variants) {
      out += ',';
      for (const auto& [variant, value] : g.by_variant) {
        if (variant == v) out += num(value);
      }
    }
    out += ',' + num(g.all_variants) + '\n';
  }
  return out;
}

std::string cp_by_gesture_csv(const CpTable& table, int gestures, std::span<const SensorRange> ranges) {
  std::string out = "gesture";
  std::vector<std::vector<double>> columns;
  for (const auto& r : ranges) {
    out += ',' + csv_field(r.label);
    columns.push_back(average_cp_by_gesture(table, gestures, r.first, r.last));
  }
  out += '\n';
  for (int i = 0; i < gestures; ++i) {
    out += idx(i);
    for (const auto& col : columns) out += ',' + num(col[static_cast<std::size_t>(i)]);
    out += '\n';
  }
  return out;
}

std::string cp_by_sensor_csv(const CpTable& table, int gestures, int sensors) {
  std::string out = "sensor,avg_cp\n";
  const auto averages = average_cp_by_sensor(table, gestures, sensors);
  for (int j = 0; j < sensors; ++j) out += idx(j) + ',' + num(averages[static_cast<std::size_t>(j)]) + '\n';
  return out;
}

std::string cp_medians_csv(const CpTable& table) {
  std::string out = "gesture,sensor,median_cp\n";
  for (const auto& [key, median] : table.medians) {
    out += idx(key.first) + ',' + idx(key.second) + ',' + std::to_string(median) + '\n';
  }
  return out;
}

}  // namespace cphmm
