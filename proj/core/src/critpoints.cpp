#include "cphmm/critpoints.hpp"

#include <algorithm>
#include <string>

#include "cphmm/error.hpp"

namespace cphmm {

Extrema find_extrema(std::span<const double> seq, int gamma) {
  if (seq.size() < 3) throw Error(ErrorCode::LengthError, "extrema scan needs at least 3 samples");
  if (gamma < 1) throw Error(ErrorCode::ParamError, "gamma must be >= 1");

  const auto size = static_cast<int>(seq.size());
  const auto value = [&](int p) { return seq[static_cast<std::size_t>(std::clamp(p, 0, size - 1))]; };

  Extrema out;
  for (int m = 1; m + 1 < size; ++m) {
    const double v = value(m);
    if (value(m - 1) == v) continue;  // not the leftmost sample of a flat run
    bool ge_all = true, le_all = true, gt_some = false, lt_some = false;
    for (int p = m - gamma; p <= m + gamma; ++p) {
      if (p == m) continue;
      const double w = value(p);
      if (w > v) ge_all = false;
      if (w < v) le_all = false;
      if (v > w) gt_some = true;
      if (v < w) lt_some = true;
    }
    if (ge_all && gt_some) {
      out.maxima.push_back(m);
    } else if (le_all && lt_some) {
      out.minima.push_back(m);
    }
  }
  return out;
}

CriticalPointCount count_critical_points(std::span<const double> seq, int gamma) {
  const auto e = find_extrema(seq, gamma);
  CriticalPointCount c;
  c.n_max = static_cast<int>(e.maxima.size());
  c.n_min = static_cast<int>(e.minima.size());
  c.total = c.n_max + c.n_min + 2;
  c.gamma = gamma;
  return c;
}

int median_cp(std::span<const int> totals) {
  if (totals.empty()) throw Error(ErrorCode::EmptyInput, "median of an empty set");
  std::vector<int> sorted(totals.begin(), totals.end());
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>((sorted.size() - 1) / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  return *mid;
}

int variant_offset(PredictorVariant v) {
  switch (v) {
    case PredictorVariant::AllPoints: return 0;
    case PredictorVariant::NoBoundaries: return 2;
    case PredictorVariant::Trends: return 1;
  }
  return 0;
}

std::string_view to_string(PredictorVariant v) {
  switch (v) {
    case PredictorVariant::AllPoints: return "all_points";
    case PredictorVariant::NoBoundaries: return "no_boundaries";
    case PredictorVariant::Trends: return "trends";
  }
  return "unknown";
}

PredictorVariant parse_variant(std::string_view name) {
  for (auto v : kAllVariants) {
    if (to_string(v) == name) return v;
  }
  throw Error(ErrorCode::ConfigError, "unknown predictor variant '" + std::string(name) + "'");
}

PredictorTable build_predictor_table(const std::map<std::pair<int, int>, int>& medians,
                                     PredictorVariant variant) {
  PredictorTable table;
  table.variant = variant;
  for (const auto& [key, median] : medians) {
    table.values.emplace(key, std::max(1, median - variant_offset(variant)));
  }
  return table;
}

}  // namespace cphmm
