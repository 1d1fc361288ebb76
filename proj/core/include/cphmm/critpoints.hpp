#pragma once

#include <map>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace cphmm {

inline constexpr int kDefaultGamma = 1;

/// 0-based positions of interior local extrema.
struct Extrema {
  std::vector<int> maxima;
  std::vector<int> minima;
};

struct CriticalPointCount {
  int n_max = 0;
  int n_min = 0;
  int total = 2;  // n_max + n_min + 2 (both endpoints)
  int gamma = 1;
};

/// Interior position m is a maximum when seq[m] is >= every value in the
/// window [m - gamma, m + gamma] (indices clamped to the sequence, i.e. the
/// end values are replicated) and strictly greater than at least one of them.
/// A flat run reports only its leftmost sample; runs touching the first
/// sample report nothing. Minima are symmetric. Endpoints are never scanned.
/// Throws LengthError (size < 3) or ParamError (gamma < 1).
Extrema find_extrema(std::span<const double> seq, int gamma = kDefaultGamma);

CriticalPointCount count_critical_points(std::span<const double> seq, int gamma = kDefaultGamma);

/// Lower median (middle order statistic for odd counts). Throws EmptyInput.
int median_cp(std::span<const int> totals);

enum class PredictorVariant {
  AllPoints,     // cp
  NoBoundaries,  // cp - 2
  Trends,        // cp - 1
};

inline constexpr PredictorVariant kAllVariants[] = {
    PredictorVariant::AllPoints, PredictorVariant::NoBoundaries, PredictorVariant::Trends};

int variant_offset(PredictorVariant v);
std::string_view to_string(PredictorVariant v);
/// Accepts "all_points", "no_boundaries", "trends". Throws ConfigError.
PredictorVariant parse_variant(std::string_view name);

/// Per-(gesture, sensor) state-count predictor, 0-based keys.
struct PredictorTable {
  PredictorVariant variant = PredictorVariant::AllPoints;
  std::map<std::pair<int, int>, int> values;

  int at(int gesture, int sensor) const { return values.at({gesture, sensor}); }
};

/// entry = max(1, median - offset(variant)).
PredictorTable build_predictor_table(const std::map<std::pair<int, int>, int>& medians,
                                     PredictorVariant variant);

}  // namespace cphmm
