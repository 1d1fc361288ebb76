#include "cphmm/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cphmm/error.hpp"

namespace cphmm {

std::vector<double> resample(std::span<const double> row, int target_length) {
  const auto n = row.size();
  if (n < 2) throw Error(ErrorCode::LengthError, "cannot resample a row of length " + std::to_string(n));
  if (target_length < 2) throw Error(ErrorCode::LengthError, "resample target must be >= 2");

  // Sample at index p, with one phantom point on each side.
  const auto at = [&](std::ptrdiff_t p) -> double {
    const auto last = static_cast<std::ptrdiff_t>(n) - 1;
    if (p < 0) return n >= 3 ? 3.0 * row[0] - 3.0 * row[1] + row[2] : 2.0 * row[0] - row[1];
    if (p > last) {
      return n >= 3 ? 3.0 * row[n - 1] - 3.0 * row[n - 2] + row[n - 3] : 2.0 * row[n - 1] - row[n - 2];
    }
    return row[static_cast<std::size_t>(p)];
  };

  const auto m_count = static_cast<std::size_t>(target_length);
  std::vector<double> out(m_count);
  const double span = static_cast<double>(n - 1);
  const double steps = static_cast<double>(target_length - 1);
  for (std::size_t m = 0; m < m_count; ++m) {
    const double x = static_cast<double>(m) * span / steps;
    auto p = static_cast<std::ptrdiff_t>(std::floor(x));
    if (p >= static_cast<std::ptrdiff_t>(n) - 1) p = static_cast<std::ptrdiff_t>(n) - 2;
    const double s = x - static_cast<double>(p);
    const double p0 = at(p - 1), p1 = at(p), p2 = at(p + 1), p3 = at(p + 2);
    // Catmull-Rom in Horner form; s = 0 yields p1 exactly.
    const double c1 = 0.5 * (p2 - p0);
    const double c2 = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
    const double c3 = 0.5 * (p3 - p0) + 1.5 * (p1 - p2);
    out[m] = p1 + s * (c1 + s * (c2 + s * c3));
  }
  out.front() = row.front();
  out.back() = row.back();
  return out;
}

std::vector<double> normalize(std::span<const double> row) {
  if (row.empty()) throw Error(ErrorCode::LengthError, "cannot normalize an empty row");
  const double count = static_cast<double>(row.size());
  double mean = 0.0;
  for (double v : row) mean += v;
  mean /= count;
  // Corrected two-pass: the second mean removes the rounding left in the first.
  std::vector<double> out(row.begin(), row.end());
  double residual = 0.0;
  for (auto& v : out) {
    v -= mean;
    residual += v;
  }
  residual /= count;
  double ss = 0.0;
  for (auto& v : out) {
    v -= residual;
    ss += v * v;
  }
  const double sigma = std::sqrt(ss / count);
  double peak = 0.0;
  for (double v : row) peak = std::max(peak, std::abs(v));
  // Deviation at rounding level of the magnitudes is a constant row.
  if (!(sigma > 8.0 * std::numeric_limits<double>::epsilon() * peak)) {
    throw Error(ErrorCode::ZeroVariance, "row is constant");
  }

  for (auto& v : out) v /= sigma;
  return out;
}

PreprocessResult preprocess_dataset(const RawDataset& dataset, int target_length) {
  PreprocessResult result;
  for (int i = 0; i < dataset.gestures(); ++i) {
    for (int j = 0; j < dataset.sensors(); ++j) {
      for (int k = 0; k < dataset.executions(); ++k) {
        const SequenceId id{i, j, k};
        auto resampled = resample(dataset.row(id), target_length);
        try {
          result.sequences.push_back({id, normalize(resampled)});
        } catch (const Error& e) {
          if (e.code() != ErrorCode::ZeroVariance) throw;
          result.excluded.push_back(id);
        }
      }
    }
  }
  return result;
}

}  // namespace cphmm
