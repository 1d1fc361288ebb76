#pragma once

#include <span>
#include <vector>

#include "cphmm/dataset.hpp"

namespace cphmm {

inline constexpr int kDefaultResampleLength = 64;

/// Fixed-length, zero-mean, unit-deviation copy of one sensor row.
struct ProcessedSequence {
  SequenceId id;
  std::vector<double> values;
};

/// Piecewise cubic (Catmull-Rom) interpolation evaluated at `target_length`
/// uniformly spaced abscissae over the original index span. Phantom end
/// points are extrapolated quadratically, so quadratic data is reproduced
/// exactly and the first and last samples are preserved bit for bit.
/// Throws LengthError when the row or the target is shorter than 2.
std::vector<double> resample(std::span<const double> row, int target_length);

/// (x - mean) / sigma with the population deviation (divisor = size).
/// Throws ZeroVariance for a constant row.
std::vector<double> normalize(std::span<const double> row);

struct PreprocessResult {
  /// Ordered by (gesture, sensor, execution).
  std::vector<ProcessedSequence> sequences;
  /// Rows dropped because they were constant after resampling.
  std::vector<SequenceId> excluded;
};

PreprocessResult preprocess_dataset(const RawDataset& dataset, int target_length);

}  // namespace cphmm
