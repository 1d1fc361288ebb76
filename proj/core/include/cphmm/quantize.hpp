#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cphmm/dataset.hpp"
#include "cphmm/preprocess.hpp"

namespace cphmm {

/// Sorted scalar centroids; symbol t (1-based) is centroids[t - 1].
class Codebook {
 public:
  /// Throws ParamError unless there are >= 2 strictly increasing centroids.
  explicit Codebook(std::vector<double> centroids);

  int size() const { return static_cast<int>(centroids_.size()); }
  std::span<const double> centroids() const { return centroids_; }

  /// 1-based index of the nearest centroid; equidistant values go to the
  /// lower index.
  int symbol_for(double value) const;

  friend bool operator==(const Codebook&, const Codebook&) = default;

 private:
  std::vector<double> centroids_;
};

/// Discretized sequence over the alphabet 1..alphabet.
struct SymbolSequence {
  SequenceId id;
  int alphabet = 0;
  std::vector<int> symbols;
};

struct KMeansTrace {
  double initial_sse = 0.0;
  /// Within-cluster SSE after every assignment step.
  std::vector<double> sse;
  int iterations = 0;
  bool converged = false;
};

inline constexpr int kMaxLloydIterations = 200;

/// Scalar k-means (Lloyd) with quantile seeding: centroid t starts at the
/// (t - 1/2)/c quantile of the pooled values. Stops when no assignment
/// changes or after 200 iterations. An empty cluster takes over the point
/// farthest from its centroid; `seed` only picks among equally far points.
/// Throws ParamError (c < 2) or DegenerateInput (fewer than c distinct values).
Codebook fit_codebook(std::span<const double> values, int clusters, std::uint64_t seed,
                      KMeansTrace* trace = nullptr);

SymbolSequence encode(const ProcessedSequence& seq, const Codebook& codebook);

/// One centroid per line in shortest round-trip decimal form.
void save_codebook(const Codebook& codebook, const std::filesystem::path& path);
Codebook load_codebook(const std::filesystem::path& path);

}  // namespace cphmm
