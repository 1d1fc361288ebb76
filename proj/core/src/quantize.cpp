#include "cphmm/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cphmm/error.hpp"
#include "cphmm/numeric_io.hpp"
#include "cphmm/random.hpp"

namespace cphmm {
namespace {

// Nearest centroid over an arbitrary (possibly unsorted) centroid list;
// ties go to the lower index.
int nearest(std::span<const double> centroids, double v) {
  int best = 0;
  double best_d = std::abs(v - centroids[0]);
  for (std::size_t t = 1; t < centroids.size(); ++t) {
    const double d = std::abs(v - centroids[t]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(t);
    }
  }
  return best;
}

double sse_of(std::span<const double> values, std::span<const double> centroids,
              std::span<const int> assignment) {
  double sse = 0.0;
  for (std::size_t p = 0; p < values.size(); ++p) {
    const double d = values[p] - centroids[static_cast<std::size_t>(assignment[p])];
    sse += d * d;
  }
  return sse;
}

}  // namespace

Codebook::Codebook(std::vector<double> centroids) : centroids_(std::move(centroids)) {
  if (centroids_.size() < 2) throw Error(ErrorCode::ParamError, "a codebook needs at least 2 centroids");
  for (std::size_t t = 0; t < centroids_.size(); ++t) {
    if (!std::isfinite(centroids_[t])) throw Error(ErrorCode::ParamError, "non-finite centroid");
    if (t > 0 && !(centroids_[t - 1] < centroids_[t])) {
      throw Error(ErrorCode::ParamError, "centroids must be strictly increasing");
    }
  }
}

int Codebook::symbol_for(double value) const {
  // First centroid >= value; the answer is it or its left neighbour.
  const auto it = std::lower_bound(centroids_.begin(), centroids_.end(), value);
  if (it == centroids_.begin()) return 1;
  if (it == centroids_.end()) return size();
  const auto right = static_cast<int>(it - centroids_.begin());
  const double dl = value - *(it - 1);
  const double dr = *it - value;
  return dr < dl ? right + 1 : right;
}

Codebook fit_codebook(std::span<const double> values, int clusters, std::uint64_t seed, KMeansTrace* trace) {
  if (clusters < 2) throw Error(ErrorCode::ParamError, "cluster count must be >= 2");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw Error(ErrorCode::DegenerateInput, "non-finite value in k-means input");
  }
  std::size_t n_distinct = sorted.empty() ? 0 : 1;
  for (std::size_t p = 1; p < sorted.size(); ++p) n_distinct += sorted[p] != sorted[p - 1];
  const auto c = static_cast<std::size_t>(clusters);
  if (n_distinct < c) {
    throw Error(ErrorCode::DegenerateInput, std::to_string(n_distinct) + " distinct values for " +
                                                std::to_string(clusters) + " clusters");
  }

  const std::size_t n = sorted.size();
  std::vector<double> centroids(c);
  for (std::size_t t = 0; t < c; ++t) {
    const double q = (static_cast<double>(t) + 0.5) / static_cast<double>(c);
    const auto idx = std::min(n - 1, static_cast<std::size_t>(q * static_cast<double>(n)));
    centroids[t] = sorted[idx];
  }

  Rng rng(seed);
  std::vector<int> assignment(n, -1);
  std::vector<double> sums(c);
  std::vector<std::size_t> counts(c);
  KMeansTrace local;
  bool first = true;

  for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
    std::size_t changes = 0;
    for (std::size_t p = 0; p < n; ++p) {
      const int a = nearest(centroids, sorted[p]);
      if (a != assignment[p]) {
        ++changes;
        assignment[p] = a;
      }
    }
    if (first) {
      local.initial_sse = sse_of(sorted, centroids, assignment);
      first = false;
    }

    // Empty clusters take the currently worst-fit point.
    std::fill(counts.begin(), counts.end(), 0);
    for (int a : assignment) ++counts[static_cast<std::size_t>(a)];
    for (std::size_t t = 0; t < c; ++t) {
      if (counts[t] != 0) continue;
      double worst = -1.0;
      std::vector<std::size_t> candidates;
      for (std::size_t p = 0; p < n; ++p) {
        const auto owner = static_cast<std::size_t>(assignment[p]);
        if (counts[owner] < 2) continue;
        const double d = std::abs(sorted[p] - centroids[owner]);
        if (d > worst) {
          worst = d;
          candidates.assign(1, p);
        } else if (d == worst) {
          candidates.push_back(p);
        }
      }
      const auto pick = candidates[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(candidates.size()) - 1))];
      --counts[static_cast<std::size_t>(assignment[pick])];
      assignment[pick] = static_cast<int>(t);
      counts[t] = 1;
      centroids[t] = sorted[pick];
      ++changes;
    }
    local.sse.push_back(sse_of(sorted, centroids, assignment));
    local.iterations = iter + 1;

    if (changes == 0) {
      local.converged = true;
      break;
    }

    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t p = 0; p < n; ++p) sums[static_cast<std::size_t>(assignment[p])] += sorted[p];
    for (std::size_t t = 0; t < c; ++t) centroids[t] = sums[t] / static_cast<double>(counts[t]);
  }

  std::sort(centroids.begin(), centroids.end());
  if (trace) *trace = std::move(local);
  return Codebook(std::move(centroids));
}

SymbolSequence encode(const ProcessedSequence& seq, const Codebook& codebook) {
  SymbolSequence out;
  out.id = seq.id;
  out.alphabet = codebook.size();
  out.symbols.reserve(seq.values.size());
  for (double v : seq.values) out.symbols.push_back(codebook.symbol_for(v));
  return out;
}

void save_codebook(const Codebook& codebook, const std::filesystem::path& path) {
  std::string text;
  for (double v : codebook.centroids()) text += format_double(v) + "\n";
  write_text_file(path, text);
}

Codebook load_codebook(const std::filesystem::path& path) {
  std::vector<double> centroids;
  const auto text = read_text_file(path);
  for (auto line : split(text, '\n')) {
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    centroids.push_back(parse_double(line));
  }
  return Codebook(std::move(centroids));
}

}  // namespace cphmm
