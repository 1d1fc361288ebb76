#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cphmm/quantize.hpp"

namespace cphmm {

/// Discrete HMM with n states over the alphabet 1..k. Matrices are stored
/// row-major; every row of the transition and emission matrices and the
/// initial vector is a probability distribution (checked to 1e-9).
class Hmm {
 public:
  /// Throws ParamError when shapes or stochasticity are violated.
  Hmm(int states, int alphabet, std::vector<double> initial, std::vector<double> transition,
      std::vector<double> emission);

  int states() const { return states_; }
  int alphabet() const { return alphabet_; }

  std::span<const double> initial() const { return initial_; }
  std::span<const double> transition() const { return transition_; }
  std::span<const double> emission() const { return emission_; }

  double initial(int state) const { return initial_[static_cast<std::size_t>(state)]; }
  double transition(int from, int to) const {
    return transition_[static_cast<std::size_t>(from) * static_cast<std::size_t>(states_) +
                       static_cast<std::size_t>(to)];
  }
  /// `symbol` is 1-based.
  double emission(int state, int symbol) const {
    return emission_[static_cast<std::size_t>(state) * static_cast<std::size_t>(alphabet_) +
                     static_cast<std::size_t>(symbol - 1)];
  }

  friend bool operator==(const Hmm&, const Hmm&) = default;

 private:
  int states_;
  int alphabet_;
  std::vector<double> initial_;
  std::vector<double> transition_;
  std::vector<double> emission_;
};

/// Rows of uniform (0,1] variates, each normalized. Throws ParamError
/// unless states >= 1 and alphabet >= 2.
Hmm init_random(int states, int alphabet, std::uint64_t seed);

/// log p(symbols | model) in nats, computed with a log-sum-exp forward pass.
/// Returns -infinity when the sequence is impossible under the model.
/// Throws SymbolOutOfRange for symbols outside 1..k.
double forward_log_likelihood(const Hmm& model, std::span<const int> symbols);
inline double forward_log_likelihood(const Hmm& model, const SymbolSequence& seq) {
  return forward_log_likelihood(model, seq.symbols);
}

/// Draws a state path and emitted symbols. Used to plant models in tests
/// and in the synthetic experiments.
std::vector<int> sample_sequence(const Hmm& model, int length, std::uint64_t seed);

struct TrainConfig {
  int max_iter = 200;
  double rel_tol = 1e-6;
  int restarts = 3;
  std::uint64_t seed = 0;
  double prob_floor = 1e-10;

  /// Throws ParamError.
  void validate() const;
};

struct TrainReport {
  /// M-steps performed by the selected restart.
  int iterations = 0;
  /// Total log-likelihood of the selected restart's model before each
  /// M-step and after the last one (so size = iterations + 1).
  std::vector<double> loglik_trace;
  bool converged = false;
  int restarts_used = 0;
  int best_restart = 0;
  /// Final total log-likelihood of every restart.
  std::vector<double> restart_logliks;
};

struct TrainResult {
  Hmm model;
  TrainReport report;
};

/// Multi-sequence Baum-Welch from a given starting model. Uses scaled
/// forward-backward; after every M-step each distribution is floored at
/// config.prob_floor and renormalized. Stops when the relative improvement of
/// the total log-likelihood falls below config.rel_tol or after max_iter
/// M-steps. The restart/seed fields of `config` are ignored.
TrainResult baum_welch_from(const Hmm& init, std::span<const SymbolSequence> sequences,
                            const TrainConfig& config);

/// Best of config.restarts runs from init_random(states, alphabet,
/// derive_seed(config.seed, {restart})), ranked by final total
/// log-likelihood (ties keep the earlier restart).
/// Throws EmptyTrainingSet, ParamError, AlphabetMismatch, SymbolOutOfRange.
TrainResult baum_welch(std::span<const SymbolSequence> sequences, int states, int alphabet,
                       const TrainConfig& config = {});

struct Classification {
  std::string label;
  /// Per-label log-likelihoods in label order.
  std::vector<std::pair<std::string, double>> scores;
};

/// Argmax of forward_log_likelihood over the labelled models; ties resolve to
/// the lowest label in map order. Throws EmptyModelSet or AlphabetMismatch.
Classification classify(const std::map<std::string, Hmm>& models, std::span<const int> symbols);

/// Text form: "n k" header line, then b, then n rows of T, then n rows of E;
/// values space separated in shortest round-trip decimal form.
std::string hmm_to_text(const Hmm& model);
/// Throws ModelLoadError.
Hmm hmm_from_text(std::string_view text);

void save_hmm(const Hmm& model, const std::filesystem::path& path);
Hmm load_hmm(const std::filesystem::path& path);

}  // namespace cphmm
