#include "cphmm/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cphmm/error.hpp"
#include "cphmm/numeric_io.hpp"
#include "cphmm/random.hpp"

namespace cphmm {
namespace {

constexpr double kStochasticTolerance = 1e-9;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using std::size_t;

void check_distribution(std::span<const double> row, const char* what) {
  double sum = 0.0;
  for (double p : row) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorCode::ParamError, std::string(what) + " has a negative or non-finite entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kStochasticTolerance) {
    throw Error(ErrorCode::ParamError, std::string(what) + " row sums to " + format_double(sum));
  }
}

// Floors every entry at `floor` and rescales the rest so the row sums to 1.
void floor_and_normalize(std::span<double> row, double floor) {
  double total = 0.0;
  for (double p : row) total += p;
  if (!(total > 0.0)) {
    std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
    return;
  }
  for (auto& p : row) p /= total;
  if (floor <= 0.0) return;

  std::vector<bool> pinned(row.size(), false);
  for (size_t pass = 0; pass <= row.size(); ++pass) {
    double free_mass = 0.0;
    size_t n_pinned = 0;
    for (size_t t = 0; t < row.size(); ++t) {
      if (!pinned[t] && row[t] < floor) pinned[t] = true;
      if (pinned[t]) {
        row[t] = floor;
        ++n_pinned;
      } else {
        free_mass += row[t];
      }
    }
    if (n_pinned == 0) return;
    const double target = 1.0 - static_cast<double>(n_pinned) * floor;
    if (!(free_mass > 0.0)) return;
    bool dropped = false;
    for (size_t t = 0; t < row.size(); ++t) {
      if (pinned[t]) continue;
      row[t] *= target / free_mass;
      dropped = dropped || row[t] < floor;
    }
    if (!dropped) return;
  }
}

double log_sum_exp(std::span<const double> xs) {
  double peak = kNegInf;
  for (double x : xs) peak = std::max(peak, x);
  if (peak == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - peak);
  return peak + std::log(acc);
}

void check_symbols(std::span<const int> symbols, int alphabet) {
  for (int s : symbols) {
    if (s < 1 || s > alphabet) {
      throw Error(ErrorCode::SymbolOutOfRange,
                  "symbol " + std::to_string(s) + " outside 1.." + std::to_string(alphabet));
    }
  }
}

// Scratch space and accumulators for one Baum-Welch E-step.
class ForwardBackward {
 public:
  ForwardBackward(int states, int alphabet)
      : n_(static_cast<size_t>(states)),
        k_(static_cast<size_t>(alphabet)),
        init_acc_(n_),
        trans_acc_(n_ * n_),
        emit_acc_(n_ * k_),
        emit_by_symbol_(k_ * n_),
        weight_(n_) {}

  void reset() {
    std::fill(init_acc_.begin(), init_acc_.end(), 0.0);
    std::fill(trans_acc_.begin(), trans_acc_.end(), 0.0);
    std::fill(emit_acc_.begin(), emit_acc_.end(), 0.0);
  }

  void load_emissions(const std::vector<double>& emission) {
    for (size_t s = 0; s < n_; ++s) {
      for (size_t o = 0; o < k_; ++o) emit_by_symbol_[o * n_ + s] = emission[s * k_ + o];
    }
  }

  // Adds one sequence's expected counts; returns its log-likelihood.
  double accumulate(const std::vector<double>& initial, const std::vector<double>& transition,
                    std::span<const int> symbols) {
    const size_t len = symbols.size();
    alpha_.resize(len * n_);
    beta_.resize(len * n_);
    scale_.resize(len);

    const auto column = [&](size_t t) {
      return &emit_by_symbol_[static_cast<size_t>(symbols[t] - 1) * n_];
    };

    double loglik = 0.0;
    {
      const double* e = column(0);
      double c = 0.0;
      for (size_t s = 0; s < n_; ++s) {
        alpha_[s] = initial[s] * e[s];
        c += alpha_[s];
      }
      if (!(c > 0.0)) return kNegInf;
      for (size_t s = 0; s < n_; ++s) alpha_[s] /= c;
      scale_[0] = c;
      loglik += std::log(c);
    }
    for (size_t t = 1; t < len; ++t) {
      const double* prev = &alpha_[(t - 1) * n_];
      double* cur = &alpha_[t * n_];
      std::fill(cur, cur + n_, 0.0);
      for (size_t r = 0; r < n_; ++r) {
        const double a = prev[r];
        const double* row = &transition[r * n_];
        for (size_t s = 0; s < n_; ++s) cur[s] += a * row[s];
      }
      const double* e = column(t);
      double c = 0.0;
      for (size_t s = 0; s < n_; ++s) {
        cur[s] *= e[s];
        c += cur[s];
      }
      if (!(c > 0.0)) return kNegInf;
      for (size_t s = 0; s < n_; ++s) cur[s] /= c;
      scale_[t] = c;
      loglik += std::log(c);
    }

    std::fill(beta_.begin() + static_cast<std::ptrdiff_t>((len - 1) * n_), beta_.end(), 1.0);
    for (size_t t = len - 1; t-- > 0;) {
      const double* e = column(t + 1);
      const double* next = &beta_[(t + 1) * n_];
      for (size_t s = 0; s < n_; ++s) weight_[s] = e[s] * next[s] / scale_[t + 1];
      double* cur = &beta_[t * n_];
      const double* a = &alpha_[t * n_];
      for (size_t r = 0; r < n_; ++r) {
        const double* row = &transition[r * n_];
        double* acc = &trans_acc_[r * n_];
        double b = 0.0;
        for (size_t s = 0; s < n_; ++s) {
          const double tw = row[s] * weight_[s];
          b += tw;
          acc[s] += a[r] * tw;
        }
        cur[r] = b;
      }
    }

    for (size_t t = 0; t < len; ++t) {
      const auto o = static_cast<size_t>(symbols[t] - 1);
      const double* a = &alpha_[t * n_];
      const double* b = &beta_[t * n_];
      for (size_t s = 0; s < n_; ++s) {
        const double g = a[s] * b[s];
        emit_acc_[s * k_ + o] += g;
        if (t == 0) init_acc_[s] += g;
      }
    }
    return loglik;
  }

  const std::vector<double>& init_acc() const { return init_acc_; }
  const std::vector<double>& trans_acc() const { return trans_acc_; }
  const std::vector<double>& emit_acc() const { return emit_acc_; }

 private:
  size_t n_, k_;
  std::vector<double> init_acc_, trans_acc_, emit_acc_;
  std::vector<double> emit_by_symbol_;
  std::vector<double> alpha_, beta_, scale_, weight_;
};

void check_training_set(std::span<const SymbolSequence> sequences, int alphabet) {
  if (sequences.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no training sequences");
  for (const auto& seq : sequences) {
    if (seq.alphabet != alphabet) {
      throw Error(ErrorCode::AlphabetMismatch, "sequence alphabet " + std::to_string(seq.alphabet) +
                                                   " differs from model alphabet " + std::to_string(alphabet));
    }
    if (seq.symbols.empty()) throw Error(ErrorCode::ParamError, "empty training sequence");
    check_symbols(seq.symbols, alphabet);
  }
}

}  // namespace

Hmm::Hmm(int states, int alphabet, std::vector<double> initial, std::vector<double> transition,
         std::vector<double> emission)
    : states_(states),
      alphabet_(alphabet),
      initial_(std::move(initial)),
      transition_(std::move(transition)),
      emission_(std::move(emission)) {
  if (states < 1) throw Error(ErrorCode::ParamError, "state count must be >= 1");
  if (alphabet < 1) throw Error(ErrorCode::ParamError, "alphabet size must be >= 1");
  const auto n = static_cast<size_t>(states);
  const auto k = static_cast<size_t>(alphabet);
  if (initial_.size() != n || transition_.size() != n * n || emission_.size() != n * k) {
    throw Error(ErrorCode::ParamError, "HMM parameter shapes do not match n and k");
  }
  check_distribution(initial_, "initial vector");
  for (size_t s = 0; s < n; ++s) {
    check_distribution(std::span<const double>(transition_).subspan(s * n, n), "transition");
    check_distribution(std::span<const double>(emission_).subspan(s * k, k), "emission");
  }
}

Hmm init_random(int states, int alphabet, std::uint64_t seed) {
  if (states < 1 || alphabet < 2) {
    throw Error(ErrorCode::ParamError, "init_random needs states >= 1 and alphabet >= 2");
  }
  const auto n = static_cast<size_t>(states);
  const auto k = static_cast<size_t>(alphabet);
  Rng rng(seed);
  const auto fill_rows = [&](std::vector<double>& m, size_t rows, size_t cols) {
    m.resize(rows * cols);
    for (size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (size_t c = 0; c < cols; ++c) sum += m[r * cols + c] = rng.uniform_open0();
      for (size_t c = 0; c < cols; ++c) m[r * cols + c] /= sum;
    }
  };
  std::vector<double> b, t, e;
  fill_rows(b, 1, n);
  fill_rows(t, n, n);
  fill_rows(e, n, k);
  return Hmm(states, alphabet, std::move(b), std::move(t), std::move(e));
}

double forward_log_likelihood(const Hmm& model, std::span<const int> symbols) {
  check_symbols(symbols, model.alphabet());
  if (symbols.empty()) return 0.0;
  const auto n = static_cast<size_t>(model.states());
  const auto safe_log = [](double p) { return p > 0.0 ? std::log(p) : kNegInf; };

  std::vector<double> log_t(n * n);
  for (size_t i = 0; i < n * n; ++i) log_t[i] = safe_log(model.transition()[i]);

  std::vector<double> alpha(n), next(n), terms(n);
  for (size_t s = 0; s < n; ++s) {
    alpha[s] = safe_log(model.initial()[s]) + safe_log(model.emission(static_cast<int>(s), symbols[0]));
  }
  for (size_t t = 1; t < symbols.size(); ++t) {
    for (size_t s = 0; s < n; ++s) {
      for (size_t r = 0; r < n; ++r) terms[r] = alpha[r] + log_t[r * n + s];
      next[s] = log_sum_exp(terms) + safe_log(model.emission(static_cast<int>(s), symbols[t]));
    }
    alpha.swap(next);
  }
  return log_sum_exp(alpha);
}

std::vector<int> sample_sequence(const Hmm& model, int length, std::uint64_t seed) {
  Rng rng(seed);
  const auto draw = [&](std::span<const double> dist) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (size_t t = 0; t < dist.size(); ++t) {
      acc += dist[t];
      if (u < acc) return static_cast<int>(t);
    }
    return static_cast<int>(dist.size()) - 1;
  };
  const auto n = static_cast<size_t>(model.states());
  const auto k = static_cast<size_t>(model.alphabet());
  std::vector<int> out;
  out.reserve(static_cast<size_t>(std::max(length, 0)));
  int state = draw(model.initial());
  for (int t = 0; t < length; ++t) {
    if (t > 0) state = draw(model.transition().subspan(static_cast<size_t>(state) * n, n));
    out.push_back(draw(model.emission().subspan(static_cast<size_t>(state) * k, k)) + 1);
  }
  return out;
}

void TrainConfig::validate() const {
  if (max_iter < 0) throw Error(ErrorCode::ParamError, "max_iter must be >= 0");
  if (!(rel_tol >= 0.0)) throw Error(ErrorCode::ParamError, "rel_tol must be >= 0");
  if (restarts < 1) throw Error(ErrorCode::ParamError, "restarts must be >= 1");
  if (!(prob_floor >= 0.0) || prob_floor >= 0.01) {
    throw Error(ErrorCode::ParamError, "prob_floor must lie in [0, 0.01)");
  }
}

TrainResult baum_welch_from(const Hmm& init, std::span<const SymbolSequence> sequences,
                            const TrainConfig& config) {
  config.validate();
  check_training_set(sequences, init.alphabet());

  const int states = init.states();
  const int alphabet = init.alphabet();
  const auto n = static_cast<size_t>(states);
  const auto k = static_cast<size_t>(alphabet);
  std::vector<double> initial(init.initial().begin(), init.initial().end());
  std::vector<double> transition(init.transition().begin(), init.transition().end());
  std::vector<double> emission(init.emission().begin(), init.emission().end());

  ForwardBackward fb(states, alphabet);
  TrainReport report;
  report.restarts_used = 1;

  for (int iter = 0;; ++iter) {
    fb.reset();
    fb.load_emissions(emission);
    double total = 0.0;
    for (const auto& seq : sequences) total += fb.accumulate(initial, transition, seq.symbols);
    report.loglik_trace.push_back(total);

    if (!std::isfinite(total)) break;
    if (iter > 0) {
      const double prev = report.loglik_trace[report.loglik_trace.size() - 2];
      if (total - prev <= config.rel_tol * std::abs(prev)) {
        report.converged = true;
        break;
      }
    }
    if (iter == config.max_iter) break;

    // M-step. A state with no expected occupancy keeps its previous row.
    initial = fb.init_acc();
    floor_and_normalize(initial, config.prob_floor);
    for (size_t r = 0; r < n; ++r) {
      std::span<double> row(&transition[r * n], n);
      double mass = 0.0;
      for (size_t s = 0; s < n; ++s) mass += fb.trans_acc()[r * n + s];
      if (mass > 0.0) std::copy_n(&fb.trans_acc()[r * n], n, row.begin());
      floor_and_normalize(row, config.prob_floor);
    }
    for (size_t s = 0; s < n; ++s) {
      std::span<double> row(&emission[s * k], k);
      double mass = 0.0;
      for (size_t o = 0; o < k; ++o) mass += fb.emit_acc()[s * k + o];
      if (mass > 0.0) std::copy_n(&fb.emit_acc()[s * k], k, row.begin());
      floor_and_normalize(row, config.prob_floor);
    }
    report.iterations = iter + 1;
  }

  report.restart_logliks = {report.loglik_trace.back()};
  return {Hmm(states, alphabet, std::move(initial), std::move(transition), std::move(emission)),
          std::move(report)};
}

TrainResult baum_welch(std::span<const SymbolSequence> sequences, int states, int alphabet,
                       const TrainConfig& config) {
  config.validate();
  if (states < 1 || alphabet < 2) {
    throw Error(ErrorCode::ParamError, "baum_welch needs states >= 1 and alphabet >= 2");
  }
  check_training_set(sequences, alphabet);

  std::vector<TrainResult> runs;
  std::vector<double> finals;
  int best = 0;
  for (int r = 0; r < config.restarts; ++r) {
    const auto init = init_random(states, alphabet, derive_seed(config.seed, {static_cast<std::uint64_t>(r)}));
    runs.push_back(baum_welch_from(init, sequences, config));
    finals.push_back(runs.back().report.loglik_trace.back());
    if (finals.back() > finals[static_cast<size_t>(best)]) best = r;
  }
  TrainResult chosen = std::move(runs[static_cast<size_t>(best)]);
  chosen.report.restarts_used = config.restarts;
  chosen.report.best_restart = best;
  chosen.report.restart_logliks = std::move(finals);
  return chosen;
}

Classification classify(const std::map<std::string, Hmm>& models, std::span<const int> symbols) {
  if (models.empty()) throw Error(ErrorCode::EmptyModelSet, "no models to classify against");
  const int alphabet = models.begin()->second.alphabet();
  for (const auto& [label, model] : models) {
    if (model.alphabet() != alphabet) {
      throw Error(ErrorCode::AlphabetMismatch, "model '" + label + "' has alphabet " +
                                                   std::to_string(model.alphabet()) + ", expected " +
                                                   std::to_string(alphabet));
    }
  }
  for (int s : symbols) {
    if (s < 1 || s > alphabet) {
      throw Error(ErrorCode::AlphabetMismatch,
                  "symbol " + std::to_string(s) + " outside model alphabet 1.." + std::to_string(alphabet));
    }
  }

  Classification out;
  double best = 0.0;
  for (const auto& [label, model] : models) {
    const double ll = forward_log_likelihood(model, symbols);
    out.scores.emplace_back(label, ll);
    if (out.label.empty() || ll > best) {
      out.label = label;
      best = ll;
    }
  }
  return out;
}

std::string hmm_to_text(const Hmm& model) {
  std::string text = std::to_string(model.states()) + " " + std::to_string(model.alphabet()) + "\n";
  const auto line = [&](std::span<const double> row) {
    for (size_t t = 0; t < row.size(); ++t) {
      if (t) text += ' ';
      text += format_double(row[t]);
    }
    text += '\n';
  };
  const auto n = static_cast<size_t>(model.states());
  const auto k = static_cast<size_t>(model.alphabet());
  line(model.initial());
  for (size_t r = 0; r < n; ++r) line(model.transition().subspan(r * n, n));
  for (size_t r = 0; r < n; ++r) line(model.emission().subspan(r * k, k));
  return text;
}

Hmm hmm_from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(std::move(tok));
  try {
    if (tokens.size() < 2) throw Error(ErrorCode::ModelLoadError, "missing 'n k' header");
    const auto n = parse_integer(tokens[0]);
    const auto k = parse_integer(tokens[1]);
    if (n < 1 || k < 1 || n > 100000 || k > 100000) throw Error(ErrorCode::ModelLoadError, "bad header");
    const auto un = static_cast<size_t>(n), uk = static_cast<size_t>(k);
    const size_t expected = 2 + un + un * un + un * uk;
    if (tokens.size() != expected) {
      throw Error(ErrorCode::ModelLoadError, "expected " + std::to_string(expected - 2) + " values, found " +
                                                 std::to_string(tokens.size() - 2));
    }
    std::vector<double> values;
    values.reserve(expected - 2);
    for (size_t t = 2; t < tokens.size(); ++t) values.push_back(parse_double(tokens[t]));
    auto it = values.begin();
    std::vector<double> b(it, it + static_cast<std::ptrdiff_t>(un));
    it += static_cast<std::ptrdiff_t>(un);
    std::vector<double> tr(it, it + static_cast<std::ptrdiff_t>(un * un));
    it += static_cast<std::ptrdiff_t>(un * un);
    std::vector<double> em(it, values.end());
    return Hmm(static_cast<int>(n), static_cast<int>(k), std::move(b), std::move(tr), std::move(em));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ModelLoadError) throw;
    throw Error(ErrorCode::ModelLoadError, e.what());
  }
}

void save_hmm(const Hmm& model, const std::filesystem::path& path) { write_text_file(path, hmm_to_text(model)); }

Hmm load_hmm(const std::filesystem::path& path) {
  try {
    return hmm_from_text(read_text_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ModelLoadError) throw;
    throw Error(ErrorCode::ModelLoadError, path.string() + ": " + e.what());
  }
}

}  // namespace cphmm
