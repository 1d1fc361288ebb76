#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <cmath>
#include <limits>

#include "cphmm/hmm.hpp"
#include "cphmm/random.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace cphmm;
using oracle::code_of;
using oracle::make_symbols;

namespace {

void expect_stochastic(const Hmm& m, double floor = 0.0) {
  const auto n = static_cast<std::size_t>(m.states());
  const auto k = static_cast<std::size_t>(m.alphabet());
  const auto check = [&](std::span<const double> row) {
    double sum = 0.0;
    for (double p : row) {
      EXPECT_GE(p, floor);
      sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  };
  check(m.initial());
  for (std::size_t r = 0; r < n; ++r) {
    check(m.transition().subspan(r * n, n));
    check(m.emission().subspan(r * k, k));
  }
}

std::vector<SymbolSequence> random_corpus(oracle::TestRng& rng, int count, int length, int alphabet) {
  std::vector<SymbolSequence> out;
  for (int s = 0; s < count; ++s) {
    std::vector<int> symbols(static_cast<std::size_t>(length));
    for (auto& o : symbols) o = 1 + rng.below(alphabet);
    out.push_back(make_symbols(std::move(symbols), alphabet, s));
  }
  return out;
}

Hmm permuted(const Hmm& m, const std::vector<int>& perm) {
  const int n = m.states(), k = m.alphabet();
  std::vector<double> b(static_cast<std::size_t>(n)), t(static_cast<std::size_t>(n * n)),
      e(static_cast<std::size_t>(n * k));
  for (int s = 0; s < n; ++s) {
    const int p = perm[static_cast<std::size_t>(s)];
    b[static_cast<std::size_t>(p)] = m.initial(s);
    for (int r = 0; r < n; ++r) t[static_cast<std::size_t>(p * n + perm[static_cast<std::size_t>(r)])] = m.transition(s, r);
    for (int o = 1; o <= k; ++o) e[static_cast<std::size_t>(p * k + o - 1)] = m.emission(s, o);
  }
  return Hmm(n, k, b, t, e);
}

}  // namespace

TEST(InitRandom, SingleStateDegenerate) {
  const auto m = init_random(1, 2, 5);
  EXPECT_EQ(m.transition(0, 0), 1.0);
  EXPECT_EQ(m.initial(0), 1.0);
  expect_stochastic(m);
}

TEST(InitRandom, DeterministicAndStochastic) {
  for (int n = 1; n <= 6; ++n) {
    for (int k = 2; k <= 6; ++k) {
      const auto a = init_random(n, k, 100 + static_cast<std::uint64_t>(n * k));
      EXPECT_EQ(a, init_random(n, k, 100 + static_cast<std::uint64_t>(n * k)));
      expect_stochastic(a);
    }
  }
  EXPECT_EQ(code_of([] { init_random(0, 2, 0); }), ErrorCode::ParamError);
  EXPECT_EQ(code_of([] { init_random(2, 1, 0); }), ErrorCode::ParamError);
}

TEST(Forward, UniformSingleStateClosedForm) {
  const Hmm m(1, 4, {1.0}, {1.0}, {0.25, 0.25, 0.25, 0.25});
  const std::vector<int> seq{1, 4, 2, 2, 3, 1, 1};
  EXPECT_NEAR(forward_log_likelihood(m, seq), 7.0 * std::log(0.25), 1e-12);
}

TEST(Forward, TwoStateLengthFourMatchesPathEnumeration) {
  const Hmm m(2, 2, {0.6, 0.4}, {0.7, 0.3, 0.2, 0.8}, {0.9, 0.1, 0.35, 0.65});
  for (int code = 0; code < 16; ++code) {
    std::vector<int> seq;
    for (int t = 0; t < 4; ++t) seq.push_back(1 + ((code >> t) & 1));
    const double brute = oracle::path_enumeration_probability(m, seq);
    EXPECT_NEAR(std::exp(forward_log_likelihood(m, seq)) / brute, 1.0, 1e-9);
  }
}

TEST(Forward, ImpossibleSymbolIsMinusInfinity) {
  const Hmm m(2, 3, {0.5, 0.5}, {0.5, 0.5, 0.5, 0.5}, {0.5, 0.5, 0.0, 0.2, 0.8, 0.0});
  EXPECT_EQ(forward_log_likelihood(m, std::vector<int>{1, 2, 3, 1}), -std::numeric_limits<double>::infinity());
  EXPECT_TRUE(std::isfinite(forward_log_likelihood(m, std::vector<int>{1, 2, 2, 1})));
}

TEST(Forward, LongSequencesDoNotUnderflow) {
  const auto m = init_random(4, 11, 3);
  std::vector<int> seq(4096);
  for (std::size_t t = 0; t < seq.size(); ++t) seq[t] = 1 + static_cast<int>(t * 7 % 11);
  const double ll = forward_log_likelihood(m, seq);
  EXPECT_TRUE(std::isfinite(ll));
  EXPECT_LT(ll, -1000.0);
}

TEST(Forward, SymbolOutOfRange) {
  const auto m = init_random(2, 3, 1);
  EXPECT_EQ(code_of([&] { forward_log_likelihood(m, std::vector<int>{1, 4}); }), ErrorCode::SymbolOutOfRange);
  EXPECT_EQ(code_of([&] { forward_log_likelihood(m, std::vector<int>{0, 1}); }), ErrorCode::SymbolOutOfRange);
}

TEST(Forward, InvariantUnderStateRelabeling) {
  oracle::TestRng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + rng.below(4);
    const auto m = init_random(n, 5, rng.next());
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::rotate(perm.begin(), perm.begin() + 1 + rng.below(n - 1), perm.end());
    const auto q = permuted(m, perm);
    std::vector<int> seq(40);
    for (auto& o : seq) o = 1 + rng.below(5);
    EXPECT_NEAR(forward_log_likelihood(q, seq), forward_log_likelihood(m, seq), 1e-9);
  }
}

TEST(BaumWelch, ConstantCorpusConcentratesOnItsSymbol) {
  std::vector<SymbolSequence> corpus;
  for (int s = 0; s < 6; ++s) corpus.push_back(make_symbols(std::vector<int>(30, 1), 4, s));
  TrainConfig config;
  config.seed = 3;
  for (int n = 1; n <= 3; ++n) {
    const auto fit = baum_welch(corpus, n, 4, config);
    expect_stochastic(fit.model, config.prob_floor);
    // Visited states: positive initial or incoming mass.
    for (int s = 0; s < n; ++s) {
      if (fit.model.initial(s) > 1e-3) EXPECT_GE(fit.model.emission(s, 1), 1.0 - 3 * config.prob_floor - 1e-12);
    }
  }
}

TEST(BaumWelch, TraceIsMonotoneAndModelsStayStochastic) {
  oracle::TestRng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + rng.below(5);
    const int k = 2 + rng.below(6);
    const auto corpus = random_corpus(rng, 1 + rng.below(6), 5 + rng.below(60), k);
    TrainConfig config;
    config.max_iter = 60;
    config.rel_tol = 0.0;
    const auto fit = baum_welch_from(init_random(n, k, rng.next()), corpus, config);
    expect_stochastic(fit.model, config.prob_floor);
    const auto& trace = fit.report.loglik_trace;
    ASSERT_EQ(trace.size(), static_cast<std::size_t>(fit.report.iterations) + 1);
    for (std::size_t t = 1; t < trace.size(); ++t) EXPECT_GE(trace[t], trace[t - 1] - 1e-8);
  }
}

TEST(BaumWelch, TraceMatchesForwardLikelihoodOfReturnedModel) {
  oracle::TestRng rng(2);
  const auto corpus = random_corpus(rng, 4, 50, 3);
  const auto fit = baum_welch(corpus, 3, 3, {});
  double total = 0.0;
  for (const auto& s : corpus) total += forward_log_likelihood(fit.model, s);
  EXPECT_NEAR(fit.report.loglik_trace.back(), total, 1e-8 * std::abs(total));
  EXPECT_EQ(fit.report.restarts_used, 3);
  EXPECT_EQ(fit.report.restart_logliks.size(), 3u);
  const double best = *std::max_element(fit.report.restart_logliks.begin(), fit.report.restart_logliks.end());
  EXPECT_EQ(fit.report.restart_logliks[static_cast<std::size_t>(fit.report.best_restart)], best);
}

TEST(BaumWelch, DeterministicPerSeed) {
  oracle::TestRng rng(8);
  const auto corpus = random_corpus(rng, 5, 30, 4);
  TrainConfig config;
  config.seed = 99;
  EXPECT_EQ(baum_welch(corpus, 3, 4, config).model, baum_welch(corpus, 3, 4, config).model);
}

TEST(BaumWelch, Errors) {
  const std::vector<SymbolSequence> none;
  EXPECT_EQ(code_of([&] { baum_welch(none, 2, 3); }), ErrorCode::EmptyTrainingSet);
  const std::vector<SymbolSequence> mixed{make_symbols({1, 2}, 3), make_symbols({1, 2}, 4)};
  EXPECT_EQ(code_of([&] { baum_welch(mixed, 2, 3); }), ErrorCode::AlphabetMismatch);
  const std::vector<SymbolSequence> wild{make_symbols({1, 5}, 3)};
  EXPECT_EQ(code_of([&] { baum_welch(wild, 2, 3); }), ErrorCode::SymbolOutOfRange);
  const std::vector<SymbolSequence> ok{make_symbols({1, 2, 3}, 3)};
  TrainConfig bad;
  bad.restarts = 0;
  EXPECT_EQ(code_of([&] { baum_welch(ok, 2, 3, bad); }), ErrorCode::ParamError);
  EXPECT_EQ(code_of([&] { baum_welch(ok, 0, 3); }), ErrorCode::ParamError);
}

TEST(Classify, SingleModel) {
  const std::map<std::string, Hmm> models{{"only", init_random(2, 3, 1)}};
  EXPECT_EQ(classify(models, std::vector<int>{1, 2, 3}).label, "only");
}

TEST(Classify, ZeroProbabilityModelLoses) {
  const Hmm blind(1, 2, {1.0}, {1.0}, {1.0, 0.0});
  const Hmm open(1, 2, {1.0}, {1.0}, {0.5, 0.5});
  const std::map<std::string, Hmm> models{{"a", blind}, {"b", open}};
  EXPECT_EQ(classify(models, std::vector<int>{1, 2, 1}).label, "b");
}

TEST(Classify, TiesGoToTheFirstLabel) {
  const auto m = init_random(2, 3, 4);
  const std::map<std::string, Hmm> models{{"zeta", m}, {"alpha", m}};
  EXPECT_EQ(classify(models, std::vector<int>{3, 3, 1}).label, "alpha");
}

TEST(Classify, TrainThenClassifyDegenerateCorpora) {
  std::vector<SymbolSequence> ones, twos;
  for (int s = 0; s < 4; ++s) {
    ones.push_back(make_symbols(std::vector<int>(20, 1), 2, s));
    twos.push_back(make_symbols(std::vector<int>(20, 2), 2, s));
  }
  const std::map<std::string, Hmm> models{{"ones", baum_welch(ones, 2, 2).model},
                                          {"twos", baum_welch(twos, 2, 2).model}};
  EXPECT_EQ(classify(models, std::vector<int>(20, 1)).label, "ones");
  EXPECT_EQ(classify(models, std::vector<int>(20, 2)).label, "twos");
}

TEST(Classify, ArgmaxInvariantUnderCommonLikelihoodShift) {
  // Appending a symbol that every model emits with the same probability from
  // every state adds the same constant to each log-likelihood.
  oracle::TestRng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    std::map<std::string, Hmm> models;
    for (int l = 0; l < 4; ++l) {
      auto base = init_random(3, 3, rng.next());
      std::vector<double> e;
      for (int s = 0; s < 3; ++s) {
        for (int o = 1; o <= 3; ++o) e.push_back(base.emission(s, o) * 0.75);
        e.push_back(0.25);
      }
      models.emplace("m" + std::to_string(l),
                     Hmm(3, 4, std::vector<double>(base.initial().begin(), base.initial().end()),
                         std::vector<double>(base.transition().begin(), base.transition().end()), e));
    }
    std::vector<int> seq(25);
    for (auto& o : seq) o = 1 + rng.below(3);
    const auto before = classify(models, seq);
    seq.push_back(4);
    const auto after = classify(models, seq);
    EXPECT_EQ(before.label, after.label);
  }
}

TEST(Classify, Errors) {
  const std::map<std::string, Hmm> none;
  EXPECT_EQ(code_of([&] { classify(none, std::vector<int>{1}); }), ErrorCode::EmptyModelSet);
  const std::map<std::string, Hmm> mixed{{"a", init_random(2, 3, 1)}, {"b", init_random(2, 4, 1)}};
  EXPECT_EQ(code_of([&] { classify(mixed, std::vector<int>{1}); }), ErrorCode::AlphabetMismatch);
  const std::map<std::string, Hmm> three{{"a", init_random(2, 3, 1)}};
  EXPECT_EQ(code_of([&] { classify(three, std::vector<int>{1, 4}); }), ErrorCode::AlphabetMismatch);
}

TEST(Serialization, TextRoundTripAndHeader) {
  const auto m = init_random(3, 5, 77);
  const auto text = hmm_to_text(m);
  EXPECT_EQ(text.substr(0, 4), "3 5\n");
  EXPECT_EQ(hmm_from_text(text), m);
  const auto dir = oracle::scratch_dir("hmm");
  save_hmm(m, dir / "m.hmm");
  EXPECT_EQ(load_hmm(dir / "m.hmm"), m);
}

TEST(Serialization, MalformedIsModelLoadError) {
  EXPECT_EQ(code_of([] { hmm_from_text("2 2\n1 0\n"); }), ErrorCode::ModelLoadError);
  EXPECT_EQ(code_of([] { hmm_from_text("1 2\n1\n1\n0.7 0.7\n"); }), ErrorCode::ModelLoadError);
  EXPECT_EQ(code_of([] { hmm_from_text("x y"); }), ErrorCode::ModelLoadError);
}
