#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cphmm/dataset.hpp"
#include "cphmm/preprocess.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace cphmm;
using oracle::code_of;

TEST(Resample, SameLengthReproducesNodes) {
  const std::vector<double> row{3.0, -1.25, 7.5, 0.0, 2.0, 2.0, -4.0};
  EXPECT_EQ(resample(row, static_cast<int>(row.size())), row);
}

TEST(Resample, LinearRampIsExact) {
  std::vector<double> ramp(32);
  for (int m = 0; m < 32; ++m) ramp[static_cast<std::size_t>(m)] = m;
  const auto out = resample(ramp, 64);
  ASSERT_EQ(out.size(), 64u);
  EXPECT_EQ(out.front(), 0.0);
  EXPECT_EQ(out.back(), 31.0);
  for (int m = 0; m < 64; ++m) EXPECT_NEAR(out[static_cast<std::size_t>(m)], 31.0 * m / 63.0, 1e-12);
}

TEST(Resample, QuadraticIsExactIncludingEndSegments) {
  const auto f = [](double x) { return 0.5 * x * x - 3.0 * x + 2.0; };
  std::vector<double> row(11);
  for (int m = 0; m < 11; ++m) row[static_cast<std::size_t>(m)] = f(m);
  const auto out = resample(row, 47);
  for (int m = 0; m < 47; ++m) EXPECT_NEAR(out[static_cast<std::size_t>(m)], f(10.0 * m / 46.0), 1e-10);
}

TEST(Resample, HalfSineArchAgainstAnalyticCurve) {
  // 16 samples of sin(pi t) on [0, 1]; compare the 64-point resample with
  // the analytic arch at the same abscissae.
  std::vector<double> row(16);
  for (int m = 0; m < 16; ++m) row[static_cast<std::size_t>(m)] = std::sin(std::numbers::pi * m / 15.0);
  const auto out = resample(row, 64);
  double worst = 0.0;
  for (int m = 0; m < 64; ++m) {
    worst = std::max(worst, std::abs(out[static_cast<std::size_t>(m)] - std::sin(std::numbers::pi * m / 63.0)));
  }
  EXPECT_LT(worst, 1e-2);
}

TEST(Resample, EndpointsPreservedExactly) {
  oracle::TestRng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> row(static_cast<std::size_t>(2 + rng.below(40)));
    for (auto& v : row) v = rng.uniform() * 200.0 - 100.0;
    const auto out = resample(row, 2 + rng.below(100));
    EXPECT_EQ(out.front(), row.front());
    EXPECT_EQ(out.back(), row.back());
  }
}

TEST(Resample, RejectsShortInputs) {
  EXPECT_EQ(code_of([] { resample(std::vector<double>{1.0}, 8); }), ErrorCode::LengthError);
  EXPECT_EQ(code_of([] { resample(std::vector<double>{1.0, 2.0}, 1); }), ErrorCode::LengthError);
  EXPECT_EQ(resample(std::vector<double>{1.0, 3.0}, 3), (std::vector<double>{1.0, 2.0, 3.0}));
}

TEST(Normalize, ThreePointExample) {
  const auto out = normalize(std::vector<double>{1, 2, 3});
  const double r = std::sqrt(1.5);
  EXPECT_NEAR(out[0], -r, 1e-15);
  EXPECT_NEAR(out[1], 0.0, 1e-15);
  EXPECT_NEAR(out[2], r, 1e-15);
}

TEST(Normalize, ConstantRowIsZeroVariance) {
  EXPECT_EQ(code_of([] { normalize(std::vector<double>{5, 5, 5, 5}); }), ErrorCode::ZeroVariance);
  EXPECT_EQ(code_of([] { normalize(std::vector<double>{0, 0}); }), ErrorCode::ZeroVariance);
}

TEST(Normalize, ZeroMeanUnitDeviationAndIdempotent) {
  oracle::TestRng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> row(static_cast<std::size_t>(3 + rng.below(120)));
    const double scale = std::pow(10.0, rng.uniform() * 8.0 - 4.0);
    const double shift = rng.uniform() * 1e3 - 500.0;
    for (auto& v : row) v = shift + scale * (rng.uniform() - 0.5);
    const auto once = normalize(row);
    EXPECT_NEAR(oracle::mean_of(once), 0.0, 1e-9);
    EXPECT_NEAR(oracle::population_std(once), 1.0, 1e-9);
    const auto twice = normalize(once);
    for (std::size_t m = 0; m < row.size(); ++m) EXPECT_NEAR(twice[m], once[m], 1e-9);
  }
}

TEST(PreprocessDataset, ShapeContractOnSyntheticCorpus) {
  SyntheticSpec spec;
  spec.gestures = 4;
  spec.sensors = 3;
  spec.executions = 5;
  spec.target_cp.assign(4, std::vector<int>(3, 3));
  spec.seed = 8;
  const auto result = preprocess_dataset(generate_synthetic(spec), 64);
  EXPECT_EQ(result.sequences.size(), 60u);
  EXPECT_TRUE(result.excluded.empty());
  for (const auto& s : result.sequences) {
    ASSERT_EQ(s.values.size(), 64u);
    EXPECT_NEAR(oracle::mean_of(s.values), 0.0, 1e-9);
    EXPECT_NEAR(oracle::population_std(s.values), 1.0, 1e-9);
  }
}

TEST(PreprocessDataset, ConstantRowIsExcluded) {
  std::vector<Execution> executions(2);
  executions[0].rows = {{0, 1, 3, 2}, {4, 4, 4, 4}};
  executions[1].rows = {{1, 0, 2, 5, 1}, {1, 2, 1, 2, 1}};
  const RawDataset d(1, 2, 2, executions);
  const auto result = preprocess_dataset(d, 16);
  ASSERT_EQ(result.excluded.size(), 1u);
  EXPECT_EQ(result.excluded[0], (SequenceId{0, 1, 0}));
  EXPECT_EQ(result.sequences.size(), 3u);
}
