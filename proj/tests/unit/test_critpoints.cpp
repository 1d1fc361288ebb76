#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "cphmm/critpoints.hpp"
#include "cphmm/error.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace cphmm;
using oracle::code_of;

namespace {

std::vector<int> one_based(std::vector<int> positions) {
  for (auto& p : positions) ++p;
  return positions;
}

}  // namespace

TEST(FindExtrema, MonotoneHasNone) {
  const auto e = find_extrema(std::vector<double>{0, 1, 2, 3}, 1);
  EXPECT_TRUE(e.maxima.empty());
  EXPECT_TRUE(e.minima.empty());
}

TEST(FindExtrema, ZigZagByEnumeration) {
  // Windows at gamma = 1: pos2 {0,2,1} max, pos3 {2,1,3} min, pos4 {1,3,0} max.
  const auto e = find_extrema(std::vector<double>{0, 2, 1, 3, 0}, 1);
  EXPECT_EQ(one_based(e.maxima), (std::vector<int>{2, 4}));
  EXPECT_EQ(one_based(e.minima), (std::vector<int>{3}));
}

TEST(FindExtrema, PlateauReportsLeftmostOnly) {
  const auto e = find_extrema(std::vector<double>{0, 1, 1, 0}, 1);
  EXPECT_EQ(one_based(e.maxima), (std::vector<int>{2}));
  EXPECT_TRUE(e.minima.empty());
}

TEST(FindExtrema, FlatRunFromTheFirstSampleIsNotInterior) {
  const auto e = find_extrema(std::vector<double>{2, 2, 1, 0}, 1);
  EXPECT_TRUE(e.maxima.empty());
  EXPECT_TRUE(e.minima.empty());
}

TEST(FindExtrema, WiderWindowUsesReplicatedEnds) {
  // gamma = 2: position 2 (value 3) sees {1,1,3,2,5} once index -1 is
  // replaced by the first value; 5 is larger so it is not a maximum.
  const std::vector<double> seq{1, 3, 2, 5, 4, 0};
  const auto e1 = find_extrema(seq, 1);
  EXPECT_EQ(one_based(e1.maxima), (std::vector<int>{2, 4}));
  EXPECT_EQ(one_based(e1.minima), (std::vector<int>{3}));
  const auto e2 = find_extrema(seq, 2);
  EXPECT_EQ(one_based(e2.maxima), (std::vector<int>{4}));
  EXPECT_TRUE(e2.minima.empty());
}

TEST(FindExtrema, Errors) {
  EXPECT_EQ(code_of([] { find_extrema(std::vector<double>{1, 2}, 1); }), ErrorCode::LengthError);
  EXPECT_EQ(code_of([] { find_extrema(std::vector<double>{1, 2, 1}, 0); }), ErrorCode::ParamError);
}

TEST(CountCriticalPoints, Examples) {
  EXPECT_EQ(count_critical_points(std::vector<double>{0, 1, 2, 3}).total, 2);
  const auto c = count_critical_points(std::vector<double>{0, 2, 1, 3, 0});
  EXPECT_EQ(c.n_max, 2);
  EXPECT_EQ(c.n_min, 1);
  EXPECT_EQ(c.total, 5);
}

TEST(CriticalPointProperties, FuzzedIdentitiesAndAffineInvariance) {
  oracle::TestRng rng(21);
  for (int trial = 0; trial < 2000; ++trial) {
    // Small integer alphabet so ties and plateaus occur often.
    std::vector<double> seq(static_cast<std::size_t>(3 + rng.below(60)));
    for (auto& v : seq) v = rng.below(6);
    const int gamma = 1 + rng.below(3);
    const auto e = find_extrema(seq, gamma);
    const auto c = count_critical_points(seq, gamma);
    EXPECT_EQ(c.total, c.n_max + c.n_min + 2);
    for (int m : e.maxima) EXPECT_EQ(std::count(e.minima.begin(), e.minima.end(), m), 0);

    // Dyadic scale and integer shift keep the arithmetic exact.
    const double a = std::ldexp(1.0 + rng.below(7), -rng.below(4));
    const double b = rng.below(200) - 100;
    std::vector<double> moved(seq);
    for (auto& v : moved) v = a * v + b;
    const auto f = find_extrema(moved, gamma);
    EXPECT_EQ(f.maxima, e.maxima);
    EXPECT_EQ(f.minima, e.minima);
  }
}

TEST(CriticalPointProperties, StrictMaximaAreSeparatedByMinima) {
  oracle::TestRng rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> seq(static_cast<std::size_t>(3 + rng.below(50)));
    for (auto& v : seq) v = rng.uniform();  // distinct with probability 1
    const auto e = find_extrema(seq, 1);
    for (std::size_t t = 0; t + 1 < e.maxima.size(); ++t) {
      const bool between = std::any_of(e.minima.begin(), e.minima.end(),
                                       [&](int m) { return m > e.maxima[t] && m < e.maxima[t + 1]; });
      EXPECT_TRUE(between);
    }
  }
}

TEST(MedianCp, OrderStatistics) {
  EXPECT_EQ(median_cp(std::vector<int>{3, 5, 7}), 5);
  EXPECT_EQ(median_cp(std::vector<int>{4, 4, 4, 9}), 4);
  EXPECT_EQ(median_cp(std::vector<int>{6}), 6);
  EXPECT_EQ(median_cp(std::vector<int>{9, 2, 7, 4}), 4);
  EXPECT_EQ(code_of([] { median_cp(std::vector<int>{}); }), ErrorCode::EmptyInput);
}

TEST(MedianCp, IsAnElementOfTheInput) {
  oracle::TestRng rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> xs(static_cast<std::size_t>(1 + rng.below(20)));
    for (auto& x : xs) x = 2 + rng.below(30);
    EXPECT_NE(std::find(xs.begin(), xs.end(), median_cp(xs)), xs.end());
  }
}

TEST(PredictorTable, VariantOffsetsAndFloor) {
  const std::map<std::pair<int, int>, int> medians{{{0, 0}, 7}, {{0, 1}, 2}};
  EXPECT_EQ(build_predictor_table(medians, PredictorVariant::AllPoints).at(0, 0), 7);
  EXPECT_EQ(build_predictor_table(medians, PredictorVariant::Trends).at(0, 0), 6);
  EXPECT_EQ(build_predictor_table(medians, PredictorVariant::NoBoundaries).at(0, 0), 5);
  EXPECT_EQ(build_predictor_table(medians, PredictorVariant::NoBoundaries).at(0, 1), 1);
}

TEST(PredictorVariant, NamesRoundTrip) {
  for (auto v : kAllVariants) EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_EQ(code_of([] { parse_variant("median"); }), ErrorCode::ConfigError);
}
