// Copyright 2026 The simverify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "simverify/posterior/posterior.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/beta.hpp>
#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include "simverify/common/rng.h"
#include "stat_test_util.h"

namespace simverify::posterior {
namespace {

using ::testing::DoubleNear;
using ::testing::ElementsAre;

// Integrating r out of the model shows that p(r | s_noisy) is a mixture of
// Beta(S + 1, M - S + 1) with weights proportional to exp(-eps |s - S|),
// since every binomial term integrates to 1 / (M + 1). Its median is found
// by bisection on the mixture CDF.
double MixtureMedian(double s_noisy, int m, double epsilon) {
  std::vector<double> weights(m + 1);
  double max_log = -1e300;
  for (int s = 0; s <= m; ++s) {
    weights[s] = -epsilon * std::abs(s_noisy - s);
    max_log = std::max(max_log, weights[s]);
  }
  double total = 0.0;
  for (double& w : weights) total += (w = std::exp(w - max_log));
  auto cdf = [&](double r) {
    double value = 0.0;
    for (int s = 0; s <= m; ++s) {
      boost::math::beta_distribution<double> beta(s + 1.0, m - s + 1.0);
      value += weights[s] / total * boost::math::cdf(beta, r);
    }
    return value;
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TEST(SampleRGivenSTest, MeanOfFullSuccessBeta) {
  Rng rng(1);
  constexpr int kM = 10;
  constexpr int kDraws = 20000;
  double sum = 0.0;
  for (int i = 0; i < kDraws; ++i) sum += SampleRGivenS(kM, kM, rng).value();
  // Beta(11, 1): mean 11/12, variance 11 / (144 * 13).
  const double se = std::sqrt(11.0 / (144.0 * 13.0) / kDraws);
  EXPECT_NEAR(sum / kDraws, 11.0 / 12.0, 4 * se);
}

TEST(SampleRGivenSTest, MeanOfZeroSuccessBeta) {
  Rng rng(2);
  constexpr int kDraws = 20000;
  double sum = 0.0;
  for (int i = 0; i < kDraws; ++i) sum += SampleRGivenS(0, 2, rng).value();
  // Beta(1, 3): mean 1/4, variance 3 / 80.
  EXPECT_NEAR(sum / kDraws, 0.25, 4 * std::sqrt(3.0 / 80.0 / kDraws));
}

TEST(SampleRGivenSTest, PassesKolmogorovSmirnovAgainstBeta) {
  Rng rng(3);
  std::vector<double> draws;
  for (int i = 0; i < 10000; ++i) draws.push_back(SampleRGivenS(3, 10, rng).value());
  boost::math::beta_distribution<double> beta(4.0, 8.0);
  const double d = testing::KsStatistic(
      draws, [&](double r) { return boost::math::cdf(beta, r); });
  EXPECT_GT(testing::KsPValue(d, draws.size()), 0.001);
}

TEST(SampleRGivenSTest, RejectsOutOfRangeCount) {
  Rng rng(4);
  EXPECT_FALSE(SampleRGivenS(-1, 5, rng).ok());
  EXPECT_FALSE(SampleRGivenS(6, 5, rng).ok());
  EXPECT_FALSE(SampleRGivenS(0, 0, rng).ok());
}

TEST(SGivenRTest, SmallHandNormalization) {
  // M = 2, r = 0.5, s_noisy = 1, eps = 1: the Gamma factors are 1/2, 1, 1/2
  // and every r term is 1/4, so the weights are e^-1 / 8, 1 / 4, e^-1 / 8.
  const double a = std::exp(-1.0) / 8.0;
  const double b = 0.25;
  auto p = SGivenRProbabilities(0.5, 1.0, 2, 1.0);
  ASSERT_TRUE(p.ok());
  EXPECT_THAT(*p, ElementsAre(DoubleNear(a / (2 * a + b), 1e-12),
                              DoubleNear(b / (2 * a + b), 1e-12),
                              DoubleNear(a / (2 * a + b), 1e-12)));
  EXPECT_NEAR((*p)[0], 0.1345, 5e-5);
  EXPECT_NEAR((*p)[1], 1.0 / (1.0 + std::exp(-1.0)), 1e-12);
}

TEST(SGivenRTest, BinomialCollapseNearOne) {
  auto p = SGivenRProbabilities(1.0 - 1e-12, 3.0, 25, 1.0);
  ASSERT_TRUE(p.ok());
  EXPECT_NEAR(p->back(), 1.0, 1e-9);
}

TEST(SGivenRTest, LaplaceCollapseAtHugeEpsilon) {
  auto p = SGivenRProbabilities(0.3, 7.0, 25, 1e9);
  ASSERT_TRUE(p.ok());
  EXPECT_NEAR((*p)[7], 1.0, 1e-12);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(SampleSGivenR(0.3, 7.0, 25, 1e9, rng).value(), 7);
  }
}

TEST(SGivenRTest, NoUnderflowAtLargeM) {
  auto p = SGivenRProbabilities(0.5, 500.0, 1000, 1.0);
  ASSERT_TRUE(p.ok());
  double total = 0.0;
  for (double v : *p) {
    ASSERT_TRUE(std::isfinite(v));
    total += v;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_GT((*p)[500], 0.0);
}

TEST(SGivenRTest, SamplerMatchesProbabilities) {
  auto p = SGivenRProbabilities(0.4, 2.2, 5, 0.7).value();
  Rng rng(6);
  constexpr int kDraws = 50000;
  std::vector<int> counts(6, 0);
  for (int i = 0; i < kDraws; ++i) {
    ++counts[SampleSGivenR(0.4, 2.2, 5, 0.7, rng).value()];
  }
  for (int s = 0; s <= 5; ++s) {
    const double se = std::sqrt(p[s] * (1 - p[s]) / kDraws);
    EXPECT_NEAR(counts[s] / static_cast<double>(kDraws), p[s], 4 * se + 1e-9);
  }
}

TEST(SGivenRTest, RejectsInvalidInputs) {
  EXPECT_FALSE(SGivenRProbabilities(0.0, 1, 5, 1).ok());
  EXPECT_FALSE(SGivenRProbabilities(1.0, 1, 5, 1).ok());
  EXPECT_FALSE(SGivenRProbabilities(0.5, 1, 5, 0).ok());
}

TEST(GibbsPosteriorTest, AnalyticLimit) {
  auto result = GibbsPosterior(25, 25, 1e9, kDefaultIters, kDefaultBurnin, 7);
  ASSERT_TRUE(result.ok());
  EXPECT_NEAR(result->median, std::pow(0.5, 1.0 / 26), 0.005);
}

TEST(GibbsPosteriorTest, SymmetricAtHalfM) {
  auto result = GibbsPosterior(12.5, 25, 1.0, kDefaultIters, kDefaultBurnin, 8);
  ASSERT_TRUE(result.ok());
  EXPECT_NEAR(result->median, 0.5, 0.01);
}

TEST(GibbsPosteriorTest, MatchesOracleNearTop) {
  auto result = GibbsPosterior(24.3, 25, 1.0, kDefaultIters, kDefaultBurnin, 9);
  ASSERT_TRUE(result.ok());
  EXPECT_NEAR(result->median, OraclePosteriorMedian(24.3, 25, 1.0, 4000).value(),
              0.01);
  EXPECT_NEAR(result->median, MixtureMedian(24.3, 25, 1.0), 0.01);
}

TEST(GibbsPosteriorTest, SummaryShape) {
  auto result = GibbsPosterior(3.7, 10, 0.5, 3000, 500, 10);
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result->draws.size(), 2500u);
  EXPECT_EQ(result->iters, 3000);
  EXPECT_EQ(result->burnin, 500);
  for (double r : result->draws) {
    ASSERT_GT(r, 0.0);
    ASSERT_LT(r, 1.0);
  }
  std::vector<double> sorted = result->draws;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_DOUBLE_EQ(result->median, 0.5 * (sorted[1249] + sorted[1250]));
  EXPECT_LE(result->q05, result->q25);
  EXPECT_LE(result->q25, result->median);
  EXPECT_LE(result->median, result->q75);
  EXPECT_LE(result->q75, result->q95);
}

TEST(GibbsPosteriorTest, DeterministicGivenSeed) {
  auto a = GibbsPosterior(5.5, 10, 1.0, 2000, 100, 11).value();
  auto b = GibbsPosterior(5.5, 10, 1.0, 2000, 100, 11).value();
  auto c = GibbsPosterior(5.5, 10, 1.0, 2000, 100, 12).value();
  EXPECT_EQ(a.draws, b.draws);
  EXPECT_NE(a.draws, c.draws);
}

TEST(GibbsPosteriorTest, RejectsInvalidIterationCounts) {
  EXPECT_FALSE(GibbsPosterior(1, 10, 1, 100, 100, 1).ok());
  EXPECT_FALSE(GibbsPosterior(1, 10, 1, 100, -1, 1).ok());
  EXPECT_FALSE(GibbsPosterior(1, 10, 0, 100, 10, 1).ok());
  EXPECT_FALSE(GibbsPosterior(1, 0, 1, 100, 10, 1).ok());
}

TEST(GibbsPosteriorTest, JsonKeys) {
  auto result = GibbsPosterior(5, 10, 1.0, 200, 100, 1).value();
  nlohmann::json json = ToJson(result);
  std::vector<std::string> keys;
  for (const auto& [key, value] : json.items()) keys.push_back(key);
  EXPECT_THAT(keys, ::testing::UnorderedElementsAre(
                        "median", "q05", "q25", "q75", "q95", "iters", "burnin"));
  EXPECT_EQ(ToJson(result, true)["draws"].size(), 100u);
}

TEST(OraclePosteriorTest, AnalyticLimit) {
  for (int m : {10, 25, 50}) {
    EXPECT_NEAR(OraclePosteriorMedian(m, m, 1e9, 4000).value(),
                std::pow(0.5, 1.0 / (m + 1)), 1e-4);
  }
}

TEST(OraclePosteriorTest, SymmetricMixtureHasMedianOneHalf) {
  EXPECT_NEAR(OraclePosteriorMedian(1, 2, 1.0, 2000).value(), 0.5, 1e-9);
}

TEST(OraclePosteriorTest, MatchesBetaMixture) {
  for (int m : {2, 10, 25, 50}) {
    for (double epsilon : {0.5, 1.0, 5.0}) {
      for (double s_noisy : {-1.0, 0.0, 0.3 * m, m + 1.0}) {
        EXPECT_NEAR(OraclePosteriorMedian(s_noisy, m, epsilon, 4000).value(),
                    MixtureMedian(s_noisy, m, epsilon), 1e-5)
            << "M=" << m << " eps=" << epsilon << " s=" << s_noisy;
      }
    }
  }
}

TEST(OraclePosteriorTest, GridConverges) {
  for (double s_noisy : {-1.0, 3.3, 24.3}) {
    EXPECT_LT(std::abs(OraclePosteriorMedian(s_noisy, 25, 1.0, 2000).value() -
                       OraclePosteriorMedian(s_noisy, 25, 1.0, 4000).value()),
              1e-4);
  }
}

TEST(OraclePosteriorTest, RejectsCoarseGrid) {
  EXPECT_FALSE(OraclePosteriorMedian(1, 10, 1, 999).ok());
}

// Property: nondecreasing in s_noisy.
TEST(OraclePosteriorTest, MonotoneInNoisyCount) {
  for (int m : {10, 25}) {
    for (double epsilon : {0.5, 1.0, 5.0}) {
      double previous = 0.0;
      for (double s_noisy = -3.0; s_noisy <= m + 3.0; s_noisy += 0.25) {
        const double median =
            OraclePosteriorMedian(s_noisy, m, epsilon, 1000).value();
        EXPECT_GE(median, previous - 1e-12);
        previous = median;
      }
    }
  }
}

// Property: m(c) + m(M - c) = 1.
TEST(PosteriorSymmetryTest, MediansReflect) {
  for (double c : {-1.0, 2.0, 7.4}) {
    const double oracle = OraclePosteriorMedian(c, 25, 1.0, 2000).value() +
                          OraclePosteriorMedian(25 - c, 25, 1.0, 2000).value();
    EXPECT_NEAR(oracle, 1.0, 1e-9);
    const double gibbs =
        GibbsPosterior(c, 25, 1.0, kDefaultIters, kDefaultBurnin, 13)->median +
        GibbsPosterior(25 - c, 25, 1.0, kDefaultIters, kDefaultBurnin, 14)
            ->median;
    EXPECT_NEAR(gibbs, 1.0, 0.01);
  }
}

// Property: the sampler agrees with the oracle over the validation grid.
TEST(GibbsPosteriorTest, AgreesWithOracleOverGrid) {
  uint64_t seed = 100;
  for (int m : {10, 25, 50}) {
    for (double epsilon : {0.5, 1.0, 5.0}) {
      for (double s_noisy : {-1.0, 0.0, m / 2.0, 1.0 * m, m + 1.0}) {
        auto gibbs = GibbsPosterior(s_noisy, m, epsilon, kDefaultIters,
                                    kDefaultBurnin, ++seed);
        ASSERT_TRUE(gibbs.ok());
        EXPECT_NEAR(gibbs->median,
                    OraclePosteriorMedian(s_noisy, m, epsilon, 2000).value(),
                    0.01)
            << "M=" << m << " eps=" << epsilon << " s=" << s_noisy;
      }
    }
  }
}

}  // namespace
}  // namespace simverify::posterior
