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

#include "simverify/synthesis/synthesis.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include "simverify/survey/pps.h"

namespace simverify::synthesis {
namespace {

using ::testing::Each;
using ::testing::HasSubstr;
using survey::GeneratePopulation;
using survey::Population;
using survey::SampleRecord;
using survey::SurveySample;

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

std::vector<double> Sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

TEST(SynthesizeSrsTest, ExhaustiveDrawReturnsPopulation) {
  auto population = GeneratePopulation(500, 1);
  auto data = SynthesizeSrs(*population, 500, 9);
  ASSERT_TRUE(data.ok());
  EXPECT_EQ(data->provenance, Provenance::kFaithfulSrs);
  EXPECT_EQ(data->population_size, 500u);
  std::vector<double> expected(population->x_values().begin(),
                               population->x_values().end());
  EXPECT_EQ(Sorted(data->x), Sorted(expected));
}

TEST(SynthesizeSrsTest, MeanMatchesPopulationModel) {
  auto population = GeneratePopulation(100000, 31);
  auto data = SynthesizeSrs(*population, 10000, 4);
  ASSERT_TRUE(data.ok());
  const double sd = std::sqrt(100.0 / 12.0 + 2.0);
  const double se = sd / std::sqrt(10000.0) * std::sqrt(1.0 - 0.1);
  EXPECT_NEAR(Mean(data->x), 10.0, 4 * se);
}

TEST(SynthesizeSrsTest, Deterministic) {
  auto population = GeneratePopulation(2000, 2);
  auto a = SynthesizeSrs(*population, 100, 5);
  auto b = SynthesizeSrs(*population, 100, 5);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(*a, *b);
}

// Property: the draw is a sub-multiset of the population values.
TEST(SynthesizeSrsTest, OutputIsSubMultisetOfPopulation) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    auto population = GeneratePopulation(300, seed);
    const size_t n0 = 1 + seed * 7;
    auto data = SynthesizeSrs(*population, n0, seed + 100);
    ASSERT_TRUE(data.ok());
    ASSERT_EQ(data->n0(), n0);
    std::vector<double> pool(population->x_values().begin(),
                             population->x_values().end());
    std::sort(pool.begin(), pool.end());
    std::vector<double> drawn = Sorted(data->x);
    EXPECT_TRUE(std::includes(pool.begin(), pool.end(), drawn.begin(),
                              drawn.end()));
  }
}

TEST(SynthesizeSrsTest, RejectsOversizedDraw) {
  auto population = GeneratePopulation(10, 2);
  EXPECT_FALSE(SynthesizeSrs(*population, 11, 1).ok());
}

SurveySample ConstantSample(double c, size_t n) {
  std::vector<SampleRecord> records;
  for (size_t i = 0; i < n; ++i) {
    records.push_back(SampleRecord::Make(i, c, 0.5));
  }
  return SurveySample::Create(std::move(records), 100).value();
}

TEST(SynthesizeBiasedTest, ConstantInputGivesConstantOutput) {
  auto data = SynthesizeBiased(ConstantSample(3.25, 8), 50, 1);
  ASSERT_TRUE(data.ok());
  EXPECT_EQ(data->n0(), 50u);
  EXPECT_THAT(data->x, Each(3.25));
  EXPECT_EQ(data->provenance, Provenance::kBiasedNormal);
}

TEST(SynthesizeBiasedTest, SingleDrawIsValid) {
  auto population = GeneratePopulation(1000, 3);
  auto sample = survey::DrawPpsSample(*population, 50, 3);
  auto data = SynthesizeBiased(*sample, 1, 8);
  ASSERT_TRUE(data.ok());
  EXPECT_EQ(data->n0(), 1u);
  EXPECT_TRUE(std::isfinite(data->x[0]));
}

TEST(SynthesizeBiasedTest, RejectsTooSmallSample) {
  EXPECT_FALSE(SynthesizeBiased(ConstantSample(1.0, 1), 5, 1).ok());
  EXPECT_FALSE(SynthesizeBiased(ConstantSample(1.0, 4), 0, 1).ok());
}

TEST(SynthesizeBiasedTest, TracksSizeBiasedMean) {
  // Under PPS on z ~ U(0, 10), a sampled unit has E[x] = E[z^2]/E[z] + 5 =
  // 20/3 + 5, not the population mean 10.
  auto population = GeneratePopulation(100000, 55);
  auto sample = survey::DrawPpsSample(*population, 2000, 6);
  ASSERT_TRUE(sample.ok());
  auto data = SynthesizeBiased(*sample, 2000, 7);
  ASSERT_TRUE(data.ok());
  // Size-biased variance of x: Var_sb(z) + 2 = 50 - (20/3)^2 + 2.
  const double var = 50.0 - 400.0 / 9.0 + 2.0;
  const double se = std::sqrt(var / 2000.0 + var / 2000.0);
  EXPECT_NEAR(Mean(data->x), 20.0 / 3.0 + 5.0, 4 * se);
  EXPECT_GT(std::abs(Mean(data->x) - 10.0), 10 * se);
}

TEST(SynthesizeBiasedTest, SortedOutputDependsOnlyOnSeed) {
  auto population = GeneratePopulation(5000, 9);
  auto sample = survey::DrawPpsSample(*population, 200, 9);
  auto a = SynthesizeBiased(*sample, 300, 77);
  auto b = SynthesizeBiased(*sample, 300, 77);
  auto c = SynthesizeBiased(*sample, 300, 78);
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_EQ(Sorted(a->x), Sorted(b->x));
  EXPECT_NE(Sorted(a->x), Sorted(c->x));
}

TEST(SyntheticIoTest, CsvAndSidecarRoundTrip) {
  auto population = GeneratePopulation(400, 10);
  auto data = SynthesizeSrs(*population, 25, 1);
  std::stringstream csv, sidecar;
  WriteSyntheticData(*data, csv, sidecar);
  EXPECT_EQ(csv.str().substr(0, 2), "x\n");
  EXPECT_THAT(sidecar.str(), HasSubstr("\"provenance\":\"faithful_srs\""));
  auto back = ReadSyntheticData(csv, sidecar);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, *data);
}

TEST(SyntheticIoTest, CountMismatchRejected) {
  std::stringstream csv("x\n1\n2\n");
  std::stringstream sidecar(R"({"n0": 3, "N": 10, "provenance": "biased_normal"})");
  EXPECT_FALSE(ReadSyntheticData(csv, sidecar).ok());
}

TEST(SyntheticIoTest, UnknownProvenanceRejected) {
  std::stringstream csv("x\n1\n");
  std::stringstream sidecar(R"({"n0": 1, "N": 10, "provenance": "gan"})");
  EXPECT_FALSE(ReadSyntheticData(csv, sidecar).ok());
}

}  // namespace
}  // namespace simverify::synthesis
