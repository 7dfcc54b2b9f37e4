// Copyright 2026 The annealbench Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "annealbench/analysis.hpp"
#include "annealbench/errors.hpp"
#include "annealbench/rng.hpp"

namespace annealbench {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Tts, RepetitionsWithoutCeiling) {
  EXPECT_DOUBLE_EQ(tts(0.99, 1.0, 1, 1).repetitions, 1.0);
  EXPECT_NEAR(tts(0.5, 1.0, 1, 1).repetitions, std::log(0.01) / std::log(0.5), 1e-12);
  EXPECT_NEAR(tts(0.5, 1.0, 1, 1).repetitions, 6.6439, 1e-4);
  // Above p_d a run needs less than one repetition.
  EXPECT_LT(tts(0.999, 1.0, 1, 1).repetitions, 1.0);
  const auto r = tts(0.2, 10.0, 64, 2048);
  EXPECT_NEAR(r.value, 10.0 * std::log(0.01) / std::log(0.8) * 64.0 / 2048.0, 1e-12);
  EXPECT_TRUE(r.finite());
}

TEST(Tts, DegenerateCases) {
  EXPECT_EQ(tts(0.0, 1.0, 1, 1).kind, TtsKind::infinite);
  EXPECT_TRUE(std::isinf(tts(0.0, 1.0, 1, 1).value));
  EXPECT_EQ(tts(1.0, 1.0, 1, 1).kind, TtsKind::degenerate);
  EXPECT_TRUE(std::isnan(tts(1.0, 1.0, 1, 1).value));
  EXPECT_THROW(tts(1.1, 1.0, 1, 1), ParameterError);
  EXPECT_THROW(tts(0.5, 1.0, 1, 1, 1.0), ParameterError);
  EXPECT_THROW(tts(0.5, 0.0, 1, 1), ParameterError);
  EXPECT_THROW(tts(0.5, 1.0, 2, 1), ParameterError);
}

TEST(Tts, Wallclock) {
  const auto t = dw2kq_timings();
  EXPECT_EQ(t.t_initial, 0.0);
  EXPECT_DOUBLE_EQ(wallclock_tts(2, t, 20.0, 10.0, 100, 2048),
                   2 * t.t_program + (20.0 + t.t_readout) * 10.0 / 20.0);
  EXPECT_THROW(wallclock_tts(1, t, 1.0, 1.0, 0, 10), ParameterError);
}

// Type-7 quantiles checked against values computed by hand.
TEST(Quantile, Type7) {
  const std::vector<double> x{3, 1, 4, 1, 5, 9, 2, 6};
  EXPECT_DOUBLE_EQ(quantile(x, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(x, 1.0), 9.0);
  EXPECT_DOUBLE_EQ(quantile(x, 0.5), 3.5);
  EXPECT_DOUBLE_EQ(quantile(x, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile(x, 0.75), 5.25);
  EXPECT_DOUBLE_EQ(statistics::median(x), 3.5);
  EXPECT_DOUBLE_EQ(statistics::mean(x), 31.0 / 8.0);
  EXPECT_THROW(quantile(std::vector<double>{}, 0.5), ParameterError);
  EXPECT_THROW(quantile(x, 1.5), ParameterError);
  EXPECT_THROW(quantile(std::vector<double>{1.0, std::nan("")}, 0.5), ParameterError);
}

TEST(Quantile, InfiniteValuesSortHigh) {
  const std::vector<double> x{kInf, 1.0, 2.0, kInf};
  EXPECT_DOUBLE_EQ(quantile(x, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(x, 1.0 / 3.0), 2.0);
  EXPECT_TRUE(std::isinf(quantile(x, 0.5)));
  EXPECT_DOUBLE_EQ(quantile_tts(std::vector<double>{std::exp(1.0), std::exp(3.0)}, 0.5), std::log((std::exp(1.0) + std::exp(3.0)) / 2));
  EXPECT_TRUE(std::isinf(quantile_tts(x, 0.75)));
}

TEST(Quantile, CurveAndRatios) {
  const std::vector<double> effort{1, 2};
  const std::vector<std::vector<double>> t{{1, 2, 3}, {4, 5, 6}};
  const auto c = quantile_curve(effort, t, 0.5);
  EXPECT_DOUBLE_EQ(c.ln_tts[0], std::log(2.0));
  EXPECT_DOUBLE_EQ(c.ln_tts[1], std::log(5.0));
  EXPECT_THROW(quantile_curve(std::vector<double>{1}, t, 0.5), ParameterError);

  const std::map<std::string, double> a{{"i0", 2}, {"i1", 9}, {"i2", 4}}, b{{"i0", 1}, {"i1", 3}, {"i2", 4}};
  EXPECT_DOUBLE_EQ(quantile_of_ratios(a, b, 0.5), 2.0);
  const std::map<std::string, double> c2{{"i0", 1}, {"i1", 3}, {"x", 4}};
  EXPECT_THROW(quantile_of_ratios(a, c2, 0.5), ParameterError);
}

TEST(Bootstrap, MeanIntervalCoversAndMatchesTheory) {
  Rng rng(5);
  std::vector<double> x(400);
  for (auto& v : x) v = 2.0 + rng.normal();
  const auto r = bootstrap(x, [](std::span<const double> s) { return statistics::mean(s); }, 2000, 9);
  EXPECT_DOUBLE_EQ(r.estimate, statistics::mean(x));
  EXPECT_LT(r.ci.lo, r.estimate);
  EXPECT_GT(r.ci.hi, r.estimate);
  // Standard error of the mean is about 1 / sqrt(400).
  EXPECT_NEAR(r.std_error, statistics::stddev(x) / 20.0, 0.006);
  const auto two = bootstrap(x, [](std::span<const double> s) { return statistics::mean(s); }, 2000, 9, CiMethod::two_sigma);
  EXPECT_NEAR(two.ci.hi - two.ci.lo, 4 * two.std_error, 1e-12);
}

TEST(Bootstrap, IndependentOfThreadCount) {
  std::vector<double> x{1, 5, 2, 8, 3, 3, 9};
  const Statistic med = [](std::span<const double> s) { return statistics::median(s); };
  omp_set_num_threads(1);
  const auto a = bootstrap(x, med, 300, 4);
  omp_set_num_threads(3);
  const auto b = bootstrap(x, med, 300, 4);
  EXPECT_EQ(a.replicates, b.replicates);
  EXPECT_THROW(bootstrap(std::vector<double>{1.0}, med), ParameterError);
  EXPECT_THROW(bootstrap(x, med, 0), ParameterError);
}

TEST(Bootstrap, ResampleIndicesInRange) {
  const auto idx = resample_indices(10, 3, 7);
  ASSERT_EQ(idx.size(), 10u);
  for (auto i : idx) EXPECT_LT(i, 10u);
  EXPECT_EQ(idx, resample_indices(10, 3, 7));
  EXPECT_NE(idx, resample_indices(10, 3, 8));
}

TEST(CiMethod, Names) {
  EXPECT_EQ(ci_method_from_string(to_string(CiMethod::percentile)), CiMethod::percentile);
  EXPECT_EQ(ci_method_from_string(to_string(CiMethod::two_sigma)), CiMethod::two_sigma);
  EXPECT_THROW(ci_method_from_string("bca"), ParameterError);
}

std::vector<MeanSigma> synthetic(int n, double sigma, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<MeanSigma> out(static_cast<std::size_t>(n));
  for (auto& m : out) m = {3.0 * rng.normal(), sigma};
  return out;
}

TEST(Overlap, SelfOverlapIsOne) {
  for (double sigma : {0.0, 0.3, 1.0}) {
    const auto a = synthetic(200, sigma, 1);
    const auto r = overlap_fraction(a, a, 400, 2);
    EXPECT_LE(r.ci.lo, 1.0) << sigma;
    EXPECT_GE(r.ci.hi, 1.0) << sigma;
    EXPECT_NEAR(r.f_bar, 1.0, 0.05) << sigma;
  }
}

TEST(Overlap, IndependentSolversNearHalf) {
  const auto a = synthetic(400, 0.1, 1), b = synthetic(400, 0.1, 2);
  const auto r = overlap_fraction(a, b, 300, 3);
  EXPECT_NEAR(r.f_bar, 0.5, 0.08);
  EXPECT_LT(r.ci.hi, 1.0);
  EXPECT_THROW(overlap_fraction(a, synthetic(3, 0.1, 2)), ParameterError);
}

}  // namespace
}  // namespace annealbench
