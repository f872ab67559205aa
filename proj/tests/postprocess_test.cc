//
// Copyright 2026 The DP-PLR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpplr/postprocess.h"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace dpplr {
namespace {

using ::testing::DoubleEq;
using ::testing::ElementsAre;

// Exhaustive least-squares isotonic fit. The optimum is constant on
// contiguous blocks with each block at its mean, so enumerating every block
// partition with non-decreasing means and keeping the cheapest is exact.
std::vector<double> BruteForceIsotonic(const std::vector<double>& y) {
  const size_t n = y.size();
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<double> best;
  for (uint32_t cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
    std::vector<double> fit(n);
    size_t start = 0;
    double prev_mean = -std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (size_t i = 0; i < n; ++i) {
      const bool block_ends = i == n - 1 || ((cuts >> i) & 1);
      if (!block_ends) continue;
      double sum = 0.0;
      for (size_t k = start; k <= i; ++k) sum += y[k];
      const double mean = sum / static_cast<double>(i - start + 1);
      if (mean < prev_mean) monotone = false;
      for (size_t k = start; k <= i; ++k) fit[k] = mean;
      prev_mean = mean;
      start = i + 1;
    }
    if (!monotone) continue;
    double cost = 0.0;
    for (size_t k = 0; k < n; ++k) cost += (fit[k] - y[k]) * (fit[k] - y[k]);
    if (cost < best_cost) {
      best_cost = cost;
      best = fit;
    }
  }
  return best;
}

TEST(IsotonicRegressionTest, Examples) {
  EXPECT_THAT(*IsotonicRegression(std::vector<double>{1, 2, 3}),
              ElementsAre(1, 2, 3));
  EXPECT_THAT(*IsotonicRegression(std::vector<double>{1, 3, 2}),
              ElementsAre(1, 2.5, 2.5));
  EXPECT_THAT(*IsotonicRegression(std::vector<double>{5, 4, 3, 2}),
              ElementsAre(3.5, 3.5, 3.5, 3.5));
}

TEST(IsotonicRegressionTest, EmptyInputIsAnError) {
  EXPECT_FALSE(IsotonicRegression(std::vector<double>{}).ok());
}

TEST(IsotonicRegressionTest, TiesAreNotPooled) {
  EXPECT_THAT(*IsotonicRegression(std::vector<double>{2, 2, 1}),
              ElementsAre(DoubleEq(5.0 / 3), DoubleEq(5.0 / 3),
                          DoubleEq(5.0 / 3)));
  EXPECT_THAT(*IsotonicRegression(std::vector<double>{1, 1, 1}),
              ElementsAre(1, 1, 1));
}

TEST(IsotonicRegressionTest, MatchesExhaustiveOracle) {
  int checked = 0;
  for (size_t n = 1; n <= 6; ++n) {
    uint32_t combos = 1;
    for (size_t i = 0; i < n; ++i) combos *= 4;
    for (uint32_t code = 0; code < combos; ++code) {
      std::vector<double> y(n);
      uint32_t c = code;
      for (size_t i = 0; i < n; ++i, c /= 4) y[i] = c % 4;
      const std::vector<double> expected = BruteForceIsotonic(y);
      absl::StatusOr<std::vector<double>> got = IsotonicRegression(y);
      ASSERT_TRUE(got.ok());
      ASSERT_EQ(got->size(), n);
      for (size_t i = 0; i < n; ++i) {
        ASSERT_NEAR((*got)[i], expected[i], 1e-9) << "input code " << code;
      }
      ++checked;
    }
  }
  EXPECT_EQ(checked, 4 + 16 + 64 + 256 + 1024 + 4096);
}

TEST(IsotonicRegressionTest, OutputIsMonotoneAndPreservesSum) {
  std::vector<double> y;
  for (int i = 0; i < 500; ++i) y.push_back(i + 40.0 * std::sin(i * 0.37));
  absl::StatusOr<std::vector<double>> fit = IsotonicRegression(y);
  ASSERT_TRUE(fit.ok());
  double sum_y = 0.0, sum_fit = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    sum_y += y[i];
    sum_fit += (*fit)[i];
    if (i > 0) {
      EXPECT_LE((*fit)[i - 1], (*fit)[i]);
    }
  }
  EXPECT_NEAR(sum_fit, sum_y, 1e-6);
}

TEST(ClipCfcTest, Examples) {
  EXPECT_THAT(ClipCfc(std::vector<double>{-3, 5, 12}, 10), ElementsAre(0, 5, 10));
  EXPECT_THAT(ClipCfc(std::vector<double>{1, 2, 3}, 10), ElementsAre(1, 2, 3));
  EXPECT_THAT(ClipCfc(std::vector<double>{-1, -1}, 0), ElementsAre(0, 0));
}

TEST(PostprocessCfcTest, ProducesMonotoneClippedCurve) {
  CFCurve noisy{*KeyDomain::Create({1, 2, 3, 4, 5}), {-4, 3, 2, 14, 9},
                CurveKind::kNoisy};
  absl::StatusOr<CFCurve> out = PostprocessCfc(noisy, 10);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out->kind, CurveKind::kPostprocessed);
  EXPECT_EQ(out->domain, noisy.domain);
  EXPECT_THAT(out->values, ElementsAre(0, 2.5, 2.5, 10, 10));
}

}  // namespace
}  // namespace dpplr
