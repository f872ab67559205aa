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

#include "dpplr/range_tree.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "dpplr/column.h"
#include "dpplr/rng.h"
#include "dpplr/testing/noise_hooks.h"

namespace dpplr {
namespace {

using ::dpplr::testing::CountingNoise;
using ::dpplr::testing::ScriptedNoise;
using ::dpplr::testing::ZeroNoise;

Histogram RandomHistogram(int64_t n, uint64_t seed, int64_t max_count = 9) {
  CounterRng rng(seed);
  std::vector<int64_t> keys(static_cast<size_t>(n));
  std::vector<int64_t> counts(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    keys[i] = 2 * i + 1;
    counts[i] = static_cast<int64_t>(rng.Next() % (max_count + 1));
  }
  return Histogram{*KeyDomain::Create(keys), counts};
}

TEST(CeilLog2Test, SmallValues) {
  EXPECT_EQ(CeilLog2(1), 0);
  EXPECT_EQ(CeilLog2(2), 1);
  EXPECT_EQ(CeilLog2(3), 2);
  EXPECT_EQ(CeilLog2(8), 3);
  EXPECT_EQ(CeilLog2(9), 4);
  EXPECT_EQ(CeilLog2(1 << 14), 14);
  EXPECT_EQ(BudgetLevels(1), 1);
  EXPECT_EQ(BudgetLevels(1024), 10);
}

TEST(RangeTreeTest, NodeBudgetSplitsOverLevels) {
  ZeroNoise zero;
  RangeTreeMechanism mech(8, 1.0, zero);
  // Laplace(1/eps') with eps' = 1/3.
  EXPECT_DOUBLE_EQ(mech.node_scale(), 3.0);
  RangeTreeMechanism single(1, 2.0, zero);
  EXPECT_DOUBLE_EQ(single.node_scale(), 0.5);
}

TEST(RangeTreeTest, ZeroNoiseReproducesExactCfc) {
  for (int64_t n = 1; n <= 64; ++n) {
    for (uint64_t seed = 0; seed < 5; ++seed) {
      const Histogram h = RandomHistogram(n, seed * 100 + n);
      ZeroNoise zero;
      absl::StatusOr<CFCurve> noisy = NoisyCfc(h, PrivacyParams{}, zero);
      ASSERT_TRUE(noisy.ok());
      EXPECT_EQ(noisy->values, ComputeCfc(h).values) << "N=" << n;
      EXPECT_EQ(noisy->kind, CurveKind::kNoisy);
    }
  }
}

TEST(RangeTreeTest, ExactlyOneDrawPerKey) {
  for (int64_t n : {1, 7, 64, 1000}) {
    ZeroNoise zero;
    CountingNoise counting(zero);
    ASSERT_TRUE(NoisyCfc(RandomHistogram(n, 1), PrivacyParams{}, counting).ok());
    EXPECT_EQ(counting.draws(), static_cast<size_t>(n));
  }
}

TEST(RangeTreeTest, StepSixCombinesTwoPSums) {
  // t = 6 = 0b110 reads the level-1 and level-2 p-sums; mark each draw with
  // a distinct power of ten to see which ones contribute.
  ScriptedNoise noise({1, 10, 100, 1000, 10000, 100000});
  RangeTreeMechanism mech(8, 1.0, noise);
  double y = 0.0;
  for (int t = 1; t <= 6; ++t) y = mech.Step(0.0);
  EXPECT_EQ(mech.last_level(), 1);
  // Draw 4 (t=4, level 2) and draw 6 (t=6, level 1).
  EXPECT_DOUBLE_EQ(y, 1000 + 100000);
  EXPECT_EQ(noise.scales(), std::vector<double>(6, 3.0));
}

TEST(RangeTreeTest, LivePSumsCoverPrefix) {
  const Histogram h = RandomHistogram(100, 5);
  ZeroNoise zero;
  RangeTreeMechanism mech(100, 1.0, zero);
  int64_t prefix = 0;
  for (size_t t = 1; t <= h.counts.size(); ++t) {
    mech.Step(static_cast<double>(h.counts[t - 1]));
    prefix += h.counts[t - 1];
    double covered = 0.0;
    for (size_t j = 0; j < mech.state().alpha.size(); ++j) {
      const bool live = (t >> j) & 1;
      if (live) {
        covered += mech.state().alpha[j];
      } else {
        EXPECT_EQ(mech.state().alpha[j], 0.0) << "t=" << t << " level " << j;
      }
    }
    EXPECT_EQ(covered, static_cast<double>(prefix));
    EXPECT_EQ(mech.last_level(), std::countr_zero(t));
  }
}

// Moving one tuple from one key to another changes at most
// 2 * ceil(log2 N) of the released p-sums, each by exactly one.
TEST(RangeTreeTest, NeighboringColumnsDifferInFewPSums) {
  for (int64_t n : {2, 5, 8, 33, 64, 100}) {
    const Histogram h = RandomHistogram(n, 77 + n);
    const std::vector<PSumEvent> base = TracePSums(h);
    for (int64_t from = 0; from < n; ++from) {
      if (h.counts[from] == 0) continue;
      for (int64_t to = 0; to < n; ++to) {
        if (to == from) continue;
        Histogram moved = h;
        --moved.counts[from];
        ++moved.counts[to];
        const std::vector<PSumEvent> other = TracePSums(moved);
        int changed = 0;
        for (size_t t = 0; t < base.size(); ++t) {
          ASSERT_EQ(base[t].level, other[t].level);
          const double d = std::fabs(base[t].value - other[t].value);
          if (d != 0.0) {
            EXPECT_EQ(d, 1.0);
            ++changed;
          }
        }
        EXPECT_LE(changed, 2 * CeilLog2(n)) << "N=" << n;
      }
    }
  }
}

TEST(CfcErrorBoundTest, KnownValue) {
  // (2 * 10)^{3/2} * sqrt(ln(e^2)) at beta = 2 / e^2.
  PrivacyParams p;
  p.epsilon = 1.0;
  p.beta = 2.0 / std::exp(2.0);
  absl::StatusOr<double> b = CfcErrorBound(p, 1024);
  ASSERT_TRUE(b.ok());
  EXPECT_NEAR(*b, 126.49, 0.01);
  EXPECT_NEAR(*b, std::pow(20.0, 1.5) * std::sqrt(2.0), 1e-9);
}

TEST(CfcErrorBoundTest, ScalesWithEpsilonAndBeta) {
  PrivacyParams p;
  const double base = *CfcErrorBound(p, 4096);
  p.epsilon = 2.0;
  EXPECT_NEAR(*CfcErrorBound(p, 4096), base / 2.0, 1e-9);
  p.epsilon = 1.0;
  double prev = base;
  for (double beta : {0.1, 0.2, 0.5}) {
    p.beta = beta;
    const double b = *CfcErrorBound(p, 4096);
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(CfcErrorBoundTest, RejectsDegenerateInputs) {
  EXPECT_FALSE(CfcErrorBound(PrivacyParams{}, 1).ok());
  PrivacyParams bad;
  bad.epsilon = 0.0;
  EXPECT_FALSE(CfcErrorBound(bad, 16).ok());
  bad = PrivacyParams{};
  bad.beta = 1.0;
  EXPECT_FALSE(CfcErrorBound(bad, 16).ok());
}

TEST(NoisyCfcTest, RejectsInvalidParams) {
  ZeroNoise zero;
  PrivacyParams p;
  p.epsilon = -1.0;
  EXPECT_FALSE(NoisyCfc(RandomHistogram(4, 1), p, zero).ok());
  EXPECT_FALSE(NoisyCfc(Histogram{}, PrivacyParams{}, zero).ok());
}

// Tail of a sum of k i.i.d. Laplace(1): P(sum >= 2 sqrt(k ln(1/beta))) is
// at most beta.
TEST(SumOfLaplaceTest, TailBound) {
  constexpr double kBeta = 0.05;
  constexpr int kTrials = 20000;
  for (int k : {4, 64}) {
    LaplaceNoise noise(DeriveKey(3, {static_cast<uint64_t>(k)}));
    const double t = 2.0 * std::sqrt(k * std::log(1.0 / kBeta));
    int over = 0;
    for (int i = 0; i < kTrials; ++i) {
      double s = 0.0;
      for (int j = 0; j < k; ++j) s += noise.Laplace(1.0);
      if (s >= t) ++over;
    }
    const double se = std::sqrt(kBeta * (1 - kBeta) / kTrials);
    EXPECT_LE(static_cast<double>(over) / kTrials, kBeta + 3 * se) << k;
  }
}

TEST(NoisyCfcTest, EmpiricalErrorWithinBound) {
  const Histogram h = RandomHistogram(1024, 9, 200);
  const CFCurve exact = ComputeCfc(h);
  PrivacyParams p;
  const double bound = *CfcErrorBound(p, 1024);
  int64_t over = 0, total = 0;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    LaplaceNoise noise(DeriveKey(seed, {4}));
    absl::StatusOr<CFCurve> noisy = NoisyCfc(h, p, noise);
    ASSERT_TRUE(noisy.ok());
    for (size_t i = 0; i < exact.size(); ++i) {
      over += std::fabs(noisy->values[i] - exact.values[i]) > bound;
      ++total;
    }
  }
  EXPECT_LE(static_cast<double>(over) / total, p.beta);
}

}  // namespace
}  // namespace dpplr
