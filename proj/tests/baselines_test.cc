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

#include "dpplr/baselines.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "dpplr/index_file.h"
#include "dpplr/rng.h"
#include "dpplr/testing/noise_hooks.h"

namespace dpplr {
namespace {

using ::dpplr::testing::ScriptedNoise;
using ::dpplr::testing::ZeroNoise;
using ::testing::ElementsAre;

SortedColumn SmallColumn() {
  return *SortedColumn::FromCounts({1, 2, 3, 4, 5},
                                   std::vector<int64_t>{4, 0, 7, 2, 5});
}

SortedColumn UniformColumn(int64_t n, uint64_t seed) {
  return *GenerateColumn(Distribution::kUniform, n, 100 * n, seed);
}

TEST(DpBPlusTest, ZeroNoiseNoOverflowIsExact) {
  ZeroNoise zero;
  absl::StatusOr<DpBPlusIndex> idx = BuildDpBPlus(SmallColumn(), 1.0, 0, zero);
  ASSERT_TRUE(idx.ok());
  EXPECT_THAT(idx->leaf_counts, ElementsAre(4, 0, 7, 2, 5));
  EXPECT_EQ(idx->data_overhead, 0);
  EXPECT_EQ(*LookupDpBPlus(*idx, 3), 7);
}

TEST(DpBPlusTest, ForcedNegativeShiftLosesTuples) {
  // B = 2, Z = -(B + 3) at the third key.
  ScriptedNoise noise({-2, -2, -5, -2, -2});
  absl::StatusOr<DpBPlusIndex> idx = BuildDpBPlus(SmallColumn(), 1.0, 2, noise);
  ASSERT_TRUE(idx.ok());
  EXPECT_EQ(*LookupDpBPlus(*idx, 3), 7 - 3);
  // Leaf count is floored at zero.
  ScriptedNoise deep({-50});
  EXPECT_EQ(BuildDpBPlus(SmallColumn(), 1.0, 0, deep)->leaf_counts[0], 0);
}

TEST(DpBPlusTest, ForcedPositiveShiftAddsDummies) {
  // B = 1, Z = +4 at the first key; the other draws cancel B.
  ScriptedNoise noise({4, -1, -1, -1, -1});
  absl::StatusOr<DpBPlusIndex> idx = BuildDpBPlus(SmallColumn(), 1.0, 1, noise);
  ASSERT_TRUE(idx.ok());
  EXPECT_EQ(*LookupDpBPlus(*idx, 1), 4 + 5);
  EXPECT_EQ(idx->data_overhead, 5);
}

TEST(DpBPlusTest, NoiseScaleIsLevelsOverEpsilon) {
  ScriptedNoise noise({});
  ASSERT_TRUE(BuildDpBPlus(UniformColumn(1024, 1), 2.0, 0, noise).ok());
  EXPECT_EQ(noise.scales(), std::vector<double>(1024, 5.0));
}

TEST(DpBPlusTest, NodeAccounting) {
  for (int64_t n : {1, 2, 3, 5, 8, 100, 1024}) {
    LaplaceNoise noise(n);
    absl::StatusOr<DpBPlusIndex> idx =
        BuildDpBPlus(UniformColumn(n, n), 1.0, 3, noise);
    ASSERT_TRUE(idx.ok());
    EXPECT_EQ(idx->node_count(), 2 * n - 1);
    EXPECT_EQ(IndexSizeBits(*idx), 64 * (2 * n - 1));
    // The root holds the sum of all leaves.
    int64_t sum = 0;
    for (int64_t c : idx->leaf_counts) sum += c;
    EXPECT_EQ(idx->nodes.back(), sum);
  }
}

TEST(DpBPlusTest, RejectsNegativeOverflowAndUnknownKeys) {
  ZeroNoise zero;
  EXPECT_FALSE(BuildDpBPlus(SmallColumn(), 1.0, -1, zero).ok());
  EXPECT_FALSE(BuildDpBPlus(SmallColumn(), 0.0, 1, zero).ok());
  EXPECT_TRUE(absl::IsNotFound(
      LookupDpBPlus(*BuildDpBPlus(SmallColumn(), 1.0, 0, zero), 9).status()));
}

TEST(CrypteTest, ZeroNoiseIsExact) {
  ZeroNoise zero;
  const SortedColumn col = SmallColumn();
  absl::StatusOr<NoisyCfcIndex> idx = BuildCrypte(col, 1.0, zero);
  ASSERT_TRUE(idx.ok());
  const CFCurve exact = ComputeCfc(ComputeHistogram(col));
  for (size_t i = 0; i < col.n_keys(); ++i) {
    EXPECT_EQ(*LookupCrypte(*idx, col.domain().key(i)), TrueRange(exact, i));
  }
  EXPECT_EQ(IndexSizeBits(*idx), 64 * 5);
}

TEST(CrypteTest, InvertedEndpointsGiveEmptyRange) {
  // Pushes y~_2 below y~_1.
  ScriptedNoise noise({0, 6, -4, 0, 0});
  absl::StatusOr<NoisyCfcIndex> idx = BuildCrypte(SmallColumn(), 1.0, noise);
  ASSERT_TRUE(idx.ok());
  const IndexRange r = *LookupCrypte(*idx, 3);
  EXPECT_EQ(r.size(), 0);
  EXPECT_EQ(noise.scales(), std::vector<double>(5, 5.0));
}

TEST(CrypteTest, SymmetricNoiseIsLossy) {
  const SortedColumn col = UniformColumn(4096, 2);
  const CFCurve exact = ComputeCfc(ComputeHistogram(col));
  int64_t lossy = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    LaplaceNoise noise(DeriveKey(seed, {7}));
    absl::StatusOr<NoisyCfcIndex> idx = BuildCrypte(col, 1.0, noise);
    ASSERT_TRUE(idx.ok());
    const size_t pos = seed * 37 % col.n_keys();
    const IndexRange truth = TrueRange(exact, pos);
    if (!LookupCrypte(*idx, col.domain().key(pos))->Contains(truth)) ++lossy;
  }
  EXPECT_GE(lossy, 1);
}

TEST(SpecialTest, ZeroNoiseIsExact) {
  ZeroNoise zero;
  const SortedColumn col = SmallColumn();
  absl::StatusOr<SpecialIndex> idx = BuildSpecial(col, 1.0, 0.0, zero);
  ASSERT_TRUE(idx.ok());
  const CFCurve exact = ComputeCfc(ComputeHistogram(col));
  for (size_t i = 0; i < col.n_keys(); ++i) {
    EXPECT_EQ(*LookupSpecial(*idx, col.domain().key(i)), TrueRange(exact, i));
  }
  EXPECT_EQ(IndexSizeBits(*idx), 128 * 5);
}

TEST(SpecialTest, OneSidedCurvesBracketTheTruth) {
  const SortedColumn col = UniformColumn(512, 3);
  const CFCurve exact = ComputeCfc(ComputeHistogram(col));
  for (uint64_t seed = 0; seed < 50; ++seed) {
    LaplaceNoise noise(DeriveKey(seed, {8}));
    absl::StatusOr<SpecialIndex> idx =
        BuildSpecial(col, 1.0, seed % 2 == 0 ? 0.0 : 10.0, noise);
    ASSERT_TRUE(idx.ok());
    for (size_t i = 0; i < col.n_keys(); ++i) {
      ASSERT_GE(idx->over[i], exact.values[i]);
      ASSERT_LE(idx->under[i], exact.values[i]);
      ASSERT_TRUE(LookupSpecial(*idx, col.domain().key(i))
                      ->Contains(TrueRange(exact, i)));
    }
  }
}

TEST(SpecialTest, ShiftAndScale) {
  ScriptedNoise noise({-3, 2});
  absl::StatusOr<SpecialIndex> idx =
      BuildSpecial(*SortedColumn::FromCounts({1}, std::vector<int64_t>{10}),
                   0.5, 1.5, noise);
  ASSERT_TRUE(idx.ok());
  EXPECT_THAT(idx->over, ElementsAre(10 + 3 + 1.5));
  EXPECT_THAT(idx->under, ElementsAre(10 - 2 - 1.5));
  EXPECT_EQ(noise.scales(), (std::vector<double>{4.0, 4.0}));
  ZeroNoise zero;
  EXPECT_FALSE(BuildSpecial(SmallColumn(), 1.0, -1.0, zero).ok());
}

TEST(BaselineJsonTest, RoundTripsAndPayloadSizes) {
  const SortedColumn col = UniformColumn(300, 4);
  const int64_t n = 300;
  LaplaceNoise a(1), b(2), c(3);
  const AnyIndex indexes[] = {*BuildDpBPlus(col, 1.0, 4, a),
                              *BuildCrypte(col, 1.0, b),
                              *BuildSpecial(col, 1.0, 2.0, c)};
  const int64_t expected_bits[] = {64 * (2 * n - 1), 64 * n, 128 * n};
  for (size_t k = 0; k < 3; ++k) {
    const nlohmann::json j = IndexToJson(indexes[k]);
    EXPECT_EQ(*SerializedPayloadBits(j), expected_bits[k]);
    absl::StatusOr<AnyIndex> back = IndexFromJson(nlohmann::json::parse(j.dump()));
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_EQ(IndexToJson(*back).dump(), j.dump());
    for (int64_t x : {1, 150, 300}) {
      const LookupAnswer want = *LookupAny(indexes[k], x);
      const LookupAnswer got = *LookupAny(*back, x);
      EXPECT_EQ(got.range, want.range);
      EXPECT_EQ(got.returned, want.returned);
    }
  }
}

TEST(BaselineJsonTest, RejectsWrongMethodAndNodeCount) {
  ZeroNoise zero;
  nlohmann::json j = DpBPlusToJson(*BuildDpBPlus(SmallColumn(), 1.0, 0, zero));
  EXPECT_FALSE(CrypteFromJson(j).ok());
  j["payload"]["nodes"].erase(0);
  EXPECT_FALSE(DpBPlusFromJson(j).ok());
  nlohmann::json unknown = j;
  unknown["method"] = "btree";
  EXPECT_FALSE(IndexFromJson(unknown).ok());
}

}  // namespace
}  // namespace dpplr
