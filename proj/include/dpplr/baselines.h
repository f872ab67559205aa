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

#ifndef DPPLR_BASELINES_H_
#define DPPLR_BASELINES_H_

// Comparison DP indexes, modeled at the level of detail their utility and
// storage accounting depends on.

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "dpplr/column.h"
#include "dpplr/index.h"
#include "dpplr/noise.h"
#include "json.hpp"

namespace dpplr {

// DP B+ tree. Each leaf holds the tuples of one key, padded with B dummy
// tuples and then shifted by a rounded Laplace(ceil(log2 N)/epsilon) draw
// (positive: more dummies, negative: dropped tuples). Internal nodes store
// the sum of their children; a full binary tree over N leaves has 2N-1
// nodes.
struct DpBPlusIndex {
  KeyDomain domain;
  std::vector<int64_t> leaf_counts;
  // Leaves first, then internal nodes bottom-up.
  std::vector<int64_t> nodes;
  int64_t overflow = 0;
  // Total dummy tuples written to storage.
  int64_t data_overhead = 0;
  double epsilon = 1.0;

  int64_t node_count() const { return static_cast<int64_t>(nodes.size()); }
};

absl::StatusOr<DpBPlusIndex> BuildDpBPlus(const SortedColumn& col,
                                          double epsilon, int64_t overflow,
                                          NoiseSource& noise);

// Number of tuples the leaf for x returns.
absl::StatusOr<int64_t> LookupDpBPlus(const DpBPlusIndex& idx, int64_t x);

int64_t IndexSizeBits(const DpBPlusIndex& idx);

// Noisy CFC with independent Laplace(N/epsilon) noise per point.
struct NoisyCfcIndex {
  KeyDomain domain;
  std::vector<double> values;
  int64_t total = 0;
  double epsilon = 1.0;
};

absl::StatusOr<NoisyCfcIndex> BuildCrypte(const SortedColumn& col,
                                          double epsilon, NoiseSource& noise);

// [round(y~_{i-1}), round(y~_i)) clamped to [0, total]; empty when the noisy
// endpoints are inverted.
absl::StatusOr<IndexRange> LookupCrypte(const NoisyCfcIndex& idx, int64_t x);

int64_t IndexSizeBits(const NoisyCfcIndex& idx);

// Two one-sided noisy CFCs: `over` adds |Laplace(2N/epsilon)| + mu to every
// point and `under` subtracts an independent draw of the same kind, so
// over >= exact >= under holds deterministically.
struct SpecialIndex {
  KeyDomain domain;
  std::vector<double> over;
  std::vector<double> under;
  double mu = 0.0;
  int64_t total = 0;
  double epsilon = 1.0;
};

absl::StatusOr<SpecialIndex> BuildSpecial(const SortedColumn& col,
                                          double epsilon, double mu,
                                          NoiseSource& noise);

// [round(under_{i-1}), round(over_i)) clamped to [0, total].
absl::StatusOr<IndexRange> LookupSpecial(const SpecialIndex& idx, int64_t x);

int64_t IndexSizeBits(const SpecialIndex& idx);

nlohmann::json DpBPlusToJson(const DpBPlusIndex& idx);
absl::StatusOr<DpBPlusIndex> DpBPlusFromJson(const nlohmann::json& j);
nlohmann::json CrypteToJson(const NoisyCfcIndex& idx);
absl::StatusOr<NoisyCfcIndex> CrypteFromJson(const nlohmann::json& j);
nlohmann::json SpecialToJson(const SpecialIndex& idx);
absl::StatusOr<SpecialIndex> SpecialFromJson(const nlohmann::json& j);

}  // namespace dpplr

#endif  // DPPLR_BASELINES_H_
