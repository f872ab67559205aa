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

#ifndef DPPLR_COLUMN_H_
#define DPPLR_COLUMN_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"

namespace dpplr {

// Sorted, distinct key domain dom(A). Key presence is public.
class KeyDomain {
 public:
  KeyDomain() = default;

  // Fails unless `keys` is non-empty and strictly increasing.
  static absl::StatusOr<KeyDomain> Create(std::vector<int64_t> keys);

  size_t size() const { return keys_.size(); }
  int64_t key(size_t i) const { return keys_[i]; }
  int64_t front() const { return keys_.front(); }
  int64_t back() const { return keys_.back(); }
  const std::vector<int64_t>& keys() const { return keys_; }

  // 0-based position of `x`, or nullopt when x is not in the domain.
  std::optional<size_t> Find(int64_t x) const;

  // True when the keys are consecutive integers.
  bool contiguous() const;

  friend bool operator==(const KeyDomain&, const KeyDomain&) = default;

 private:
  explicit KeyDomain(std::vector<int64_t> keys) : keys_(std::move(keys)) {}
  std::vector<int64_t> keys_;
};

// A single attribute column sorted ascending, together with its domain.
class SortedColumn {
 public:
  // Validates that keys are strictly increasing, tuple_keys non-decreasing,
  // and every tuple key belongs to the domain. The error names the first
  // offending position.
  static absl::StatusOr<SortedColumn> Create(std::vector<int64_t> keys,
                                             std::vector<int64_t> tuple_keys);

  // Expands per-key counts into a column.
  static absl::StatusOr<SortedColumn> FromCounts(
      std::vector<int64_t> keys, std::span<const int64_t> counts);

  const KeyDomain& domain() const { return domain_; }
  const std::vector<int64_t>& keys() const { return domain_.keys(); }
  const std::vector<int64_t>& tuple_keys() const { return tuple_keys_; }
  int64_t total() const { return static_cast<int64_t>(tuple_keys_.size()); }
  size_t n_keys() const { return domain_.size(); }

  friend bool operator==(const SortedColumn&, const SortedColumn&) = default;

 private:
  SortedColumn(KeyDomain domain, std::vector<int64_t> tuple_keys)
      : domain_(std::move(domain)), tuple_keys_(std::move(tuple_keys)) {}

  KeyDomain domain_;
  std::vector<int64_t> tuple_keys_;
};

// Frequency of each domain key, aligned with domain().keys().
struct Histogram {
  KeyDomain domain;
  std::vector<int64_t> counts;

  int64_t total() const;
};

enum class CurveKind { kExact, kNoisy, kPostprocessed };

std::string CurveKindName(CurveKind kind);

// Cumulative frequency curve {(x_i, y_i)}; y_0 = 0 is implicit.
struct CFCurve {
  KeyDomain domain;
  std::vector<double> values;
  CurveKind kind = CurveKind::kExact;

  size_t size() const { return values.size(); }
};

Histogram ComputeHistogram(const SortedColumn& col);

// Exact prefix sums of the histogram.
CFCurve ComputeCfc(const Histogram& h);

enum class Distribution { kUniform, kLognormal, kZipf };

absl::StatusOr<Distribution> ParseDistribution(std::string_view name);
std::string DistributionName(Distribution d);

// Synthetic column over the domain {1, ..., n_keys}. Deterministic in
// (dist, n_keys, n_tuples, seed). Keys may end up with zero tuples.
absl::StatusOr<SortedColumn> GenerateColumn(Distribution dist, int64_t n_keys,
                                            int64_t n_tuples, uint64_t seed);

// One tuple key per line, in any order. The domain is the set of distinct
// values present. Blank lines and lines starting with '#' are skipped.
absl::StatusOr<SortedColumn> ParseColumnCsv(std::string_view text);

// {"keys": [...], "counts": [...], "total": n}
nlohmann::json ColumnToJson(const SortedColumn& col);
absl::StatusOr<SortedColumn> ColumnFromJson(const nlohmann::json& j);

// Loads a column from a .csv or .json file, chosen by extension.
absl::StatusOr<SortedColumn> LoadColumn(const std::string& path);

}  // namespace dpplr

#endif  // DPPLR_COLUMN_H_
