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

#ifndef DPPLR_INDEX_H_
#define DPPLR_INDEX_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "dpplr/column.h"
#include "dpplr/noise.h"
#include "dpplr/plr.h"
#include "dpplr/range_tree.h"
#include "json.hpp"

namespace dpplr {

// Version tag of the JSON index envelope.
inline constexpr int kIndexFormatVersion = 1;

// Half-open position interval [lo, hi) into the sorted tuple array.
struct IndexRange {
  int64_t lo = 0;
  int64_t hi = 0;

  int64_t size() const { return hi - lo; }
  bool Contains(const IndexRange& other) const {
    return other.size() == 0 || (lo <= other.lo && other.hi <= hi);
  }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

// Exact range of tuples with key domain.key(pos): [y_{pos-1}, y_pos).
IndexRange TrueRange(const CFCurve& exact, size_t pos);

// Clamps [floor(lo), ceil(hi)) into [0, total]; an inverted range collapses
// to an empty one at the clamped lower end.
IndexRange ClampRange(double lo, double hi, int64_t total);

// Pessimism margin Z = alpha_s * ceil(log2 N)^{3/2} / epsilon.
double PessimismMargin(const PrivacyParams& p, int64_t n_keys);

struct DpPlrIndex {
  PlrModel model;
  PrivacyParams params;
  KeyDomain domain;
  int64_t total = 0;
  double z_pad = 0.0;

  int64_t n_keys() const { return static_cast<int64_t>(domain.size()); }
};

// Intermediate curves of a build, for diagnostics and tests.
struct BuildDiagnostics {
  CFCurve noisy;
  CFCurve postprocessed;
};

// Releases a noisy CFC with the range tree mechanism (the only step that
// touches the data), then postprocesses it, fits the PLR with params.tau
// and records e_max. Only the release consumes privacy budget.
absl::StatusOr<DpPlrIndex> BuildDpPlrIndex(const SortedColumn& col,
                                           const PrivacyParams& params,
                                           NoiseSource& noise,
                                           BuildDiagnostics* diag = nullptr);

// Pessimistic range for key x:
//   [floor(f(x_prev) - e_max - Z), ceil(f(x) + e_max + Z))
// clamped into [0, total], with the lower end fixed at 0 for the first key.
// Unknown keys fail with NotFound.
absl::StatusOr<IndexRange> Lookup(const DpPlrIndex& idx, int64_t x);

// Lookup with an explicit margin in place of idx.z_pad.
absl::StatusOr<IndexRange> LookupWithMargin(const DpPlrIndex& idx, int64_t x,
                                            double margin);

// [Lookup(x_lo).lo, Lookup(x_hi).hi).
absl::StatusOr<IndexRange> RangeLookup(const DpPlrIndex& idx, int64_t x_lo,
                                       int64_t x_hi);

// Two 64-bit values per segment.
int64_t IndexSizeBits(const DpPlrIndex& idx);

nlohmann::json DomainToJson(const KeyDomain& d);
absl::StatusOr<KeyDomain> DomainFromJson(const nlohmann::json& j);

nlohmann::json DpPlrIndexToJson(const DpPlrIndex& idx);
absl::StatusOr<DpPlrIndex> DpPlrIndexFromJson(const nlohmann::json& j);

}  // namespace dpplr

#endif  // DPPLR_INDEX_H_
