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

#ifndef DPPLR_POSTPROCESS_H_
#define DPPLR_POSTPROCESS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpplr/column.h"

namespace dpplr {

// Least-squares non-decreasing fit (pool adjacent violators, unit weights).
absl::StatusOr<std::vector<double>> IsotonicRegression(
    std::span<const double> y);

// Clamps every value into [0, total].
std::vector<double> ClipCfc(std::span<const double> y, int64_t total);

// Isotonic regression followed by clipping; returns a postprocessed curve.
absl::StatusOr<CFCurve> PostprocessCfc(const CFCurve& noisy, int64_t total);

}  // namespace dpplr

#endif  // DPPLR_POSTPROCESS_H_
