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

#include <algorithm>

#include "absl/status/status.h"

namespace dpplr {

absl::StatusOr<std::vector<double>> IsotonicRegression(
    std::span<const double> y) {
  if (y.empty()) {
    return absl::InvalidArgumentError("isotonic regression of empty input");
  }
  // Stack of pooled blocks: sum of values and number of points.
  struct Block {
    double sum;
    size_t size;
    double mean() const { return sum / static_cast<double>(size); }
  };
  std::vector<Block> blocks;
  blocks.reserve(y.size());
  for (double v : y) {
    Block b{v, 1};
    while (!blocks.empty() && blocks.back().mean() > b.mean()) {
      b.sum += blocks.back().sum;
      b.size += blocks.back().size;
      blocks.pop_back();
    }
    blocks.push_back(b);
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const Block& b : blocks) out.insert(out.end(), b.size, b.mean());
  return out;
}

std::vector<double> ClipCfc(std::span<const double> y, int64_t total) {
  const double hi = static_cast<double>(std::max<int64_t>(total, 0));
  std::vector<double> out(y.begin(), y.end());
  for (double& v : out) v = std::clamp(v, 0.0, hi);
  return out;
}

absl::StatusOr<CFCurve> PostprocessCfc(const CFCurve& noisy, int64_t total) {
  absl::StatusOr<std::vector<double>> iso = IsotonicRegression(noisy.values);
  if (!iso.ok()) return iso.status();
  return CFCurve{noisy.domain, ClipCfc(*iso, total), CurveKind::kPostprocessed};
}

}  // namespace dpplr
