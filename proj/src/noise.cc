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

#include "dpplr/noise.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace dpplr {

double LaplaceFromUniform(double scale, double u) {
  if (u == 0.0) return 0.0;
  const double sign = u < 0.0 ? -1.0 : 1.0;
  return -scale * sign * std::log1p(-2.0 * std::fabs(u));
}

absl::StatusOr<double> SampleLaplace(double scale, CounterRng& rng) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Laplace scale must be positive and finite, got ", scale));
  }
  return LaplaceFromUniform(scale, rng.UniformOpen() - 0.5);
}

double LaplaceNoise::Laplace(double scale) {
  return LaplaceFromUniform(scale, rng_.UniformOpen() - 0.5);
}

}  // namespace dpplr
