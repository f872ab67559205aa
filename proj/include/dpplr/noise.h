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

#ifndef DPPLR_NOISE_H_
#define DPPLR_NOISE_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "dpplr/rng.h"

namespace dpplr {

// Maps a uniform draw u in (-1/2, 1/2) to Laplace(0, scale) by inverting the
// CDF: -scale * sign(u) * ln(1 - 2|u|). u == 0 yields exactly 0.
double LaplaceFromUniform(double scale, double u);

// One draw from Laplace(0, scale). Fails for non-positive or non-finite
// scales.
absl::StatusOr<double> SampleLaplace(double scale, CounterRng& rng);

// Source of additive noise for the release mechanisms. Production code uses
// LaplaceNoise; tests substitute deterministic sources (see
// dpplr/testing/noise_hooks.h).
class NoiseSource {
 public:
  virtual ~NoiseSource() = default;

  // Returns one Laplace(0, scale) draw. `scale` has been validated by the
  // caller.
  virtual double Laplace(double scale) = 0;
};

class LaplaceNoise final : public NoiseSource {
 public:
  explicit LaplaceNoise(uint64_t stream_key) : rng_(stream_key) {}

  double Laplace(double scale) override;

  // Number of draws consumed so far.
  uint64_t draws() const { return rng_.counter(); }

 private:
  CounterRng rng_;
};

}  // namespace dpplr

#endif  // DPPLR_NOISE_H_
