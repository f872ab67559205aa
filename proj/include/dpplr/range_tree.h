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

#ifndef DPPLR_RANGE_TREE_H_
#define DPPLR_RANGE_TREE_H_

#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpplr/column.h"
#include "dpplr/noise.h"

namespace dpplr {

struct PrivacyParams {
  double epsilon = 1.0;
  // Failure probability of the high-probability bounds.
  double beta = 0.05;
  // Pessimism multiplier for the lookup margin.
  double alpha_s = 1.0;
  // PLR error bound.
  double tau = 0.0;

  absl::Status Validate() const;
};

// ceil(log2(n)) for n >= 1; 0 for n == 1.
int CeilLog2(int64_t n);

// Number of tree levels the release splits its budget over: ceil(log2 N),
// but at least 1 so that a one-key domain spends the whole budget.
int BudgetLevels(int64_t n_keys);

// High-probability bound on |noisy_y_i - y_i| for one release:
// (2 ceil(log2 N))^{3/2} sqrt(ln(2/beta)) / epsilon. Requires N >= 2.
absl::StatusOr<double> CfcErrorBound(const PrivacyParams& p, int64_t n_keys);

// Live partial sums of the range tree. alpha[j] is the exact p-sum at level
// j, alpha_noisy[j] its released noisy value.
struct PSumState {
  std::vector<double> alpha;
  std::vector<double> alpha_noisy;
};

// The binary (range tree) counting mechanism with dynamic recycling of
// p-sums. Each Step consumes the next count c_t and returns the noisy prefix
// sum for t. Exactly one noise draw is taken per step.
class RangeTreeMechanism {
 public:
  RangeTreeMechanism(int64_t n_keys, double epsilon, NoiseSource& noise);

  double Step(double count);

  // Step index t of the last Step() call (1-based); 0 before the first.
  int64_t t() const { return t_; }
  // Tree level whose p-sum was refreshed by the last step.
  int last_level() const { return last_level_; }
  // Laplace scale applied to each p-sum, 1 / epsilon'.
  double node_scale() const { return node_scale_; }
  const PSumState& state() const { return state_; }

 private:
  NoiseSource& noise_;
  double node_scale_;
  int64_t t_ = 0;
  int last_level_ = -1;
  PSumState state_;
};

// Releases the noisy CFC of `h` under epsilon-DP with the range tree
// mechanism. The per-node budget is epsilon / BudgetLevels(N).
absl::StatusOr<CFCurve> NoisyCfc(const Histogram& h, const PrivacyParams& p,
                                 NoiseSource& noise);

// Exact p-sum refreshed at each step: entry t-1 is (level, value) of the
// p-sum created at step t. Used to audit the mechanism's sensitivity.
struct PSumEvent {
  int level;
  double value;
};
std::vector<PSumEvent> TracePSums(const Histogram& h);

}  // namespace dpplr

#endif  // DPPLR_RANGE_TREE_H_
