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

#include <algorithm>
#include <bit>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace dpplr {

absl::Status PrivacyParams::Validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive, got ", epsilon));
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("beta must lie in (0, 1), got ", beta));
  }
  if (!(alpha_s >= 1.0) || !std::isfinite(alpha_s)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha_s must be >= 1, got ", alpha_s));
  }
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    return absl::InvalidArgumentError(
        absl::StrCat("tau must be >= 0, got ", tau));
  }
  return absl::OkStatus();
}

int CeilLog2(int64_t n) {
  if (n <= 1) return 0;
  return std::bit_width(static_cast<uint64_t>(n - 1));
}

int BudgetLevels(int64_t n_keys) { return std::max(1, CeilLog2(n_keys)); }

absl::StatusOr<double> CfcErrorBound(const PrivacyParams& p, int64_t n_keys) {
  if (n_keys < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("error bound needs at least 2 keys, got ", n_keys));
  }
  if (absl::Status s = p.Validate(); !s.ok()) return s;
  const double levels = 2.0 * CeilLog2(n_keys);
  return std::pow(levels, 1.5) * std::sqrt(std::log(2.0 / p.beta)) /
         p.epsilon;
}

RangeTreeMechanism::RangeTreeMechanism(int64_t n_keys, double epsilon,
                                       NoiseSource& noise)
    : noise_(noise),
      node_scale_(BudgetLevels(n_keys) / epsilon) {
  // Levels 0..floor(log2 N) can hold a p-sum.
  const size_t levels =
      static_cast<size_t>(std::bit_width(static_cast<uint64_t>(n_keys)));
  state_.alpha.assign(std::max<size_t>(levels, 1), 0.0);
  state_.alpha_noisy.assign(state_.alpha.size(), 0.0);
}

double RangeTreeMechanism::Step(double count) {
  ++t_;
  const uint64_t t = static_cast<uint64_t>(t_);
  const int level = std::countr_zero(t);
  last_level_ = level;
  if (static_cast<size_t>(level) >= state_.alpha.size()) {
    state_.alpha.resize(level + 1, 0.0);
    state_.alpha_noisy.resize(level + 1, 0.0);
  }

  double merged = count;
  for (int j = 0; j < level; ++j) {
    merged += state_.alpha[j];
    state_.alpha[j] = 0.0;
    state_.alpha_noisy[j] = 0.0;
  }
  state_.alpha[level] = merged;
  state_.alpha_noisy[level] = merged + noise_.Laplace(node_scale_);

  double y = 0.0;
  for (uint64_t bits = t; bits != 0; bits &= bits - 1) {
    y += state_.alpha_noisy[std::countr_zero(bits)];
  }
  return y;
}

absl::StatusOr<CFCurve> NoisyCfc(const Histogram& h, const PrivacyParams& p,
                                 NoiseSource& noise) {
  if (h.counts.empty()) {
    return absl::InvalidArgumentError("histogram must have at least one key");
  }
  if (absl::Status s = p.Validate(); !s.ok()) return s;
  const int64_t n = static_cast<int64_t>(h.counts.size());
  RangeTreeMechanism mech(n, p.epsilon, noise);
  CFCurve out{h.domain, std::vector<double>(h.counts.size()),
              CurveKind::kNoisy};
  for (size_t i = 0; i < h.counts.size(); ++i) {
    out.values[i] = mech.Step(static_cast<double>(h.counts[i]));
  }
  return out;
}

namespace {

class NullNoise final : public NoiseSource {
 public:
  double Laplace(double) override { return 0.0; }
};

}  // namespace

std::vector<PSumEvent> TracePSums(const Histogram& h) {
  NullNoise none;
  RangeTreeMechanism mech(static_cast<int64_t>(h.counts.size()), 1.0, none);
  std::vector<PSumEvent> events;
  events.reserve(h.counts.size());
  for (int64_t c : h.counts) {
    mech.Step(static_cast<double>(c));
    events.push_back(
        {mech.last_level(), mech.state().alpha[mech.last_level()]});
  }
  return events;
}

}  // namespace dpplr
