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

#ifndef DPPLR_BENCH_H_
#define DPPLR_BENCH_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpplr/column.h"
#include "dpplr/index_file.h"
#include "json.hpp"

namespace dpplr {

struct BenchConfig {
  uint64_t seed = 0;
  std::vector<Method> methods;
  std::vector<Distribution> distributions;
  std::vector<int64_t> n_keys;
  // |D| = tuples_per_key * N.
  int64_t tuples_per_key = 100;
  std::vector<double> epsilons;
  double beta = 0.05;
  // Independent noise draws (index builds) per cell.
  int64_t trials = 1000;
  // Keys sampled uniformly from the domain per trial.
  int64_t keys_per_trial = 16;
  // Unset fields take per-cell defaults, see ResolvedParams.
  std::optional<double> tau;
  std::optional<double> alpha_s;
  std::optional<int64_t> overflow;
  double mu = 0.0;
  bool record_timing = false;
  int threads = 1;
};

// Desk-scale defaults: N in {2^10, 2^12, 2^14}, |D| = 100 N,
// epsilon in {0.5, 1, 2}, beta = 0.05, 1000 trials per cell, all methods.
BenchConfig DefaultBenchConfig();

// Missing fields keep their defaults; an invalid field fails with an error
// naming it.
absl::StatusOr<BenchConfig> ParseBenchConfig(const nlohmann::json& j);
nlohmann::json BenchConfigToJson(const BenchConfig& c);

// Parameters one cell runs with after defaults are applied.
struct CellParams {
  double tau = 0.0;      // default: CfcErrorBound / 2
  double alpha_s = 1.0;  // default: sqrt(ln(2/beta))
  int64_t overflow = 0;  // default: ceil(2 ceil(log2 N) ln(1/beta) / epsilon)
  double mu = 0.0;
};
absl::StatusOr<CellParams> ResolvedParams(const BenchConfig& c, int64_t n_keys,
                                          double epsilon);

struct TrialRecord {
  Method method = Method::kDpPlr;
  Distribution distribution = Distribution::kUniform;
  int64_t seed = 0;  // trial number within the cell
  int64_t n_keys = 0;
  int64_t n_tuples = 0;
  double epsilon = 0.0;
  int64_t key = 0;
  int64_t true_count = 0;      // |Idx(x)|
  int64_t returned_count = 0;  // |PIdx(x)|
  int64_t query_error = 0;     // |Idx \ PIdx|
  int64_t query_overhead = 0;  // |PIdx \ Idx|
  int64_t index_size_bits = 0;
  int64_t data_overhead = 0;
  // |y~_i - y_i| of the released curve at the queried key (dp_plr, crypte).
  double cfc_abs_error = 0.0;
  int64_t n_segments = 0;
  double e_max = 0.0;
  double tau = 0.0;
  double alpha_s = 0.0;
  int64_t overflow = 0;
  double mu = 0.0;
  int64_t wall_time_ns = 0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

// Query error and overhead of a returned range against the true range.
struct RangeMetrics {
  int64_t intersection;
  int64_t error;
  int64_t overhead;
};
RangeMetrics CompareRanges(const IndexRange& truth, const IndexRange& got);
RangeMetrics CompareCounts(int64_t truth, int64_t returned);

// Runs every (distribution, N, epsilon, method, trial) combination. One
// record per sampled key. Deterministic in the config.
absl::StatusOr<std::vector<TrialRecord>> RunExperiment(const BenchConfig& c);

struct BoundCheck {
  Method method = Method::kDpPlr;
  Distribution distribution = Distribution::kUniform;
  int64_t n_keys = 0;
  double epsilon = 0.0;
  std::string metric;
  double bound = 0.0;
  double beta = 0.0;
  int64_t trials = 0;
  int64_t exceedances = 0;
  double frequency = 0.0;
  // Allowed excess frequency: two binomial standard errors.
  double slack = 0.0;
  // Strict checks tolerate no exceedance at all.
  bool strict = false;
  bool pass = false;
};

// Minimum records per cell before bounds are evaluated.
inline constexpr int64_t kMinTrialsPerCell = 100;

// Evaluates the formal bound of every applicable metric per
// (method, distribution, N, epsilon) cell. A non-strict check passes when
// the exceedance frequency is at most beta + slack.
absl::StatusOr<std::vector<BoundCheck>> CheckBounds(
    const std::vector<TrialRecord>& records, double beta);

bool AllPass(const std::vector<BoundCheck>& checks);

}  // namespace dpplr

#endif  // DPPLR_BENCH_H_
