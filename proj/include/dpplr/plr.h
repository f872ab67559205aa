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

#ifndef DPPLR_PLR_H_
#define DPPLR_PLR_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "dpplr/column.h"
#include "json.hpp"

namespace dpplr {

// Piecewise linear model over a key domain. Segment j covers keys in
// [boundaries[j], boundaries[j+1]); the last segment runs through last_key
// inclusive. Within segment j the model is
//
//   f_j(x) = slopes[j] * (x - boundaries[j]) + intercepts[j]
//
// i.e. each intercept is the segment's value at its own left endpoint. This
// keeps predictions exact for large keys where a global intercept would lose
// precision.
struct PlrModel {
  std::vector<int64_t> boundaries;
  std::vector<double> slopes;
  std::vector<double> intercepts;
  int64_t last_key = 0;
  // Measured max |f(x_i) - y_i| over the training curve.
  double e_max = 0.0;
  double tau = 0.0;
  int64_t n_keys = 0;

  size_t n_segments() const { return boundaries.size(); }

  friend bool operator==(const PlrModel&, const PlrModel&) = default;
};

// Error-bounded PLR: greedy left-to-right segmentation where each segment is
// anchored at its first point and keeps the cone of slopes whose line stays
// within +-tau of every point seen so far. A closed segment takes the cone's
// middle slope, or its least-squares line when that also honors +-tau.
// Every training point ends up within tau of the model.
absl::StatusOr<PlrModel> FitPlr(const CFCurve& curve, double tau);

// Evaluates the model. Keys outside [boundaries.front(), last_key] are
// rejected with NotFound.
absl::StatusOr<double> Predict(const PlrModel& m, int64_t x);

// Same as Predict without the domain check; x must lie in the domain.
double PredictInDomain(const PlrModel& m, int64_t x);

// {boundaries[], slopes[], intercepts[], e_max, tau, n_keys, last_key}
nlohmann::json PlrModelToJson(const PlrModel& m);
absl::StatusOr<PlrModel> PlrModelFromJson(const nlohmann::json& j);

}  // namespace dpplr

#endif  // DPPLR_PLR_H_
