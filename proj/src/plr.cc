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

#include "dpplr/plr.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace dpplr {
namespace {

// Exact key distance; keys within one domain satisfy x >= anchor.
double Offset(int64_t x, int64_t anchor) {
  return static_cast<double>(static_cast<uint64_t>(x) -
                             static_cast<uint64_t>(anchor));
}

double Eval(double slope, double intercept, int64_t anchor, int64_t x) {
  return slope * Offset(x, anchor) + intercept;
}

struct Line {
  double slope;
  double intercept;
};

class SegmentFitter {
 public:
  SegmentFitter(const std::vector<int64_t>& x, const std::vector<double>& y,
                double tau)
      : x_(x), y_(y), tau_(tau) {}

  // Largest e >= s such that the slope cone anchored at s is non-empty over
  // points s..e.
  size_t GreedyEnd(size_t s) const {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    size_t e = s;
    for (size_t k = s + 1; k < x_.size(); ++k) {
      const double dx = Offset(x_[k], x_[s]);
      const double d = y_[k] - y_[s];
      const double nlo = std::max(lo, (d - tau_) / dx);
      const double nhi = std::min(hi, (d + tau_) / dx);
      if (nlo > nhi) break;
      lo = nlo;
      hi = nhi;
      e = k;
    }
    return e;
  }

  bool Fits(const Line& line, size_t s, size_t e) const {
    for (size_t k = s; k <= e; ++k) {
      const double f = Eval(line.slope, line.intercept, x_[s], x_[k]);
      if (!(std::fabs(f - y_[k]) <= tau_)) return false;
    }
    return true;
  }

  Line ConeMidpoint(size_t s, size_t e) const {
    if (e == s) return {0.0, y_[s]};
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (size_t k = s + 1; k <= e; ++k) {
      const double dx = Offset(x_[k], x_[s]);
      const double d = y_[k] - y_[s];
      lo = std::max(lo, (d - tau_) / dx);
      hi = std::min(hi, (d + tau_) / dx);
    }
    return {lo + (hi - lo) / 2.0, y_[s]};
  }

  Line LeastSquares(size_t s, size_t e) const {
    if (e == s) return {0.0, y_[s]};
    const double n = static_cast<double>(e - s + 1);
    double mean_dx = 0.0, mean_y = 0.0;
    for (size_t k = s; k <= e; ++k) {
      mean_dx += Offset(x_[k], x_[s]);
      mean_y += y_[k];
    }
    mean_dx /= n;
    mean_y /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t k = s; k <= e; ++k) {
      const double dx = Offset(x_[k], x_[s]) - mean_dx;
      sxx += dx * dx;
      sxy += dx * (y_[k] - mean_y);
    }
    const double slope = sxy / sxx;
    return {slope, mean_y - slope * mean_dx};
  }

 private:
  const std::vector<int64_t>& x_;
  const std::vector<double>& y_;
  double tau_;
};

}  // namespace

absl::StatusOr<PlrModel> FitPlr(const CFCurve& curve, double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    return absl::InvalidArgumentError(
        absl::StrCat("tau must be >= 0, got ", tau));
  }
  const std::vector<int64_t>& x = curve.domain.keys();
  const std::vector<double>& y = curve.values;
  if (x.empty() || x.size() != y.size()) {
    return absl::InvalidArgumentError(
        "curve must be non-empty with one value per key");
  }

  PlrModel m;
  m.tau = tau;
  m.n_keys = static_cast<int64_t>(x.size());
  m.last_key = x.back();

  SegmentFitter fitter(x, y, tau);
  size_t s = 0;
  while (s < x.size()) {
    size_t e = fitter.GreedyEnd(s);
    Line line{};
    while (true) {
      line = fitter.LeastSquares(s, e);
      if (fitter.Fits(line, s, e)) break;
      line = fitter.ConeMidpoint(s, e);
      if (fitter.Fits(line, s, e)) break;
      // Rounding pushed the cone line past tau; a single point always fits.
      --e;
    }
    m.boundaries.push_back(x[s]);
    m.slopes.push_back(line.slope);
    m.intercepts.push_back(line.intercept);
    s = e + 1;
  }

  double e_max = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    e_max = std::max(e_max, std::fabs(PredictInDomain(m, x[i]) - y[i]));
  }
  if (!(e_max <= tau)) {
    return absl::InternalError(absl::StrCat(
        "PLR fit violated its error bound: e_max ", e_max, " > tau ", tau));
  }
  m.e_max = e_max;
  return m;
}

double PredictInDomain(const PlrModel& m, int64_t x) {
  auto it = std::upper_bound(m.boundaries.begin(), m.boundaries.end(), x);
  const size_t j = static_cast<size_t>(it - m.boundaries.begin()) - 1;
  return Eval(m.slopes[j], m.intercepts[j], m.boundaries[j], x);
}

absl::StatusOr<double> Predict(const PlrModel& m, int64_t x) {
  if (m.boundaries.empty() || x < m.boundaries.front() || x > m.last_key) {
    return absl::NotFoundError(
        absl::StrCat("key ", x, " is outside the model domain"));
  }
  return PredictInDomain(m, x);
}

nlohmann::json PlrModelToJson(const PlrModel& m) {
  return nlohmann::json{{"boundaries", m.boundaries},
                        {"slopes", m.slopes},
                        {"intercepts", m.intercepts},
                        {"e_max", m.e_max},
                        {"tau", m.tau},
                        {"n_keys", m.n_keys},
                        {"last_key", m.last_key}};
}

absl::StatusOr<PlrModel> PlrModelFromJson(const nlohmann::json& j) {
  PlrModel m;
  try {
    m.boundaries = j.at("boundaries").get<std::vector<int64_t>>();
    m.slopes = j.at("slopes").get<std::vector<double>>();
    m.intercepts = j.at("intercepts").get<std::vector<double>>();
    m.e_max = j.at("e_max").get<double>();
    m.tau = j.at("tau").get<double>();
    m.n_keys = j.at("n_keys").get<int64_t>();
    m.last_key = j.at("last_key").get<int64_t>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed PLR model: ", e.what()));
  }
  if (m.boundaries.empty() || m.slopes.size() != m.boundaries.size() ||
      m.intercepts.size() != m.boundaries.size()) {
    return absl::InvalidArgumentError(
        "PLR model needs one slope and intercept per boundary");
  }
  for (size_t i = 1; i < m.boundaries.size(); ++i) {
    if (m.boundaries[i] <= m.boundaries[i - 1]) {
      return absl::InvalidArgumentError(
          "PLR boundaries must be strictly increasing");
    }
  }
  if (m.last_key < m.boundaries.back()) {
    return absl::InvalidArgumentError("PLR last_key precedes last boundary");
  }
  return m;
}

}  // namespace dpplr
