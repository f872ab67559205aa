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

#include "dpplr/baselines.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpplr/range_tree.h"

namespace dpplr {
namespace {

absl::Status CheckEpsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive, got ", epsilon));
  }
  return absl::OkStatus();
}

absl::StatusOr<size_t> Position(const KeyDomain& d, int64_t x) {
  const std::optional<size_t> pos = d.Find(x);
  if (!pos) {
    return absl::NotFoundError(absl::StrCat("key ", x, " is not indexed"));
  }
  return *pos;
}

// Pairs adjacent nodes level by level; an odd node out is carried up as is.
std::vector<int64_t> BuildTreeNodes(const std::vector<int64_t>& leaves) {
  std::vector<int64_t> nodes = leaves;
  std::vector<int64_t> level = leaves;
  while (level.size() > 1) {
    std::vector<int64_t> next;
    next.reserve((level.size() + 1) / 2);
    for (size_t i = 0; i + 1 < level.size(); i += 2) {
      next.push_back(level[i] + level[i + 1]);
      nodes.push_back(next.back());
    }
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  return nodes;
}

nlohmann::json Envelope(std::string_view method, const KeyDomain& domain,
                        double epsilon) {
  return nlohmann::json{{"version", kIndexFormatVersion},
                        {"method", std::string(method)},
                        {"params", {{"epsilon", epsilon}}},
                        {"n_keys", domain.size()},
                        {"domain", DomainToJson(domain)}};
}

// Reads the fields shared by every baseline envelope.
absl::Status ReadEnvelope(const nlohmann::json& j, std::string_view method,
                          KeyDomain& domain, double& epsilon) {
  try {
    if (j.at("version").get<int>() != kIndexFormatVersion) {
      return absl::InvalidArgumentError(
          absl::StrCat("unsupported index version ", j.at("version").dump()));
    }
    if (j.at("method").get<std::string>() != method) {
      return absl::InvalidArgumentError(
          absl::StrCat("expected a ", std::string(method), " index"));
    }
    epsilon = j.at("params").at("epsilon").get<double>();
    absl::StatusOr<KeyDomain> d = DomainFromJson(j.at("domain"));
    if (!d.ok()) return d.status();
    domain = *std::move(d);
    if (j.at("n_keys").get<int64_t>() != static_cast<int64_t>(domain.size())) {
      return absl::InvalidArgumentError("n_keys does not match the domain");
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed index file: ", e.what()));
  }
  return CheckEpsilon(epsilon);
}

}  // namespace

absl::StatusOr<DpBPlusIndex> BuildDpBPlus(const SortedColumn& col,
                                          double epsilon, int64_t overflow,
                                          NoiseSource& noise) {
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  if (overflow < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("overflow B must be >= 0, got ", overflow));
  }
  const Histogram h = ComputeHistogram(col);
  const double scale =
      BudgetLevels(static_cast<int64_t>(h.counts.size())) / epsilon;
  DpBPlusIndex idx;
  idx.domain = col.domain();
  idx.overflow = overflow;
  idx.epsilon = epsilon;
  idx.leaf_counts.resize(h.counts.size());
  for (size_t i = 0; i < h.counts.size(); ++i) {
    const int64_t shift =
        std::llround(static_cast<double>(overflow) + noise.Laplace(scale));
    idx.leaf_counts[i] = std::max<int64_t>(0, h.counts[i] + shift);
    idx.data_overhead += std::max<int64_t>(0, shift);
  }
  idx.nodes = BuildTreeNodes(idx.leaf_counts);
  return idx;
}

absl::StatusOr<int64_t> LookupDpBPlus(const DpBPlusIndex& idx, int64_t x) {
  absl::StatusOr<size_t> pos = Position(idx.domain, x);
  if (!pos.ok()) return pos.status();
  return idx.leaf_counts[*pos];
}

int64_t IndexSizeBits(const DpBPlusIndex& idx) { return 64 * idx.node_count(); }

absl::StatusOr<NoisyCfcIndex> BuildCrypte(const SortedColumn& col,
                                          double epsilon, NoiseSource& noise) {
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  const CFCurve exact = ComputeCfc(ComputeHistogram(col));
  const double scale = static_cast<double>(exact.size()) / epsilon;
  NoisyCfcIndex idx{col.domain(), exact.values, col.total(), epsilon};
  for (double& y : idx.values) y += noise.Laplace(scale);
  return idx;
}

absl::StatusOr<IndexRange> LookupCrypte(const NoisyCfcIndex& idx, int64_t x) {
  absl::StatusOr<size_t> pos = Position(idx.domain, x);
  if (!pos.ok()) return pos.status();
  const double lo = *pos == 0 ? 0.0 : std::round(idx.values[*pos - 1]);
  const double hi = std::round(idx.values[*pos]);
  return ClampRange(lo, hi, idx.total);
}

int64_t IndexSizeBits(const NoisyCfcIndex& idx) {
  return 64 * static_cast<int64_t>(idx.values.size());
}

absl::StatusOr<SpecialIndex> BuildSpecial(const SortedColumn& col,
                                          double epsilon, double mu,
                                          NoiseSource& noise) {
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    return absl::InvalidArgumentError(
        absl::StrCat("mu must be >= 0, got ", mu));
  }
  const CFCurve exact = ComputeCfc(ComputeHistogram(col));
  const double scale = 2.0 * static_cast<double>(exact.size()) / epsilon;
  SpecialIndex idx{col.domain(), exact.values, exact.values, mu, col.total(),
                   epsilon};
  for (size_t i = 0; i < exact.size(); ++i) {
    idx.over[i] += std::fabs(noise.Laplace(scale)) + mu;
    idx.under[i] -= std::fabs(noise.Laplace(scale)) + mu;
  }
  return idx;
}

absl::StatusOr<IndexRange> LookupSpecial(const SpecialIndex& idx, int64_t x) {
  absl::StatusOr<size_t> pos = Position(idx.domain, x);
  if (!pos.ok()) return pos.status();
  const double lo = *pos == 0 ? 0.0 : std::round(idx.under[*pos - 1]);
  const double hi = std::round(idx.over[*pos]);
  return ClampRange(lo, hi, idx.total);
}

int64_t IndexSizeBits(const SpecialIndex& idx) {
  return 64 * static_cast<int64_t>(idx.over.size() + idx.under.size());
}

nlohmann::json DpBPlusToJson(const DpBPlusIndex& idx) {
  nlohmann::json j = Envelope("dp_bplus", idx.domain, idx.epsilon);
  j["overflow"] = idx.overflow;
  j["data_overhead"] = idx.data_overhead;
  j["payload"] = {{"nodes", idx.nodes}};
  return j;
}

absl::StatusOr<DpBPlusIndex> DpBPlusFromJson(const nlohmann::json& j) {
  DpBPlusIndex idx;
  if (absl::Status s = ReadEnvelope(j, "dp_bplus", idx.domain, idx.epsilon);
      !s.ok()) {
    return s;
  }
  try {
    idx.overflow = j.at("overflow").get<int64_t>();
    idx.data_overhead = j.at("data_overhead").get<int64_t>();
    idx.nodes = j.at("payload").at("nodes").get<std::vector<int64_t>>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed dp_bplus index: ", e.what()));
  }
  const size_t n = idx.domain.size();
  if (idx.nodes.size() != 2 * n - 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("dp_bplus index over ", n, " keys needs ", 2 * n - 1,
                     " nodes, got ", idx.nodes.size()));
  }
  idx.leaf_counts.assign(idx.nodes.begin(), idx.nodes.begin() + n);
  return idx;
}

nlohmann::json CrypteToJson(const NoisyCfcIndex& idx) {
  nlohmann::json j = Envelope("crypte", idx.domain, idx.epsilon);
  j["total"] = idx.total;
  j["payload"] = {{"noisy_cfc", idx.values}};
  return j;
}

absl::StatusOr<NoisyCfcIndex> CrypteFromJson(const nlohmann::json& j) {
  NoisyCfcIndex idx;
  if (absl::Status s = ReadEnvelope(j, "crypte", idx.domain, idx.epsilon);
      !s.ok()) {
    return s;
  }
  try {
    idx.total = j.at("total").get<int64_t>();
    idx.values = j.at("payload").at("noisy_cfc").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed crypte index: ", e.what()));
  }
  if (idx.values.size() != idx.domain.size()) {
    return absl::InvalidArgumentError("crypte curve length != n_keys");
  }
  return idx;
}

nlohmann::json SpecialToJson(const SpecialIndex& idx) {
  nlohmann::json j = Envelope("special", idx.domain, idx.epsilon);
  j["total"] = idx.total;
  j["mu"] = idx.mu;
  j["payload"] = {{"over", idx.over}, {"under", idx.under}};
  return j;
}

absl::StatusOr<SpecialIndex> SpecialFromJson(const nlohmann::json& j) {
  SpecialIndex idx;
  if (absl::Status s = ReadEnvelope(j, "special", idx.domain, idx.epsilon);
      !s.ok()) {
    return s;
  }
  try {
    idx.total = j.at("total").get<int64_t>();
    idx.mu = j.at("mu").get<double>();
    idx.over = j.at("payload").at("over").get<std::vector<double>>();
    idx.under = j.at("payload").at("under").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed special index: ", e.what()));
  }
  if (idx.over.size() != idx.domain.size() ||
      idx.under.size() != idx.domain.size()) {
    return absl::InvalidArgumentError("special curve length != n_keys");
  }
  return idx;
}

}  // namespace dpplr
