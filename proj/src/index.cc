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

#include "dpplr/index.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpplr/postprocess.h"

namespace dpplr {

IndexRange TrueRange(const CFCurve& exact, size_t pos) {
  const auto lo = pos == 0 ? 0 : static_cast<int64_t>(exact.values[pos - 1]);
  return {lo, static_cast<int64_t>(exact.values[pos])};
}

IndexRange ClampRange(double lo, double hi, int64_t total) {
  const double t = static_cast<double>(total);
  const auto l = static_cast<int64_t>(std::clamp(std::floor(lo), 0.0, t));
  const auto h = static_cast<int64_t>(std::clamp(std::ceil(hi), 0.0, t));
  return {l, std::max(l, h)};
}

double PessimismMargin(const PrivacyParams& p, int64_t n_keys) {
  return p.alpha_s * std::pow(static_cast<double>(CeilLog2(n_keys)), 1.5) /
         p.epsilon;
}

absl::StatusOr<DpPlrIndex> BuildDpPlrIndex(const SortedColumn& col,
                                           const PrivacyParams& params,
                                           NoiseSource& noise,
                                           BuildDiagnostics* diag) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  const Histogram h = ComputeHistogram(col);
  absl::StatusOr<CFCurve> noisy = NoisyCfc(h, params, noise);
  if (!noisy.ok()) return noisy.status();

  // Everything below is postprocessing of the released curve.
  absl::StatusOr<CFCurve> post = PostprocessCfc(*noisy, col.total());
  if (!post.ok()) return post.status();
  absl::StatusOr<PlrModel> model = FitPlr(*post, params.tau);
  if (!model.ok()) return model.status();

  DpPlrIndex idx{*std::move(model), params, col.domain(), col.total(),
                 PessimismMargin(params, static_cast<int64_t>(col.n_keys()))};
  if (diag != nullptr) {
    diag->noisy = *std::move(noisy);
    diag->postprocessed = *std::move(post);
  }
  return idx;
}

absl::StatusOr<IndexRange> LookupWithMargin(const DpPlrIndex& idx, int64_t x,
                                            double margin) {
  const std::optional<size_t> pos = idx.domain.Find(x);
  if (!pos) {
    return absl::NotFoundError(absl::StrCat("key ", x, " is not indexed"));
  }
  const double pad = idx.model.e_max + margin;
  const double hi = PredictInDomain(idx.model, x) + pad;
  const double lo =
      *pos == 0
          ? 0.0
          : PredictInDomain(idx.model, idx.domain.key(*pos - 1)) - pad;
  return ClampRange(lo, hi, idx.total);
}

absl::StatusOr<IndexRange> Lookup(const DpPlrIndex& idx, int64_t x) {
  return LookupWithMargin(idx, x, idx.z_pad);
}

absl::StatusOr<IndexRange> RangeLookup(const DpPlrIndex& idx, int64_t x_lo,
                                       int64_t x_hi) {
  if (x_lo > x_hi) {
    return absl::InvalidArgumentError(
        absl::StrCat("range lower key ", x_lo, " exceeds upper key ", x_hi));
  }
  absl::StatusOr<IndexRange> lo = Lookup(idx, x_lo);
  if (!lo.ok()) return lo.status();
  absl::StatusOr<IndexRange> hi = Lookup(idx, x_hi);
  if (!hi.ok()) return hi.status();
  return IndexRange{lo->lo, std::max(lo->lo, hi->hi)};
}

int64_t IndexSizeBits(const DpPlrIndex& idx) {
  return 128 * static_cast<int64_t>(idx.model.n_segments());
}

nlohmann::json DomainToJson(const KeyDomain& d) {
  if (d.contiguous()) {
    return nlohmann::json{{"first", d.front()}, {"last", d.back()}};
  }
  return nlohmann::json{{"keys", d.keys()}};
}

absl::StatusOr<KeyDomain> DomainFromJson(const nlohmann::json& j) {
  try {
    if (j.contains("keys")) {
      return KeyDomain::Create(j.at("keys").get<std::vector<int64_t>>());
    }
    const auto first = j.at("first").get<int64_t>();
    const auto last = j.at("last").get<int64_t>();
    if (last < first) {
      return absl::InvalidArgumentError("domain last key precedes first key");
    }
    std::vector<int64_t> keys(static_cast<size_t>(last - first + 1));
    for (size_t i = 0; i < keys.size(); ++i) {
      keys[i] = first + static_cast<int64_t>(i);
    }
    return KeyDomain::Create(std::move(keys));
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed key domain: ", e.what()));
  }
}

nlohmann::json DpPlrIndexToJson(const DpPlrIndex& idx) {
  return nlohmann::json{
      {"version", kIndexFormatVersion},
      {"method", "dp_plr"},
      {"params",
       {{"epsilon", idx.params.epsilon},
        {"beta", idx.params.beta},
        {"alpha_s", idx.params.alpha_s},
        {"tau", idx.params.tau}}},
      {"n_keys", idx.n_keys()},
      {"total", idx.total},
      {"domain", DomainToJson(idx.domain)},
      {"z_pad", idx.z_pad},
      {"model", PlrModelToJson(idx.model)}};
}

absl::StatusOr<DpPlrIndex> DpPlrIndexFromJson(const nlohmann::json& j) {
  DpPlrIndex idx;
  try {
    if (j.at("version").get<int>() != kIndexFormatVersion) {
      return absl::InvalidArgumentError(
          absl::StrCat("unsupported index version ", j.at("version").dump()));
    }
    if (j.at("method").get<std::string>() != "dp_plr") {
      return absl::InvalidArgumentError("not a dp_plr index");
    }
    const nlohmann::json& p = j.at("params");
    idx.params.epsilon = p.at("epsilon").get<double>();
    idx.params.beta = p.at("beta").get<double>();
    idx.params.alpha_s = p.at("alpha_s").get<double>();
    idx.params.tau = p.at("tau").get<double>();
    idx.total = j.at("total").get<int64_t>();
    idx.z_pad = j.at("z_pad").get<double>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed index file: ", e.what()));
  }
  if (absl::Status s = idx.params.Validate(); !s.ok()) return s;
  if (!j.contains("domain") || !j.contains("model")) {
    return absl::InvalidArgumentError("index file lacks domain or model");
  }
  absl::StatusOr<KeyDomain> domain = DomainFromJson(j.at("domain"));
  if (!domain.ok()) return domain.status();
  idx.domain = *std::move(domain);
  absl::StatusOr<PlrModel> model = PlrModelFromJson(j.at("model"));
  if (!model.ok()) return model.status();
  idx.model = *std::move(model);

  if (idx.total < 0 || j.value("n_keys", int64_t{-1}) != idx.n_keys() ||
      idx.model.n_keys != idx.n_keys() ||
      idx.model.boundaries.front() != idx.domain.front() ||
      idx.model.last_key != idx.domain.back()) {
    return absl::InvalidArgumentError(
        "index model, domain and key count disagree");
  }
  if (idx.z_pad != PessimismMargin(idx.params, idx.n_keys())) {
    return absl::InvalidArgumentError(
        "z_pad does not match alpha_s, epsilon and n_keys");
  }
  return idx;
}

}  // namespace dpplr
