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

#include "dpplr/column.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "dpplr/rng.h"

namespace dpplr {

absl::StatusOr<KeyDomain> KeyDomain::Create(std::vector<int64_t> keys) {
  if (keys.empty()) {
    return absl::InvalidArgumentError("key domain must not be empty");
  }
  for (size_t i = 1; i < keys.size(); ++i) {
    if (keys[i] <= keys[i - 1]) {
      return absl::InvalidArgumentError(
          absl::StrCat("keys must be strictly increasing; position ", i,
                       " has key ", keys[i], " after ", keys[i - 1]));
    }
  }
  return KeyDomain(std::move(keys));
}

std::optional<size_t> KeyDomain::Find(int64_t x) const {
  auto it = std::lower_bound(keys_.begin(), keys_.end(), x);
  if (it == keys_.end() || *it != x) return std::nullopt;
  return static_cast<size_t>(it - keys_.begin());
}

bool KeyDomain::contiguous() const {
  return !keys_.empty() &&
         keys_.back() - keys_.front() ==
             static_cast<int64_t>(keys_.size()) - 1;
}

absl::StatusOr<SortedColumn> SortedColumn::Create(
    std::vector<int64_t> keys, std::vector<int64_t> tuple_keys) {
  absl::StatusOr<KeyDomain> domain = KeyDomain::Create(std::move(keys));
  if (!domain.ok()) return domain.status();
  size_t k = 0;
  for (size_t i = 0; i < tuple_keys.size(); ++i) {
    if (i > 0 && tuple_keys[i] < tuple_keys[i - 1]) {
      return absl::InvalidArgumentError(
          absl::StrCat("tuple keys must be sorted; position ", i, " has key ",
                       tuple_keys[i], " after ", tuple_keys[i - 1]));
    }
    while (k < domain->size() && domain->key(k) < tuple_keys[i]) ++k;
    if (k == domain->size() || domain->key(k) != tuple_keys[i]) {
      return absl::InvalidArgumentError(
          absl::StrCat("tuple at position ", i, " has key ", tuple_keys[i],
                       " which is not in the domain"));
    }
  }
  return SortedColumn(*std::move(domain), std::move(tuple_keys));
}

absl::StatusOr<SortedColumn> SortedColumn::FromCounts(
    std::vector<int64_t> keys, std::span<const int64_t> counts) {
  if (keys.size() != counts.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("got ", keys.size(), " keys but ", counts.size(),
                     " counts"));
  }
  std::vector<int64_t> tuples;
  int64_t total = 0;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("count at position ", i, " is negative"));
    }
    total += counts[i];
  }
  tuples.reserve(static_cast<size_t>(total));
  for (size_t i = 0; i < counts.size(); ++i) {
    tuples.insert(tuples.end(), static_cast<size_t>(counts[i]), keys[i]);
  }
  return Create(std::move(keys), std::move(tuples));
}

int64_t Histogram::total() const {
  int64_t s = 0;
  for (int64_t c : counts) s += c;
  return s;
}

std::string CurveKindName(CurveKind kind) {
  switch (kind) {
    case CurveKind::kExact:
      return "exact";
    case CurveKind::kNoisy:
      return "noisy";
    case CurveKind::kPostprocessed:
      return "postprocessed";
  }
  return "unknown";
}

Histogram ComputeHistogram(const SortedColumn& col) {
  Histogram h{col.domain(), std::vector<int64_t>(col.n_keys(), 0)};
  size_t k = 0;
  for (int64_t t : col.tuple_keys()) {
    while (col.domain().key(k) < t) ++k;
    ++h.counts[k];
  }
  return h;
}

CFCurve ComputeCfc(const Histogram& h) {
  CFCurve curve{h.domain, std::vector<double>(h.counts.size()),
                CurveKind::kExact};
  int64_t running = 0;
  for (size_t i = 0; i < h.counts.size(); ++i) {
    running += h.counts[i];
    curve.values[i] = static_cast<double>(running);
  }
  return curve;
}

absl::StatusOr<Distribution> ParseDistribution(std::string_view name) {
  if (name == "uniform") return Distribution::kUniform;
  if (name == "lognormal") return Distribution::kLognormal;
  if (name == "zipf") return Distribution::kZipf;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown distribution '", std::string(name),
                   "' (expected uniform, lognormal or zipf)"));
}

std::string DistributionName(Distribution d) {
  switch (d) {
    case Distribution::kUniform:
      return "uniform";
    case Distribution::kLognormal:
      return "lognormal";
    case Distribution::kZipf:
      return "zipf";
  }
  return "unknown";
}

namespace {

constexpr double kZipfExponent = 1.1;
// Lognormal(0, 1) samples are mapped onto the domain at this many keys per
// unit; draws past the end are redrawn.
constexpr double kLognormalSpan = 8.0;

double StandardNormal(CounterRng& rng) {
  const double u1 = rng.UniformOpen();
  const double u2 = rng.UniformOpen();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

absl::StatusOr<SortedColumn> GenerateColumn(Distribution dist, int64_t n_keys,
                                            int64_t n_tuples, uint64_t seed) {
  if (n_keys < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("n_keys must be >= 1, got ", n_keys));
  }
  if (n_tuples < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("n_tuples must be >= 0, got ", n_tuples));
  }
  CounterRng rng(DeriveKey(seed, {static_cast<uint64_t>(dist)}));
  std::vector<int64_t> counts(static_cast<size_t>(n_keys), 0);
  const double n = static_cast<double>(n_keys);

  std::vector<double> zipf_cdf;
  if (dist == Distribution::kZipf) {
    zipf_cdf.resize(counts.size());
    double acc = 0.0;
    for (size_t i = 0; i < counts.size(); ++i) {
      acc += std::pow(static_cast<double>(i + 1), -kZipfExponent);
      zipf_cdf[i] = acc;
    }
    for (double& c : zipf_cdf) c /= acc;
  }

  for (int64_t t = 0; t < n_tuples; ++t) {
    size_t idx = 0;
    switch (dist) {
      case Distribution::kUniform:
        idx = static_cast<size_t>(rng.UniformOpen() * n);
        break;
      case Distribution::kLognormal: {
        double pos;
        do {
          pos = std::exp(StandardNormal(rng)) * n / kLognormalSpan;
        } while (pos >= n);
        idx = static_cast<size_t>(pos);
        break;
      }
      case Distribution::kZipf: {
        const double u = rng.UniformOpen();
        idx = static_cast<size_t>(
            std::lower_bound(zipf_cdf.begin(), zipf_cdf.end(), u) -
            zipf_cdf.begin());
        break;
      }
    }
    ++counts[std::min(idx, counts.size() - 1)];
  }

  std::vector<int64_t> keys(counts.size());
  for (size_t i = 0; i < keys.size(); ++i) keys[i] = static_cast<int64_t>(i) + 1;
  return SortedColumn::FromCounts(std::move(keys), counts);
}

absl::StatusOr<SortedColumn> ParseColumnCsv(std::string_view text) {
  std::vector<int64_t> tuples;
  int line_no = 0;
  for (absl::string_view raw :
       absl::StrSplit(absl::string_view(text.data(), text.size()), '\n')) {
    ++line_no;
    const absl::string_view line = absl::StripAsciiWhitespace(raw);
    if (line.empty() || line.front() == '#') continue;
    int64_t v = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": '", line,
                       "' is not a 64-bit integer key"));
    }
    tuples.push_back(v);
  }
  if (tuples.empty()) {
    return absl::InvalidArgumentError("CSV column contains no tuples");
  }
  std::sort(tuples.begin(), tuples.end());
  std::vector<int64_t> keys = tuples;
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return SortedColumn::Create(std::move(keys), std::move(tuples));
}

nlohmann::json ColumnToJson(const SortedColumn& col) {
  const Histogram h = ComputeHistogram(col);
  return nlohmann::json{
      {"keys", col.keys()}, {"counts", h.counts}, {"total", col.total()}};
}

absl::StatusOr<SortedColumn> ColumnFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("keys") || !j.contains("counts")) {
    return absl::InvalidArgumentError(
        "column JSON must be an object with 'keys' and 'counts'");
  }
  std::vector<int64_t> keys;
  std::vector<int64_t> counts;
  try {
    keys = j.at("keys").get<std::vector<int64_t>>();
    counts = j.at("counts").get<std::vector<int64_t>>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed column JSON: ", e.what()));
  }
  absl::StatusOr<SortedColumn> col =
      SortedColumn::FromCounts(std::move(keys), counts);
  if (!col.ok()) return col.status();
  if (j.contains("total") && j.at("total").is_number_integer() &&
      j.at("total").get<int64_t>() != col->total()) {
    return absl::InvalidArgumentError(
        absl::StrCat("column total ", j.at("total").get<int64_t>(),
                     " does not match the sum of counts ", col->total()));
  }
  return col;
}

absl::StatusOr<SortedColumn> LoadColumn(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (path.ends_with(".json")) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, " is not valid JSON"));
    }
    return ColumnFromJson(j);
  }
  return ParseColumnCsv(text);
}

}  // namespace dpplr
