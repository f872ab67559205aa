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

#include "dpplr/index_file.h"

#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"

namespace dpplr {

absl::StatusOr<Method> ParseMethod(std::string_view name) {
  if (name == "dp_plr") return Method::kDpPlr;
  if (name == "crypte") return Method::kCrypte;
  if (name == "special") return Method::kSpecial;
  if (name == "dp_bplus") return Method::kDpBPlus;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown method '", std::string(name),
                   "' (expected dp_plr, crypte, special or dp_bplus)"));
}

std::string MethodName(Method m) {
  switch (m) {
    case Method::kDpPlr:
      return "dp_plr";
    case Method::kCrypte:
      return "crypte";
    case Method::kSpecial:
      return "special";
    case Method::kDpBPlus:
      return "dp_bplus";
  }
  return "unknown";
}

nlohmann::json IndexToJson(const AnyIndex& idx) {
  struct Visitor {
    nlohmann::json operator()(const DpPlrIndex& i) const {
      return DpPlrIndexToJson(i);
    }
    nlohmann::json operator()(const NoisyCfcIndex& i) const {
      return CrypteToJson(i);
    }
    nlohmann::json operator()(const SpecialIndex& i) const {
      return SpecialToJson(i);
    }
    nlohmann::json operator()(const DpBPlusIndex& i) const {
      return DpBPlusToJson(i);
    }
  };
  return std::visit(Visitor{}, idx);
}

namespace {

template <typename T>
absl::StatusOr<AnyIndex> Wrap(absl::StatusOr<T> v) {
  if (!v.ok()) return v.status();
  return AnyIndex(*std::move(v));
}

absl::StatusOr<Method> EnvelopeMethod(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("method") || !j["method"].is_string()) {
    return absl::InvalidArgumentError("index envelope has no method field");
  }
  return ParseMethod(j["method"].get<std::string>());
}

size_t ArrayLength(const nlohmann::json& j, std::string_view a,
                   std::string_view b) {
  const nlohmann::json* node = &j;
  for (std::string_view key : {a, b}) {
    const auto it = node->find(std::string(key));
    if (it == node->end()) return 0;
    node = &*it;
  }
  return node->is_array() ? node->size() : 0;
}

}  // namespace

absl::StatusOr<AnyIndex> IndexFromJson(const nlohmann::json& j) {
  absl::StatusOr<Method> m = EnvelopeMethod(j);
  if (!m.ok()) return m.status();
  switch (*m) {
    case Method::kDpPlr:
      return Wrap(DpPlrIndexFromJson(j));
    case Method::kCrypte:
      return Wrap(CrypteFromJson(j));
    case Method::kSpecial:
      return Wrap(SpecialFromJson(j));
    case Method::kDpBPlus:
      return Wrap(DpBPlusFromJson(j));
  }
  return absl::InternalError("unhandled method");
}

absl::StatusOr<int64_t> SerializedPayloadBits(const nlohmann::json& j) {
  absl::StatusOr<Method> m = EnvelopeMethod(j);
  if (!m.ok()) return m.status();
  size_t values = 0;
  switch (*m) {
    case Method::kDpPlr:
      values = ArrayLength(j, "model", "slopes") +
               ArrayLength(j, "model", "intercepts");
      break;
    case Method::kCrypte:
      values = ArrayLength(j, "payload", "noisy_cfc");
      break;
    case Method::kSpecial:
      values = ArrayLength(j, "payload", "over") +
               ArrayLength(j, "payload", "under");
      break;
    case Method::kDpBPlus:
      values = ArrayLength(j, "payload", "nodes");
      break;
  }
  return 64 * static_cast<int64_t>(values);
}

absl::StatusOr<LookupAnswer> LookupAny(const AnyIndex& idx, int64_t x) {
  auto from_range =
      [](absl::StatusOr<IndexRange> r) -> absl::StatusOr<LookupAnswer> {
    if (!r.ok()) return r.status();
    return LookupAnswer{*r, r->size()};
  };
  if (const auto* i = std::get_if<DpPlrIndex>(&idx)) {
    return from_range(Lookup(*i, x));
  }
  if (const auto* i = std::get_if<NoisyCfcIndex>(&idx)) {
    return from_range(LookupCrypte(*i, x));
  }
  if (const auto* i = std::get_if<SpecialIndex>(&idx)) {
    return from_range(LookupSpecial(*i, x));
  }
  const auto& b = std::get<DpBPlusIndex>(idx);
  absl::StatusOr<int64_t> count = LookupDpBPlus(b, x);
  if (!count.ok()) return count.status();
  return LookupAnswer{{}, *count};
}

absl::Status WriteTextFile(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("failed writing ", path));
  return absl::OkStatus();
}

absl::StatusOr<std::string> ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

absl::StatusOr<nlohmann::json> ReadJsonFile(const std::string& path) {
  absl::StatusOr<std::string> text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  nlohmann::json j = nlohmann::json::parse(*text, nullptr, false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat(path, " is not valid JSON"));
  }
  return j;
}

}  // namespace dpplr
