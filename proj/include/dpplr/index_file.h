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

#ifndef DPPLR_INDEX_FILE_H_
#define DPPLR_INDEX_FILE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpplr/baselines.h"
#include "dpplr/index.h"
#include "json.hpp"

namespace dpplr {

enum class Method { kDpPlr, kCrypte, kSpecial, kDpBPlus };

absl::StatusOr<Method> ParseMethod(std::string_view name);
std::string MethodName(Method m);

using AnyIndex =
    std::variant<DpPlrIndex, NoisyCfcIndex, SpecialIndex, DpBPlusIndex>;

nlohmann::json IndexToJson(const AnyIndex& idx);

// Dispatches on the envelope's "method" discriminant.
absl::StatusOr<AnyIndex> IndexFromJson(const nlohmann::json& j);

// Bits of 64-bit payload values in a serialized envelope: the per-segment
// slopes and intercepts of a PLR model, the noisy curves of the CFC
// baselines, the node array of the B+ tree.
absl::StatusOr<int64_t> SerializedPayloadBits(const nlohmann::json& j);

// Answer to a point lookup: a position range for the CFC-based indexes, a
// returned tuple count for the B+ tree.
struct LookupAnswer {
  IndexRange range;
  int64_t returned = 0;
};
absl::StatusOr<LookupAnswer> LookupAny(const AnyIndex& idx, int64_t x);

absl::Status WriteTextFile(const std::string& path, std::string_view text);
absl::StatusOr<std::string> ReadTextFile(const std::string& path);
absl::StatusOr<nlohmann::json> ReadJsonFile(const std::string& path);

}  // namespace dpplr

#endif  // DPPLR_INDEX_FILE_H_
