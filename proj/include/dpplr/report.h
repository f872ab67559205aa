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

#ifndef DPPLR_REPORT_H_
#define DPPLR_REPORT_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpplr/bench.h"
#include "json.hpp"

namespace dpplr {

inline constexpr int kReportSchemaVersion = 1;

enum class ReportFormat { kCsv, kJson };

absl::StatusOr<ReportFormat> ParseReportFormat(std::string_view name);

// Fixed CSV column order; the first line of every CSV report.
const std::vector<std::string>& CsvColumns();

std::string RecordsToCsv(const std::vector<TrialRecord>& records);
absl::StatusOr<std::vector<TrialRecord>> RecordsFromCsv(std::string_view text);

nlohmann::json ChecksToJson(const std::vector<BoundCheck>& checks);

// {"schema_version", "config"?, "records": [...], "checks": [...]}
nlohmann::json ReportToJson(const std::vector<TrialRecord>& records,
                            const std::vector<BoundCheck>& checks,
                            const nlohmann::json& config = nullptr);
absl::StatusOr<std::vector<TrialRecord>> RecordsFromJson(
    const nlohmann::json& j);

// CSV reports carry records only; bound checks can be recomputed from them.
absl::Status EmitReport(const std::vector<TrialRecord>& records,
                        const std::vector<BoundCheck>& checks,
                        ReportFormat format, const std::string& path,
                        const nlohmann::json& config = nullptr);

// Reads records back from a report file; the format follows the extension.
absl::StatusOr<std::vector<TrialRecord>> LoadReportRecords(
    const std::string& path);

// Human-readable verdict table.
std::string FormatChecks(const std::vector<BoundCheck>& checks);

}  // namespace dpplr

#endif  // DPPLR_REPORT_H_
