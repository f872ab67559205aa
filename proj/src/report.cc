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

#include "dpplr/report.h"

#include <charconv>
#include <cstdio>
#include <variant>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "dpplr/index_file.h"

namespace dpplr {
namespace {

struct MethodTag {};
struct DistributionTag {};
using IntField = int64_t TrialRecord::*;
using DoubleField = double TrialRecord::*;

struct Column {
  const char* name;
  std::variant<MethodTag, DistributionTag, IntField, DoubleField> field;
};

const std::vector<Column>& Columns() {
  static const std::vector<Column> kColumns = {
      {"method", MethodTag{}},
      {"distribution", DistributionTag{}},
      {"seed", &TrialRecord::seed},
      {"n_keys", &TrialRecord::n_keys},
      {"n_tuples", &TrialRecord::n_tuples},
      {"epsilon", &TrialRecord::epsilon},
      {"key", &TrialRecord::key},
      {"true_count", &TrialRecord::true_count},
      {"returned_count", &TrialRecord::returned_count},
      {"query_error", &TrialRecord::query_error},
      {"query_overhead", &TrialRecord::query_overhead},
      {"index_size_bits", &TrialRecord::index_size_bits},
      {"data_overhead", &TrialRecord::data_overhead},
      {"cfc_abs_error", &TrialRecord::cfc_abs_error},
      {"n_segments", &TrialRecord::n_segments},
      {"e_max", &TrialRecord::e_max},
      {"tau", &TrialRecord::tau},
      {"alpha_s", &TrialRecord::alpha_s},
      {"overflow", &TrialRecord::overflow},
      {"mu", &TrialRecord::mu},
      {"wall_time_ns", &TrialRecord::wall_time_ns},
  };
  return kColumns;
}

// Shortest representation that parses back to the same double.
std::string FormatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string FormatCell(const TrialRecord& r, const Column& c) {
  struct Visitor {
    const TrialRecord& r;
    std::string operator()(MethodTag) const {
      return std::string(MethodName(r.method));
    }
    std::string operator()(DistributionTag) const {
      return std::string(DistributionName(r.distribution));
    }
    std::string operator()(IntField f) const { return absl::StrCat(r.*f); }
    std::string operator()(DoubleField f) const { return FormatDouble(r.*f); }
  };
  return std::visit(Visitor{r}, c.field);
}

absl::Status ParseCell(TrialRecord& r, const Column& c, absl::string_view s) {
  auto bad = [&] {
    return absl::InvalidArgumentError(
        absl::StrCat("bad value '", s, "' in column ", c.name));
  };
  if (std::holds_alternative<MethodTag>(c.field)) {
    absl::StatusOr<Method> m = ParseMethod(std::string(s));
    if (!m.ok()) return m.status();
    r.method = *m;
  } else if (std::holds_alternative<DistributionTag>(c.field)) {
    absl::StatusOr<Distribution> d = ParseDistribution(std::string(s));
    if (!d.ok()) return d.status();
    r.distribution = *d;
  } else if (const auto* f = std::get_if<IntField>(&c.field)) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), r.**f);
    if (ec != std::errc() || ptr != s.data() + s.size()) return bad();
  } else {
    const auto field = std::get<DoubleField>(c.field);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), r.*field);
    if (ec != std::errc() || ptr != s.data() + s.size()) return bad();
  }
  return absl::OkStatus();
}

nlohmann::json RecordToJson(const TrialRecord& r) {
  nlohmann::json j = nlohmann::json::object();
  for (const Column& c : Columns()) {
    if (std::holds_alternative<MethodTag>(c.field)) {
      j[c.name] = std::string(MethodName(r.method));
    } else if (std::holds_alternative<DistributionTag>(c.field)) {
      j[c.name] = std::string(DistributionName(r.distribution));
    } else if (const auto* f = std::get_if<IntField>(&c.field)) {
      j[c.name] = r.**f;
    } else {
      j[c.name] = r.*std::get<DoubleField>(c.field);
    }
  }
  return j;
}

absl::StatusOr<TrialRecord> RecordFromJson(const nlohmann::json& j) {
  TrialRecord r;
  try {
    for (const Column& c : Columns()) {
      const nlohmann::json& v = j.at(c.name);
      if (std::holds_alternative<MethodTag>(c.field)) {
        absl::StatusOr<Method> m = ParseMethod(v.get<std::string>());
        if (!m.ok()) return m.status();
        r.method = *m;
      } else if (std::holds_alternative<DistributionTag>(c.field)) {
        absl::StatusOr<Distribution> d =
            ParseDistribution(v.get<std::string>());
        if (!d.ok()) return d.status();
        r.distribution = *d;
      } else if (const auto* f = std::get_if<IntField>(&c.field)) {
        r.**f = v.get<int64_t>();
      } else {
        r.*std::get<DoubleField>(c.field) = v.get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed report record: ", e.what()));
  }
  return r;
}

}  // namespace

absl::StatusOr<ReportFormat> ParseReportFormat(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown report format '", std::string(name),
                   "' (csv or json)"));
}

const std::vector<std::string>& CsvColumns() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> names;
    for (const Column& c : Columns()) names.emplace_back(c.name);
    return names;
  }();
  return kNames;
}

std::string RecordsToCsv(const std::vector<TrialRecord>& records) {
  std::string out = absl::StrJoin(CsvColumns(), ",");
  out += '\n';
  for (const TrialRecord& r : records) {
    bool first = true;
    for (const Column& c : Columns()) {
      if (!first) out += ',';
      first = false;
      out += FormatCell(r, c);
    }
    out += '\n';
  }
  return out;
}

absl::StatusOr<std::vector<TrialRecord>> RecordsFromCsv(std::string_view text) {
  std::vector<absl::string_view> lines = absl::StrSplit(
      absl::string_view(text.data(), text.size()), '\n', absl::SkipEmpty());
  if (lines.empty()) return absl::InvalidArgumentError("empty CSV report");
  if (lines.front() != absl::StrJoin(CsvColumns(), ",")) {
    return absl::InvalidArgumentError(
        "CSV header does not match the report schema");
  }
  std::vector<TrialRecord> records;
  records.reserve(lines.size() - 1);
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<absl::string_view> cells = absl::StrSplit(lines[i], ',');
    if (cells.size() != Columns().size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("CSV line ", i + 1, " has ", cells.size(),
                       " cells, expected ", Columns().size()));
    }
    TrialRecord r;
    for (size_t k = 0; k < cells.size(); ++k) {
      if (absl::Status s = ParseCell(r, Columns()[k], cells[k]); !s.ok()) {
        return absl::InvalidArgumentError(
            absl::StrCat("CSV line ", i + 1, ": ", s.message()));
      }
    }
    records.push_back(r);
  }
  return records;
}

nlohmann::json ChecksToJson(const std::vector<BoundCheck>& checks) {
  nlohmann::json arr = nlohmann::json::array();
  for (const BoundCheck& c : checks) {
    arr.push_back({{"method", std::string(MethodName(c.method))},
                   {"distribution", std::string(DistributionName(c.distribution))},
                   {"n_keys", c.n_keys},
                   {"epsilon", c.epsilon},
                   {"metric", c.metric},
                   {"bound", c.bound},
                   {"beta", c.beta},
                   {"trials", c.trials},
                   {"exceedances", c.exceedances},
                   {"frequency", c.frequency},
                   {"slack", c.slack},
                   {"strict", c.strict},
                   {"pass", c.pass}});
  }
  return arr;
}

nlohmann::json ReportToJson(const std::vector<TrialRecord>& records,
                            const std::vector<BoundCheck>& checks,
                            const nlohmann::json& config) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  if (!config.is_null()) j["config"] = config;
  j["records"] = nlohmann::json::array();
  for (const TrialRecord& r : records) j["records"].push_back(RecordToJson(r));
  j["checks"] = ChecksToJson(checks);
  return j;
}

absl::StatusOr<std::vector<TrialRecord>> RecordsFromJson(
    const nlohmann::json& j) {
  if (!j.is_object() || j.value("schema_version", -1) != kReportSchemaVersion ||
      !j.contains("records") || !j["records"].is_array()) {
    return absl::InvalidArgumentError(
        absl::StrCat("not a version ", kReportSchemaVersion, " report"));
  }
  std::vector<TrialRecord> records;
  records.reserve(j["records"].size());
  for (const nlohmann::json& e : j["records"]) {
    absl::StatusOr<TrialRecord> r = RecordFromJson(e);
    if (!r.ok()) return r.status();
    records.push_back(*r);
  }
  return records;
}

absl::Status EmitReport(const std::vector<TrialRecord>& records,
                        const std::vector<BoundCheck>& checks,
                        ReportFormat format, const std::string& path,
                        const nlohmann::json& config) {
  if (format == ReportFormat::kCsv) {
    return WriteTextFile(path, RecordsToCsv(records));
  }
  return WriteTextFile(path, ReportToJson(records, checks, config).dump(1) + "\n");
}

absl::StatusOr<std::vector<TrialRecord>> LoadReportRecords(
    const std::string& path) {
  absl::StatusOr<std::string> text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  if (path.ends_with(".json")) {
    nlohmann::json j = nlohmann::json::parse(*text, nullptr, false);
    if (j.is_discarded()) {
      return absl::InvalidArgumentError(absl::StrCat(path, " is not valid JSON"));
    }
    return RecordsFromJson(j);
  }
  return RecordsFromCsv(*text);
}

std::string FormatChecks(const std::vector<BoundCheck>& checks) {
  std::string out;
  for (const BoundCheck& c : checks) {
    char line[320];
    std::snprintf(line, sizeof(line),
                  "%-4s %-9s %-9s N=%-6lld eps=%-4g %-16s bound=%-12.4f "
                  "exceed=%lld/%lld freq=%.4f limit=%.4f\n",
                  c.pass ? "PASS" : "FAIL",
                  std::string(MethodName(c.method)).c_str(),
                  std::string(DistributionName(c.distribution)).c_str(),
                  static_cast<long long>(c.n_keys), c.epsilon,
                  c.metric.c_str(), c.bound,
                  static_cast<long long>(c.exceedances),
                  static_cast<long long>(c.trials), c.frequency,
                  c.strict ? 0.0 : c.beta + c.slack);
    out += line;
  }
  return out;
}

}  // namespace dpplr
