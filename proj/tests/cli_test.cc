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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "dpplr/index_file.h"
#include "dpplr/report.h"

namespace dpplr {
namespace {

using ::testing::HasSubstr;

struct Result {
  int exit_code;
  std::string out;
};

Result RunCli(const std::string& args) {
  const std::string cmd = std::string(DPPLR_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string Tmp(const std::string& name) {
  return ::testing::TempDir() + "/cli_" + name;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    column_ = Tmp("column.json");
    ASSERT_EQ(RunCli("generate --n-keys 512 --seed 3 --out " + column_).exit_code,
              0);
  }
  std::string column_;
};

TEST_F(CliTest, BuildAndLookupEveryMethod) {
  for (const char* method : {"dp_plr", "crypte", "special", "dp_bplus"}) {
    const std::string index = Tmp(std::string(method) + ".json");
    ASSERT_EQ(RunCli("build --column " + column_ + " --method " + method +
                  " --seed 11 --out " + index)
                  .exit_code,
              0)
        << method;
    absl::StatusOr<nlohmann::json> j = ReadJsonFile(index);
    ASSERT_TRUE(j.ok());
    EXPECT_EQ((*j)["method"], method);
    const Result r = RunCli("lookup --index " + index + " --key 100");
    ASSERT_EQ(r.exit_code, 0);
    const nlohmann::json ans = nlohmann::json::parse(r.out);
    EXPECT_EQ(ans["key"], 100);
    EXPECT_TRUE(ans.contains("returned"));
  }
}

TEST_F(CliTest, RangeLookup) {
  const std::string index = Tmp("range.json");
  ASSERT_EQ(RunCli("build --column " + column_ + " --seed 1 --out " + index)
                .exit_code,
            0);
  const Result r = RunCli("lookup --index " + index + " --key 10 --key-hi 20");
  ASSERT_EQ(r.exit_code, 0);
  const nlohmann::json ans = nlohmann::json::parse(r.out);
  EXPECT_LE(ans["lo"].get<int64_t>(), ans["hi"].get<int64_t>());
}

TEST_F(CliTest, UnknownKeyFails) {
  const std::string index = Tmp("unknown.json");
  ASSERT_EQ(RunCli("build --column " + column_ + " --seed 1 --out " + index)
                .exit_code,
            0);
  EXPECT_NE(RunCli("lookup --index " + index + " --key 100000").exit_code, 0);
}

TEST_F(CliTest, BuildIsDeterministicInSeed) {
  const std::string a = Tmp("det_a.json"), b = Tmp("det_b.json");
  ASSERT_EQ(RunCli("build --column " + column_ + " --seed 4 --out " + a).exit_code,
            0);
  ASSERT_EQ(RunCli("build --column " + column_ + " --seed 4 --out " + b).exit_code,
            0);
  EXPECT_EQ(*ReadTextFile(a), *ReadTextFile(b));
}

TEST(CliBenchTest, BenchThenCheck) {
  const std::string config = Tmp("config.json");
  ASSERT_TRUE(WriteTextFile(config, R"({"seed": 8, "n_keys": [256],
      "epsilons": [1.0], "trials": 100, "keys_per_trial": 4})")
                  .ok());
  const std::string csv = Tmp("report.csv");
  ASSERT_EQ(RunCli("bench --config " + config + " --out " + csv).exit_code, 0);
  EXPECT_EQ(RunCli("check --report " + csv).exit_code, 0);

  // A single lossy SPECIAL lookup must fail the check.
  std::vector<TrialRecord> records = *LoadReportRecords(csv);
  for (TrialRecord& r : records) {
    if (r.method == Method::kSpecial) {
      r.query_error = 1;
      break;
    }
  }
  const std::string bad = Tmp("bad.csv");
  ASSERT_TRUE(WriteTextFile(bad, RecordsToCsv(records)).ok());
  const Result r = RunCli("check --report " + bad);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_THAT(r.out, HasSubstr("FAIL special"));
}

TEST(CliBenchTest, BadConfigIsRejected) {
  const std::string config = Tmp("bad_config.json");
  ASSERT_TRUE(WriteTextFile(config, R"({"n_keys": [256]})").ok());
  EXPECT_EQ(RunCli("bench --config " + config + " --out " + Tmp("x.csv"))
                .exit_code,
            2);
  EXPECT_NE(RunCli("frobnicate").exit_code, 0);
}

TEST(CliBenchTest, ShippedConfigsParse) {
  for (const char* name : {"default.json", "smoke.json", "acceptance.json"}) {
    absl::StatusOr<nlohmann::json> j =
        ReadJsonFile(std::string(DPPLR_SOURCE_DIR) + "/configs/" + name);
    ASSERT_TRUE(j.ok()) << name;
    EXPECT_TRUE(ParseBenchConfig(*j).ok()) << name;
  }
}

}  // namespace
}  // namespace dpplr
