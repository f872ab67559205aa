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

// Command-line front end: generate, build, lookup, bench, check.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpplr/baselines.h"
#include "dpplr/bench.h"
#include "dpplr/column.h"
#include "dpplr/index.h"
#include "dpplr/index_file.h"
#include "dpplr/noise.h"
#include "dpplr/range_tree.h"
#include "dpplr/report.h"
#include "dpplr/rng.h"

namespace dpplr {
namespace {

int Fail(const absl::Status& s) {
  std::cerr << "error: " << s << "\n";
  return 2;
}

struct GenerateArgs {
  std::string distribution = "uniform";
  int64_t n_keys = 1024;
  int64_t n_tuples = 0;
  uint64_t seed = 0;
  std::string out;
};

int RunGenerate(const GenerateArgs& a) {
  absl::StatusOr<Distribution> dist = ParseDistribution(a.distribution);
  if (!dist.ok()) return Fail(dist.status());
  const int64_t n_tuples = a.n_tuples > 0 ? a.n_tuples : 100 * a.n_keys;
  absl::StatusOr<SortedColumn> col =
      GenerateColumn(*dist, a.n_keys, n_tuples, a.seed);
  if (!col.ok()) return Fail(col.status());
  if (absl::Status s = WriteTextFile(a.out, ColumnToJson(*col).dump() + "\n");
      !s.ok()) {
    return Fail(s);
  }
  return 0;
}

struct BuildArgs {
  std::string column;
  std::string method = "dp_plr";
  double epsilon = 1.0;
  double beta = 0.05;
  std::optional<double> alpha_s;
  std::optional<double> tau;
  std::optional<int64_t> overflow;
  double mu = 0.0;
  uint64_t seed = 0;
  std::string out;
};

int RunBuild(const BuildArgs& a) {
  absl::StatusOr<Method> method = ParseMethod(a.method);
  if (!method.ok()) return Fail(method.status());
  absl::StatusOr<SortedColumn> col = LoadColumn(a.column);
  if (!col.ok()) return Fail(col.status());

  BenchConfig cfg;
  cfg.beta = a.beta;
  cfg.tau = a.tau;
  cfg.alpha_s = a.alpha_s;
  cfg.overflow = a.overflow;
  cfg.mu = a.mu;
  const int64_t n = static_cast<int64_t>(col->n_keys());
  absl::StatusOr<CellParams> cell = ResolvedParams(cfg, n, a.epsilon);
  if (!cell.ok()) return Fail(cell.status());

  LaplaceNoise noise(DeriveKey(a.seed, {static_cast<uint64_t>(*method)}));
  absl::StatusOr<AnyIndex> index;
  switch (*method) {
    case Method::kDpPlr: {
      auto i = BuildDpPlrIndex(
          *col, {a.epsilon, a.beta, cell->alpha_s, cell->tau}, noise);
      index = i.ok() ? absl::StatusOr<AnyIndex>(*std::move(i)) : i.status();
      break;
    }
    case Method::kCrypte: {
      auto i = BuildCrypte(*col, a.epsilon, noise);
      index = i.ok() ? absl::StatusOr<AnyIndex>(*std::move(i)) : i.status();
      break;
    }
    case Method::kSpecial: {
      auto i = BuildSpecial(*col, a.epsilon, cell->mu, noise);
      index = i.ok() ? absl::StatusOr<AnyIndex>(*std::move(i)) : i.status();
      break;
    }
    case Method::kDpBPlus: {
      auto i = BuildDpBPlus(*col, a.epsilon, cell->overflow, noise);
      index = i.ok() ? absl::StatusOr<AnyIndex>(*std::move(i)) : i.status();
      break;
    }
  }
  if (!index.ok()) return Fail(index.status());
  if (absl::Status s = WriteTextFile(a.out, IndexToJson(*index).dump() + "\n");
      !s.ok()) {
    return Fail(s);
  }
  return 0;
}

struct LookupArgs {
  std::string index;
  int64_t key = 0;
  std::optional<int64_t> key_hi;
};

int RunLookup(const LookupArgs& a) {
  absl::StatusOr<nlohmann::json> j = ReadJsonFile(a.index);
  if (!j.ok()) return Fail(j.status());
  absl::StatusOr<AnyIndex> index = IndexFromJson(*j);
  if (!index.ok()) return Fail(index.status());

  nlohmann::json out;
  if (a.key_hi) {
    const auto* plr = std::get_if<DpPlrIndex>(&*index);
    if (plr == nullptr) {
      return Fail(absl::InvalidArgumentError(
          "--key-hi is only supported for dp_plr indexes"));
    }
    absl::StatusOr<IndexRange> r = RangeLookup(*plr, a.key, *a.key_hi);
    if (!r.ok()) return Fail(r.status());
    out = {{"key_lo", a.key}, {"key_hi", *a.key_hi}, {"lo", r->lo},
           {"hi", r->hi}};
  } else {
    absl::StatusOr<LookupAnswer> ans = LookupAny(*index, a.key);
    if (!ans.ok()) return Fail(ans.status());
    out = {{"key", a.key}, {"returned", ans->returned}};
    if (!std::holds_alternative<DpBPlusIndex>(*index)) {
      out["lo"] = ans->range.lo;
      out["hi"] = ans->range.hi;
    }
  }
  std::cout << out.dump() << "\n";
  return 0;
}

struct BenchArgs {
  std::string config;
  std::string out;
  std::string format = "csv";
};

int RunBench(const BenchArgs& a) {
  absl::StatusOr<ReportFormat> format = ParseReportFormat(a.format);
  if (!format.ok()) return Fail(format.status());
  absl::StatusOr<nlohmann::json> j = ReadJsonFile(a.config);
  if (!j.ok()) return Fail(j.status());
  absl::StatusOr<BenchConfig> cfg = ParseBenchConfig(*j);
  if (!cfg.ok()) return Fail(cfg.status());
  absl::StatusOr<std::vector<TrialRecord>> records = RunExperiment(*cfg);
  if (!records.ok()) return Fail(records.status());

  std::vector<BoundCheck> checks;
  if (*format == ReportFormat::kJson) {
    absl::StatusOr<std::vector<BoundCheck>> c =
        CheckBounds(*records, cfg->beta);
    // Too few trials for a verdict is not an error for bench.
    if (c.ok()) checks = *std::move(c);
  }
  if (absl::Status s = EmitReport(*records, checks, *format, a.out,
                                  BenchConfigToJson(*cfg));
      !s.ok()) {
    return Fail(s);
  }
  std::cerr << records->size() << " records written to " << a.out << "\n";
  return 0;
}

struct CheckArgs {
  std::string report;
  double beta = 0.05;
};

int RunCheck(const CheckArgs& a) {
  absl::StatusOr<std::vector<TrialRecord>> records =
      LoadReportRecords(a.report);
  if (!records.ok()) return Fail(records.status());
  absl::StatusOr<std::vector<BoundCheck>> checks =
      CheckBounds(*records, a.beta);
  if (!checks.ok()) return Fail(checks.status());
  std::cout << FormatChecks(*checks);
  const bool ok = AllPass(*checks);
  std::cout << (ok ? "all bound checks passed\n" : "bound checks FAILED\n");
  return ok ? 0 : 1;
}

int Main(int argc, char** argv) {
  CLI::App app{"Differentially private learned index (DP-PLR) and baselines"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* g = app.add_subcommand("generate", "Write a synthetic column");
  g->add_option("--distribution", gen.distribution,
                "uniform, lognormal or zipf");
  g->add_option("--n-keys", gen.n_keys, "Domain size N")->check(CLI::PositiveNumber);
  g->add_option("--n-tuples", gen.n_tuples, "Tuples (default 100 N)");
  g->add_option("--seed", gen.seed, "Generator seed")->required();
  g->add_option("--out", gen.out, "Output .json column")->required();

  BuildArgs build;
  CLI::App* b = app.add_subcommand("build", "Build a private index");
  b->add_option("--column", build.column, "Column file (.csv or .json)")
      ->required();
  b->add_option("--method", build.method, "dp_plr, crypte, special, dp_bplus");
  b->add_option("--epsilon", build.epsilon, "Privacy budget");
  b->add_option("--beta", build.beta, "Failure probability");
  b->add_option("--alpha-s", build.alpha_s, "Pessimism multiplier");
  b->add_option("--tau", build.tau, "PLR error bound");
  b->add_option("--overflow", build.overflow, "DP B+ dummy tuples per leaf");
  b->add_option("--mu", build.mu, "SPECIAL noise shift");
  b->add_option("--seed", build.seed, "Noise seed")->required();
  b->add_option("--out", build.out, "Output index file")->required();

  LookupArgs lookup;
  CLI::App* l = app.add_subcommand("lookup", "Query a built index");
  l->add_option("--index", lookup.index, "Index file")->required();
  l->add_option("--key", lookup.key, "Key (range start with --key-hi)")
      ->required();
  l->add_option("--key-hi", lookup.key_hi, "Inclusive range end");

  BenchArgs bench;
  CLI::App* be = app.add_subcommand("bench", "Run a Monte Carlo experiment");
  be->add_option("--config", bench.config, "Experiment config JSON")
      ->required();
  be->add_option("--out", bench.out, "Report path")->required();
  be->add_option("--format", bench.format, "csv or json");

  CheckArgs check;
  CLI::App* c = app.add_subcommand(
      "check", "Verify a report against the formal bounds");
  c->add_option("--report", check.report, "Report (.csv or .json)")
      ->required();
  c->add_option("--beta", check.beta, "Failure probability");

  CLI11_PARSE(app, argc, argv);

  if (*g) return RunGenerate(gen);
  if (*b) return RunBuild(build);
  if (*l) return RunLookup(lookup);
  if (*be) return RunBench(bench);
  return RunCheck(check);
}

}  // namespace
}  // namespace dpplr

int main(int argc, char** argv) { return dpplr::Main(argc, argv); }
