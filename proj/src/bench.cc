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

#include "dpplr/bench.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpplr/baselines.h"
#include "dpplr/index.h"
#include "dpplr/noise.h"
#include "dpplr/range_tree.h"
#include "dpplr/rng.h"

namespace dpplr {

BenchConfig DefaultBenchConfig() {
  BenchConfig c;
  c.methods = {Method::kDpPlr, Method::kCrypte, Method::kSpecial,
               Method::kDpBPlus};
  c.distributions = {Distribution::kUniform};
  c.n_keys = {1 << 10, 1 << 12, 1 << 14};
  c.epsilons = {0.5, 1.0, 2.0};
  return c;
}

namespace {

absl::Status FieldError(const std::string& field, absl::string_view why) {
  return absl::InvalidArgumentError(
      absl::StrCat("config field '", field, "': ", why));
}

template <typename T, typename Parse>
absl::Status ReadList(const nlohmann::json& j, const char* field,
                      std::vector<T>& out, Parse parse) {
  if (!j.contains(field)) return absl::OkStatus();
  const nlohmann::json& v = j.at(field);
  if (!v.is_array() || v.empty()) {
    return FieldError(field, "must be a non-empty array");
  }
  out.clear();
  for (const nlohmann::json& e : v) {
    absl::StatusOr<T> parsed = parse(e);
    if (!parsed.ok()) return FieldError(field, parsed.status().message());
    out.push_back(*parsed);
  }
  return absl::OkStatus();
}

absl::StatusOr<int64_t> PositiveInt(const nlohmann::json& e) {
  if (!e.is_number_integer() || e.get<int64_t>() < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected a positive integer, got ", e.dump()));
  }
  return e.get<int64_t>();
}

absl::StatusOr<double> PositiveNumber(const nlohmann::json& e) {
  if (!e.is_number() || !(e.get<double>() > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected a positive number, got ", e.dump()));
  }
  return e.get<double>();
}

uint64_t EpsilonBits(double eps) { return std::bit_cast<uint64_t>(eps); }

}  // namespace

absl::StatusOr<BenchConfig> ParseBenchConfig(const nlohmann::json& j) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  static const std::set<std::string> kKnown = {
      "seed",    "methods",        "distributions", "n_keys",
      "tuples_per_key", "epsilons", "beta",         "trials",
      "keys_per_trial", "tau",      "alpha_s",      "overflow",
      "mu",      "record_timing",  "threads"};
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.contains(key)) return FieldError(key, "unknown field");
  }
  if (!j.contains("seed")) return FieldError("seed", "is required");

  BenchConfig c = DefaultBenchConfig();
  if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
    return FieldError("seed", "must be a non-negative integer");
  }
  if (j["seed"].is_number_integer() && j["seed"].get<int64_t>() < 0) {
    return FieldError("seed", "must be a non-negative integer");
  }
  c.seed = j["seed"].get<uint64_t>();

  auto method = [](const nlohmann::json& e) -> absl::StatusOr<Method> {
    if (!e.is_string()) return absl::InvalidArgumentError("expected a string");
    return ParseMethod(e.get<std::string>());
  };
  auto dist = [](const nlohmann::json& e) -> absl::StatusOr<Distribution> {
    if (!e.is_string()) return absl::InvalidArgumentError("expected a string");
    return ParseDistribution(e.get<std::string>());
  };
  if (auto s = ReadList(j, "methods", c.methods, method); !s.ok()) return s;
  if (auto s = ReadList(j, "distributions", c.distributions, dist); !s.ok()) {
    return s;
  }
  if (auto s = ReadList(j, "n_keys", c.n_keys, PositiveInt); !s.ok()) return s;
  if (auto s = ReadList(j, "epsilons", c.epsilons, PositiveNumber); !s.ok()) {
    return s;
  }

  auto read_int = [&](const char* field, int64_t& out,
                      int64_t min) -> absl::Status {
    if (!j.contains(field)) return absl::OkStatus();
    if (!j[field].is_number_integer() || j[field].get<int64_t>() < min) {
      return FieldError(field, absl::StrCat("must be an integer >= ", min));
    }
    out = j[field].get<int64_t>();
    return absl::OkStatus();
  };
  if (auto s = read_int("tuples_per_key", c.tuples_per_key, 0); !s.ok()) {
    return s;
  }
  if (auto s = read_int("trials", c.trials, 1); !s.ok()) return s;
  if (auto s = read_int("keys_per_trial", c.keys_per_trial, 1); !s.ok()) {
    return s;
  }
  int64_t threads = c.threads;
  if (auto s = read_int("threads", threads, 1); !s.ok()) return s;
  c.threads = static_cast<int>(std::min<int64_t>(threads, 256));

  if (j.contains("beta")) {
    if (!j["beta"].is_number() || !(j["beta"].get<double>() > 0.0) ||
        !(j["beta"].get<double>() < 1.0)) {
      return FieldError("beta", "must be a number in (0, 1)");
    }
    c.beta = j["beta"].get<double>();
  }
  auto read_opt_number = [&](const char* field, std::optional<double>& out,
                             double min) -> absl::Status {
    if (!j.contains(field) || j[field].is_null()) return absl::OkStatus();
    if (!j[field].is_number() || !(j[field].get<double>() >= min)) {
      return FieldError(field, absl::StrCat("must be null or a number >= ", min));
    }
    out = j[field].get<double>();
    return absl::OkStatus();
  };
  if (auto s = read_opt_number("tau", c.tau, 0.0); !s.ok()) return s;
  if (auto s = read_opt_number("alpha_s", c.alpha_s, 1.0); !s.ok()) return s;
  if (j.contains("overflow") && !j["overflow"].is_null()) {
    if (!j["overflow"].is_number_integer() ||
        j["overflow"].get<int64_t>() < 0) {
      return FieldError("overflow", "must be null or an integer >= 0");
    }
    c.overflow = j["overflow"].get<int64_t>();
  }
  std::optional<double> mu;
  if (auto s = read_opt_number("mu", mu, 0.0); !s.ok()) return s;
  c.mu = mu.value_or(0.0);
  if (j.contains("record_timing")) {
    if (!j["record_timing"].is_boolean()) {
      return FieldError("record_timing", "must be a boolean");
    }
    c.record_timing = j["record_timing"].get<bool>();
  }
  return c;
}

nlohmann::json BenchConfigToJson(const BenchConfig& c) {
  nlohmann::json j;
  j["seed"] = c.seed;
  j["methods"] = nlohmann::json::array();
  for (Method m : c.methods) j["methods"].push_back(std::string(MethodName(m)));
  j["distributions"] = nlohmann::json::array();
  for (Distribution d : c.distributions) {
    j["distributions"].push_back(std::string(DistributionName(d)));
  }
  j["n_keys"] = c.n_keys;
  j["tuples_per_key"] = c.tuples_per_key;
  j["epsilons"] = c.epsilons;
  j["beta"] = c.beta;
  j["trials"] = c.trials;
  j["keys_per_trial"] = c.keys_per_trial;
  j["tau"] = c.tau ? nlohmann::json(*c.tau) : nlohmann::json(nullptr);
  j["alpha_s"] = c.alpha_s ? nlohmann::json(*c.alpha_s) : nlohmann::json(nullptr);
  j["overflow"] =
      c.overflow ? nlohmann::json(*c.overflow) : nlohmann::json(nullptr);
  j["mu"] = c.mu;
  j["record_timing"] = c.record_timing;
  j["threads"] = c.threads;
  return j;
}

absl::StatusOr<CellParams> ResolvedParams(const BenchConfig& c, int64_t n_keys,
                                          double epsilon) {
  CellParams p;
  p.alpha_s = c.alpha_s.value_or(
      std::max(1.0, std::sqrt(std::log(2.0 / c.beta))));
  if (c.tau) {
    p.tau = *c.tau;
  } else if (n_keys >= 2) {
    absl::StatusOr<double> bound =
        CfcErrorBound({epsilon, c.beta, p.alpha_s, 0.0}, n_keys);
    if (!bound.ok()) return bound.status();
    p.tau = *bound / 2.0;
  }
  p.overflow = c.overflow.value_or(static_cast<int64_t>(std::ceil(
      2.0 * BudgetLevels(n_keys) * std::log(1.0 / c.beta) / epsilon)));
  p.mu = c.mu;
  return p;
}

RangeMetrics CompareRanges(const IndexRange& truth, const IndexRange& got) {
  const int64_t inter = std::max<int64_t>(
      0, std::min(truth.hi, got.hi) - std::max(truth.lo, got.lo));
  return {inter, truth.size() - inter, got.size() - inter};
}

RangeMetrics CompareCounts(int64_t truth, int64_t returned) {
  const int64_t inter = std::min(truth, returned);
  return {inter, truth - inter, returned - inter};
}

namespace {

struct Dataset {
  SortedColumn column;
  CFCurve exact;
};

struct Job {
  const Dataset* data;
  Distribution dist;
  int64_t n_keys;
  double epsilon;
  Method method;
  int64_t trial;
};

absl::StatusOr<std::vector<TrialRecord>> RunJob(const BenchConfig& c,
                                                const Job& job) {
  absl::StatusOr<CellParams> params =
      ResolvedParams(c, job.n_keys, job.epsilon);
  if (!params.ok()) return params.status();
  const uint64_t dist_id = static_cast<uint64_t>(job.dist);
  const uint64_t n_id = static_cast<uint64_t>(job.n_keys);
  LaplaceNoise noise(DeriveKey(
      c.seed, {1, dist_id, n_id, EpsilonBits(job.epsilon),
               static_cast<uint64_t>(job.method),
               static_cast<uint64_t>(job.trial)}));
  // Methods share the sampled keys of a trial.
  CounterRng key_rng(DeriveKey(c.seed, {2, dist_id, n_id,
                                        EpsilonBits(job.epsilon),
                                        static_cast<uint64_t>(job.trial)}));

  const SortedColumn& col = job.data->column;
  const CFCurve& exact = job.data->exact;
  const auto start = std::chrono::steady_clock::now();

  TrialRecord base;
  base.method = job.method;
  base.distribution = job.dist;
  base.seed = job.trial;
  base.n_keys = job.n_keys;
  base.n_tuples = col.total();
  base.epsilon = job.epsilon;
  base.tau = params->tau;
  base.alpha_s = params->alpha_s;
  base.overflow = params->overflow;
  base.mu = params->mu;

  AnyIndex index;
  std::vector<double> released;  // curve whose pointwise error is recorded
  switch (job.method) {
    case Method::kDpPlr: {
      BuildDiagnostics diag;
      absl::StatusOr<DpPlrIndex> idx = BuildDpPlrIndex(
          col, {job.epsilon, c.beta, params->alpha_s, params->tau}, noise,
          &diag);
      if (!idx.ok()) return idx.status();
      base.n_segments = static_cast<int64_t>(idx->model.n_segments());
      base.e_max = idx->model.e_max;
      released = std::move(diag.noisy.values);
      index = *std::move(idx);
      break;
    }
    case Method::kCrypte: {
      absl::StatusOr<NoisyCfcIndex> idx = BuildCrypte(col, job.epsilon, noise);
      if (!idx.ok()) return idx.status();
      released = idx->values;
      index = *std::move(idx);
      break;
    }
    case Method::kSpecial: {
      absl::StatusOr<SpecialIndex> idx =
          BuildSpecial(col, job.epsilon, params->mu, noise);
      if (!idx.ok()) return idx.status();
      index = *std::move(idx);
      break;
    }
    case Method::kDpBPlus: {
      absl::StatusOr<DpBPlusIndex> idx =
          BuildDpBPlus(col, job.epsilon, params->overflow, noise);
      if (!idx.ok()) return idx.status();
      base.data_overhead = idx->data_overhead;
      index = *std::move(idx);
      break;
    }
  }
  base.index_size_bits =
      std::visit([](const auto& i) { return IndexSizeBits(i); }, index);

  std::vector<TrialRecord> out;
  out.reserve(static_cast<size_t>(c.keys_per_trial));
  for (int64_t k = 0; k < c.keys_per_trial; ++k) {
    const auto pos = std::min(
        col.n_keys() - 1,
        static_cast<size_t>(key_rng.UniformOpen() *
                            static_cast<double>(col.n_keys())));
    TrialRecord r = base;
    r.key = col.domain().key(pos);
    const IndexRange truth = TrueRange(exact, pos);
    absl::StatusOr<LookupAnswer> ans = LookupAny(index, r.key);
    if (!ans.ok()) return ans.status();
    const RangeMetrics m = job.method == Method::kDpBPlus
                               ? CompareCounts(truth.size(), ans->returned)
                               : CompareRanges(truth, ans->range);
    r.true_count = truth.size();
    r.returned_count = ans->returned;
    r.query_error = m.error;
    r.query_overhead = m.overhead;
    if (!released.empty()) {
      r.cfc_abs_error = std::fabs(released[pos] - exact.values[pos]);
    }
    out.push_back(r);
  }
  if (c.record_timing) {
    const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    for (TrialRecord& r : out) r.wall_time_ns = ns;
  }
  return out;
}

}  // namespace

absl::StatusOr<std::vector<TrialRecord>> RunExperiment(const BenchConfig& c) {
  if (c.methods.empty()) return FieldError("methods", "must not be empty");
  if (c.distributions.empty()) {
    return FieldError("distributions", "must not be empty");
  }
  if (c.n_keys.empty()) return FieldError("n_keys", "must not be empty");
  if (c.epsilons.empty()) return FieldError("epsilons", "must not be empty");
  if (c.trials < 1) return FieldError("trials", "must be >= 1");
  if (c.keys_per_trial < 1) return FieldError("keys_per_trial", "must be >= 1");
  if (!(c.beta > 0.0 && c.beta < 1.0)) return FieldError("beta", "not in (0,1)");

  std::map<std::pair<Distribution, int64_t>, Dataset> datasets;
  for (Distribution d : c.distributions) {
    for (int64_t n : c.n_keys) {
      if (datasets.contains({d, n})) continue;
      absl::StatusOr<SortedColumn> col = GenerateColumn(
          d, n, n * c.tuples_per_key,
          DeriveKey(c.seed, {0, static_cast<uint64_t>(d),
                             static_cast<uint64_t>(n)}));
      if (!col.ok()) return col.status();
      CFCurve exact = ComputeCfc(ComputeHistogram(*col));
      datasets.emplace(std::make_pair(d, n),
                       Dataset{*std::move(col), std::move(exact)});
    }
  }

  std::vector<Job> jobs;
  for (Distribution d : c.distributions) {
    for (int64_t n : c.n_keys) {
      for (double eps : c.epsilons) {
        for (Method m : c.methods) {
          for (int64_t t = 0; t < c.trials; ++t) {
            jobs.push_back({&datasets.at({d, n}), d, n, eps, m, t});
          }
        }
      }
    }
  }

  std::vector<std::vector<TrialRecord>> results(jobs.size());
  std::atomic<size_t> next{0};
  std::mutex error_mu;
  absl::Status first_error;
  auto worker = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      absl::StatusOr<std::vector<TrialRecord>> r = RunJob(c, jobs[i]);
      if (!r.ok()) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (first_error.ok()) first_error = r.status();
        next = jobs.size();
        return;
      }
      results[i] = *std::move(r);
    }
  };
  const int threads = std::max(1, c.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (!first_error.ok()) return first_error;

  std::vector<TrialRecord> records;
  records.reserve(jobs.size() * static_cast<size_t>(c.keys_per_trial));
  for (auto& r : results) {
    records.insert(records.end(), r.begin(), r.end());
  }
  return records;
}

namespace {

struct MetricSpec {
  const char* name;
  std::function<double(const TrialRecord&)> value;
  std::function<double(const TrialRecord&, double beta)> bound;
  bool strict = false;
  // Metric is a property of the build, not of the queried key.
  bool per_build = false;
};

double Levels(const TrialRecord& r) {
  return static_cast<double>(BudgetLevels(r.n_keys));
}

double CfcBound(const TrialRecord& r, double beta) {
  if (r.n_keys < 2) return 0.0;
  return CfcErrorBound({r.epsilon, beta, 1.0, 0.0}, r.n_keys).value_or(0.0);
}

double Margin(const TrialRecord& r) {
  return PessimismMargin({r.epsilon, 0.5, r.alpha_s, 0.0}, r.n_keys);
}

std::vector<MetricSpec> MetricsFor(Method m) {
  const auto n = [](const TrialRecord& r) {
    return static_cast<double>(r.n_keys);
  };
  const auto zero = [](const TrialRecord&, double) { return 0.0; };
  const MetricSpec size_spec{
      "index_size_bits",
      [](const TrialRecord& r) {
        return static_cast<double>(r.index_size_bits);
      },
      [m, n](const TrialRecord& r, double) {
        switch (m) {
          case Method::kDpPlr:
            return 128.0 * static_cast<double>(r.n_segments);
          case Method::kCrypte:
            return 64.0 * n(r);
          case Method::kSpecial:
            return 128.0 * n(r);
          case Method::kDpBPlus:
            return 64.0 * (2.0 * n(r) - 1.0);
        }
        return 0.0;
      },
      true};
  const MetricSpec no_dummies{
      "data_overhead",
      [](const TrialRecord& r) { return static_cast<double>(r.data_overhead); },
      zero, true, true};
  const auto error = [](const TrialRecord& r) {
    return static_cast<double>(r.query_error);
  };
  const auto overhead = [](const TrialRecord& r) {
    return static_cast<double>(r.query_overhead);
  };

  switch (m) {
    case Method::kDpPlr:
      return {
          {"cfc_error", [](const TrialRecord& r) { return r.cfc_abs_error; },
           CfcBound},
          {"query_error", error,
           [](const TrialRecord& r, double beta) {
             return std::max(0.0, CfcBound(r, beta) - Margin(r));
           }},
          {"query_overhead", overhead,
           [](const TrialRecord& r, double beta) {
             // Two endpoints padded by Z, tau each, plus integer rounding.
             return CfcBound(r, beta) + 2.0 * Margin(r) + 2.0 * r.tau + 2.0;
           }},
          {"e_max", [](const TrialRecord& r) { return r.e_max; },
           [](const TrialRecord& r, double) { return r.tau; }, true, true},
          size_spec,
          no_dummies};
    case Method::kCrypte: {
      auto b = [n](const TrialRecord& r, double beta) {
        return 2.0 * n(r) * std::log(2.0 / beta) / r.epsilon;
      };
      return {{"query_error", error, b},
              {"query_overhead", overhead, b},
              size_spec,
              no_dummies};
    }
    case Method::kSpecial:
      return {{"query_error", error, zero, true},
              {"query_overhead", overhead,
               [n](const TrialRecord& r, double beta) {
                 return 4.0 * n(r) * std::log(1.0 / beta) / r.epsilon + r.mu;
               }},
              size_spec,
              no_dummies};
    case Method::kDpBPlus:
      return {
          {"query_error", error,
           [](const TrialRecord& r, double beta) {
             return std::max(0.0, Levels(r) / r.epsilon *
                                          std::log(2.0 / beta) -
                                      static_cast<double>(r.overflow));
           }},
          {"query_overhead", overhead,
           [](const TrialRecord& r, double beta) {
             return 2.0 * Levels(r) / r.epsilon * std::log(2.0 / beta) +
                    static_cast<double>(r.overflow);
           }},
          size_spec,
          {"data_overhead",
           [](const TrialRecord& r) {
             return static_cast<double>(r.data_overhead);
           },
           [n](const TrialRecord& r, double beta) {
             return n(r) * static_cast<double>(r.overflow) +
                    2.0 * Levels(r) / r.epsilon *
                        std::sqrt(n(r) * std::log(2.0 / beta));
           },
           false, true}};
  }
  return {};
}

}  // namespace

absl::StatusOr<std::vector<BoundCheck>> CheckBounds(
    const std::vector<TrialRecord>& records, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("beta must lie in (0, 1), got ", beta));
  }
  using CellKey = std::tuple<Method, Distribution, int64_t, double>;
  std::map<CellKey, std::vector<const TrialRecord*>> cells;
  for (const TrialRecord& r : records) {
    cells[{r.method, r.distribution, r.n_keys, r.epsilon}].push_back(&r);
  }

  std::vector<BoundCheck> checks;
  for (const auto& [key, rows] : cells) {
    const auto& [method, dist, n_keys, eps] = key;
    if (static_cast<int64_t>(rows.size()) < kMinTrialsPerCell) {
      return absl::FailedPreconditionError(absl::StrCat(
          "cell ", MethodName(method), "/", DistributionName(dist), "/N=",
          n_keys, "/eps=", eps, " has ", rows.size(), " records; at least ",
          kMinTrialsPerCell,
          " are needed to test bounds (raise trials or keys_per_trial)"));
    }
    for (const MetricSpec& spec : MetricsFor(method)) {
      BoundCheck check;
      check.method = method;
      check.distribution = dist;
      check.n_keys = n_keys;
      check.epsilon = eps;
      check.metric = spec.name;
      check.beta = beta;
      check.strict = spec.strict;
      check.bound = spec.bound(*rows.front(), beta);
      std::set<int64_t> seen_builds;
      for (const TrialRecord* r : rows) {
        if (spec.per_build && !seen_builds.insert(r->seed).second) continue;
        ++check.trials;
        if (spec.value(*r) > spec.bound(*r, beta)) ++check.exceedances;
      }
      check.frequency = static_cast<double>(check.exceedances) /
                        static_cast<double>(check.trials);
      check.slack = 2.0 * std::sqrt(beta * (1.0 - beta) /
                                    static_cast<double>(check.trials));
      check.pass = check.strict ? check.exceedances == 0
                                : check.frequency <= beta + check.slack;
      checks.push_back(std::move(check));
    }
  }
  return checks;
}

bool AllPass(const std::vector<BoundCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const BoundCheck& c) { return c.pass; });
}

}  // namespace dpplr
