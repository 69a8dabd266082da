// Copyright 2026 The nes-lra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nes_lra/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <thread>
#include <tuple>

#include "nes_lra/error.hpp"
#include "nes_lra/nes_core.hpp"

namespace nes_lra {

std::string_view LrMode::name() const { return adaptive() ? "adaptive" : "fixed"; }

std::string LrMode::tag() const {
  return adaptive() ? std::string("adaptive") : "fixed-x" + FormatDouble(multiplier);
}

LrAdaptConfig LrOverrides::Apply(Eigen::Index dim) const {
  LrAdaptConfig c = LrAdaptConfig::Defaults(dim);
  if (alpha) c.alpha_sigma = c.alpha_b = *alpha;
  if (beta) c.beta = c.beta_sigma = c.beta_b = *beta;
  if (eta_min) c.eta_sigma_min = c.eta_b_min = *eta_min;
  if (eta_max) c.eta_sigma_max = c.eta_b_max = *eta_max;
  c.Validate();
  return c;
}

void ExperimentConfig::Validate() const {
  auto bad = [](const std::string& what) { Fail(ErrorCode::kInvalidConfig, what); };
  if (benchmark.dim < 2) bad("dim must be >= 2");
  if (benchmark.init_mean.size() != benchmark.dim) bad("initial mean has wrong dimension");
  if (!(benchmark.init_sigma > 0.0) || !std::isfinite(benchmark.init_sigma)) {
    bad("initial sigma must be positive");
  }
  if (lambda < 2) bad("lambda must be >= 2");
  if (max_evals < lambda) bad("max-evals must allow at least one generation (>= lambda)");
  if (trials < 1) bad("trials must be >= 1");
  if (trace_every < 1) bad("trace-every must be >= 1");
  if (workers < 1) bad("workers must be >= 1");
  if (std::isnan(target_value)) bad("target must be a number");
  if (!lr_mode.adaptive() && (!(lr_mode.multiplier > 0.0) || !std::isfinite(lr_mode.multiplier))) {
    bad("fixed learning-rate multiplier must be positive");
  }
  lr.Apply(benchmark.dim);
}

TrialRecord run_trial(const ExperimentConfig& config, std::uint64_t seed) {
  config.Validate();
  const auto dim = config.benchmark.dim;
  const LrAdaptConfig lr_config = config.lr.Apply(dim);
  LrAdaptState lr_state = LrAdaptState::Initial(dim, lr_config);
  if (!config.lr_mode.adaptive()) {
    lr_state.eta_sigma = lr_state.eta_b = default_learning_rate(dim) * config.lr_mode.multiplier;
  }

  Xnes xnes(config.benchmark.initial_distribution(), config.lambda, MakeRng(seed),
            LearningRates{1.0, lr_state.eta_sigma, lr_state.eta_b});
  const Objective objective = MakeObjective(config.benchmark, seed);
  const double sum_w_sq = xnes.weights().sum_w_sq;

  TrialRecord rec;
  rec.seed = seed;
  rec.f_best_final = std::numeric_limits<double>::infinity();

  bool path_ok = true;
  while (rec.evals_used + config.lambda <= config.max_evals) {
    try {
      Generation gen = xnes.step(objective);
      rec.evals_used += config.lambda;
      ++rec.generations;
      rec.f_best_final = std::min(rec.f_best_final, gen.population.front().value);
      if (config.lr_mode.adaptive()) {
        lr_state = step(lr_state, gen.before, gen.after, sum_w_sq, lr_config);
        xnes.set_rates(LearningRates{1.0, lr_state.eta_sigma, lr_state.eta_b});
      } else if (path_ok) {
        // With fixed rates the path is only traced; losing it does not stop the search.
        try {
          lr_state = observe(lr_state, gen.before, gen.after, sum_w_sq, lr_config);
        } catch (const Error&) {
          path_ok = false;
          lr_state.path_length = std::numeric_limits<double>::quiet_NaN();
        }
      }
    } catch (const Error&) {
      rec.diverged = true;
      break;
    }
    rec.success = rec.f_best_final <= config.target_value;
    const bool last = rec.success || rec.evals_used + config.lambda > config.max_evals;
    if (rec.generations % config.trace_every == 0 || last) {
      rec.trace.push_back(TraceRow{rec.evals_used, rec.f_best_final, lr_state.eta_sigma,
                                   lr_state.eta_b, lr_state.path_length, lr_state.gamma});
    }
    if (rec.success) break;
  }
  return rec;
}

AggregateResult aggregate(const ExperimentConfig& config, std::vector<TrialRecord> records) {
  AggregateResult r;
  r.function = std::string(ToString(config.benchmark.kind));
  r.dim = config.benchmark.dim;
  r.lambda = config.lambda;
  r.lr_mode = config.lr_mode;
  r.trials = records.size();
  r.base_seed = config.base_seed;

  std::uint64_t successes = 0;
  std::uint64_t evals_total = 0;
  for (const auto& rec : records) {
    if (rec.success) {
      ++successes;
      evals_total += rec.evals_used;
    }
  }
  r.success_rate = records.empty() ? 0.0
                                   : static_cast<double>(successes) / static_cast<double>(records.size());
  if (successes > 0) {
    r.mean_evals_success = static_cast<double>(evals_total) / static_cast<double>(successes);
    r.score = *r.mean_evals_success / r.success_rate;
  }
  r.records = std::move(records);
  return r;
}

AggregateResult run_experiment(const ExperimentConfig& config) {
  config.Validate();
  std::vector<TrialRecord> records(config.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      records[i] = run_trial(config, config.base_seed + i);
    }
  };
  const std::size_t n_threads = std::min(config.workers, config.trials);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  return aggregate(config, std::move(records));
}

// ---- presets ----------------------------------------------------------------

namespace {

const std::vector<double> kMultipliers = {1, 2, 4, 6, 8, 10};

std::vector<std::size_t> LambdaGrid(BenchmarkKind kind) {
  switch (kind) {
    case BenchmarkKind::kRastrigin: return {200, 250, 300, 350, 400};
    case BenchmarkKind::kBohachevsky: return {30, 40, 50, 60, 70};
    default: return {10, 20, 30, 40, 50};
  }
}

std::size_t TypicalLambda(BenchmarkKind kind) {
  switch (kind) {
    case BenchmarkKind::kRastrigin: return 300;
    case BenchmarkKind::kBohachevsky: return 50;
    default: return 30;
  }
}

SweepGrid BaseGrid(BenchmarkKind kind) {
  SweepGrid g;
  g.base.benchmark = BenchmarkSpec::Preset(kind, 10);
  return g;
}

}  // namespace

std::vector<std::string> PresetNames() {
  std::vector<std::string> out;
  for (auto fn : {"sphere", "ellipsoid", "rastrigin", "bohachevsky"}) out.push_back(std::string("fig1-") + fn);
  for (auto fn : {"sphere", "ellipsoid", "rastrigin", "bohachevsky"}) out.push_back(std::string("fig2-") + fn);
  out.emplace_back("fig3-sphere");
  for (auto fn : {"sphere", "ellipsoid", "rastrigin", "bohachevsky"}) out.push_back(std::string("fig4-") + fn);
  out.emplace_back("fig5-rastrigin");
  out.emplace_back("fig5-bohachevsky");
  return out;
}

SweepGrid PresetGrid(std::string_view name) {
  const auto dash = name.find('-');
  if (dash == std::string_view::npos) {
    Fail(ErrorCode::kInvalidConfig, "unknown preset '" + std::string(name) + "'");
  }
  const std::string_view fig = name.substr(0, dash);
  const BenchmarkKind kind = ParseBenchmark(name.substr(dash + 1));
  const bool multimodal = kind == BenchmarkKind::kRastrigin || kind == BenchmarkKind::kBohachevsky;
  if (kind == BenchmarkKind::kRandom) {
    Fail(ErrorCode::kInvalidConfig, "unknown preset '" + std::string(name) + "'");
  }

  SweepGrid g = BaseGrid(kind);
  if (fig == "fig1") {
    // Path behavior under the default (fixed) rates with a large population.
    g.lambdas = {400};
    g.modes = {LrMode::Fixed(1.0)};
    g.base.trials = 1;
    g.write_traces = true;
  } else if (fig == "fig2") {
    g.lambdas = {TypicalLambda(kind)};
    g.modes = {LrMode::Adaptive()};
    g.base.trials = 1;
    g.write_traces = true;
  } else if (fig == "fig3" && kind == BenchmarkKind::kSphere) {
    g.lambdas = LambdaGrid(kind);
    g.modes = {LrMode::Adaptive()};
    g.base.trials = 1;
    g.write_traces = true;
  } else if (fig == "fig4") {
    g.lambdas = LambdaGrid(kind);
    g.modes = {LrMode::Adaptive()};
    for (double m : kMultipliers) g.modes.push_back(LrMode::Fixed(m));
  } else if (fig == "fig5" && multimodal) {
    g.lambdas = LambdaGrid(kind);
    g.modes = {LrMode::Adaptive(), LrMode::Fixed(8.0), LrMode::Fixed(10.0)};
  } else {
    Fail(ErrorCode::kInvalidConfig, "unknown preset '" + std::string(name) + "'");
  }
  return g;
}

// ---- sweep ------------------------------------------------------------------

namespace {

using RowKey = std::tuple<std::string, Eigen::Index, std::size_t, std::string, std::size_t, std::uint64_t>;

RowKey KeyOf(const AggregateResult& r) {
  return {r.function, r.dim, r.lambda, r.lr_mode.tag(), r.trials, r.base_seed};
}

}  // namespace

std::vector<AggregateResult> sweep(const SweepGrid& grid, const std::filesystem::path& out_dir) {
  grid.base.Validate();
  for (std::size_t lambda : grid.lambdas) {
    for (const auto& mode : grid.modes) {
      ExperimentConfig probe = grid.base;
      probe.lambda = lambda;
      probe.lr_mode = mode;
      probe.Validate();
    }
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " + ec.message());
  const auto agg_path = out_dir / "aggregate.csv";

  std::vector<AggregateResult> results;
  std::set<RowKey> done;
  if (std::filesystem::exists(agg_path)) {
    for (auto& row : ReadAggregate(agg_path)) {
      done.insert(KeyOf(row));
      results.push_back(std::move(row));
    }
  } else {
    std::ofstream out(agg_path);
    if (!out) Fail(ErrorCode::kIo, "cannot write " + agg_path.string());
    out << kAggregateHeader << '\n';
  }

  for (std::size_t lambda : grid.lambdas) {
    for (const auto& mode : grid.modes) {
      ExperimentConfig cfg = grid.base;
      cfg.lambda = lambda;
      cfg.lr_mode = mode;

      AggregateResult key_only;
      key_only.function = std::string(ToString(cfg.benchmark.kind));
      key_only.dim = cfg.benchmark.dim;
      key_only.lambda = lambda;
      key_only.lr_mode = mode;
      key_only.trials = cfg.trials;
      key_only.base_seed = cfg.base_seed;
      if (done.contains(KeyOf(key_only))) continue;

      AggregateResult r = run_experiment(cfg);
      if (grid.write_traces) {
        for (const auto& rec : r.records) {
          WriteTrace(out_dir / TraceFileName(r.function, lambda, mode, rec.seed), rec.trace);
        }
      }
      std::ofstream out(agg_path, std::ios::app);
      if (!out) Fail(ErrorCode::kIo, "cannot append to " + agg_path.string());
      out << FormatAggregateRow(r) << '\n';
      out.flush();
      if (!out) Fail(ErrorCode::kIo, "write failed for " + agg_path.string());
      done.insert(KeyOf(r));
      results.push_back(std::move(r));
    }
  }
  return results;
}

}  // namespace nes_lra
