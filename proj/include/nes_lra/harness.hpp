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

#ifndef NES_LRA_HARNESS_HPP_
#define NES_LRA_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nes_lra/benchmarks.hpp"
#include "nes_lra/lr_adapt.hpp"

namespace nes_lra {

struct LrMode {
  enum class Kind { kAdaptive, kFixed };
  Kind kind = Kind::kAdaptive;
  double multiplier = 1.0;  // fixed mode: rates = default * multiplier

  static LrMode Adaptive() { return {}; }
  static LrMode Fixed(double multiplier) { return {Kind::kFixed, multiplier}; }

  bool adaptive() const { return kind == Kind::kAdaptive; }
  // "adaptive" or "fixed"
  std::string_view name() const;
  // "adaptive" or "fixed-x<multiplier>", used in file names.
  std::string tag() const;

  friend bool operator==(const LrMode&, const LrMode&) = default;
};

// Optional overrides of the adaptation hyperparameters. Unset fields keep the
// dimension-dependent defaults.
struct LrOverrides {
  std::optional<double> alpha;    // both channels
  std::optional<double> beta;     // path cumulation and both damping factors
  std::optional<double> eta_min;  // both channels
  std::optional<double> eta_max;  // both channels

  LrAdaptConfig Apply(Eigen::Index dim) const;
};

struct ExperimentConfig {
  BenchmarkSpec benchmark = BenchmarkSpec::Preset(BenchmarkKind::kSphere, 10);
  std::size_t lambda = 10;
  LrMode lr_mode;
  double target_value = 1e-8;
  std::uint64_t max_evals = 500000;
  std::size_t trials = 20;
  std::uint64_t base_seed = 0;
  std::size_t trace_every = 1;
  std::size_t workers = 1;
  LrOverrides lr;

  // Throws kInvalidConfig.
  void Validate() const;
};

struct TraceRow {
  std::uint64_t evals = 0;
  double f_best = 0.0;
  double eta_sigma = 0.0;
  double eta_b = 0.0;
  double l_theta = 0.0;
  double gamma = 0.0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  bool success = false;
  bool diverged = false;  // stopped by a numerical failure
  std::uint64_t evals_used = 0;
  std::uint64_t generations = 0;
  double f_best_final = 0.0;
  std::vector<TraceRow> trace;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct AggregateResult {
  std::string function;
  Eigen::Index dim = 0;
  std::size_t lambda = 0;
  LrMode lr_mode;
  std::size_t trials = 0;
  std::uint64_t base_seed = 0;
  double success_rate = 0.0;
  std::optional<double> mean_evals_success;
  std::optional<double> score;  // mean_evals_success / success_rate
  std::vector<TrialRecord> records;  // empty for rows loaded from disk
};

// Runs one xNES trial until f_best <= target or the next generation would
// exceed max_evals. Numerical failures end the trial as unsuccessful.
TrialRecord run_trial(const ExperimentConfig& config, std::uint64_t seed);

// Runs trials base_seed .. base_seed + trials - 1 on up to config.workers
// threads and aggregates them.
AggregateResult run_experiment(const ExperimentConfig& config);

AggregateResult aggregate(const ExperimentConfig& config, std::vector<TrialRecord> records);

struct SweepGrid {
  ExperimentConfig base;  // lambda and lr_mode are overwritten per cell
  std::vector<std::size_t> lambdas;
  std::vector<LrMode> modes;
  bool write_traces = false;
};

// Named grids: fig1-<fn>, fig2-<fn>, fig3-sphere, fig4-<fn>, fig5-rastrigin,
// fig5-bohachevsky. Throws kInvalidConfig for an unknown name.
SweepGrid PresetGrid(std::string_view name);
std::vector<std::string> PresetNames();

// Executes every (lambda, mode) cell, appending each aggregate row to
// out_dir/aggregate.csv as soon as it is done. Rows already present in that
// file with the same key are skipped, so an interrupted sweep resumes.
std::vector<AggregateResult> sweep(const SweepGrid& grid, const std::filesystem::path& out_dir);

// ---- CSV I/O --------------------------------------------------------------

inline constexpr std::string_view kAggregateHeader =
    "function,dim,lambda,lr_mode,multiplier,trials,success_rate,mean_evals_success,score,base_seed";
inline constexpr std::string_view kTraceHeader = "evals,f_best,eta_sigma,eta_b,l_theta,gamma";

// Shortest representation that parses back to the same double.
std::string FormatDouble(double v);

std::string FormatAggregateRow(const AggregateResult& r);
// Inverse of FormatAggregateRow; throws kInvalidInput on malformed rows.
AggregateResult ParseAggregateRow(std::string_view line);

std::string TraceFileName(std::string_view function, std::size_t lambda, const LrMode& mode,
                          std::uint64_t seed);
void WriteTrace(const std::filesystem::path& file, const std::vector<TraceRow>& trace);
std::vector<TraceRow> ReadTrace(const std::filesystem::path& file);

// Writes aggregate.csv (header plus one row) and, unless disabled, one trace
// file per trial. Throws kIo when the directory cannot be written.
void WriteExperiment(const std::filesystem::path& out_dir, const AggregateResult& result,
                     bool write_traces);

std::vector<AggregateResult> ReadAggregate(const std::filesystem::path& file);

}  // namespace nes_lra

#endif  // NES_LRA_HARNESS_HPP_
