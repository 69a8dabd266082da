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

#include "nes_lra/nes_lra.h"

#include <cmath>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "nes_lra/error.hpp"
#include "nes_lra/harness.hpp"
#include "nes_lra/lr_adapt.hpp"
#include "nes_lra/nes_core.hpp"

using namespace nes_lra;

struct nes_optimizer {
  Xnes xnes;
  bool adaptive;
  LrAdaptConfig config;
  LrAdaptState state;
  double best = std::numeric_limits<double>::infinity();
};

namespace {

thread_local std::string g_last_error;

nes_status ToStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig: return NES_ERR_INVALID_CONFIG;
    case ErrorCode::kInvalidInput: return NES_ERR_INVALID_INPUT;
    case ErrorCode::kInvalidMatrix: return NES_ERR_INVALID_MATRIX;
    case ErrorCode::kSingularMatrix: return NES_ERR_SINGULAR_MATRIX;
    case ErrorCode::kNumericalFailure: return NES_ERR_NUMERICAL_FAILURE;
    case ErrorCode::kIo: return NES_ERR_IO;
  }
  return NES_ERR_INTERNAL;
}

// Runs body, translating exceptions into status codes at the C boundary.
template <typename F>
nes_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return NES_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return ToStatus(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return NES_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NES_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return NES_ERR_INTERNAL;
  }
}

void Require(bool cond, const char* what) {
  if (!cond) Fail(ErrorCode::kInvalidInput, what);
}

LrOverrides ToOverrides(const nes_lr_options& lr) {
  LrOverrides o;
  if (lr.alpha > 0) o.alpha = lr.alpha;
  if (lr.beta > 0) o.beta = lr.beta;
  if (lr.eta_min > 0) o.eta_min = lr.eta_min;
  if (lr.eta_max > 0) o.eta_max = lr.eta_max;
  return o;
}

ExperimentConfig ToConfig(const nes_experiment_options& o) {
  Require(o.function != nullptr, "function name is NULL");
  ExperimentConfig c;
  c.benchmark = BenchmarkSpec::Preset(ParseBenchmark(o.function), static_cast<Eigen::Index>(o.dim));
  c.lambda = o.lambda;
  c.lr_mode = o.adaptive ? LrMode::Adaptive() : LrMode::Fixed(o.multiplier);
  c.target_value = o.target;
  c.max_evals = o.max_evals;
  c.trials = o.trials;
  c.base_seed = o.base_seed;
  c.trace_every = o.trace_every;
  c.workers = o.workers;
  c.lr = ToOverrides(o.lr);
  c.Validate();
  return c;
}

void FillAggregate(const AggregateResult& r, nes_aggregate* out) {
  if (out == nullptr) return;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out->trials = r.trials;
  out->successes = 0;
  for (const auto& rec : r.records) out->successes += rec.success ? 1 : 0;
  out->success_rate = r.success_rate;
  out->mean_evals_success = r.mean_evals_success.value_or(nan);
  out->score = r.score.value_or(nan);
}

}  // namespace

extern "C" {

const char* nes_status_string(nes_status status) {
  switch (status) {
    case NES_OK: return "ok";
    case NES_ERR_INVALID_CONFIG: return "invalid configuration";
    case NES_ERR_INVALID_INPUT: return "invalid input";
    case NES_ERR_INVALID_MATRIX: return "invalid matrix";
    case NES_ERR_SINGULAR_MATRIX: return "singular matrix";
    case NES_ERR_NUMERICAL_FAILURE: return "numerical failure";
    case NES_ERR_IO: return "I/O error";
    case NES_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* nes_last_error(void) { return g_last_error.c_str(); }

const char* nes_version(void) { return "1.0.0"; }

double nes_default_learning_rate(size_t dim) {
  return dim == 0 ? 0.0 : default_learning_rate(static_cast<Eigen::Index>(dim));
}

void nes_optimizer_options_init(nes_optimizer_options* options, size_t dim) {
  if (options == nullptr) return;
  *options = nes_optimizer_options{};
  options->dim = dim;
  options->mean = nullptr;
  options->sigma = 1.0;
  options->lambda = 10;
  options->seed = 0;
  options->adaptive = 1;
  options->multiplier = 1.0;
}

nes_status nes_optimizer_create(const nes_optimizer_options* options, nes_optimizer** out) {
  return Guard([&] {
    Require(options != nullptr && out != nullptr, "NULL argument");
    Require(options->mean != nullptr, "mean is NULL");
    *out = nullptr;
    const auto dim = static_cast<Eigen::Index>(options->dim);
    if (dim < 2) Fail(ErrorCode::kInvalidConfig, "dim must be >= 2");
    Vector mean = Eigen::Map<const Vector>(options->mean, dim);
    const LrAdaptConfig config = ToOverrides(options->lr).Apply(dim);
    LrAdaptState state = LrAdaptState::Initial(dim, config);
    if (!options->adaptive) {
      if (!(options->multiplier > 0.0) || !std::isfinite(options->multiplier)) {
        Fail(ErrorCode::kInvalidConfig, "fixed learning-rate multiplier must be positive");
      }
      state.eta_sigma = state.eta_b = default_learning_rate(dim) * options->multiplier;
    }
    Xnes xnes(SearchDistribution::Isotropic(std::move(mean), options->sigma), options->lambda,
              MakeRng(options->seed), LearningRates{1.0, state.eta_sigma, state.eta_b});
    *out = new nes_optimizer{std::move(xnes), options->adaptive != 0, config, std::move(state)};
  });
}

void nes_optimizer_destroy(nes_optimizer* optimizer) { delete optimizer; }

size_t nes_optimizer_dim(const nes_optimizer* optimizer) {
  return optimizer == nullptr ? 0 : static_cast<size_t>(optimizer->xnes.distribution().dim());
}

size_t nes_optimizer_lambda(const nes_optimizer* optimizer) {
  return optimizer == nullptr ? 0 : optimizer->xnes.lambda();
}

nes_status nes_optimizer_ask(nes_optimizer* optimizer, double* candidates, size_t len) {
  return Guard([&] {
    Require(optimizer != nullptr && candidates != nullptr, "NULL argument");
    const size_t d = nes_optimizer_dim(optimizer);
    Require(len == optimizer->xnes.lambda() * d, "candidate buffer must hold lambda * dim values");
    const auto& pop = optimizer->xnes.ask();
    for (size_t i = 0; i < pop.size(); ++i) {
      for (size_t j = 0; j < d; ++j) candidates[i * d + j] = pop[i].x(static_cast<Eigen::Index>(j));
    }
  });
}

nes_status nes_optimizer_tell(nes_optimizer* optimizer, const double* values, size_t len) {
  return Guard([&] {
    Require(optimizer != nullptr && values != nullptr, "NULL argument");
    Generation gen = optimizer->xnes.tell(std::span<const double>(values, len));
    optimizer->best = std::min(optimizer->best, gen.population.front().value);
    const double sum_w_sq = optimizer->xnes.weights().sum_w_sq;
    if (optimizer->adaptive) {
      optimizer->state = step(optimizer->state, gen.before, gen.after, sum_w_sq, optimizer->config);
      optimizer->xnes.set_rates(
          LearningRates{1.0, optimizer->state.eta_sigma, optimizer->state.eta_b});
    } else {
      optimizer->state = observe(optimizer->state, gen.before, gen.after, sum_w_sq, optimizer->config);
    }
  });
}

nes_status nes_optimizer_get_status(const nes_optimizer* optimizer, nes_optimizer_status* out) {
  return Guard([&] {
    Require(optimizer != nullptr && out != nullptr, "NULL argument");
    out->generation = optimizer->xnes.generation();
    out->sigma = optimizer->xnes.distribution().sigma();
    out->eta_sigma = optimizer->state.eta_sigma;
    out->eta_b = optimizer->state.eta_b;
    out->l_theta = optimizer->state.path_length;
    out->gamma = optimizer->state.gamma;
    out->best_value = optimizer->best;
  });
}

nes_status nes_optimizer_get_mean(const nes_optimizer* optimizer, double* mean, size_t len) {
  return Guard([&] {
    Require(optimizer != nullptr && mean != nullptr, "NULL argument");
    const Vector& m = optimizer->xnes.distribution().mean();
    Require(len == static_cast<size_t>(m.size()), "mean buffer must hold dim values");
    for (size_t j = 0; j < len; ++j) mean[j] = m(static_cast<Eigen::Index>(j));
  });
}

void nes_experiment_options_init(nes_experiment_options* options) {
  if (options == nullptr) return;
  *options = nes_experiment_options{};
  options->function = "sphere";
  options->dim = 10;
  options->lambda = 10;
  options->adaptive = 1;
  options->multiplier = 1.0;
  options->target = 1e-8;
  options->max_evals = 500000;
  options->trials = 20;
  options->base_seed = 0;
  options->trace_every = 1;
  options->workers = 1;
  options->write_traces = 1;
}

nes_status nes_run_experiment(const nes_experiment_options* options, const char* out_dir,
                              nes_aggregate* out) {
  return Guard([&] {
    Require(options != nullptr && out_dir != nullptr, "NULL argument");
    const ExperimentConfig config = ToConfig(*options);
    const AggregateResult result = run_experiment(config);
    WriteExperiment(out_dir, result, options->write_traces != 0);
    FillAggregate(result, out);
  });
}

void nes_sweep_options_init(nes_sweep_options* options) {
  if (options == nullptr) return;
  *options = nes_sweep_options{};
  nes_experiment_options_init(&options->base);
  options->base.write_traces = 0;
  options->include_adaptive = 1;
}

nes_status nes_sweep(const nes_sweep_options* options, const char* out_dir, size_t* rows) {
  return Guard([&] {
    Require(options != nullptr && out_dir != nullptr, "NULL argument");
    SweepGrid grid;
    if (options->preset != nullptr) {
      grid = PresetGrid(options->preset);
      const ExperimentConfig from = ToConfig(options->base);
      grid.base.target_value = from.target_value;
      grid.base.max_evals = from.max_evals;
      grid.base.base_seed = from.base_seed;
      grid.base.trace_every = from.trace_every;
      grid.base.workers = from.workers;
      grid.base.lr = from.lr;
      if (options->trials_set) grid.base.trials = from.trials;
      grid.write_traces = grid.write_traces || options->base.write_traces != 0;
    } else {
      Require(options->n_lambdas == 0 || options->lambdas != nullptr, "lambdas is NULL");
      Require(options->n_multipliers == 0 || options->multipliers != nullptr, "multipliers is NULL");
      grid.base = ToConfig(options->base);
      grid.lambdas.assign(options->lambdas, options->lambdas + options->n_lambdas);
      if (options->include_adaptive) grid.modes.push_back(LrMode::Adaptive());
      for (size_t i = 0; i < options->n_multipliers; ++i) {
        grid.modes.push_back(LrMode::Fixed(options->multipliers[i]));
      }
      grid.write_traces = options->base.write_traces != 0;
    }
    const auto results = sweep(grid, out_dir);
    if (rows != nullptr) *rows = results.size();
  });
}

const char* nes_preset_name(size_t i) {
  static const std::vector<std::string> names = PresetNames();
  return i < names.size() ? names[i].c_str() : nullptr;
}

}  // extern "C"
