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

// nes-lra: command-line front end for the nes-lra C library.
//
//   nes-lra run --function sphere --dim 10 --lambda 30 --lr-mode adaptive
//       --trials 20 --seed 42 --target 1e-8 --max-evals 500000 --out results/
//   nes-lra sweep --preset fig4-sphere --out results/
//
// Any flag may also come from a key = value file given with --config; flags on
// the command line win.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nes_lra/nes_lra.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitIo = 3;

int ExitCodeFor(nes_status s) {
  switch (s) {
    case NES_OK: return kExitOk;
    case NES_ERR_INVALID_CONFIG:
    case NES_ERR_INVALID_INPUT: return kExitInvalidConfig;
    case NES_ERR_IO: return kExitIo;
    default: return kExitFailure;
  }
}

struct ConfigError {
  int code;
  std::string message;
};

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Turns "key = value" lines into "--key value" arguments, skipping keys in
// `given`. Blank lines and lines starting with '#' or ';' are ignored;
// "true"/"false" toggle flags.
std::vector<std::string> ReadConfigArgs(const std::string& path, const std::set<std::string>& given) {
  std::ifstream in(path);
  if (!in) throw ConfigError{kExitIo, "cannot read config file " + path};
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = Trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError{kExitInvalidConfig,
                        path + ":" + std::to_string(lineno) + ": expected key = value"};
    }
    std::string key = Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (value == "false" || given.contains("--" + key)) continue;
    args.push_back("--" + key);
    if (value != "true") args.push_back(value);
  }
  return args;
}

// Splices config-file arguments in right after the subcommand. Keys also given
// on the command line are taken from the command line only.
std::vector<std::string> ExpandConfig(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> config;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  if (!config) return kept;
  std::set<std::string> given;
  for (const auto& a : kept) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(0, a.find('=')));
  }
  std::vector<std::string> from_file = ReadConfigArgs(*config, given);
  std::vector<std::string> out;
  if (!kept.empty()) out.push_back(kept.front());
  out.insert(out.end(), from_file.begin(), from_file.end());
  if (!kept.empty()) out.insert(out.end(), kept.begin() + 1, kept.end());
  return out;
}

struct CommonFlags {
  double target = 1e-8;
  std::uint64_t max_evals = 500000;
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  std::size_t trace_every = 1;
  std::size_t workers = 1;
  double alpha = 0, beta = 0, eta_min = 0, eta_max = 0;
  std::string out = "results";
};

void AddCommon(CLI::App* app, CommonFlags& f) {
  app->add_option("--target", f.target, "Target objective value")->capture_default_str();
  app->add_option("--max-evals", f.max_evals, "Evaluation budget per trial")->capture_default_str();
  app->add_option("--trials", f.trials, "Number of seeded trials")->capture_default_str();
  app->add_option("--seed", f.seed, "Base seed; trial i uses seed + i")->capture_default_str();
  app->add_option("--trace-every", f.trace_every, "Generation stride of trace rows")
      ->capture_default_str();
  app->add_option("--workers", f.workers, "Concurrent trials")->capture_default_str();
  app->add_option("--alpha", f.alpha, "Path-length threshold alpha (default 1.3)");
  app->add_option("--beta", f.beta, "Cumulation/damping factor beta (default 0.2)");
  app->add_option("--eta-min", f.eta_min, "Lower learning-rate bound (default: xNES default)");
  app->add_option("--eta-max", f.eta_max, "Upper learning-rate bound (default 1)");
  app->add_option("--out", f.out, "Output directory")->capture_default_str();
}

void ApplyCommon(const CommonFlags& f, nes_experiment_options& o) {
  o.target = f.target;
  o.max_evals = f.max_evals;
  o.trials = f.trials;
  o.base_seed = f.seed;
  o.trace_every = f.trace_every;
  o.workers = f.workers;
  o.lr = nes_lr_options{f.alpha, f.beta, f.eta_min, f.eta_max};
}

std::string FormatOptional(double v) {
  if (std::isnan(v)) return "none";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int Fail(nes_status s) {
  std::cerr << "nes-lra: " << nes_status_string(s) << ": " << nes_last_error() << '\n';
  return ExitCodeFor(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xNES with learning-rate adaptation: experiment runner"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", std::string(nes_version()));
  app.add_option("--config", "key = value file mirroring the flags (command line wins)");

  // run
  CommonFlags run_flags;
  std::string function = "sphere";
  std::size_t dim = 10;
  std::size_t lambda = 10;
  std::string lr_mode = "adaptive";
  double multiplier = 1.0;
  bool no_traces = false;
  auto* run = app.add_subcommand("run", "Run seeded trials for one configuration");
  run->add_option("--function", function, "sphere|ellipsoid|rastrigin|bohachevsky|random")
      ->capture_default_str();
  run->add_option("--dim", dim, "Problem dimension (>= 2)")->capture_default_str();
  run->add_option("--lambda", lambda, "Population size")->capture_default_str();
  run->add_option("--lr-mode", lr_mode, "adaptive or fixed")
      ->check(CLI::IsMember({"adaptive", "fixed"}))
      ->capture_default_str();
  run->add_option("--multiplier", multiplier, "Fixed mode: multiple of the default rate")
      ->capture_default_str();
  run->add_flag("--no-traces", no_traces, "Skip per-trial trace files");
  AddCommon(run, run_flags);

  // sweep
  CommonFlags sweep_flags;
  std::string preset;
  std::string sweep_function = "sphere";
  std::size_t sweep_dim = 10;
  std::vector<std::size_t> lambdas;
  std::vector<double> multipliers;
  bool no_adaptive = false;
  bool traces = false;
  auto* sw = app.add_subcommand("sweep", "Run a lambda x learning-rate-mode grid");
  auto* preset_opt = sw->add_option("--preset", preset, "Named grid (see --list-presets)");
  sw->add_option("--function", sweep_function, "Explicit grid: benchmark function")
      ->capture_default_str();
  sw->add_option("--dim", sweep_dim, "Explicit grid: dimension")->capture_default_str();
  sw->add_option("--lambdas", lambdas, "Explicit grid: population sizes")->delimiter(',');
  sw->add_option("--multipliers", multipliers, "Explicit grid: fixed-rate multipliers")
      ->delimiter(',');
  sw->add_flag("--no-adaptive", no_adaptive, "Explicit grid: leave out the adaptive mode");
  sw->add_flag("--traces", traces, "Write per-trial trace files");
  bool list_presets = false;
  sw->add_flag("--list-presets", list_presets, "Print preset names and exit");
  AddCommon(sw, sweep_flags);

  std::vector<std::string> args;
  try {
    args = ExpandConfig(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "nes-lra: " << e.message << '\n';
    return e.code;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalidConfig;
  }

  if (run->parsed()) {
    nes_experiment_options o;
    nes_experiment_options_init(&o);
    o.function = function.c_str();
    o.dim = dim;
    o.lambda = lambda;
    o.adaptive = lr_mode == "adaptive";
    o.multiplier = multiplier;
    o.write_traces = no_traces ? 0 : 1;
    ApplyCommon(run_flags, o);
    nes_aggregate agg{};
    const nes_status s = nes_run_experiment(&o, run_flags.out.c_str(), &agg);
    if (s != NES_OK) return Fail(s);
    std::cout << function << " d=" << dim << " lambda=" << lambda << " mode=" << lr_mode
              << (o.adaptive ? "" : " x" + FormatOptional(multiplier)) << ": success "
              << agg.successes << "/" << agg.trials << ", mean evals "
              << FormatOptional(agg.mean_evals_success) << ", score " << FormatOptional(agg.score)
              << '\n';
    return kExitOk;
  }

  if (list_presets) {
    for (std::size_t i = 0; const char* name = nes_preset_name(i); ++i) std::cout << name << '\n';
    return kExitOk;
  }
  nes_sweep_options o;
  nes_sweep_options_init(&o);
  ApplyCommon(sweep_flags, o.base);
  o.base.function = sweep_function.c_str();
  o.base.dim = sweep_dim;
  o.base.write_traces = traces ? 1 : 0;
  o.trials_set = sw->count("--trials") > 0;
  if (preset_opt->count() > 0) {
    o.preset = preset.c_str();
  } else {
    o.lambdas = lambdas.data();
    o.n_lambdas = lambdas.size();
    o.multipliers = multipliers.data();
    o.n_multipliers = multipliers.size();
    o.include_adaptive = no_adaptive ? 0 : 1;
  }
  std::size_t rows = 0;
  const nes_status s = nes_sweep(&o, sweep_flags.out.c_str(), &rows);
  if (s != NES_OK) return Fail(s);
  std::cout << rows << " aggregate rows in " << sweep_flags.out << "/aggregate.csv\n";
  return kExitOk;
}
