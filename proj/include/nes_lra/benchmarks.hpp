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

#ifndef NES_LRA_BENCHMARKS_HPP_
#define NES_LRA_BENCHMARKS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nes_lra/distribution.hpp"
#include "nes_lra/nes_core.hpp"

namespace nes_lra {

enum class BenchmarkKind { kSphere, kEllipsoid, kRastrigin, kBohachevsky, kRandom };

std::string_view ToString(BenchmarkKind kind);
// Throws kInvalidConfig for an unknown name.
BenchmarkKind ParseBenchmark(std::string_view name);
std::vector<std::string_view> BenchmarkNames();

struct BenchmarkSpec {
  BenchmarkKind kind = BenchmarkKind::kSphere;
  Eigen::Index dim = 10;
  Vector init_mean;
  double init_sigma = 2.0;

  // m0 = [3,...,3], sigma0 = 2 for sphere/ellipsoid/rastrigin/random and
  // m0 = [8,...,8], sigma0 = 7 for bohachevsky; B0 = I always. dim >= 2.
  static BenchmarkSpec Preset(BenchmarkKind kind, Eigen::Index dim);

  SearchDistribution initial_distribution() const;
};

double sphere(std::span<const double> x);
double ellipsoid(std::span<const double> x);
double rastrigin(std::span<const double> x);
double bohachevsky(std::span<const double> x);

// noise is only read for kRandom, which returns a fresh U(0,1) draw per call
// regardless of x. Throws kInvalidInput on a dimension mismatch.
double evaluate(const BenchmarkSpec& spec, std::span<const double> x, Rng* noise = nullptr);

// Binds a spec to an objective callable. The random function gets its own
// stream derived from `seed`.
Objective MakeObjective(const BenchmarkSpec& spec, std::uint64_t seed);

}  // namespace nes_lra

#endif  // NES_LRA_BENCHMARKS_HPP_
