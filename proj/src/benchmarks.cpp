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

#include "nes_lra/benchmarks.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "nes_lra/error.hpp"

namespace nes_lra {

namespace {

struct NamedKind {
  std::string_view name;
  BenchmarkKind kind;
};

constexpr NamedKind kRegistry[] = {
    {"sphere", BenchmarkKind::kSphere},
    {"ellipsoid", BenchmarkKind::kEllipsoid},
    {"rastrigin", BenchmarkKind::kRastrigin},
    {"bohachevsky", BenchmarkKind::kBohachevsky},
    {"random", BenchmarkKind::kRandom},
};

constexpr std::uint64_t kNoiseStream = 0x6e6f697365;  // "noise"

}  // namespace

std::string_view ToString(BenchmarkKind kind) {
  for (const auto& e : kRegistry) {
    if (e.kind == kind) return e.name;
  }
  return "unknown";
}

BenchmarkKind ParseBenchmark(std::string_view name) {
  for (const auto& e : kRegistry) {
    if (e.name == name) return e.kind;
  }
  Fail(ErrorCode::kInvalidConfig, "unknown benchmark function '" + std::string(name) + "'");
}

std::vector<std::string_view> BenchmarkNames() {
  std::vector<std::string_view> out;
  for (const auto& e : kRegistry) out.push_back(e.name);
  return out;
}

BenchmarkSpec BenchmarkSpec::Preset(BenchmarkKind kind, Eigen::Index dim) {
  // The ellipsoid exponent (i-1)/(d-1) needs d >= 2.
  if (dim < 2) Fail(ErrorCode::kInvalidConfig, "benchmark dimension must be >= 2");
  BenchmarkSpec s;
  s.kind = kind;
  s.dim = dim;
  if (kind == BenchmarkKind::kBohachevsky) {
    s.init_mean = Vector::Constant(dim, 8.0);
    s.init_sigma = 7.0;
  } else {
    s.init_mean = Vector::Constant(dim, 3.0);
    s.init_sigma = 2.0;
  }
  return s;
}

SearchDistribution BenchmarkSpec::initial_distribution() const {
  if (init_mean.size() != dim) Fail(ErrorCode::kInvalidConfig, "initial mean has wrong dimension");
  return SearchDistribution::Isotropic(init_mean, init_sigma);
}

double sphere(std::span<const double> x) {
  double f = 0.0;
  for (double v : x) f += v * v;
  return f;
}

double ellipsoid(std::span<const double> x) {
  const double denom = static_cast<double>(x.size() - 1);
  double f = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = std::pow(1000.0, static_cast<double>(i) / denom);
    f += (c * x[i]) * (c * x[i]);
  }
  return f;
}

double rastrigin(std::span<const double> x) {
  double f = 10.0 * static_cast<double>(x.size());
  for (double v : x) f += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
  return f;
}

double bohachevsky(std::span<const double> x) {
  double f = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    f += x[i] * x[i] + 2.0 * x[i + 1] * x[i + 1] - 0.3 * std::cos(3.0 * std::numbers::pi * x[i]) -
         0.4 * std::cos(4.0 * std::numbers::pi * x[i + 1]) + 0.7;
  }
  return f;
}

double evaluate(const BenchmarkSpec& spec, std::span<const double> x, Rng* noise) {
  if (static_cast<Eigen::Index>(x.size()) != spec.dim) {
    Fail(ErrorCode::kInvalidInput, "expected a point of dimension " + std::to_string(spec.dim) +
                                       ", got " + std::to_string(x.size()));
  }
  switch (spec.kind) {
    case BenchmarkKind::kSphere: return sphere(x);
    case BenchmarkKind::kEllipsoid: return ellipsoid(x);
    case BenchmarkKind::kRastrigin: return rastrigin(x);
    case BenchmarkKind::kBohachevsky: return bohachevsky(x);
    case BenchmarkKind::kRandom:
      if (noise == nullptr) Fail(ErrorCode::kInvalidInput, "random function needs a noise stream");
      return std::uniform_real_distribution<double>(0.0, 1.0)(*noise);
  }
  Fail(ErrorCode::kInvalidConfig, "unhandled benchmark kind");
}

Objective MakeObjective(const BenchmarkSpec& spec, std::uint64_t seed) {
  if (spec.kind == BenchmarkKind::kRandom) {
    auto noise = std::make_shared<Rng>(MakeRng(seed, kNoiseStream));
    return [spec, noise](const Vector& x) {
      return evaluate(spec, std::span<const double>(x.data(), x.size()), noise.get());
    };
  }
  return [spec](const Vector& x) {
    return evaluate(spec, std::span<const double>(x.data(), x.size()));
  };
}

}  // namespace nes_lra
