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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "nes_lra/benchmarks.hpp"
#include "nes_lra/error.hpp"

using namespace nes_lra;

namespace {

template <typename F>
ErrorCode CodeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an nes_lra::Error");
  return ErrorCode::kIo;
}

double Eval(BenchmarkKind kind, const std::vector<double>& x) {
  return evaluate(BenchmarkSpec::Preset(kind, static_cast<Eigen::Index>(x.size())), x);
}

}  // namespace

TEST_SUITE("benchmarks") {

TEST_CASE("registry round trip") {
  for (auto name : BenchmarkNames()) CHECK(ToString(ParseBenchmark(name)) == name);
  CHECK(BenchmarkNames().size() == 5);
  CHECK(CodeOf([] { ParseBenchmark("griewank"); }) == ErrorCode::kInvalidConfig);
}

TEST_CASE("presets") {
  for (auto kind : {BenchmarkKind::kSphere, BenchmarkKind::kEllipsoid, BenchmarkKind::kRastrigin,
                    BenchmarkKind::kRandom}) {
    const auto s = BenchmarkSpec::Preset(kind, 10);
    CHECK(s.init_mean == Vector::Constant(10, 3.0));
    CHECK(s.init_sigma == 2.0);
  }
  const auto b = BenchmarkSpec::Preset(BenchmarkKind::kBohachevsky, 10);
  CHECK(b.init_mean == Vector::Constant(10, 8.0));
  CHECK(b.init_sigma == 7.0);
  CHECK(b.initial_distribution().b() == Matrix::Identity(10, 10));
  CHECK(CodeOf([] { BenchmarkSpec::Preset(BenchmarkKind::kEllipsoid, 1); }) ==
        ErrorCode::kInvalidConfig);
}

TEST_CASE("function values at reference points") {
  const std::vector<double> zero(10, 0.0);
  CHECK(Eval(BenchmarkKind::kSphere, zero) == 0.0);
  CHECK(Eval(BenchmarkKind::kEllipsoid, zero) == 0.0);
  CHECK(Eval(BenchmarkKind::kRastrigin, zero) == 0.0);
  CHECK(Eval(BenchmarkKind::kBohachevsky, zero) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(Eval(BenchmarkKind::kSphere, std::vector<double>(10, 3.0)) == 90.0);

  std::vector<double> e1(10, 0.0), e10(10, 0.0), r(10, 0.0);
  e1[0] = 1.0;
  e10[9] = 1.0;
  CHECK(Eval(BenchmarkKind::kEllipsoid, e1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(Eval(BenchmarkKind::kEllipsoid, e10) == doctest::Approx(1e6).epsilon(1e-14));
  CHECK(Eval(BenchmarkKind::kRastrigin, e1) == doctest::Approx(1.0).epsilon(1e-12));

  // Bohachevsky at (1, 1) in two dimensions: 1 + 2 - 0.3 cos(3 pi) - 0.4 cos(4 pi) + 0.7.
  CHECK(Eval(BenchmarkKind::kBohachevsky, {1.0, 1.0}) == doctest::Approx(3.6).epsilon(1e-14));
}

TEST_CASE("ellipsoid coefficients grow geometrically") {
  for (Eigen::Index d : {2, 5, 10}) {
    for (Eigen::Index i = 0; i < d; ++i) {
      std::vector<double> x(d, 0.0);
      x[i] = 1.0;
      const double coef = std::pow(1000.0, 2.0 * static_cast<double>(i) / static_cast<double>(d - 1));
      CHECK(Eval(BenchmarkKind::kEllipsoid, x) == doctest::Approx(coef).epsilon(1e-13));
    }
  }
}

TEST_CASE("deterministic functions are nonnegative and pure") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int rep = 0; rep < 10000; ++rep) {
    std::vector<double> x(10);
    for (auto& v : x) v = u(rng);
    for (auto kind : {BenchmarkKind::kSphere, BenchmarkKind::kEllipsoid, BenchmarkKind::kRastrigin,
                      BenchmarkKind::kBohachevsky}) {
      const double f = Eval(kind, x);
      REQUIRE(f >= 0.0);
      REQUIRE(Eval(kind, x) == f);
    }
  }
  // Grid over a two-dimensional slice for Bohachevsky.
  for (int i = -200; i <= 200; ++i) {
    for (int j = -200; j <= 200; ++j) {
      REQUIRE(Eval(BenchmarkKind::kBohachevsky, {i * 0.05, j * 0.05}) >= -1e-15);
    }
  }
}

TEST_CASE("dimension mismatch") {
  const auto spec = BenchmarkSpec::Preset(BenchmarkKind::kSphere, 3);
  CHECK(CodeOf([&] { evaluate(spec, std::vector<double>{1.0, 2.0}); }) ==
        ErrorCode::kInvalidInput);
  const auto rnd = BenchmarkSpec::Preset(BenchmarkKind::kRandom, 3);
  CHECK(CodeOf([&] { evaluate(rnd, std::vector<double>{1.0, 2.0, 3.0}); }) ==
        ErrorCode::kInvalidInput);
}

TEST_CASE("random function returns fresh uniform draws regardless of x") {
  const auto spec = BenchmarkSpec::Preset(BenchmarkKind::kRandom, 4);
  const auto obj = MakeObjective(spec, 9);
  const auto again = MakeObjective(spec, 9);
  const Vector x = Vector::Zero(4);
  const int n = 50000;
  double sum = 0.0, sq = 0.0;
  double prev = -1.0;
  int repeats = 0;
  for (int i = 0; i < n; ++i) {
    const double v = obj(x);
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
    REQUIRE(again(Vector::Ones(4)) == v);
    if (v == prev) ++repeats;
    prev = v;
    sum += v;
    sq += v * v;
  }
  CHECK(repeats == 0);
  // U(0,1): mean 1/2, variance 1/12.
  CHECK(std::abs(sum / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(sq / n - (sum / n) * (sum / n) == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

}  // TEST_SUITE
