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
#include <numeric>
#include <vector>

#include "doctest.h"
#include "nes_lra/benchmarks.hpp"
#include "nes_lra/error.hpp"
#include "nes_lra/nes_core.hpp"

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

std::vector<Vector> RandomZ(std::size_t lambda, Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> n;
  std::vector<Vector> zs(lambda, Vector(d));
  for (auto& z : zs)
    for (Eigen::Index j = 0; j < d; ++j) z(j) = n(rng);
  return zs;
}

double SphereObjective(const Vector& x) { return x.squaredNorm(); }

}  // namespace

TEST_SUITE("nes_core") {

TEST_CASE("shaping weights for small populations") {
  const auto w2 = shaping_weights(2);
  CHECK(w2.w[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(w2.w[1] == doctest::Approx(-0.5).epsilon(1e-15));

  // ln 3 and ln 3 - ln 2 are the only positive utilities at lambda = 4.
  const double u1 = std::log(3.0), u2 = std::log(1.5);
  const auto w4 = shaping_weights(4);
  CHECK(w4.w[0] == doctest::Approx(u1 / (u1 + u2) - 0.25).epsilon(1e-14));
  CHECK(w4.w[1] == doctest::Approx(u2 / (u1 + u2) - 0.25).epsilon(1e-14));
  CHECK(w4.w[0] == doctest::Approx(0.4804).epsilon(1e-4));
  CHECK(w4.w[1] == doctest::Approx(0.0196).epsilon(5e-3));
  CHECK(w4.w[2] == -0.25);
  CHECK(w4.w[3] == -0.25);

  CHECK(CodeOf([] { shaping_weights(1); }) == ErrorCode::kInvalidConfig);
  CHECK(CodeOf([] { shaping_weights(0); }) == ErrorCode::kInvalidConfig);
}

TEST_CASE("shaping weight invariants for lambda in 2..500") {
  for (std::size_t lambda = 2; lambda <= 500; ++lambda) {
    const auto sw = shaping_weights(lambda);
    REQUIRE(sw.w.size() == lambda);
    const double sum = std::accumulate(sw.w.begin(), sw.w.end(), 0.0);
    CHECK(std::abs(sum) <= 1e-12);
    CHECK(sw.w[0] > 0.0);
    double sq = 0.0;
    for (std::size_t i = 0; i < lambda; ++i) {
      if (i > 0) CHECK(sw.w[i] <= sw.w[i - 1]);
      sq += sw.w[i] * sw.w[i];
    }
    CHECK(sw.sum_w_sq == doctest::Approx(sq).epsilon(1e-14));
    CHECK(sw.mu_w() == doctest::Approx(1.0 / sq).epsilon(1e-14));
  }
}

TEST_CASE("gradient examples") {
  const auto w = shaping_weights(2);
  std::vector<Vector> zs{Vector::Unit(2, 0), -Vector::Unit(2, 0)};
  const auto g = estimate_gradient(w, zs);
  CHECK((g.g_delta - Vector::Unit(2, 0)).norm() < 1e-15);
  CHECK(g.g_m.matrix().norm() < 1e-15);

  const auto w7 = shaping_weights(7);
  std::vector<Vector> same(7, (Vector(3) << 0.3, -1.2, 2.0).finished());
  const auto g7 = estimate_gradient(w7, same);
  CHECK(g7.g_delta.norm() < 1e-14);
  CHECK(g7.g_m.matrix().norm() < 1e-14);
  CHECK(std::abs(g7.g_sigma) < 1e-14);
}

TEST_CASE("gradient matches a loop-based evaluation and G_B is traceless") {
  Rng rng = MakeRng(21);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t lambda = 2 + rep % 40;
    const Eigen::Index d = 2 + rep % 9;
    const auto w = shaping_weights(lambda);
    const auto zs = RandomZ(lambda, d, rng);
    const auto g = estimate_gradient(w, zs);
    CHECK(std::abs(g.g_b.trace()) <= 1e-10);
    CHECK(g.g_sigma == g.g_m.trace() / static_cast<double>(d));
    if (rep % 50 != 0) continue;
    Matrix gm = Matrix::Zero(d, d);
    Vector gd = Vector::Zero(d);
    for (std::size_t i = 0; i < lambda; ++i) {
      gd += w.w[i] * zs[i];
      for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c)
          gm(r, c) += w.w[i] * (zs[i](r) * zs[i](c) - (r == c ? 1.0 : 0.0));
    }
    CHECK((g.g_delta - gd).norm() < 1e-12);
    CHECK((g.g_m.matrix() - gm).norm() < 1e-12);
    const Matrix gb = gm - (gm.trace() / d) * Matrix::Identity(d, d);
    CHECK((g.g_b.matrix() - gb).norm() < 1e-12);
  }
}

TEST_CASE("gradient rejects mismatched inputs") {
  const auto w = shaping_weights(4);
  Rng rng = MakeRng(1);
  auto zs = RandomZ(3, 2, rng);
  CHECK(CodeOf([&] { estimate_gradient(w, zs); }) == ErrorCode::kInvalidInput);
  zs = RandomZ(4, 2, rng);
  zs[2] = Vector::Zero(3);
  CHECK(CodeOf([&] { estimate_gradient(w, zs); }) == ErrorCode::kInvalidInput);
}

TEST_CASE("default learning rate") {
  CHECK(default_learning_rate(10) == doctest::Approx(0.10062).epsilon(2e-4));
  CHECK(default_learning_rate(10) ==
        doctest::Approx(0.6 * (3.0 + std::log(10.0)) / (10.0 * std::sqrt(10.0))).epsilon(1e-15));
  const auto r = default_learning_rates(10);
  CHECK(r.eta_m == 1.0);
  CHECK(r.eta_sigma == r.eta_b);
}

TEST_CASE("update formulas") {
  const auto dist = SearchDistribution::Isotropic(Vector::Constant(3, 1.0), 2.0);
  NaturalGradient zero{Vector::Zero(3), SymMatrix::Zero(3), 0.0, SymMatrix::Zero(3)};
  const LearningRates rates{1.0, 0.1, 0.1};
  const auto same = update(dist, zero, rates);
  CHECK(same.mean() == dist.mean());
  CHECK(same.sigma() == dist.sigma());
  CHECK(same.b() == dist.b());

  NaturalGradient scale = zero;
  scale.g_sigma = 2.0 / rates.eta_sigma;
  const auto scaled = update(dist, scale, rates);
  CHECK(scaled.sigma() == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-15));
  CHECK(dist.sigma() == 2.0);

  NaturalGradient move = zero;
  move.g_delta = (Vector(3) << 1.0, 0.0, -0.5).finished();
  const auto moved = update(dist, move, rates);
  CHECK((moved.mean() - (dist.mean() + 2.0 * move.g_delta)).norm() < 1e-15);

  Matrix gb = Matrix::Zero(3, 3);
  gb(0, 0) = 1.0;
  gb(1, 1) = -1.0;
  NaturalGradient shape = zero;
  shape.g_b = SymMatrix(gb);
  const auto shaped = update(dist, shape, rates);
  CHECK(shaped.b()(0, 0) == doctest::Approx(std::exp(0.05)).epsilon(1e-14));
  CHECK(shaped.b()(1, 1) == doctest::Approx(std::exp(-0.05)).epsilon(1e-14));
  CHECK(std::abs(shaped.b().determinant() - 1.0) < 1e-12);
}

TEST_CASE("update errors") {
  const auto dist = SearchDistribution::Isotropic(Vector::Zero(2), 1.0);
  NaturalGradient g{Vector::Zero(2), SymMatrix::Zero(2), 0.0, SymMatrix::Zero(2)};
  CHECK(CodeOf([&] { update(dist, g, LearningRates{1.0, 0.0, 0.1}); }) ==
        ErrorCode::kInvalidConfig);
  CHECK(CodeOf([&] { update(dist, g, LearningRates{1.0, 0.1, -1.0}); }) ==
        ErrorCode::kInvalidConfig);
  g.g_sigma = 1e6;
  CHECK(CodeOf([&] { update(dist, g, LearningRates{1.0, 1.0, 1.0}); }) ==
        ErrorCode::kNumericalFailure);
  NaturalGradient wrong{Vector::Zero(3), SymMatrix::Zero(3), 0.0, SymMatrix::Zero(3)};
  CHECK(CodeOf([&] { update(dist, wrong, default_learning_rates(2)); }) ==
        ErrorCode::kInvalidInput);
}

TEST_CASE("det(B) stays at 1 over 1000 generations on the sphere") {
  const auto spec = BenchmarkSpec::Preset(BenchmarkKind::kSphere, 10);
  Xnes opt(spec.initial_distribution(), 10, MakeRng(3));
  for (int g = 0; g < 1000; ++g) {
    opt.step(SphereObjective);
    REQUIRE(std::abs(opt.distribution().b().determinant() - 1.0) <= 1e-6);
  }
}

TEST_CASE("ask returns the pending batch until tell") {
  Xnes opt(SearchDistribution::Isotropic(Vector::Zero(3), 1.0), 6, MakeRng(4));
  const auto first = opt.ask();
  const auto again = opt.ask();
  for (std::size_t i = 0; i < first.size(); ++i) CHECK(first[i].x == again[i].x);
  std::vector<double> values(6, 0.0);
  CHECK(CodeOf([&] { opt.tell(std::span<const double>(values.data(), 5)); }) ==
        ErrorCode::kInvalidInput);
  values[2] = NAN;
  CHECK(CodeOf([&] { opt.tell(values); }) == ErrorCode::kInvalidInput);
  values[2] = 0.0;
  opt.tell(values);
  CHECK(opt.generation() == 1);
  CHECK(CodeOf([&] { opt.tell(values); }) == ErrorCode::kInvalidInput);
  CHECK(opt.ask()[0].x != first[0].x);
}

TEST_CASE("ties are broken by sample index") {
  Xnes opt(SearchDistribution::Isotropic(Vector::Zero(2), 1.0), 4, MakeRng(9));
  const auto pop = opt.ask();
  const std::vector<double> values{1.0, 0.0, 1.0, 0.0};
  const auto gen = opt.tell(values);
  CHECK(gen.population[0].x == pop[1].x);
  CHECK(gen.population[1].x == pop[3].x);
  CHECK(gen.population[2].x == pop[0].x);
  CHECK(gen.population[3].x == pop[2].x);
}

TEST_CASE("monotone transformations of the objective leave the run bitwise unchanged") {
  const auto init = BenchmarkSpec::Preset(BenchmarkKind::kEllipsoid, 5).initial_distribution();
  Xnes a(init, 12, MakeRng(17)), b(init, 12, MakeRng(17));
  auto base = [](const Vector& x) { return ellipsoid(std::span<const double>(x.data(), x.size())); };
  auto transformed = [&](const Vector& x) { return std::log1p(base(x)) * 3.0 - 7.0; };
  for (int g = 0; g < 200; ++g) {
    a.step(base);
    b.step(transformed);
  }
  CHECK(a.distribution().mean() == b.distribution().mean());
  CHECK(a.distribution().sigma() == b.distribution().sigma());
  CHECK(a.distribution().b() == b.distribution().b());
}

TEST_CASE("equal seeds give identical trajectories") {
  const auto init = SearchDistribution::Isotropic(Vector::Constant(4, 3.0), 2.0);
  Xnes a(init, 8, MakeRng(5)), b(init, 8, MakeRng(5)), c(init, 8, MakeRng(6));
  for (int g = 0; g < 100; ++g) {
    a.step(SphereObjective);
    b.step(SphereObjective);
    c.step(SphereObjective);
  }
  CHECK(a.distribution().mean() == b.distribution().mean());
  CHECK(a.distribution().b() == b.distribution().b());
  CHECK(a.distribution().mean() != c.distribution().mean());
}

TEST_CASE("best-so-far value keeps improving on the sphere") {
  const auto init = BenchmarkSpec::Preset(BenchmarkKind::kSphere, 10).initial_distribution();
  Xnes opt(init, 30, MakeRng(8));
  double best = INFINITY;
  std::vector<double> best_trace;
  for (int g = 0; g < 500; ++g) {
    const auto gen = opt.step(SphereObjective);
    best = std::min(best, gen.population.front().value);
    best_trace.push_back(best);
  }
  // Non-strict monotone trend: never worse, and strictly better across every
  // block of 25 generations.
  int non_increasing = 0, steps = 0;
  for (std::size_t g = 51; g < best_trace.size(); ++g, ++steps) {
    if (best_trace[g] <= best_trace[g - 1]) ++non_increasing;
  }
  CHECK(non_increasing >= 0.95 * steps);
  for (std::size_t g = 75; g < best_trace.size(); g += 25) CHECK(best_trace[g] < best_trace[g - 25]);
  CHECK(best_trace.back() < 1e-7);
}

TEST_CASE("constant objective moves the mean by noise only") {
  // Under random ranking E[|m' - m|^2] = sigma^2 d sum_w_sq, and the mean
  // displacement averages to zero.
  const Eigen::Index d = 10;
  const std::size_t lambda = 20;
  const double sigma = 0.5;
  const auto init = SearchDistribution::Isotropic(Vector::Zero(d), sigma);
  const auto w = shaping_weights(lambda);
  const int reps = 20000;
  Rng rng = MakeRng(33);
  double sq = 0.0;
  Vector drift = Vector::Zero(d);
  for (int r = 0; r < reps; ++r) {
    Xnes opt(init, lambda, Rng(rng()));
    const auto gen = opt.step([](const Vector&) { return 1.0; });
    const Vector delta = gen.after.mean() - gen.before.mean();
    sq += delta.squaredNorm();
    drift += delta;
  }
  const double expected = sigma * sigma * d * w.sum_w_sq;
  CHECK(sq / reps == doctest::Approx(expected).epsilon(0.05));
  // Each coordinate of the mean drift has standard error sigma sqrt(sum_w_sq / reps).
  CHECK((drift / reps).cwiseAbs().maxCoeff() < 5.0 * sigma * std::sqrt(w.sum_w_sq / reps));
}

TEST_CASE("Monte-Carlo moments of the M gradient under random ranking") {
  // E[Tr(G_M^2)] = (d^2 + d) sum_w_sq and E[Tr(G_M)^2] = 2 d sum_w_sq.
  const Eigen::Index d = 10;
  const std::size_t lambda = 10;
  const auto w = shaping_weights(lambda);
  Rng rng = MakeRng(44);
  const int reps = 100000;
  double tr_sq = 0.0, sq_tr = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto zs = RandomZ(lambda, d, rng);
    const auto g = estimate_gradient(w, zs);
    tr_sq += (g.g_m.matrix() * g.g_m.matrix()).trace();
    sq_tr += g.g_m.trace() * g.g_m.trace();
  }
  CHECK(tr_sq / reps == doctest::Approx((d * d + d) * w.sum_w_sq).epsilon(0.05));
  CHECK(sq_tr / reps == doctest::Approx(2.0 * d * w.sum_w_sq).epsilon(0.05));
}

}  // TEST_SUITE
