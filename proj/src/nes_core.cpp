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

#include "nes_lra/nes_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nes_lra/error.hpp"

namespace nes_lra {

ShapingWeights shaping_weights(std::size_t lambda) {
  if (lambda < 2) {
    Fail(ErrorCode::kInvalidConfig, "population size must be >= 2, got " + std::to_string(lambda));
  }
  const double n = static_cast<double>(lambda);
  const double cutoff = std::log(n / 2.0 + 1.0);
  std::vector<double> raw(lambda);
  for (std::size_t i = 0; i < lambda; ++i) {
    raw[i] = std::max(0.0, cutoff - std::log(static_cast<double>(i + 1)));
  }
  const double total = std::accumulate(raw.begin(), raw.end(), 0.0);

  ShapingWeights out;
  out.lambda = lambda;
  out.w.resize(lambda);
  for (std::size_t i = 0; i < lambda; ++i) out.w[i] = raw[i] / total - 1.0 / n;
  for (double wi : out.w) out.sum_w_sq += wi * wi;
  return out;
}

NaturalGradient estimate_gradient(const ShapingWeights& weights, std::span<const Vector> sorted_z) {
  if (sorted_z.size() != weights.lambda) {
    Fail(ErrorCode::kInvalidInput, "expected " + std::to_string(weights.lambda) +
                                       " samples, got " + std::to_string(sorted_z.size()));
  }
  const auto d = sorted_z.front().size();
  Vector g_delta = Vector::Zero(d);
  Matrix g_m = Matrix::Zero(d, d);
  double w_total = 0.0;
  for (std::size_t i = 0; i < sorted_z.size(); ++i) {
    const Vector& z = sorted_z[i];
    if (z.size() != d) Fail(ErrorCode::kInvalidInput, "sample dimensions differ");
    const double wi = weights.w[i];
    g_delta.noalias() += wi * z;
    g_m.noalias() += wi * (z * z.transpose());
    w_total += wi;
  }
  g_m.diagonal().array() -= w_total;

  SymMatrix gm(g_m);
  const double g_sigma = gm.trace() / static_cast<double>(d);
  Matrix g_b = gm.matrix();
  g_b.diagonal().array() -= g_sigma;
  return NaturalGradient{std::move(g_delta), std::move(gm), g_sigma, SymMatrix(g_b)};
}

double default_learning_rate(Eigen::Index dim) {
  const double d = static_cast<double>(dim);
  return 0.6 * (3.0 + std::log(d)) / (d * std::sqrt(d));
}

LearningRates default_learning_rates(Eigen::Index dim) {
  const double eta = default_learning_rate(dim);
  return LearningRates{1.0, eta, eta};
}

namespace {

void CheckRates(const LearningRates& r) {
  auto ok = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!ok(r.eta_m) || !ok(r.eta_sigma) || !ok(r.eta_b)) {
    Fail(ErrorCode::kInvalidConfig, "learning rates must be positive and finite");
  }
}

}  // namespace

SearchDistribution update(const SearchDistribution& dist, const NaturalGradient& grad,
                          const LearningRates& rates) {
  CheckRates(rates);
  const auto d = dist.dim();
  if (grad.g_delta.size() != d || grad.g_b.dim() != d) {
    Fail(ErrorCode::kInvalidInput, "gradient dimension does not match the distribution");
  }
  Vector mean = dist.mean() + rates.eta_m * dist.sigma() * (dist.b() * grad.g_delta);
  const double sigma = dist.sigma() * std::exp(0.5 * rates.eta_sigma * grad.g_sigma);
  Matrix scaled_gb = (0.5 * rates.eta_b) * grad.g_b.matrix();
  Matrix b = dist.b() * sym_exp(SymMatrix(scaled_gb)).matrix();

  if (!mean.allFinite() || !(sigma > 0.0) || !std::isfinite(sigma) || !b.allFinite()) {
    Fail(ErrorCode::kNumericalFailure, "parameter update produced non-finite values");
  }
  return SearchDistribution::Renormalized(std::move(mean), sigma, std::move(b));
}

Xnes::Xnes(SearchDistribution init, std::size_t lambda, Rng rng,
           std::optional<LearningRates> rates)
    : dist_(std::move(init)),
      weights_(shaping_weights(lambda)),
      rates_(rates.value_or(default_learning_rates(dist_.dim()))),
      rng_(std::move(rng)) {
  CheckRates(rates_);
}

void Xnes::set_rates(const LearningRates& rates) {
  CheckRates(rates);
  rates_ = rates;
}

const std::vector<SamplePair>& Xnes::ask() {
  if (!pending_) pending_ = sample(dist_, weights_.lambda, rng_);
  return *pending_;
}

Generation Xnes::tell(std::span<const double> values) {
  if (!pending_) Fail(ErrorCode::kInvalidInput, "tell() called without a pending ask()");
  auto& pop = *pending_;
  if (values.size() != pop.size()) {
    Fail(ErrorCode::kInvalidInput, "expected " + std::to_string(pop.size()) +
                                       " objective values, got " + std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (std::isnan(values[i])) Fail(ErrorCode::kInvalidInput, "objective value is NaN");
    pop[i].value = values[i];
  }

  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pop[a].value < pop[b].value; });

  std::vector<SamplePair> sorted;
  sorted.reserve(pop.size());
  for (std::size_t idx : order) sorted.push_back(std::move(pop[idx]));
  pending_.reset();

  std::vector<Vector> zs;
  zs.reserve(sorted.size());
  for (const auto& s : sorted) zs.push_back(s.z);
  NaturalGradient grad = estimate_gradient(weights_, zs);

  SearchDistribution next = update(dist_, grad, rates_);
  Generation gen{dist_, next, std::move(sorted), rates_};
  dist_ = std::move(next);
  ++generation_;
  return gen;
}

Generation Xnes::step(const Objective& objective) {
  const auto& pop = ask();
  std::vector<double> values(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) values[i] = objective(pop[i].x);
  return tell(values);
}

}  // namespace nes_lra
