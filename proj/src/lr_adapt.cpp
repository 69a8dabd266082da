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

#include "nes_lra/lr_adapt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nes_lra/error.hpp"
#include "nes_lra/nes_core.hpp"

namespace nes_lra {

LrAdaptConfig LrAdaptConfig::Defaults(Eigen::Index dim) {
  if (dim < 2) {
    Fail(ErrorCode::kInvalidConfig,
         "learning-rate adaptation needs dim >= 2, got " + std::to_string(dim));
  }
  LrAdaptConfig c;
  c.eta_sigma_min = c.eta_b_min = default_learning_rate(dim);
  return c;
}

void LrAdaptConfig::Validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  auto unit_open = [](double v) { return v > 0.0 && v < 1.0; };
  if (!positive(alpha_sigma) || !positive(alpha_b)) {
    Fail(ErrorCode::kInvalidConfig, "alpha must be positive");
  }
  if (!unit_open(beta) || !unit_open(beta_sigma) || !unit_open(beta_b)) {
    Fail(ErrorCode::kInvalidConfig, "beta must lie in (0, 1)");
  }
  auto range_ok = [](double lo, double hi) { return lo > 0.0 && lo <= hi && hi <= 1.0; };
  if (!range_ok(eta_sigma_min, eta_sigma_max) || !range_ok(eta_b_min, eta_b_max)) {
    Fail(ErrorCode::kInvalidConfig, "learning-rate bounds must satisfy 0 < min <= max <= 1");
  }
}

LrAdaptState LrAdaptState::Initial(Eigen::Index dim, const LrAdaptConfig& config) {
  if (dim < 2) {
    Fail(ErrorCode::kInvalidConfig,
         "learning-rate adaptation needs dim >= 2, got " + std::to_string(dim));
  }
  config.Validate();
  const double eta = default_learning_rate(dim);
  LrAdaptState s{SymMatrix::Zero(dim)};
  s.eta_sigma = std::clamp(eta, config.eta_sigma_min, config.eta_sigma_max);
  s.eta_b = std::clamp(eta, config.eta_b_min, config.eta_b_max);
  return s;
}

double expected_kl_norm(Eigen::Index dim, double eta_sigma, double eta_b, double sum_w_sq) {
  if (dim < 2) {
    Fail(ErrorCode::kInvalidConfig, "expected KL norm is degenerate for dim < 2");
  }
  if (!(eta_sigma >= 0.0) || !(eta_b >= 0.0) || !(sum_w_sq >= 0.0)) {
    Fail(ErrorCode::kInvalidConfig, "expected KL norm inputs must be non-negative");
  }
  const double d = static_cast<double>(dim);
  const double es2 = eta_sigma * eta_sigma;
  const double eb2 = eta_b * eta_b;
  return sum_w_sq * (0.5 * eb2 * (1.0 + 4.0 * es2 * sum_w_sq / d) * (d * d + d - 2.0) + es2);
}

SymMatrix whitened_movement(double sigma_old, const Matrix& b_old, double sigma_new,
                            const Matrix& b_new) {
  SymMatrix cov_old(sigma_old * sigma_old * (b_old * b_old.transpose()));
  SymMatrix cov_new(sigma_new * sigma_new * (b_new * b_new.transpose()));
  SymMatrix whiten = sym_inv_sqrt(cov_old);
  const Matrix& w = whiten.matrix();
  return SymMatrix(w * (cov_new.matrix() - cov_old.matrix()) * w);
}

LrAdaptState path_update(const LrAdaptState& state, double sigma_old, const Matrix& b_old,
                         double sigma_new, const Matrix& b_new, double sum_w_sq, double beta) {
  const auto d = state.path.dim();
  const double expected = expected_kl_norm(d, state.eta_sigma, state.eta_b, sum_w_sq);
  if (!(expected > 0.0)) {
    Fail(ErrorCode::kInvalidConfig, "expected KL norm must be positive");
  }
  SymMatrix moved = whitened_movement(sigma_old, b_old, sigma_new, b_new);

  const double gain = std::sqrt(beta * (2.0 - beta)) / std::sqrt(expected);
  LrAdaptState next = state;
  next.path = SymMatrix((1.0 - beta) * state.path.matrix() + gain * moved.matrix());
  // Tr(p^2) for symmetric p is the squared Frobenius norm.
  next.path_length = 0.5 * next.path.matrix().squaredNorm();
  if (!next.path.allFinite()) {
    Fail(ErrorCode::kNumericalFailure, "evolution path became non-finite");
  }
  return next;
}

double gamma_update(double gamma, double beta) {
  // (1 - beta)^2 gamma + beta (2 - beta), arranged so that 1 is an exact fixed
  // point and rounding never pushes gamma above 1.
  const double decay = (1.0 - beta) * (1.0 - beta);
  return 1.0 - decay * (1.0 - gamma);
}

LrAdaptState lr_update(const LrAdaptState& state, const LrAdaptConfig& config) {
  LrAdaptState next = state;
  const double l = state.path_length;
  next.eta_sigma =
      std::clamp(state.eta_sigma * std::exp(config.beta_sigma * (l / config.alpha_sigma - state.gamma)),
                 config.eta_sigma_min, config.eta_sigma_max);
  next.eta_b = std::clamp(state.eta_b * std::exp(config.beta_b * (l / config.alpha_b - state.gamma)),
                          config.eta_b_min, config.eta_b_max);
  return next;
}

LrAdaptState observe(const LrAdaptState& state, const SearchDistribution& before,
                     const SearchDistribution& after, double sum_w_sq, const LrAdaptConfig& config) {
  LrAdaptState next = path_update(state, before.sigma(), before.b(), after.sigma(), after.b(),
                                  sum_w_sq, config.beta);
  next.gamma = gamma_update(state.gamma, config.beta);
  return next;
}

LrAdaptState step(const LrAdaptState& state, const SearchDistribution& before,
                  const SearchDistribution& after, double sum_w_sq, const LrAdaptConfig& config) {
  return lr_update(observe(state, before, after, sum_w_sq, config), config);
}

}  // namespace nes_lra
