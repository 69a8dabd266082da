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

#ifndef NES_LRA_LR_ADAPT_HPP_
#define NES_LRA_LR_ADAPT_HPP_

// Learning-rate adaptation for the covariance parameters of xNES.
//
// Each generation the covariance movement dSigma = Sigma_new - Sigma_old is
// whitened by the Fisher metric at Sigma_old, which for a Gaussian reduces to
// D = Sigma_old^{-1/2} dSigma Sigma_old^{-1/2}, and normalized by the square
// root of its expected squared length under a random objective. The
// normalized steps are accumulated in a d x d evolution path
//
//   p <- (1 - beta) p + sqrt(beta (2 - beta)) D / sqrt(E)
//
// whose length l = Tr(p^2) / 2 is compared against gamma, the value l would
// settle at if every step were pure noise. Rates grow when l / alpha > gamma
// and shrink otherwise, clipped to [eta_min, eta_max].

#include <cstddef>

#include "nes_lra/distribution.hpp"
#include "nes_lra/symmat.hpp"

namespace nes_lra {

struct LrAdaptConfig {
  double alpha_sigma = 1.3;
  double alpha_b = 1.3;
  double beta = 0.2;        // path cumulation factor
  double beta_sigma = 0.2;  // rate damping, sigma channel
  double beta_b = 0.2;      // rate damping, B channel
  double eta_sigma_min = 0.0;
  double eta_sigma_max = 1.0;
  double eta_b_min = 0.0;
  double eta_b_max = 1.0;

  // eta_min is the xNES default rate for this dimension, eta_max is 1.
  static LrAdaptConfig Defaults(Eigen::Index dim);

  // Throws kInvalidConfig when a field is out of range.
  void Validate() const;
};

struct LrAdaptState {
  SymMatrix path;            // p_Sigma
  double gamma = 0.0;        // normalization factor
  double eta_sigma = 0.0;
  double eta_b = 0.0;
  double path_length = 0.0;  // Tr(p^2) / 2 after the last update

  // Zero path, gamma = 0, and the default rates clipped into the configured
  // range. Throws kInvalidConfig for dim < 2.
  static LrAdaptState Initial(Eigen::Index dim, const LrAdaptConfig& config);
};

// Approximation of E[0.5 Tr((Sigma^{-1/2} dSigma Sigma^{-1/2})^2)] under a
// random objective:
//   sum_w_sq * { eta_b^2/2 (1 + 4 eta_sigma^2 sum_w_sq / d) (d^2 + d - 2) + eta_sigma^2 }
// Throws kInvalidConfig for dim < 2 or negative inputs.
double expected_kl_norm(Eigen::Index dim, double eta_sigma, double eta_b, double sum_w_sq);

// Sigma_old^{-1/2} (Sigma_new - Sigma_old) Sigma_old^{-1/2}, symmetrized.
SymMatrix whitened_movement(double sigma_old, const Matrix& b_old, double sigma_new,
                            const Matrix& b_new);

// Accumulates one normalized covariance movement into the path and refreshes
// path_length. The normalizer uses the state's current rates.
LrAdaptState path_update(const LrAdaptState& state, double sigma_old, const Matrix& b_old,
                         double sigma_new, const Matrix& b_new, double sum_w_sq, double beta);

// gamma <- (1 - beta)^2 gamma + beta (2 - beta)
double gamma_update(double gamma, double beta);

// eta <- clip(eta * exp(beta_x (l / alpha_x - gamma)), eta_min, eta_max) per channel.
LrAdaptState lr_update(const LrAdaptState& state, const LrAdaptConfig& config);

// Path and gamma only; the rates stay as they are. Used to trace the path
// while running with fixed rates.
LrAdaptState observe(const LrAdaptState& state, const SearchDistribution& before,
                     const SearchDistribution& after, double sum_w_sq, const LrAdaptConfig& config);

// One full adaptation step after a parameter update. The returned rates are
// meant for the next generation.
LrAdaptState step(const LrAdaptState& state, const SearchDistribution& before,
                  const SearchDistribution& after, double sum_w_sq, const LrAdaptConfig& config);

}  // namespace nes_lra

#endif  // NES_LRA_LR_ADAPT_HPP_
