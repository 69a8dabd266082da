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

#ifndef NES_LRA_NES_CORE_HPP_
#define NES_LRA_NES_CORE_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nes_lra/distribution.hpp"
#include "nes_lra/symmat.hpp"

namespace nes_lra {

// Rank-based utilities, best rank first. sum_w_sq is sum_i w_i^2, the
// reciprocal of the effective selection mass mu_w.
struct ShapingWeights {
  std::size_t lambda = 0;
  std::vector<double> w;
  double sum_w_sq = 0.0;

  double mu_w() const { return 1.0 / sum_w_sq; }
};

// w_i = max(0, ln(lambda/2 + 1) - ln i) / sum_j max(0, ln(lambda/2 + 1) - ln j) - 1/lambda
ShapingWeights shaping_weights(std::size_t lambda);

struct NaturalGradient {
  Vector g_delta;
  SymMatrix g_m;
  double g_sigma;
  SymMatrix g_b;  // traceless part of g_m
};

// sorted_z must hold lambda vectors ordered best first.
NaturalGradient estimate_gradient(const ShapingWeights& weights, std::span<const Vector> sorted_z);

struct LearningRates {
  double eta_m = 1.0;
  double eta_sigma = 0.0;
  double eta_b = 0.0;
};

// (3/5) (3 + ln d) / (d sqrt d), shared by sigma and B.
double default_learning_rate(Eigen::Index dim);
LearningRates default_learning_rates(Eigen::Index dim);

// m += eta_m sigma B G_delta; sigma *= exp(eta_sigma/2 G_sigma); B *= expm(eta_b/2 G_B).
// Returns a new distribution; B is renormalized when det drifts. Non-finite
// results raise kNumericalFailure.
SearchDistribution update(const SearchDistribution& dist, const NaturalGradient& grad,
                          const LearningRates& rates);

using Objective = std::function<double(const Vector&)>;

// What one generation produced, in the form the learning-rate adapter and the
// harness consume.
struct Generation {
  SearchDistribution before;
  SearchDistribution after;
  std::vector<SamplePair> population;  // sorted best first
  LearningRates rates;                 // rates used for this update
};

// Ask/tell driver for plain xNES. Learning rates are set from outside between
// generations.
class Xnes {
 public:
  Xnes(SearchDistribution init, std::size_t lambda, Rng rng,
       std::optional<LearningRates> rates = std::nullopt);

  // Samples a new batch unless one is already pending.
  const std::vector<SamplePair>& ask();

  // values[i] belongs to the i-th candidate returned by ask(). Ties are
  // broken by sample index.
  Generation tell(std::span<const double> values);

  // One full generation: ask, evaluate, tell.
  Generation step(const Objective& objective);

  const SearchDistribution& distribution() const { return dist_; }
  const ShapingWeights& weights() const { return weights_; }
  const LearningRates& rates() const { return rates_; }
  void set_rates(const LearningRates& rates);
  std::size_t lambda() const { return weights_.lambda; }
  std::size_t generation() const { return generation_; }

 private:
  SearchDistribution dist_;
  ShapingWeights weights_;
  LearningRates rates_;
  Rng rng_;
  std::optional<std::vector<SamplePair>> pending_;
  std::size_t generation_ = 0;
};

}  // namespace nes_lra

#endif  // NES_LRA_NES_CORE_HPP_
