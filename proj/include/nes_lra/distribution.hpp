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

#ifndef NES_LRA_DISTRIBUTION_HPP_
#define NES_LRA_DISTRIBUTION_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "nes_lra/symmat.hpp"

namespace nes_lra {

// One explicitly seeded stream per trial; nothing reads global randomness.
using Rng = std::mt19937_64;

// Tolerance on |det(B) - 1| before B is renormalized.
inline constexpr double kDetTolerance = 1e-6;

// The search distribution N(m, sigma^2 B B^T) with det(B) == 1.
class SearchDistribution {
 public:
  // Throws kInvalidConfig unless sigma > 0, all entries are finite, B is
  // d x d, and |det(B) - 1| <= kDetTolerance.
  SearchDistribution(Vector mean, double sigma, Matrix b);

  // Like the constructor but rescales B by det(B)^(-1/d) and folds the factor
  // into sigma first, which leaves sigma^2 B B^T unchanged.
  static SearchDistribution Renormalized(Vector mean, double sigma, Matrix b);

  static SearchDistribution Isotropic(Vector mean, double sigma);

  Eigen::Index dim() const { return mean_.size(); }
  const Vector& mean() const { return mean_; }
  double sigma() const { return sigma_; }
  const Matrix& b() const { return b_; }

  // sigma^2 B B^T
  SymMatrix covariance() const;
  // B B^T
  SymMatrix shape() const;

 private:
  Vector mean_;
  double sigma_;
  Matrix b_;
};

struct SamplePair {
  Vector z;
  Vector x;
  double value = 0.0;
};

// Draws lambda standard-normal vectors z and maps them to x = m + sigma B z.
// Throws kInvalidConfig for lambda < 2.
std::vector<SamplePair> sample(const SearchDistribution& dist, std::size_t lambda, Rng& rng);

Rng MakeRng(std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace nes_lra

#endif  // NES_LRA_DISTRIBUTION_HPP_
