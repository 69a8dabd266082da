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

#include "nes_lra/distribution.hpp"

#include <cmath>
#include <string>

#include "nes_lra/error.hpp"

namespace nes_lra {

namespace {

void CheckShape(const Vector& mean, double sigma, const Matrix& b) {
  if (mean.size() < 1) Fail(ErrorCode::kInvalidConfig, "mean must have at least one entry");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    Fail(ErrorCode::kInvalidConfig, "sigma must be positive and finite, got " + std::to_string(sigma));
  }
  if (b.rows() != mean.size() || b.cols() != mean.size()) {
    Fail(ErrorCode::kInvalidConfig, "B must be " + std::to_string(mean.size()) + "x" +
                                        std::to_string(mean.size()));
  }
  if (!mean.allFinite() || !b.allFinite()) {
    Fail(ErrorCode::kInvalidConfig, "distribution parameters must be finite");
  }
}

}  // namespace

SearchDistribution::SearchDistribution(Vector mean, double sigma, Matrix b)
    : mean_(std::move(mean)), sigma_(sigma), b_(std::move(b)) {
  CheckShape(mean_, sigma_, b_);
  const double det = b_.determinant();
  if (!(std::abs(det - 1.0) <= kDetTolerance)) {
    Fail(ErrorCode::kInvalidConfig, "det(B) must be 1, got " + std::to_string(det));
  }
}

SearchDistribution SearchDistribution::Renormalized(Vector mean, double sigma, Matrix b) {
  CheckShape(mean, sigma, b);
  const double det = b.determinant();
  if (!(det > 0.0) || !std::isfinite(det)) {
    Fail(ErrorCode::kNumericalFailure, "det(B) is not positive: " + std::to_string(det));
  }
  if (std::abs(det - 1.0) > kDetTolerance) {
    const double scale = std::pow(det, 1.0 / static_cast<double>(b.rows()));
    b /= scale;
    sigma *= scale;
  }
  return SearchDistribution(std::move(mean), sigma, std::move(b));
}

SearchDistribution SearchDistribution::Isotropic(Vector mean, double sigma) {
  const auto d = mean.size();
  return SearchDistribution(std::move(mean), sigma, Matrix::Identity(d, d));
}

SymMatrix SearchDistribution::covariance() const {
  return SymMatrix(sigma_ * sigma_ * (b_ * b_.transpose()));
}

SymMatrix SearchDistribution::shape() const { return SymMatrix(b_ * b_.transpose()); }

std::vector<SamplePair> sample(const SearchDistribution& dist, std::size_t lambda, Rng& rng) {
  if (lambda < 2) {
    Fail(ErrorCode::kInvalidConfig, "population size must be >= 2, got " + std::to_string(lambda));
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto d = dist.dim();
  std::vector<SamplePair> out(lambda);
  for (auto& s : out) {
    s.z.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) s.z(j) = normal(rng);
    s.x = dist.mean() + dist.sigma() * (dist.b() * s.z);
  }
  return out;
}

Rng MakeRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

}  // namespace nes_lra
