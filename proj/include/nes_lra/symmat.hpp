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

#ifndef NES_LRA_SYMMAT_HPP_
#define NES_LRA_SYMMAT_HPP_

#include <Eigen/Dense>
#include <optional>

namespace nes_lra {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A real symmetric matrix. Construction symmetrizes the input as (a + a^T)/2,
// so entries(i, j) == entries(j, i) holds bitwise afterwards.
class SymMatrix {
 public:
  explicit SymMatrix(const Matrix& a);

  static SymMatrix Zero(Eigen::Index dim);
  static SymMatrix Identity(Eigen::Index dim);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  double trace() const { return m_.trace(); }
  bool allFinite() const { return m_.allFinite(); }

 private:
  struct Trusted {};
  SymMatrix(Matrix a, Trusted) : m_(std::move(a)) {}

  Matrix m_;
};

struct SymEigen {
  Vector values;   // descending
  Matrix vectors;  // columns are the matching orthonormal eigenvectors
};

// Throws kInvalidMatrix on non-finite entries and kNumericalFailure when the
// solver does not converge.
SymEigen sym_eigen(const SymMatrix& a);

// Matrix exponential; symmetric positive definite by construction.
SymMatrix sym_exp(const SymMatrix& a);

// The symmetric positive-definite inverse square root. Eigenvalues at or
// below `eps` raise kSingularMatrix. The default threshold is 1e-12 times the
// largest eigenvalue.
SymMatrix sym_inv_sqrt(const SymMatrix& a, std::optional<double> eps = std::nullopt);

}  // namespace nes_lra

#endif  // NES_LRA_SYMMAT_HPP_
