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

#include "nes_lra/symmat.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nes_lra/error.hpp"

namespace nes_lra {

const char* ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kInvalidMatrix: return "InvalidMatrix";
    case ErrorCode::kSingularMatrix: return "SingularMatrix";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

SymMatrix::SymMatrix(const Matrix& a) {
  if (a.rows() < 1 || a.rows() != a.cols()) {
    Fail(ErrorCode::kInvalidMatrix, "symmetric matrix must be square with dim >= 1, got " +
                                        std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  m_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::Zero(Eigen::Index dim) {
  if (dim < 1) Fail(ErrorCode::kInvalidMatrix, "dim must be >= 1");
  return SymMatrix(Matrix::Zero(dim, dim), Trusted{});
}

SymMatrix SymMatrix::Identity(Eigen::Index dim) {
  if (dim < 1) Fail(ErrorCode::kInvalidMatrix, "dim must be >= 1");
  return SymMatrix(Matrix::Identity(dim, dim), Trusted{});
}

SymEigen sym_eigen(const SymMatrix& a) {
  if (!a.allFinite()) Fail(ErrorCode::kInvalidMatrix, "matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    Fail(ErrorCode::kNumericalFailure, "symmetric eigensolver did not converge");
  }
  // Eigen returns ascending order.
  SymEigen out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

namespace {

// Q f(diag) Q^T, returned through the symmetrizing constructor.
template <typename F>
SymMatrix ApplySpectral(const SymEigen& eig, F&& f) {
  Vector mapped = eig.values.unaryExpr(f);
  return SymMatrix(eig.vectors * mapped.asDiagonal() * eig.vectors.transpose());
}

}  // namespace

SymMatrix sym_exp(const SymMatrix& a) {
  SymEigen eig = sym_eigen(a);
  // log(DBL_MAX) ~ 709.78
  if (eig.values(0) > std::log(std::numeric_limits<double>::max())) {
    Fail(ErrorCode::kNumericalFailure,
         "matrix exponential overflows (largest eigenvalue " + std::to_string(eig.values(0)) + ")");
  }
  return ApplySpectral(eig, [](double v) { return std::exp(v); });
}

SymMatrix sym_inv_sqrt(const SymMatrix& a, std::optional<double> eps) {
  SymEigen eig = sym_eigen(a);
  const double largest = eig.values(0);
  const double threshold = eps.value_or(1e-12 * std::abs(largest));
  const double smallest = eig.values(eig.values.size() - 1);
  if (!(largest > 0.0) || smallest <= threshold) {
    Fail(ErrorCode::kSingularMatrix,
         "matrix is not numerically positive definite (smallest eigenvalue " +
             std::to_string(smallest) + ")");
  }
  return ApplySpectral(eig, [](double v) { return 1.0 / std::sqrt(v); });
}

}  // namespace nes_lra
