// Copyright 2026 The slslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef SLSLAB_LINALG_HPP_
#define SLSLAB_LINALG_HPP_

#include <vector>

#include <Eigen/Dense>

namespace slslab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Identifiability constraint carried by a parameter vector.
enum class Gauge { kSumZero, kFree };

// Orthonormal basis (p x k) of the gauge subspace: all of R^p for kFree,
// the sum-zero hyperplane (k = p - 1) for kSumZero.
Matrix GaugeBasis(Index p, Gauge gauge);

Vector ProjectToGauge(const Vector& v, Gauge gauge);

// Pseudo-inverse restricted to the gauge subspace, U (U^T A U)^{-1} U^T.
// Throws RankError when U^T A U is not positive definite.
Matrix GaugePinv(const Matrix& a, Gauge gauge);

// Orthonormal basis of the hyperplane orthogonal to w (w != 0).
Matrix OrthogonalComplement(const Vector& w);

double SpectralNorm(const Matrix& a);
double MaxEigenvalue(const Matrix& sym);
double MinEigenvalue(const Matrix& sym);

// Symmetric square root and inverse square root of a positive definite matrix.
Matrix SymSqrt(const Matrix& sym);
Matrix SymInvSqrt(const Matrix& sym);

// Submatrix / subvector selection by index lists.
Matrix Select(const Matrix& a, const std::vector<Index>& rows,
              const std::vector<Index>& cols);
Vector Select(const Vector& v, const std::vector<Index>& idx);

}  // namespace slslab

#endif  // SLSLAB_LINALG_HPP_
