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


#include "slslab/linalg.hpp"

#include <vector>

#include <Eigen/Eigenvalues>

#include "slslab/errors.hpp"

namespace slslab {

Matrix OrthogonalComplement(const Vector& w) {
  const Index p = w.size();
  // Householder reflection mapping w/|w| to e_0; its last p-1 columns span w^perp.
  Vector u = w.normalized();
  u(0) += (u(0) >= 0 ? 1.0 : -1.0);
  const double un = u.squaredNorm();
  Matrix h = Matrix::Identity(p, p) - (2.0 / un) * u * u.transpose();
  return h.rightCols(p - 1);
}

Matrix GaugeBasis(Index p, Gauge gauge) {
  if (gauge == Gauge::kFree || p == 1) return Matrix::Identity(p, p);
  return OrthogonalComplement(Vector::Ones(p));
}

Vector ProjectToGauge(const Vector& v, Gauge gauge) {
  if (gauge == Gauge::kFree) return v;
  return v.array() - v.mean();
}

Matrix GaugePinv(const Matrix& a, Gauge gauge) {
  const Matrix u = GaugeBasis(a.rows(), gauge);
  const Matrix reduced = u.transpose() * a * u;
  Eigen::LLT<Matrix> llt(reduced);
  if (llt.info() != Eigen::Success) {
    throw RankError("matrix is singular on the gauge subspace");
  }
  const double scale = std::max(1.0, reduced.diagonal().cwiseAbs().maxCoeff());
  if (MinEigenvalue(reduced) <= 1e-13 * scale) {
    throw RankError("matrix is numerically singular on the gauge subspace");
  }
  return u * llt.solve(u.transpose());
}

double SpectralNorm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double MaxEigenvalue(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double MinEigenvalue(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Matrix SymSqrt(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  return es.operatorSqrt();
}

Matrix SymInvSqrt(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.eigenvalues().minCoeff() <= 0) {
    throw RankError("inverse square root of a non positive definite matrix");
  }
  return es.operatorInverseSqrt();
}

Matrix Select(const Matrix& a, const std::vector<Index>& rows,
              const std::vector<Index>& cols) {
  Matrix out(rows.size(), cols.size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < cols.size(); ++c) out(r, c) = a(rows[r], cols[c]);
  return out;
}

Vector Select(const Vector& v, const std::vector<Index>& idx) {
  Vector out(idx.size());
  for (size_t k = 0; k < idx.size(); ++k) out(k) = v(idx[k]);
  return out;
}

}  // namespace slslab
