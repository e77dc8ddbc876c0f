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


#include <array>
#include <cmath>

#include "slslab/errors.hpp"
#include "slslab/model.hpp"
#include "slslab/rng.hpp"

namespace slslab {

// ---------------------------------------------------------------------------
// QuadraticModel.

QuadraticModel::QuadraticModel(Matrix fisher, Vector truth, double sample_size,
                               std::optional<Matrix> v_sq)
    : fisher_(std::move(fisher)), truth_(std::move(truth)), n_(sample_size) {
  if (fisher_.rows() != truth_.size() || fisher_.cols() != truth_.size()) {
    throw InputError("quadratic model: dimension mismatch");
  }
  if (MinEigenvalue(fisher_) <= 0) {
    throw ConcavityError("quadratic model: Fisher matrix must be positive definite");
  }
  v_sq_ = v_sq ? *v_sq : fisher_;
  Eigen::LLT<Matrix> llt(v_sq_);
  if (llt.info() != Eigen::Success) throw InputError("V^2 must be positive definite");
  v_chol_ = llt.matrixL();
}

ModelEval QuadraticModel::f_eval(const Vector& v) const {
  const Vector u = v - truth_;
  const Vector fu = fisher_ * u;
  return {-0.5 * u.dot(fu), -fu, -fisher_};
}

Realization QuadraticModel::simulate(std::uint64_t seed) const {
  Rng rng(seed);
  Realization r;
  r.score = v_chol_ * StandardNormal(truth_.size(), rng);
  return r;
}

// ---------------------------------------------------------------------------
// SemiOrthogonalModel.

SemiOrthogonalModel::SemiOrthogonalModel(Index dim_target, Index dim_nuisance,
                                         double n, double coupling, Vector truth)
    : qt_(dim_target), qn_(dim_nuisance), n_(n), c_(coupling),
      truth_(std::move(truth)) {
  if (qt_ < 1 || qn_ < 1 || truth_.size() != qt_ + qn_ || n_ <= 0) {
    throw InputError("semi-orthogonal model: bad dimensions");
  }
}

Partition SemiOrthogonalModel::partition() const {
  Partition part;
  for (Index k = 0; k < qt_; ++k) part.target.push_back(k);
  for (Index k = qt_; k < qt_ + qn_; ++k) part.nuisance.push_back(k);
  return part;
}

ModelEval SemiOrthogonalModel::f_eval(const Vector& v) const {
  const Vector u = v.head(qt_) - truth_.head(qt_);
  const Vector w = v.tail(qn_) - truth_.tail(qn_);
  const double psi = (u.array().sin() - u.array()).sum();
  const double h = w.array().sin().sum();
  const Vector dpsi = u.array().cos() - 1.0;
  const Vector dh = w.array().cos();

  const Index p = qt_ + qn_;
  ModelEval out{0.0, Vector::Zero(p), Matrix::Zero(p, p)};
  out.value = -0.5 * n_ * (u.squaredNorm() + w.squaredNorm()) + n_ * c_ * psi * h;
  out.gradient.head(qt_) = -n_ * u + n_ * c_ * h * dpsi;
  out.gradient.tail(qn_) = -n_ * w + n_ * c_ * psi * dh;
  out.hessian.topLeftCorner(qt_, qt_).diagonal() =
      (-n_ - n_ * c_ * h * u.array().sin()).matrix();
  out.hessian.bottomRightCorner(qn_, qn_).diagonal() =
      (-n_ - n_ * c_ * psi * w.array().sin()).matrix();
  const Matrix cross = n_ * c_ * dpsi * dh.transpose();
  out.hessian.topRightCorner(qt_, qn_) = cross;
  out.hessian.bottomLeftCorner(qn_, qt_) = cross.transpose();
  return out;
}

Realization SemiOrthogonalModel::simulate(std::uint64_t seed) const {
  Rng rng(seed);
  Realization r;
  r.score = std::sqrt(n_) * StandardNormal(qt_ + qn_, rng);
  return r;
}

Matrix SemiOrthogonalModel::score_covariance() const {
  return n_ * Matrix::Identity(qt_ + qn_, qt_ + qn_);
}

namespace {

// Derivatives along z of psi and h at the current point, orders 0..4.
std::array<double, 5> PsiJet(const Vector& u, const Vector& z) {
  std::array<double, 5> d{};
  for (Index k = 0; k < u.size(); ++k) {
    const double s = std::sin(u(k)), c = std::cos(u(k)), t = z(k);
    d[0] += s - u(k);
    d[1] += (c - 1.0) * t;
    d[2] += -s * t * t;
    d[3] += -c * t * t * t;
    d[4] += s * t * t * t * t;
  }
  return d;
}

std::array<double, 5> HJet(const Vector& w, const Vector& z) {
  std::array<double, 5> d{};
  for (Index k = 0; k < w.size(); ++k) {
    const double s = std::sin(w(k)), c = std::cos(w(k)), t = z(k);
    d[0] += s;
    d[1] += c * t;
    d[2] += -s * t * t;
    d[3] += -c * t * t * t;
    d[4] += s * t * t * t * t;
  }
  return d;
}

}  // namespace

double SemiOrthogonalModel::third_directional(const Vector& v,
                                              const Vector& z) const {
  const auto a = PsiJet(v.head(qt_) - truth_.head(qt_), z.head(qt_));
  const auto b = HJet(v.tail(qn_) - truth_.tail(qn_), z.tail(qn_));
  return n_ * c_ * (a[3] * b[0] + 3 * a[2] * b[1] + 3 * a[1] * b[2] + a[0] * b[3]);
}

double SemiOrthogonalModel::fourth_directional(const Vector& v,
                                               const Vector& z) const {
  const auto a = PsiJet(v.head(qt_) - truth_.head(qt_), z.head(qt_));
  const auto b = HJet(v.tail(qn_) - truth_.tail(qn_), z.tail(qn_));
  return n_ * c_ *
         (a[4] * b[0] + 4 * a[3] * b[1] + 6 * a[2] * b[2] + 4 * a[1] * b[3] +
          a[0] * b[4]);
}

}  // namespace slslab
