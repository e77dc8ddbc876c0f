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


#ifndef SLSLAB_TESTS_ORACLES_HPP_
#define SLSLAB_TESTS_ORACLES_HPP_

#include <cmath>
#include <functional>
#include <random>

#include "slslab/model.hpp"

namespace slslab::testing {

// Random connected BTL instance with p players.
struct BtlInstance {
  Index p = 0;
  std::vector<DesignEdge> design;
  Vector truth;
  ComparisonData data;
};

inline BtlInstance RandomBtl(Index p, std::uint64_t seed, double density = 0.6,
                             long long max_n = 40) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> count(1, max_n);
  std::uniform_real_distribution<double> score(-1.5, 1.5);
  BtlInstance inst;
  inst.p = p;
  inst.design = random_design(p, 1, density, seed ^ 0x9e3779b97f4a7c15ULL);
  for (auto& e : inst.design) e.n = count(rng);
  inst.truth = Vector(p);
  for (Index k = 0; k < p; ++k) inst.truth(k) = score(rng);
  inst.truth.array() -= inst.truth.mean();
  inst.data = btl_simulate(inst.truth, inst.design, p, seed + 17);
  return inst;
}

// Log-likelihood summed in long double from the definition.
inline long double BruteLoglik(const Vector& v, const ComparisonData& data) {
  long double total = 0.0L;
  for (const auto& r : data.pairs()) {
    const long double t = static_cast<long double>(v(r.i)) - v(r.j);
    const long double p = 1.0L / (1.0L + std::exp(-t));
    total += r.wins * std::log(p) + (r.n - r.wins) * std::log(1.0L - p);
  }
  return total;
}

// Central differences of a scalar function.
inline Vector FdGradient(const std::function<double(const Vector&)>& f, const Vector& v,
                         double h = 1e-5) {
  Vector g(v.size());
  for (Index k = 0; k < v.size(); ++k) {
    Vector a = v, b = v;
    a(k) += h;
    b(k) -= h;
    g(k) = (f(a) - f(b)) / (2 * h);
  }
  return g;
}

inline Matrix FdJacobian(const std::function<Vector(const Vector&)>& f, const Vector& v,
                         double h = 1e-5) {
  const Index p = v.size();
  Matrix j(p, p);
  for (Index k = 0; k < p; ++k) {
    Vector a = v, b = v;
    a(k) += h;
    b(k) -= h;
    j.col(k) = (f(a) - f(b)) / (2 * h);
  }
  return j;
}

// d/dt of z^T f''(v + t z) z at t = 0, from the Hessian by central differences.
inline double FdThird(const std::function<Matrix(const Vector&)>& hess, const Vector& v,
                      const Vector& z, double h = 1e-4) {
  const double a = z.dot(hess(v + h * z) * z);
  const double b = z.dot(hess(v - h * z) * z);
  return (a - b) / (2 * h);
}

inline double FdFourth(const std::function<Matrix(const Vector&)>& hess, const Vector& v,
                       const Vector& z, double h = 1e-3) {
  const double a = z.dot(hess(v + h * z) * z);
  const double m = z.dot(hess(v) * z);
  const double b = z.dot(hess(v - h * z) * z);
  return (a - 2 * m + b) / (h * h);
}

inline double RelErr(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

inline double RelErr(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

// Golden-section maximization of a unimodal scalar function on [lo, hi].
inline double GoldenMax(const std::function<double(double)>& f, double lo, double hi,
                        double tol = 1e-12) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace slslab::testing

#endif  // SLSLAB_TESTS_ORACLES_HPP_
