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


#ifndef SLSLAB_MODEL_HPP_
#define SLSLAB_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "slslab/linalg.hpp"

namespace slslab {

// One unordered pair of players with its comparison count and the number
// of games won by the lower-indexed player i.
struct PairRecord {
  Index i = 0;
  Index j = 0;
  long long n = 0;
  long long wins = 0;
};

struct DesignEdge {
  Index i = 0;
  Index j = 0;
  long long n = 0;
};

void ValidateDesign(Index num_players, const std::vector<DesignEdge>& design);
std::vector<std::vector<Index>> ConnectedComponents(
    Index num_players, const std::vector<DesignEdge>& design);
// Throws DesignError naming the components when the graph is disconnected.
void RequireConnected(Index num_players, const std::vector<DesignEdge>& design);

// Every pair compared n times.
std::vector<DesignEdge> complete_design(Index num_players, long long n);
// Each pair present independently with probability `density`; resampled
// until connected.
std::vector<DesignEdge> random_design(Index num_players, long long n,
                                      double density, std::uint64_t seed);

class ComparisonData {
 public:
  ComparisonData() = default;
  // Validates indices, counts and uniqueness; connectivity is checked by the
  // consumers that need it (mle, simulation).
  ComparisonData(Index num_players, std::vector<PairRecord> pairs);

  Index num_players() const { return num_players_; }
  const std::vector<PairRecord>& pairs() const { return pairs_; }
  std::vector<DesignEdge> design() const;
  double total_comparisons() const;

 private:
  Index num_players_ = 0;
  std::vector<PairRecord> pairs_;
};

// Target/nuisance split of the coordinates, theta = target, eta = nuisance.
struct Partition {
  std::vector<Index> target;
  std::vector<Index> nuisance;

  static Partition FromTarget(Index p, std::vector<Index> target);
  void Validate(Index p) const;
};

struct ScoreVector {
  Vector values;
  Gauge gauge = Gauge::kSumZero;
  std::optional<Partition> partition;

  void Validate() const;
};

struct ModelEval {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
};

// Logistic helpers. mu(t) = log(1 + e^t); mu' = sigma, mu'' = sigma'.
double Sigmoid(double t);
double Softplus(double t);
double LogisticVar(double t);  // sigma'(t) = sigma (1 - sigma)
double LogisticMu3(double t);  // sigma' (1 - 2 sigma)
double LogisticMu4(double t);  // sigma' (1 - 6 sigma')
// Exact suprema of |mu'''| and |mu''''| over [lo, hi].
double SupAbsMu3(double lo, double hi);
double SupAbsMu4(double lo, double hi);

// f contains the term -weight * log(1 + exp(v_i - v_j)) plus linear parts.
struct LogisticEdge {
  Index i = 0;
  Index j = 0;
  double weight = 0.0;
};

// One random draw of the stochastic component. For pairwise data the
// dataset is kept so that the log-likelihood can be evaluated directly.
struct Realization {
  Vector score;  // grad zeta
  std::optional<ComparisonData> data;
};

class SlsModel {
 public:
  virtual ~SlsModel() = default;

  virtual Index dim() const = 0;
  virtual double sample_size() const = 0;
  virtual Gauge gauge() const = 0;
  virtual const Vector& truth() const = 0;

  // f = E L and its derivatives.
  virtual ModelEval f_eval(const Vector& v) const = 0;
  // L for one realization. The default is f + <score, v>.
  virtual ModelEval loglik_eval(const Realization& r, const Vector& v) const;
  virtual Realization simulate(std::uint64_t seed) const = 0;
  // Var(grad zeta); defaults to the Fisher matrix at the truth.
  virtual Matrix score_covariance() const;

  // <grad^3 f(v), z x z x z> and <grad^4 f(v), z^{x4}>.
  virtual double third_directional(const Vector& v, const Vector& z) const = 0;
  virtual double fourth_directional(const Vector& v, const Vector& z) const = 0;
  // <grad^3 f(v), a x b x c>; the default uses polarization of the cubic form.
  virtual double third_trilinear(const Vector& v, const Vector& a,
                                 const Vector& b, const Vector& c) const;

  // Description of the non-quadratic part of f as logistic edges. An empty
  // vector means f is quadratic; nullopt means no such description exists.
  virtual std::optional<std::vector<LogisticEdge>> logistic_edges() const {
    return std::nullopt;
  }
};

// Bradley-Terry-Luce evaluators on a dataset.
// The MLE is finite iff the directed graph with an edge i -> j whenever i
// beat j at least once is strongly connected.
bool btl_mle_exists(const ComparisonData& data);

double btl_loglik(const Vector& scores, const ComparisonData& data);
Vector btl_grad(const Vector& scores, const ComparisonData& data);
Matrix btl_hessian(const Vector& scores, const ComparisonData& data);
ModelEval btl_eval(const Vector& scores, const ComparisonData& data);
// grad zeta = grad L(v*) for the data at hand.
Vector btl_score(const Vector& truth, const ComparisonData& data);
ComparisonData btl_simulate(const Vector& true_scores,
                            const std::vector<DesignEdge>& design,
                            Index num_players, std::uint64_t seed);

class BtlModel : public SlsModel {
 public:
  BtlModel(Index num_players, std::vector<DesignEdge> design, Vector truth);

  Index dim() const override { return p_; }
  double sample_size() const override { return total_; }
  Gauge gauge() const override { return Gauge::kSumZero; }
  const Vector& truth() const override { return truth_; }
  const std::vector<DesignEdge>& design() const { return design_; }

  ModelEval f_eval(const Vector& v) const override;
  ModelEval loglik_eval(const Realization& r, const Vector& v) const override;
  Realization simulate(std::uint64_t seed) const override;
  double third_directional(const Vector& v, const Vector& z) const override;
  double fourth_directional(const Vector& v, const Vector& z) const override;
  double third_trilinear(const Vector& v, const Vector& a, const Vector& b,
                         const Vector& c) const override;
  std::optional<std::vector<LogisticEdge>> logistic_edges() const override;

 private:
  Index p_;
  std::vector<DesignEdge> design_;
  Vector truth_;
  std::vector<double> pstar_;
  double total_ = 0.0;
};

// f(v) = -1/2 (v - v*)^T F (v - v*), score ~ N(0, V^2).
class QuadraticModel : public SlsModel {
 public:
  QuadraticModel(Matrix fisher, Vector truth, double sample_size,
                 std::optional<Matrix> v_sq = std::nullopt);

  Index dim() const override { return truth_.size(); }
  double sample_size() const override { return n_; }
  Gauge gauge() const override { return Gauge::kFree; }
  const Vector& truth() const override { return truth_; }

  ModelEval f_eval(const Vector& v) const override;
  Realization simulate(std::uint64_t seed) const override;
  Matrix score_covariance() const override { return v_sq_; }
  double third_directional(const Vector&, const Vector&) const override {
    return 0.0;
  }
  double fourth_directional(const Vector&, const Vector&) const override {
    return 0.0;
  }
  double third_trilinear(const Vector&, const Vector&, const Vector&,
                         const Vector&) const override {
    return 0.0;
  }
  std::optional<std::vector<LogisticEdge>> logistic_edges() const override {
    return std::vector<LogisticEdge>{};
  }

 private:
  Matrix fisher_;
  Matrix v_sq_;
  Matrix v_chol_;
  Vector truth_;
  double n_;
};

// Smooth model with a semi-orthogonal target/nuisance split. With
// u = theta - theta*, w = eta - eta*:
//   f = -n/2 |u|^2 - n/2 |w|^2 + n c psi(u) h(w),
//   psi(u) = sum_k (sin u_k - u_k),  h(w) = sum_m sin w_m.
// The cross derivative vanishes at u = 0, so theta*(eta) = theta* and
// F(eta) = F for every eta. The target is the first dim_target coordinates.
class SemiOrthogonalModel : public SlsModel {
 public:
  SemiOrthogonalModel(Index dim_target, Index dim_nuisance, double n,
                      double coupling, Vector truth);

  Index dim() const override { return truth_.size(); }
  double sample_size() const override { return n_; }
  Gauge gauge() const override { return Gauge::kFree; }
  const Vector& truth() const override { return truth_; }
  Partition partition() const;

  ModelEval f_eval(const Vector& v) const override;
  Realization simulate(std::uint64_t seed) const override;
  Matrix score_covariance() const override;
  double third_directional(const Vector& v, const Vector& z) const override;
  double fourth_directional(const Vector& v, const Vector& z) const override;

 private:
  Index qt_;
  Index qn_;
  double n_;
  double c_;
  Vector truth_;
};

// Max over probe pairs of |(grad L - grad f)(a) - (grad L - grad f)(b)|.
double check_stochastic_linearity(const SlsModel& model, const Realization& r,
                                  const std::vector<Vector>& probes);

// <grad^k f(point), u^{x k}> for k in {3, 4}.
double directional_derivative(const SlsModel& model, const Vector& point,
                              const Vector& direction, int order);

}  // namespace slslab

#endif  // SLSLAB_MODEL_HPP_
