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


#include "slslab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "slslab/errors.hpp"
#include "slslab/rng.hpp"

namespace slslab {

// ---------------------------------------------------------------------------
// Design and data containers.

void ValidateDesign(Index num_players, const std::vector<DesignEdge>& design) {
  if (num_players < 1) throw InputError("number of players must be positive");
  std::set<std::pair<Index, Index>> seen;
  for (const auto& e : design) {
    if (!(0 <= e.i && e.i < e.j && e.j < num_players)) {
      std::ostringstream os;
      os << "pair (" << e.i << "," << e.j << ") violates 0 <= i < j < p="
         << num_players;
      throw InputError(os.str());
    }
    if (e.n < 1) throw InputError("comparison count n_ij must be >= 1");
    if (!seen.insert({e.i, e.j}).second) {
      std::ostringstream os;
      os << "duplicate pair (" << e.i << "," << e.j << ")";
      throw InputError(os.str());
    }
  }
}

std::vector<std::vector<Index>> ConnectedComponents(
    Index num_players, const std::vector<DesignEdge>& design) {
  std::vector<Index> parent(num_players);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : design) parent[find(e.i)] = find(e.j);
  std::vector<std::vector<Index>> groups;
  std::vector<Index> slot(num_players, -1);
  for (Index k = 0; k < num_players; ++k) {
    const Index root = find(k);
    if (slot[root] < 0) {
      slot[root] = static_cast<Index>(groups.size());
      groups.emplace_back();
    }
    groups[slot[root]].push_back(k);
  }
  return groups;
}

void RequireConnected(Index num_players, const std::vector<DesignEdge>& design) {
  const auto groups = ConnectedComponents(num_players, design);
  if (groups.size() <= 1) return;
  std::ostringstream os;
  os << "comparison graph is disconnected (" << groups.size()
     << " components):";
  for (const auto& g : groups) {
    os << " {";
    for (size_t k = 0; k < g.size(); ++k) os << (k ? "," : "") << g[k];
    os << "}";
  }
  throw DesignError(os.str());
}

std::vector<DesignEdge> complete_design(Index num_players, long long n) {
  if (num_players < 2) throw InputError("need at least two players");
  if (n < 1) throw InputError("comparison count must be >= 1");
  std::vector<DesignEdge> design;
  for (Index i = 0; i < num_players; ++i) {
    for (Index j = i + 1; j < num_players; ++j) design.push_back({i, j, n});
  }
  return design;
}

std::vector<DesignEdge> random_design(Index num_players, long long n,
                                      double density, std::uint64_t seed) {
  if (num_players < 2) throw InputError("need at least two players");
  if (n < 1) throw InputError("comparison count must be >= 1");
  if (!(density > 0 && density <= 1)) throw InputError("density must be in (0,1]");
  Rng rng(seed);
  std::bernoulli_distribution keep(density);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<DesignEdge> design;
    for (Index i = 0; i < num_players; ++i) {
      for (Index j = i + 1; j < num_players; ++j) {
        if (keep(rng)) design.push_back({i, j, n});
      }
    }
    if (ConnectedComponents(num_players, design).size() == 1) return design;
  }
  throw DesignError("no connected random design found; increase density");
}

bool btl_mle_exists(const ComparisonData& data) {
  const Index p = data.num_players();
  std::vector<std::vector<Index>> fwd(p), bwd(p);
  for (const auto& r : data.pairs()) {
    if (r.wins > 0) {
      fwd[r.i].push_back(r.j);
      bwd[r.j].push_back(r.i);
    }
    if (r.wins < r.n) {
      fwd[r.j].push_back(r.i);
      bwd[r.i].push_back(r.j);
    }
  }
  // Strongly connected iff node 0 reaches every node in both directions.
  auto reaches_all = [p](const std::vector<std::vector<Index>>& adj) {
    std::vector<char> seen(p, 0);
    std::vector<Index> stack = {0};
    seen[0] = 1;
    Index count = 1;
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (Index w : adj[u]) {
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == p;
  };
  return reaches_all(fwd) && reaches_all(bwd);
}

ComparisonData::ComparisonData(Index num_players, std::vector<PairRecord> pairs)
    : num_players_(num_players), pairs_(std::move(pairs)) {
  ValidateDesign(num_players_, design());
  for (const auto& r : pairs_) {
    if (r.wins < 0 || r.wins > r.n) {
      throw InputError("wins_i must lie in [0, n_ij]");
    }
  }
}

std::vector<DesignEdge> ComparisonData::design() const {
  std::vector<DesignEdge> out;
  out.reserve(pairs_.size());
  for (const auto& r : pairs_) out.push_back({r.i, r.j, r.n});
  return out;
}

double ComparisonData::total_comparisons() const {
  double total = 0.0;
  for (const auto& r : pairs_) total += static_cast<double>(r.n);
  return total;
}

Partition Partition::FromTarget(Index p, std::vector<Index> target) {
  Partition part;
  std::sort(target.begin(), target.end());
  part.target = std::move(target);
  for (Index k = 0; k < p; ++k) {
    if (!std::binary_search(part.target.begin(), part.target.end(), k)) {
      part.nuisance.push_back(k);
    }
  }
  part.Validate(p);
  return part;
}

void Partition::Validate(Index p) const {
  std::vector<int> hit(p, 0);
  for (Index k : target) {
    if (k < 0 || k >= p) throw InputError("target index out of range");
    ++hit[k];
  }
  for (Index k : nuisance) {
    if (k < 0 || k >= p) throw InputError("nuisance index out of range");
    ++hit[k];
  }
  for (int h : hit) {
    if (h != 1) throw InputError("partition is not a disjoint cover");
  }
  if (target.empty()) throw InputError("partition has an empty target");
}

void ScoreVector::Validate() const {
  const double p = static_cast<double>(values.size());
  if (gauge == Gauge::kSumZero && std::abs(values.sum()) > 1e-12 * p) {
    throw InputError("score vector violates the sum-zero gauge");
  }
  if (partition) partition->Validate(values.size());
}

// ---------------------------------------------------------------------------
// Logistic helpers.

double Sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double Softplus(double t) {
  if (t > 0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

double LogisticVar(double t) {
  const double s = Sigmoid(t);
  return s * (1.0 - s);
}

double LogisticMu3(double t) {
  const double s = Sigmoid(t);
  return s * (1.0 - s) * (1.0 - 2.0 * s);
}

double LogisticMu4(double t) {
  const double v = LogisticVar(t);
  return v * (1.0 - 6.0 * v);
}

double SupAbsMu3(double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  // |mu'''| peaks at t = +-log(2 + sqrt 3) with value 1 / (6 sqrt 3).
  static const double kPeak = std::log(2.0 + std::sqrt(3.0));
  double best = std::max(std::abs(LogisticMu3(lo)), std::abs(LogisticMu3(hi)));
  if ((lo <= kPeak && kPeak <= hi) || (lo <= -kPeak && -kPeak <= hi)) {
    best = std::max(best, 1.0 / (6.0 * std::sqrt(3.0)));
  }
  return best;
}

double SupAbsMu4(double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  // mu'''' = g(s) with s = sigma' in [s_min, s_max] and g(s) = s - 6 s^2.
  const double a = LogisticVar(lo);
  const double b = LogisticVar(hi);
  const double s_min = std::min(a, b);
  const double s_max = (lo <= 0 && 0 <= hi) ? 0.25 : std::max(a, b);
  auto g = [](double s) { return s - 6.0 * s * s; };
  double best = std::max(std::abs(g(s_min)), std::abs(g(s_max)));
  const double s_crit = 1.0 / 12.0;
  if (s_min <= s_crit && s_crit <= s_max) best = std::max(best, g(s_crit));
  return best;
}

// ---------------------------------------------------------------------------
// BTL evaluators.

namespace {

void CheckDim(const Vector& scores, Index p) {
  if (scores.size() != p) {
    std::ostringstream os;
    os << "score vector has length " << scores.size() << ", expected " << p;
    throw InputError(os.str());
  }
}

}  // namespace

double btl_loglik(const Vector& scores, const ComparisonData& data) {
  CheckDim(scores, data.num_players());
  double value = 0.0;
  for (const auto& r : data.pairs()) {
    const double t = scores(r.i) - scores(r.j);
    value += static_cast<double>(r.wins) * t -
             static_cast<double>(r.n) * Softplus(t);
  }
  return value;
}

Vector btl_grad(const Vector& scores, const ComparisonData& data) {
  CheckDim(scores, data.num_players());
  Vector g = Vector::Zero(data.num_players());
  for (const auto& r : data.pairs()) {
    const double t = scores(r.i) - scores(r.j);
    const double resid =
        static_cast<double>(r.wins) - static_cast<double>(r.n) * Sigmoid(t);
    g(r.i) += resid;
    g(r.j) -= resid;
  }
  return g;
}

Matrix btl_hessian(const Vector& scores, const ComparisonData& data) {
  CheckDim(scores, data.num_players());
  const Index p = data.num_players();
  Matrix h = Matrix::Zero(p, p);
  for (const auto& r : data.pairs()) {
    const double w =
        static_cast<double>(r.n) * LogisticVar(scores(r.i) - scores(r.j));
    h(r.i, r.i) -= w;
    h(r.j, r.j) -= w;
    h(r.i, r.j) += w;
    h(r.j, r.i) += w;
  }
  return h;
}

ModelEval btl_eval(const Vector& scores, const ComparisonData& data) {
  return {btl_loglik(scores, data), btl_grad(scores, data),
          btl_hessian(scores, data)};
}

Vector btl_score(const Vector& truth, const ComparisonData& data) {
  return btl_grad(truth, data);
}

ComparisonData btl_simulate(const Vector& true_scores,
                            const std::vector<DesignEdge>& design,
                            Index num_players, std::uint64_t seed) {
  CheckDim(true_scores, num_players);
  ValidateDesign(num_players, design);
  RequireConnected(num_players, design);
  Rng rng(seed);
  std::vector<PairRecord> pairs;
  pairs.reserve(design.size());
  for (const auto& e : design) {
    std::binomial_distribution<long long> binom(
        e.n, Sigmoid(true_scores(e.i) - true_scores(e.j)));
    pairs.push_back({e.i, e.j, e.n, binom(rng)});
  }
  return ComparisonData(num_players, std::move(pairs));
}

// ---------------------------------------------------------------------------
// SlsModel defaults.

ModelEval SlsModel::loglik_eval(const Realization& r, const Vector& v) const {
  ModelEval out = f_eval(v);
  out.value += r.score.dot(v);
  out.gradient += r.score;
  return out;
}

Matrix SlsModel::score_covariance() const { return -f_eval(truth()).hessian; }

double SlsModel::third_trilinear(const Vector& v, const Vector& a,
                                 const Vector& b, const Vector& c) const {
  auto cube = [&](const Vector& z) { return third_directional(v, z); };
  return (cube(a + b + c) - cube(a + b) - cube(a + c) - cube(b + c) + cube(a) +
          cube(b) + cube(c)) /
         6.0;
}

// ---------------------------------------------------------------------------
// BtlModel.

BtlModel::BtlModel(Index num_players, std::vector<DesignEdge> design,
                   Vector truth)
    : p_(num_players), design_(std::move(design)) {
  ValidateDesign(p_, design_);
  RequireConnected(p_, design_);
  CheckDim(truth, p_);
  truth_ = ProjectToGauge(truth, Gauge::kSumZero);
  for (const auto& e : design_) {
    pstar_.push_back(Sigmoid(truth_(e.i) - truth_(e.j)));
    total_ += static_cast<double>(e.n);
  }
}

ModelEval BtlModel::f_eval(const Vector& v) const {
  CheckDim(v, p_);
  ModelEval out{0.0, Vector::Zero(p_), Matrix::Zero(p_, p_)};
  for (size_t k = 0; k < design_.size(); ++k) {
    const auto& e = design_[k];
    const double n = static_cast<double>(e.n);
    const double t = v(e.i) - v(e.j);
    out.value += n * (pstar_[k] * t - Softplus(t));
    const double g = n * (pstar_[k] - Sigmoid(t));
    out.gradient(e.i) += g;
    out.gradient(e.j) -= g;
    const double w = n * LogisticVar(t);
    out.hessian(e.i, e.i) -= w;
    out.hessian(e.j, e.j) -= w;
    out.hessian(e.i, e.j) += w;
    out.hessian(e.j, e.i) += w;
  }
  return out;
}

ModelEval BtlModel::loglik_eval(const Realization& r, const Vector& v) const {
  if (!r.data) return SlsModel::loglik_eval(r, v);
  return btl_eval(v, *r.data);
}

Realization BtlModel::simulate(std::uint64_t seed) const {
  Realization r;
  r.data = btl_simulate(truth_, design_, p_, seed);
  r.score = btl_score(truth_, *r.data);
  return r;
}

double BtlModel::third_directional(const Vector& v, const Vector& z) const {
  double out = 0.0;
  for (const auto& e : design_) {
    const double dz = z(e.i) - z(e.j);
    out -= static_cast<double>(e.n) * LogisticMu3(v(e.i) - v(e.j)) * dz * dz *
           dz;
  }
  return out;
}

double BtlModel::fourth_directional(const Vector& v, const Vector& z) const {
  double out = 0.0;
  for (const auto& e : design_) {
    const double dz = z(e.i) - z(e.j);
    out -= static_cast<double>(e.n) * LogisticMu4(v(e.i) - v(e.j)) * dz * dz *
           dz * dz;
  }
  return out;
}

double BtlModel::third_trilinear(const Vector& v, const Vector& a,
                                 const Vector& b, const Vector& c) const {
  double out = 0.0;
  for (const auto& e : design_) {
    out -= static_cast<double>(e.n) * LogisticMu3(v(e.i) - v(e.j)) *
           (a(e.i) - a(e.j)) * (b(e.i) - b(e.j)) * (c(e.i) - c(e.j));
  }
  return out;
}

std::optional<std::vector<LogisticEdge>> BtlModel::logistic_edges() const {
  std::vector<LogisticEdge> out;
  out.reserve(design_.size());
  for (const auto& e : design_) {
    out.push_back({e.i, e.j, static_cast<double>(e.n)});
  }
  return out;
}

// ---------------------------------------------------------------------------

double check_stochastic_linearity(const SlsModel& model, const Realization& r,
                                  const std::vector<Vector>& probes) {
  if (probes.size() < 2) throw InputError("need at least two probe points");
  std::vector<Vector> diffs;
  diffs.reserve(probes.size());
  for (const auto& v : probes) {
    diffs.push_back(model.loglik_eval(r, v).gradient - model.f_eval(v).gradient);
  }
  double worst = 0.0;
  for (size_t a = 0; a < diffs.size(); ++a)
    for (size_t b = a + 1; b < diffs.size(); ++b)
      worst = std::max(worst, (diffs[a] - diffs[b]).norm());
  return worst;
}

double directional_derivative(const SlsModel& model, const Vector& point,
                              const Vector& direction, int order) {
  if (order == 3) return model.third_directional(point, direction);
  if (order == 4) return model.fourth_directional(point, direction);
  throw InputError("directional derivative order must be 3 or 4");
}

}  // namespace slslab
