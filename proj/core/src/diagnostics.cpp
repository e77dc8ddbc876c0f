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


#include "slslab/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "slslab/errors.hpp"
#include "slslab/optimize.hpp"
#include "slslab/rng.hpp"

namespace slslab {

Condition AtMost(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

Condition AtLeast(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value >= threshold};
}

bool AllPass(const std::vector<Condition>& conditions) {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const Condition& c) { return c.pass; });
}

// ---------------------------------------------------------------------------
// Fisher bundle.

namespace {

// sqrt of the largest generalized eigenvalue of (A, B), B positive definite.
double GeneralizedKappa(const Matrix& a, const Matrix& b) {
  const Matrix bih = SymInvSqrt(b);
  return std::sqrt(std::max(0.0, MaxEigenvalue(bih * a * bih)));
}

}  // namespace

FisherBundle fisher_bundle(const Matrix& fisher, Gauge gauge,
                           const std::optional<Partition>& partition,
                           std::optional<Matrix> v_sq) {
  FisherBundle b;
  const Index p = fisher.rows();
  b.fisher = 0.5 * (fisher + fisher.transpose());
  b.gauge = gauge;
  b.d = b.fisher.diagonal();
  for (Index j = 0; j < p; ++j) {
    if (!(b.d(j) > 0)) throw DesignError("zero Fisher diagonal (isolated player)");
    b.d(j) = std::sqrt(b.d(j));
  }
  b.fisher_pinv = GaugePinv(b.fisher, gauge);
  b.v_sq = v_sq ? *v_sq : b.fisher;

  const Matrix u = GaugeBasis(p, gauge);
  const Matrix d2 = b.d.array().square().matrix().asDiagonal();
  b.kappa = GeneralizedKappa(u.transpose() * d2 * u, u.transpose() * b.fisher * u);

  if (partition) {
    partition->Validate(p);
    b.partition = partition;
    b.f_tt = Select(b.fisher, partition->target, partition->target);
    b.f_tn = Select(b.fisher, partition->target, partition->nuisance);
    b.f_nn = Select(b.fisher, partition->nuisance, partition->nuisance);
    Eigen::LLT<Matrix> llt(b.f_tt);
    if (llt.info() != Eigen::Success) {
      throw RankError("target Fisher block is not positive definite");
    }
    b.f_tt_inv = llt.solve(Matrix::Identity(b.f_tt.rows(), b.f_tt.rows()));
    b.d_target = b.f_tt.diagonal().cwiseSqrt();
    b.h = b.f_nn.diagonal().cwiseSqrt();
    const Matrix dt2 = b.d_target.array().square().matrix().asDiagonal();
    b.kappa_target = GeneralizedKappa(dt2, b.f_tt);
  }
  return b;
}

FisherBundle fisher_bundle(const SlsModel& model, const Vector& point,
                           const std::optional<Partition>& partition) {
  const Matrix f = -model.f_eval(point).hessian;
  const bool at_truth = (point - model.truth()).cwiseAbs().maxCoeff() == 0.0;
  return fisher_bundle(f, model.gauge(), partition,
                       at_truth ? model.score_covariance() : f);
}

// ---------------------------------------------------------------------------
// Radii and dimensions.

DeviationRadius deviation_radius(const Matrix& b, double x) {
  if (!(x > 0)) throw InputError("deviation parameter x must be positive");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (b + b.transpose()),
                                           Eigen::EigenvaluesOnly);
  const Vector lam = es.eigenvalues();
  const double top = lam.size() ? lam.maxCoeff() : 0.0;
  if (lam.size() && lam.minCoeff() < -1e-10 * std::max(1.0, top)) {
    throw InputError("deviation radius: B has a negative eigenvalue");
  }
  const Vector pos = lam.cwiseMax(0.0);
  const double tr = pos.sum();
  const double tr2 = pos.squaredNorm();
  const double op = pos.size() ? pos.maxCoeff() : 0.0;
  DeviationRadius out;
  out.z = std::sqrt(tr + 2.0 * std::sqrt(x * tr2) + 2.0 * x * op);
  out.envelope = std::sqrt(tr) + std::sqrt(2.0 * x * op);
  return out;
}

double default_x(double sample_size) {
  if (!(sample_size > 1)) throw InputError("sample size must exceed 1");
  return std::log(sample_size);
}

namespace {

double NuisanceDim(const FisherBundle& bundle) {
  if (!bundle.partition) return 0.0;
  const Matrix cov = bundle.fisher_pinv * bundle.v_sq * bundle.fisher_pinv;
  double out = 0.0;
  const auto& nu = bundle.partition->nuisance;
  for (size_t m = 0; m < nu.size(); ++m) {
    out += bundle.h(m) * bundle.h(m) * cov(nu[m], nu[m]);
  }
  return out;
}

Matrix FullBd(const FisherBundle& bundle) {
  const Matrix dfi = bundle.d.asDiagonal() * bundle.fisher_pinv;
  return dfi * bundle.v_sq * dfi.transpose();
}

}  // namespace

EffectiveDimensions effective_dimensions(const FisherBundle& bundle) {
  EffectiveDimensions e;
  e.p_g = (bundle.fisher_pinv * bundle.v_sq).trace();
  e.p_d = FullBd(bundle).trace();
  e.p_h = NuisanceDim(bundle);
  return e;
}

DeviationSpec deviation_spec(const FisherBundle& bundle, double x) {
  DeviationSpec s;
  s.x = x;
  s.b = FullBd(bundle);
  const DeviationRadius z = deviation_radius(s.b, x);
  s.z = z.z;
  s.envelope = z.envelope;
  s.r_d = z.z;
  const EffectiveDimensions e = effective_dimensions(bundle);
  s.p_g = e.p_g;
  s.p_d = e.p_d;
  s.p_h = e.p_h;
  s.omega_prob = 1.0 - 3.0 * std::exp(-x);
  // Coordinates of D^{-1} grad zeta have unit variance; the union envelope
  // sqrt(2 (x + log 2p)) stands in for |D^{-1} grad zeta|_inf.
  const RhoReport rho = rho_dual(bundle);
  if (rho.applicable) {
    const double p = static_cast<double>(bundle.dim());
    s.r_inf = supnorm_radius(rho.rho_exact, std::sqrt(2.0 * (x + std::log(2.0 * p))));
  }
  return s;
}

DeviationSpec target_deviation_spec(const FisherBundle& bundle, double x,
                                    double omega) {
  if (!bundle.partition) throw InputError("target deviation spec needs a partition");
  const auto& t = bundle.partition->target;
  const Matrix v_tt = Select(bundle.v_sq, t, t);
  const Matrix dfi = bundle.d_target.asDiagonal() * bundle.f_tt_inv;
  DeviationSpec s;
  s.x = x;
  s.b = dfi * v_tt * dfi.transpose();
  const DeviationRadius z = deviation_radius(s.b, x);
  s.z = z.z;
  s.envelope = z.envelope;
  s.r_d = omega < 1.0 ? z.z / std::sqrt(1.0 - omega)
                      : std::numeric_limits<double>::infinity();
  s.p_g = (bundle.f_tt_inv * v_tt).trace();
  s.p_d = s.b.trace();
  s.p_h = NuisanceDim(bundle);
  s.omega_prob = 1.0 - 3.0 * std::exp(-x);
  return s;
}

// ---------------------------------------------------------------------------
// Cross-correlation.

RhoReport rho_dual(const FisherBundle& bundle) {
  return rho_dual(bundle.fisher, bundle.d);
}

RhoReport rho_dual(const Matrix& f, const Vector& d) {
  const Index p = f.rows();
  RhoReport r;
  r.per_j = Vector::Zero(p);
  for (Index j = 0; j < p; ++j) {
    double sq = 0.0, l1 = 0.0;
    for (Index m = 0; m < p; ++m) {
      if (m == j) continue;
      sq += f(j, m) * f(j, m) / (d(m) * d(m));
      l1 += std::abs(f(j, m)) / (d(j) * d(m));
    }
    r.per_j(j) = std::sqrt(sq) / d(j);
    r.rho_exact = std::max(r.rho_exact, l1);
  }
  r.rho = p ? r.per_j.maxCoeff() : 0.0;
  r.applicable = r.rho_exact < 1.0;
  return r;
}

double rho_star(const FisherBundle& bundle, NuisanceNorm norm) {
  if (!bundle.partition) throw InputError("rho* needs a partition");
  const Matrix m = bundle.d_target.cwiseInverse().asDiagonal() * bundle.f_tn *
                   bundle.h.cwiseInverse().asDiagonal();
  if (m.size() == 0) return 0.0;
  if (norm == NuisanceNorm::kL2) return SpectralNorm(m);
  if (m.rows() == 1) return m.row(0).cwiseAbs().sum();
  const Index q = m.cols();
  if (q <= 16) {
    // A convex function of w attains its max over the cube at a vertex.
    double best = 0.0;
    const unsigned long count = 1UL << (q - 1);
    Vector w(q);
    for (unsigned long mask = 0; mask < count; ++mask) {
      for (Index k = 0; k < q; ++k) w(k) = (mask >> k) & 1UL ? -1.0 : 1.0;
      best = std::max(best, (m * w).norm());
    }
    return best;
  }
  double bound = 0.0;
  for (Index k = 0; k < q; ++k) bound += m.col(k).norm();
  return bound;
}

// ---------------------------------------------------------------------------
// Smoothness certificates.

namespace {

Certificate Finish(double analytic, bool has_analytic, double sampled) {
  Certificate c;
  c.sampled = sampled;
  c.certified = has_analytic;
  if (has_analytic) {
    c.analytic = analytic;
    c.value = std::max(analytic, sampled);
    c.dominant = analytic >= sampled ? "analytic" : "sampled";
  } else {
    c.value = sampled;
    c.dominant = "sampled";
  }
  return c;
}

// Third (order 3) or fourth (order 4) derivative constant in the target
// directions over the target D-ball of radius r_theta and the nuisance box.
Certificate TargetDerivative(const SlsModel& model, const Vector& point,
                             const std::vector<Index>& target,
                             const Vector& d_target, double r_theta,
                             const std::vector<Index>& nuisance,
                             const Vector& box, int order, int num_directions,
                             std::uint64_t seed) {
  const Index p = model.dim();
  const Index q = static_cast<Index>(target.size());
  std::vector<Index> pos(p, -1);
  for (Index k = 0; k < q; ++k) pos[target[k]] = k;
  Vector box_full = Vector::Zero(p);
  for (size_t m = 0; m < nuisance.size(); ++m) box_full(nuisance[m]) = box(m);

  double analytic = 0.0;
  const auto edges = model.logistic_edges();
  if (edges) {
    // |<grad^k f, z^k>| <= sum_e w_e (z_i - z_j)^2 |Dz|^{k-2} with
    // w_e = n_e sup|mu^(k)| s_e^{k-2}, s_e the D-norm of the edge vector.
    Matrix lap = Matrix::Zero(q, q);
    for (const auto& e : *edges) {
      const Index a = pos[e.i], b = pos[e.j];
      if (a < 0 && b < 0) continue;
      double s2 = 0.0, slack = 0.0;
      if (a >= 0) s2 += 1.0 / (d_target(a) * d_target(a)); else slack += box_full(e.i);
      if (b >= 0) s2 += 1.0 / (d_target(b) * d_target(b)); else slack += box_full(e.j);
      const double s = std::sqrt(s2);
      const double t = point(e.i) - point(e.j);
      const double delta = r_theta * s + slack;
      const double w =
          order == 3 ? e.weight * SupAbsMu3(t - delta, t + delta) * s
                     : e.weight * SupAbsMu4(t - delta, t + delta) * s2;
      if (a >= 0) lap(a, a) += w;
      if (b >= 0) lap(b, b) += w;
      if (a >= 0 && b >= 0) {
        lap(a, b) -= w;
        lap(b, a) -= w;
      }
    }
    if (q > 0) {
      const Vector dinv = d_target.cwiseInverse();
      analytic = std::max(0.0, MaxEigenvalue(dinv.asDiagonal() * lap * dinv.asDiagonal()));
    }
  }

  Rng rng(SubSeed(seed, kStreamDirections, static_cast<std::uint64_t>(order)));
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double sampled = 0.0;
  for (int k = 0; k < num_directions; ++k) {
    Vector v = point;
    const Vector u = k == 0 ? Vector::Zero(q) : SampleDBall(d_target, r_theta, rng);
    if (k > 0) {
      for (size_t m = 0; m < nuisance.size(); ++m) v(nuisance[m]) += box(m) * unif(rng);
    }
    const Vector zt = SampleDSphere(d_target, rng);
    Vector z = Vector::Zero(p);
    for (Index j = 0; j < q; ++j) {
      v(target[j]) += u(j);
      z(target[j]) = zt(j);
    }
    const double val = order == 3 ? model.third_directional(v, z)
                                  : model.fourth_directional(v, z);
    sampled = std::max(sampled, std::abs(val));
  }
  return Finish(analytic, edges.has_value(), sampled);
}

std::vector<Index> AllIndices(Index p) {
  std::vector<Index> out(p);
  for (Index k = 0; k < p; ++k) out[k] = k;
  return out;
}

}  // namespace

Certificate tau3_estimate(const SlsModel& model, const Vector& point,
                          const Vector& d, double r, int num_directions,
                          std::uint64_t seed) {
  return TargetDerivative(model, point, AllIndices(model.dim()), d, r, {},
                          Vector(), 3, num_directions, seed);
}

Certificate tau4_estimate(const SlsModel& model, const Vector& point,
                          const Vector& d, double r, int num_directions,
                          std::uint64_t seed) {
  return TargetDerivative(model, point, AllIndices(model.dim()), d, r, {},
                          Vector(), 4, num_directions, seed);
}

Certificate tau3_partial(const SlsModel& model, const Vector& point,
                         const Partition& partition, const Vector& d_target,
                         double r_theta, const Vector& nuisance_box,
                         int num_directions, std::uint64_t seed) {
  return TargetDerivative(model, point, partition.target, d_target, r_theta,
                          partition.nuisance, nuisance_box, 3, num_directions,
                          seed);
}

CrossSmoothness cross_smoothness(const SlsModel& model, const Vector& point,
                                 const Partition& partition,
                                 const Vector& d_target, const Vector& h,
                                 double r_circ, NuisanceNorm norm,
                                 int num_directions, std::uint64_t seed) {
  const Index p = model.dim();
  const auto& tg = partition.target;
  const auto& nu = partition.nuisance;
  std::vector<Index> tpos(p, -1), npos(p, -1);
  for (size_t k = 0; k < tg.size(); ++k) tpos[tg[k]] = static_cast<Index>(k);
  for (size_t k = 0; k < nu.size(); ++k) npos[nu[k]] = static_cast<Index>(k);

  double a12 = 0.0, a21 = 0.0;
  const auto edges = model.logistic_edges();
  if (edges) {
    // Only edges joining a target and a nuisance player carry mixed terms.
    Vector g = Vector::Zero(tg.size());
    Vector hh = Vector::Zero(tg.size());
    for (const auto& e : *edges) {
      Index ti = -1, nm = -1;
      if (tpos[e.i] >= 0 && npos[e.j] >= 0) {
        ti = tpos[e.i];
        nm = npos[e.j];
      } else if (tpos[e.j] >= 0 && npos[e.i] >= 0) {
        ti = tpos[e.j];
        nm = npos[e.i];
      } else {
        continue;
      }
      const double t = point(e.i) - point(e.j);
      const double delta = r_circ / h(nm);
      const double m3 = e.weight * SupAbsMu3(t - delta, t + delta);
      g(ti) += m3 / (h(nm) * h(nm));
      hh(ti) += m3 / h(nm);
    }
    a12 = g.cwiseQuotient(d_target).norm();
    for (Index k = 0; k < hh.size(); ++k) {
      a21 = std::max(a21, hh(k) / (d_target(k) * d_target(k)));
    }
  }

  Rng rng(SubSeed(seed, kStreamDirections, 12));
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  double s12 = 0.0, s21 = 0.0;
  const Index qn = static_cast<Index>(nu.size());
  for (int k = 0; k < num_directions; ++k) {
    Vector v = point;
    if (k > 0) {
      if (norm == NuisanceNorm::kSup) {
        for (Index m = 0; m < qn; ++m) v(nu[m]) += r_circ * unif(rng) / h(m);
      } else {
        const Vector w0 = SampleDBall(h, r_circ, rng);
        for (Index m = 0; m < qn; ++m) v(nu[m]) += w0(m);
      }
    }
    const Vector zt = SampleDSphere(d_target, rng);
    Vector wn(qn);
    if (norm == NuisanceNorm::kSup) {
      for (Index m = 0; m < qn; ++m) wn(m) = (coin(rng) ? 1.0 : -1.0) / h(m);
    } else {
      wn = SampleDSphere(h, rng);
    }
    Vector z = Vector::Zero(p), w = Vector::Zero(p);
    for (size_t j = 0; j < tg.size(); ++j) z(tg[j]) = zt(j);
    for (Index m = 0; m < qn; ++m) w(nu[m]) = wn(m);
    s12 = std::max(s12, std::abs(model.third_trilinear(v, z, w, w)));
    s21 = std::max(s21, std::abs(model.third_trilinear(v, z, z, w)));
  }
  return {Finish(a12, edges.has_value(), s12), Finish(a21, edges.has_value(), s21)};
}

SupNormSmoothness supnorm_smoothness(const SlsModel& model, const Vector& point,
                                     const Vector& d, double r_inf) {
  SupNormSmoothness out;
  const auto edges = model.logistic_edges();
  if (!edges) {
    out.tau3 = out.delta12 = out.delta21 = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const Index p = model.dim();
  Vector t3 = Vector::Zero(p), d21 = Vector::Zero(p), d12 = Vector::Zero(p);
  // Each coordinate j is treated as a scalar target with the others as
  // nuisance: |v_j - v*_j| <= 2 r / D_j and |v_m - v*_m| <= r / D_m.
  auto visit = [&](Index j, Index m, double weight, double t) {
    const double delta = 2.0 * r_inf / d(j) + r_inf / d(m);
    const double m3 = weight * SupAbsMu3(t - delta, t + delta);
    t3(j) += m3 / (d(j) * d(j) * d(j));
    d21(j) += m3 / (d(j) * d(j) * d(m));
    d12(j) += m3 / (d(j) * d(m) * d(m));
  };
  for (const auto& e : *edges) {
    const double t = point(e.i) - point(e.j);
    visit(e.i, e.j, e.weight, t);
    visit(e.j, e.i, e.weight, -t);
  }
  if (p > 0) {
    out.tau3 = t3.maxCoeff();
    out.delta21 = d21.maxCoeff();
    out.delta12 = d12.maxCoeff();
  }
  out.certified = true;
  return out;
}

double supnorm_radius(double rho, double score_inf) {
  if (!(rho < 1.0)) throw InapplicableError("rho >= 1: sup-norm theory inapplicable");
  return std::sqrt(2.0) / (1.0 - rho) * score_inf;
}

SupNormConstants supnorm_constants(double rho, double delta12, double delta21,
                                   double tau3, double score_inf) {
  SupNormConstants c;
  c.rho = rho;
  c.delta12 = delta12;
  c.delta21 = delta21;
  c.tau3 = tau3;
  c.score_inf = score_inf;
  c.r_inf = supnorm_radius(rho, score_inf);
  c.delta_b = delta21 * c.r_inf;
  const double one_b = 1.0 - c.delta_b;
  const double lead = rho + c.delta_b / 2.0;
  c.delta_n = (rho * delta21 + delta12 / 2.0 +
               3.0 * lead * lead * tau3 / (4.0 * one_b * one_b)) /
              one_b;
  const double one_r = 1.0 - rho;
  c.delta_inf =
      2.0 * tau3 + delta21 / 2.0 + 2.0 * (c.delta_n + delta21) / (one_r * one_r);
  c.conditions = {
      AtMost("delta_b", c.delta_b, 0.25),
      AtMost("delta12_r_inf", delta12 * c.r_inf, 0.25),
      AtMost("delta_inf_score_inf", c.delta_inf * score_inf, std::sqrt(2.0) - 1.0),
  };
  c.applicable = AllPass(c.conditions);
  return c;
}

SmoothnessConstants smoothness_constants(const SlsModel& model,
                                         const FisherBundle& bundle,
                                         const DeviationSpec& spec,
                                         double radius_factor,
                                         int num_directions,
                                         std::uint64_t seed) {
  SmoothnessConstants c;
  c.r_loc = radius_factor * spec.r_d;
  c.tau3_cert = tau3_estimate(model, model.truth(), bundle.d, c.r_loc,
                              num_directions, seed);
  c.tau4_cert = tau4_estimate(model, model.truth(), bundle.d, c.r_loc,
                              num_directions, seed);
  c.tau3 = c.tau3_cert.value;
  c.tau4 = c.tau4_cert.value;
  const double n = model.sample_size();
  c.c3 = c.tau3 * std::sqrt(n);
  c.c4 = c.tau4 * n;
  c.kappa = bundle.kappa;
  c.rho = rho_dual(bundle);
  return c;
}

// ---------------------------------------------------------------------------
// Plug-in constants.

namespace {

struct OmegaWitness {
  double omega = 0.0;
  double cross = 0.0;  // max |D^{-1} grad_theta grad_eta f(theta*, eta) H^{-1}|
};

OmegaWitness SampledOmega(const SlsModel& model, const FisherBundle& bundle,
                          double r_circ, NuisanceNorm norm, int samples,
                          std::uint64_t seed) {
  const Partition& part = *bundle.partition;
  const Objective f = [&model](const Vector& v) { return model.f_eval(v); };
  const Vector dinv = bundle.d_target.cwiseInverse();
  Rng rng(SubSeed(seed, kStreamDirections, 64));
  std::bernoulli_distribution coin(0.5);
  SolverConfig cfg;
  cfg.grad_tol = 1e-10 * std::max(1.0, bundle.f_tt.diagonal().maxCoeff());
  OmegaWitness best;
  const Vector hinv = bundle.h.cwiseInverse();
  const Index qn = static_cast<Index>(part.nuisance.size());
  for (int k = 0; k <= samples; ++k) {
    Vector base = model.truth();
    if (k > 0) {
      Vector w(qn);
      if (norm == NuisanceNorm::kSup) {
        for (Index m = 0; m < qn; ++m) w(m) = (coin(rng) ? r_circ : -r_circ) / bundle.h(m);
      } else {
        w = r_circ * SampleDSphere(bundle.h, rng);
      }
      for (Index m = 0; m < qn; ++m) base(part.nuisance[m]) += w(m);
    }
    const SolveResult sol = partial_maximize(f, base, part.target, cfg);
    const Matrix f_eta =
        -Select(model.f_eval(sol.argmax.values).hessian, part.target, part.target);
    best.omega = std::max(best.omega, SpectralNorm(dinv.asDiagonal() *
                                                   (f_eta - bundle.f_tt) *
                                                   dinv.asDiagonal()));
    const Matrix cross =
        Select(model.f_eval(base).hessian, part.target, part.nuisance);
    best.cross = std::max(
        best.cross, SpectralNorm(dinv.asDiagonal() * cross * hinv.asDiagonal()));
  }
  return best;
}

}  // namespace

PluginConstants plugin_constants(const SlsModel& model,
                                 const FisherBundle& bundle, double r_circ,
                                 NuisanceNorm norm, double x, int num_directions,
                                 std::uint64_t seed, int omega_samples) {
  if (!bundle.partition) throw InputError("plug-in constants need a partition");
  const Partition& part = *bundle.partition;
  const Vector& truth = model.truth();
  PluginConstants c;
  c.norm = norm;
  c.r_circ = r_circ;
  c.kappa = std::max(1.0, bundle.kappa_target);
  const double k = c.kappa;

  c.rho_star = rho_star(bundle, norm);
  const CrossSmoothness cross = cross_smoothness(
      model, truth, part, bundle.d_target, bundle.h, r_circ, norm,
      num_directions, seed);
  c.delta12 = cross.delta12;
  c.delta21 = cross.delta21;
  const double d12 = c.delta12.value, d21 = c.delta21.value;
  c.rho2 = c.rho_star + d12 * r_circ / 2.0;
  c.delta_b = k * k * d21 * r_circ;
  const double one_b = 1.0 - c.delta_b;
  c.bias_radius = one_b > 0 ? 1.5 * k * k * k * c.rho2 * r_circ / one_b
                            : std::numeric_limits<double>::infinity();

  // The l2 ball {|H w| <= r} sits inside the same coordinate box.
  const Vector box = r_circ * bundle.h.cwiseInverse();
  // Fisher variation: cross term along eta plus the shift theta*(eta) - theta*.
  const Certificate tau_shift = tau3_partial(model, truth, part, bundle.d_target,
                                             c.bias_radius, box, num_directions, seed);
  const OmegaWitness witness =
      SampledOmega(model, bundle, r_circ, norm, omega_samples, seed);
  c.omega_sampled = witness.omega;
  c.semi_orthogonal = witness.cross <= 1e-10 && witness.omega <= 1e-10;
  c.omega = std::max(d21 * r_circ + tau_shift.value * c.bias_radius, c.omega_sampled);

  c.target_spec = target_deviation_spec(bundle, x, c.omega);
  c.r_loc = one_b > 0 ? 1.5 * k / one_b * (k * k * c.rho2 * r_circ + c.target_spec.r_d)
                      : std::numeric_limits<double>::infinity();
  c.tau3 = tau3_partial(model, truth, part, bundle.d_target,
                        c.r_loc + c.bias_radius, box, num_directions, seed);
  const double tau = c.tau3.value;

  const double lin = 3.0 * c.rho2 * c.rho2 * tau / (4.0 * one_b * one_b);
  c.delta_n_fixed = (k * c.rho_star * d21 + k * d12 / 2.0 + k * lin) / one_b;
  c.delta_n_plugin =
      (k * k * c.rho_star * d21 + d12 / 2.0 + k * k * k * k * lin) / one_b;

  c.conditions = {
      AtMost("plugin_delta_b", c.delta_b, 0.25),
      AtMost("plugin_rho2_tau3", k * k * k * k * c.rho2 * tau * r_circ / one_b, 4.0 / 9.0),
      AtMost("plugin_tau3_rD", tau * k * k * c.target_spec.r_d, 4.0 / 9.0),
      AtMost("plugin_omega", c.omega, 1.0 / 3.0),
  };
  c.applicable = AllPass(c.conditions);
  return c;
}

std::vector<Condition> condition_report_3s(const FisherBundle& bundle,
                                           const DeviationSpec& spec,
                                           const SmoothnessConstants& constants,
                                           double sample_size, double rho_star,
                                           double r_circ) {
  const double k2 = bundle.kappa * bundle.kappa;
  std::vector<Condition> out;
  out.push_back({"kappa", bundle.kappa, std::numeric_limits<double>::infinity(),
                 std::isfinite(bundle.kappa)});
  out.push_back(AtLeast("r_over_rD", constants.r_loc / spec.r_d, 1.5));
  out.push_back(AtMost("tau3_kappa2_rD", constants.tau3 * k2 * spec.r_d, 4.0 / 9.0));
  out.push_back(AtMost("dim_ratio_p_over_n", spec.p_d / sample_size, 1.0));
  out.push_back(AtMost("dim_ratio_p2_over_n", spec.p_d * spec.p_d / sample_size, 1.0));
  out.push_back(AtMost("adaptivity_rho_star_rcirc", rho_star * r_circ, std::sqrt(spec.p_d)));
  return out;
}

}  // namespace slslab
