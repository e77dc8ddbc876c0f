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


#include "slslab/expansions.hpp"

#include <cmath>
#include <limits>

#include "slslab/errors.hpp"

namespace slslab {

double ExpansionReport::ratio() const {
  if (rhs > 0) return lhs / rhs;
  return lhs <= kAbsoluteSlack ? 0.0 : std::numeric_limits<double>::infinity();
}

ExpansionReport MakeReport(std::string name, double lhs, double rhs,
                           bool on_omega, bool applicable) {
  ExpansionReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.on_omega = on_omega;
  r.applicable = applicable;
  r.satisfied = !on_omega || lhs <= rhs * (1.0 + 1e-10) + kAbsoluteSlack;
  return r;
}

double NuisanceNormValue(const Vector& w, const Vector& h, NuisanceNorm norm) {
  if (w.size() == 0) return 0.0;
  const Vector hw = h.cwiseProduct(w);
  return norm == NuisanceNorm::kSup ? hw.cwiseAbs().maxCoeff() : hw.norm();
}

// ---------------------------------------------------------------------------
// Full-model statements.

FullModelSetting full_model_setting(const SlsModel& model, double x,
                                    double radius_factor, int num_directions,
                                    std::uint64_t seed) {
  FullModelSetting s;
  s.bundle = fisher_bundle(model, model.truth(), std::nullopt);
  s.spec = deviation_spec(s.bundle, x);
  s.constants = smoothness_constants(model, s.bundle, s.spec, radius_factor,
                                     num_directions, seed);
  s.conditions = condition_report_3s(s.bundle, s.spec, s.constants,
                                     model.sample_size());
  // kappa, r >= 1.5 r_D and tau3 kappa^2 r_D < 4/9; the rest is informative.
  s.applicable = s.conditions[0].pass && s.conditions[1].pass && s.conditions[2].pass;
  return s;
}

bool on_omega(const FullModelSetting& s, const Vector& score) {
  const Vector w = s.bundle.d.cwiseProduct(s.bundle.fisher_pinv * score);
  return w.norm() <= s.spec.r_d;
}

double gauge_operator_norm(const Matrix& q, const FisherBundle& bundle) {
  const Matrix m = q * bundle.fisher_pinv * bundle.d.asDiagonal();
  if (bundle.gauge == Gauge::kFree) return SpectralNorm(m);
  return SpectralNorm(m * OrthogonalComplement(bundle.d));
}

namespace {

double ScoreNorm(const FullModelSetting& s, const Vector& score) {
  return s.bundle.d.cwiseProduct(s.bundle.fisher_pinv * score).norm();
}

}  // namespace

std::vector<ExpansionReport> concentration_check(const Vector& estimate,
                                                 const Vector& truth,
                                                 const FullModelSetting& s,
                                                 bool omega) {
  const Vector u = estimate - truth;
  const double r = s.constants.r_loc;
  const double fisher_norm = std::sqrt(std::max(0.0, u.dot(s.bundle.fisher * u)));
  const double d_norm = s.bundle.d.cwiseProduct(u).norm();
  return {
      MakeReport("concentration_fisher", fisher_norm, 4.0 / 3.0 * r, omega,
                 s.applicable),
      MakeReport("concentration_d", d_norm, 4.0 * s.bundle.kappa / 3.0 * r, omega,
                 s.applicable),
  };
}

ExpansionReport fisher_residual(const Vector& estimate, const Vector& truth,
                                const FullModelSetting& s, const Vector& score,
                                bool omega) {
  const Vector w = estimate - truth - s.bundle.fisher_pinv * score;
  const double lhs =
      (s.bundle.fisher * w).cwiseQuotient(s.bundle.d).norm();
  const double sn = ScoreNorm(s, score);
  const double rhs = 3.0 * s.constants.tau3 / 4.0 * sn * sn;
  return MakeReport("fisher_residual", lhs, rhs, omega, s.applicable);
}

ExpansionReport wilks_residual(double loglik_estimate, double loglik_truth,
                               const FullModelSetting& s, const Vector& score,
                               bool omega) {
  const double quad = score.dot(s.bundle.fisher_pinv * score);
  const double lhs = std::abs(2.0 * (loglik_estimate - loglik_truth) - quad);
  const double sn = ScoreNorm(s, score);
  const double rhs = s.constants.tau3 / 2.0 * sn * sn * sn;
  return MakeReport("wilks_residual", lhs, rhs, omega, s.applicable);
}

ExpansionReport pac_loss_residual(const Matrix& q, const std::string& name,
                                  const Vector& estimate, const Vector& truth,
                                  const FullModelSetting& s, const Vector& score,
                                  bool omega) {
  const Vector w = estimate - truth - s.bundle.fisher_pinv * score;
  const double lhs = (q * w).norm();
  const double sn = ScoreNorm(s, score);
  const double rhs =
      gauge_operator_norm(q, s.bundle) * (3.0 * s.constants.tau3 / 4.0) * sn * sn;
  return MakeReport("pac_" + name, lhs, rhs, omega, s.applicable);
}

std::vector<NamedMap> default_q_maps(const FisherBundle& bundle,
                                     const std::vector<Index>& selectors) {
  const Index p = bundle.dim();
  std::vector<NamedMap> out;
  out.push_back({"identity", Matrix::Identity(p, p)});
  out.push_back({"d", Matrix(bundle.d.asDiagonal())});
  out.push_back({"fisher", bundle.d.cwiseInverse().asDiagonal() * bundle.fisher});
  for (Index j : selectors) {
    if (j < 0 || j >= p) throw InputError("selector index out of range");
    Matrix e = Matrix::Zero(1, p);
    e(0, j) = 1.0;
    out.push_back({"coord_" + std::to_string(j), e});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coordinate-wise statements.

Matrix delta_matrix(const Matrix& fisher, const Vector& d) {
  const Vector dinv = d.cwiseInverse();
  Matrix delta = -(dinv.asDiagonal() * fisher * dinv.asDiagonal());
  for (Index j = 0; j < d.size(); ++j) {
    // Exact zero when D_j = sqrt(F_jj).
    delta(j, j) = std::sqrt(fisher(j, j)) == d(j) ? 0.0 : 1.0 + delta(j, j);
  }
  return delta;
}

std::vector<ExpansionReport> supnorm_residuals(const Vector& estimate,
                                               const Vector& truth,
                                               const Matrix& fisher,
                                               const Matrix& fisher_pinv,
                                               const Vector& d, const Vector& a,
                                               const SupNormConstants& c,
                                               bool omega) {
  const Vector u = estimate - truth;
  const Vector da = a.cwiseQuotient(d);  // D^{-1} a
  const double s = da.cwiseAbs().maxCoeff();
  const bool ok = c.applicable && c.rho < 1.0;
  const double one_r = 1.0 - c.rho;
  auto sup = [](const Vector& v) { return v.cwiseAbs().maxCoeff(); };

  const Vector du = d.cwiseProduct(u);
  const double second = c.delta_inf / one_r * s * s;
  const Vector corrected = da + delta_matrix(fisher, d) * da;
  std::vector<ExpansionReport> out;
  out.push_back(MakeReport("supnorm_concentration", sup(du), c.r_inf, omega, ok));
  out.push_back(MakeReport("supnorm_score_form", sup((fisher * u - a).cwiseQuotient(d)),
                           c.delta_inf * s * s, omega, ok));
  out.push_back(MakeReport("supnorm_fisher_form",
                           sup(d.cwiseProduct(u - fisher_pinv * a)), second, omega, ok));
  out.push_back(MakeReport("supnorm_first_order", sup(du - da),
                           second + c.rho / one_r * s, omega, ok));
  out.push_back(MakeReport("supnorm_delta_corrected", sup(du - corrected),
                           second + c.rho * c.rho / one_r * s, omega, ok));
  out.push_back(MakeReport("supnorm_componentwise", sup(du - da),
                           c.delta_inf / 2.0 * c.r_inf * c.r_inf +
                               c.rho / std::sqrt(2.0) * c.r_inf,
                           omega, ok));
  return out;
}

std::vector<ExpansionReport> supnorm_residuals(const Vector& estimate,
                                               const Vector& truth,
                                               const FisherBundle& bundle,
                                               const Vector& score,
                                               const SupNormConstants& c,
                                               bool omega) {
  return supnorm_residuals(estimate, truth, bundle.fisher, bundle.fisher_pinv,
                           bundle.d, score, c, omega);
}

SupNormConstants supnorm_setting(const SlsModel& model, const Matrix& fisher,
                                 const Vector& d, const Vector& a) {
  const RhoReport rho = rho_dual(fisher, d);
  const double score_inf = a.cwiseQuotient(d).cwiseAbs().maxCoeff();
  if (!rho.applicable) {
    SupNormConstants c;
    c.rho = rho.rho_exact;
    c.score_inf = score_inf;
    c.r_inf = c.delta_b = c.delta_n = c.delta_inf =
        std::numeric_limits<double>::infinity();
    c.conditions = {AtMost("rho", rho.rho_exact, 1.0)};
    c.applicable = false;
    return c;
  }
  const double r_inf = supnorm_radius(rho.rho_exact, score_inf);
  const SupNormSmoothness sm = supnorm_smoothness(model, model.truth(), d, r_inf);
  if (!sm.certified) {
    SupNormConstants c;
    c.rho = rho.rho_exact;
    c.score_inf = score_inf;
    c.r_inf = r_inf;
    c.delta_inf = std::numeric_limits<double>::infinity();
    c.conditions = {{"box_constants_certified", 0.0, 1.0, false}};
    return c;
  }
  return supnorm_constants(rho.rho_exact, sm.delta12, sm.delta21, sm.tau3, score_inf);
}

// ---------------------------------------------------------------------------
// Perturbed objectives.

PerturbationSpec PerturbationSpec::Linear(Vector a) {
  PerturbationSpec s;
  s.kind = Kind::kLinear;
  s.a = std::move(a);
  return s;
}

PerturbationSpec PerturbationSpec::Ridge(Index p, double lambda) {
  PerturbationSpec s;
  s.kind = Kind::kSeparable;
  s.curvature = Vector::Constant(p, lambda);
  s.center = Vector::Zero(p);
  return s;
}

Vector PerturbationSpec::m_vector(const Vector& truth) const {
  if (kind == Kind::kLinear) return a;
  return -curvature.cwiseProduct(truth - center);
}

namespace {

// supnorm_* -> perturbed_*
void RenamePerturbed(std::vector<ExpansionReport>& reports) {
  for (auto& r : reports) r.name = "perturbed_" + r.name.substr(r.name.find('_') + 1);
}

}  // namespace

PerturbedResult perturbed_argmax_reports(const SlsModel& model,
                                         const PerturbationSpec& perturbation,
                                         const SolverConfig& cfg) {
  const Vector& truth = model.truth();
  const Index p = model.dim();
  const Matrix f = -model.f_eval(truth).hessian;
  PerturbedResult res;

  if (perturbation.kind == PerturbationSpec::Kind::kLinear) {
    if (perturbation.a.size() != p) throw InputError("perturbation length mismatch");
    const Vector a = ProjectToGauge(perturbation.a, model.gauge());
    const Objective g = [&](const Vector& v) {
      ModelEval e = model.f_eval(v);
      e.value += a.dot(v);
      e.gradient += a;
      return e;
    };
    const SolveResult sol =
        maximize_concave(g, ScoreVector{truth, model.gauge(), {}}, cfg);
    const Matrix pinv = GaugePinv(f, model.gauge());
    res.argmax = sol.argmax.values;
    res.d = f.diagonal().cwiseSqrt();
    res.prediction = truth + pinv * a;
    res.constants = supnorm_setting(model, f, res.d, a);
    res.reports = supnorm_residuals(res.argmax, truth, f, pinv, res.d, a,
                                    res.constants, true);
    RenamePerturbed(res.reports);
    return res;
  }

  const Vector& c = perturbation.curvature;
  const Vector& ctr = perturbation.center;
  if (c.size() != p || ctr.size() != p) throw InputError("perturbation length mismatch");
  if (c.minCoeff() < 0) {
    throw ConcavityError("separable perturbation must be concave (t'' <= 0)");
  }
  const Objective g = [&](const Vector& v) {
    ModelEval e = model.f_eval(v);
    const Vector dv = v - ctr;
    e.value -= 0.5 * dv.dot(c.cwiseProduct(dv));
    e.gradient -= c.cwiseProduct(dv);
    e.hessian.diagonal() -= c;
    return e;
  };
  const SolveResult sol = maximize_concave(g, ScoreVector{truth, Gauge::kFree, {}}, cfg);
  const Vector m = perturbation.m_vector(truth);
  Matrix fg = f;
  fg.diagonal() += c;
  const Matrix pinv = GaugePinv(fg, Gauge::kFree);
  res.argmax = sol.argmax.values;
  // Metric at the perturbed maximizer: D_j^2 = F_jj(v°) - t_j''.
  res.d = ((-model.f_eval(res.argmax).hessian).diagonal() + c).cwiseSqrt();
  res.prediction = truth + pinv * m;
  res.constants = supnorm_setting(model, fg, res.d, m);
  res.reports = supnorm_residuals(res.argmax, truth, fg, pinv, res.d, m,
                                  res.constants, true);
  RenamePerturbed(res.reports);
  return res;
}

// ---------------------------------------------------------------------------
// Semiparametric statements.

namespace {

Vector NuisanceOf(const Vector& v, const Partition& part) {
  return Select(v, part.nuisance);
}

Vector TargetOf(const Vector& v, const Partition& part) {
  return Select(v, part.target);
}

SolveResult PartialOfF(const SlsModel& model, const FisherBundle& bundle,
                       const Vector& base) {
  const Objective f = [&model](const Vector& v) { return model.f_eval(v); };
  SolverConfig cfg;
  cfg.grad_tol = 1e-11 * std::max(1.0, bundle.f_tt.diagonal().maxCoeff());
  return partial_maximize(f, base, bundle.partition->target, cfg);
}

}  // namespace

SemiparamBiasResult semiparam_bias(const SlsModel& model,
                                   const FisherBundle& bundle,
                                   const Vector& eta, const PluginConstants& c,
                                   const Matrix& q) {
  if (!bundle.partition) throw InputError("semiparametric bias needs a partition");
  const Partition& part = *bundle.partition;
  const Vector& truth = model.truth();
  const Vector w = eta - NuisanceOf(truth, part);
  const Vector theta_star = TargetOf(truth, part);
  const Vector& dt = bundle.d_target;

  Vector base = truth;
  for (size_t m = 0; m < part.nuisance.size(); ++m) base(part.nuisance[m]) = eta(m);
  const SolveResult sol = PartialOfF(model, bundle, base);

  SemiparamBiasResult res;
  res.theta_eta = TargetOf(sol.argmax.values, part);
  res.linear_bias = -bundle.f_tt_inv * (bundle.f_tn * w);
  res.nuisance_dev = NuisanceNormValue(w, bundle.h, c.norm);

  const double k = c.kappa;
  const bool in_set = res.nuisance_dev <= c.r_circ * (1.0 + 1e-12) + 1e-15;
  const bool ok = c.applicable && in_set;
  const double one_b = 1.0 - c.delta_b;
  const Vector bias = res.theta_eta - theta_star;
  const double qn = SpectralNorm(q * bundle.f_tt_inv * dt.asDiagonal());

  res.reports.push_back(MakeReport(
      "semiparam_concentration", dt.cwiseProduct(bias).norm(),
      1.5 * k * k * k * c.rho2 * res.nuisance_dev / one_b, true, ok));
  res.reports.push_back(MakeReport(
      "semiparam_linearization", (q * (bias - res.linear_bias)).norm(),
      qn * c.delta_n_fixed * res.nuisance_dev * res.nuisance_dev, true, ok));

  // Bias expansion in Fisher form around theta_eta.
  const ModelEval at_star = model.f_eval(base);
  const ModelEval at_eta = model.f_eval(sol.argmax.values);
  const Vector a_eta = Select(at_star.gradient, part.target);
  const Matrix f_eta = -Select(at_eta.hessian, part.target, part.target);
  const Vector step = f_eta.llt().solve(a_eta);
  const double tau = c.tau3.value;
  const double sn = dt.cwiseProduct(step).norm();
  res.reports.push_back(MakeReport(
      "semiparam_bias_fisher",
      (f_eta * (bias - step)).cwiseQuotient(dt).norm(), 0.75 * tau * sn * sn,
      true, ok));
  res.reports.push_back(MakeReport(
      "semiparam_bias_value",
      std::abs(2.0 * (at_eta.value - at_star.value) - a_eta.dot(step)),
      2.5 * tau * sn * sn * sn, true, ok));
  return res;
}

PluginExpansionResult plugin_expansion(const SlsModel& model,
                                       const FisherBundle& bundle,
                                       const PluginConstants& c,
                                       const Vector& theta_hat,
                                       const Vector& score, const Matrix& q) {
  if (!bundle.partition) throw InputError("plug-in expansion needs a partition");
  const Partition& part = *bundle.partition;
  const Vector& truth = model.truth();
  const Vector& dt = bundle.d_target;
  const Matrix& finv = bundle.f_tt_inv;

  const Vector w = NuisanceOf(theta_hat, part) - NuisanceOf(truth, part);
  const Vector u = TargetOf(theta_hat, part) - TargetOf(truth, part);
  const Vector g = TargetOf(score, part);
  const Vector fg = finv * g;
  const Vector fbias = finv * (bundle.f_tn * w);

  PluginExpansionResult res;
  res.nuisance_dev = NuisanceNormValue(w, bundle.h, c.norm);
  res.score_norm = dt.cwiseProduct(fg).norm();
  res.on_omega = res.score_norm <= c.target_spec.z;
  res.bias_magnitude = (q * fbias).norm();
  res.variance_magnitude = (q * fg).norm();

  const double k = c.kappa;
  const double one_b = 1.0 - c.delta_b;
  const double d21 = c.delta21.value;
  const double tau = c.tau3.value;
  const double hd = res.nuisance_dev, sn = res.score_norm;
  const bool in_set = hd <= c.r_circ * (1.0 + 1e-12) + 1e-15;
  const bool ok = c.applicable && in_set;
  const double qn = SpectralNorm(q * finv * dt.asDiagonal());
  const bool omega = res.on_omega;

  res.reports.push_back(MakeReport("plugin_concentration", dt.cwiseProduct(u).norm(),
                                   1.5 * k / one_b * (k * k * c.rho2 * hd + sn),
                                   omega, ok));
  res.reports.push_back(MakeReport(
      "plugin_fisher_expansion", (q * (u + fbias - fg)).norm(),
      qn * ((c.delta_n_plugin + k * d21) * hd * hd +
            (2.0 * tau + d21 / (2.0 * k)) * sn * sn),
      omega, ok));

  // Uniform partial expansion around theta*(eta_hat) with F(eta_hat).
  Vector base = truth;
  for (size_t m = 0; m < part.nuisance.size(); ++m) {
    base(part.nuisance[m]) = theta_hat(part.nuisance[m]);
  }
  const SolveResult star_eta = PartialOfF(model, bundle, base);
  const Matrix f_eta = -Select(model.f_eval(star_eta.argmax.values).hessian,
                               part.target, part.target);
  const Vector fg_eta = f_eta.llt().solve(g);
  const Vector theta_star_eta = TargetOf(star_eta.argmax.values, part);
  const double om = c.omega;
  const bool om_ok = ok && om < 1.0;
  const double one_w = 1.0 - om;
  res.reports.push_back(MakeReport(
      "partial_uniform_expansion",
      (q * (TargetOf(theta_hat, part) - theta_star_eta - fg_eta)).norm(),
      om_ok ? qn * 0.75 * tau / std::pow(one_w, 1.5) * sn * sn
            : std::numeric_limits<double>::infinity(),
      omega, om_ok));
  res.reports.push_back(MakeReport(
      "partial_fisher_variation", (q * (fg_eta - fg)).norm(),
      om_ok ? qn * om / one_w * sn : std::numeric_limits<double>::infinity(),
      omega, om_ok));

  res.reports.push_back(MakeReport(
      "orthogonal_fisher_expansion",
      (bundle.f_tt * (u - fg)).cwiseQuotient(dt).norm(), 0.75 * tau * sn * sn,
      omega, ok && c.semi_orthogonal));
  return res;
}

}  // namespace slslab
