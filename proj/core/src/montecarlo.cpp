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


#include "slslab/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <thread>

#include "slslab/errors.hpp"
#include "slslab/rng.hpp"

namespace slslab {

std::string PilotRule::ToString() const {
  switch (kind) {
    case PilotKind::kTrueNuisance:
      return "true";
    case PilotKind::kFullMleNuisance:
      return "mle";
    case PilotKind::kNoisyTrue: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof(buf), radius);
      return "noisy:" + std::string(buf, res.ptr);
    }
  }
  return "true";
}

PilotRule PilotRule::Parse(const std::string& text) {
  PilotRule r;
  if (text == "true") return r;
  if (text == "mle") {
    r.kind = PilotKind::kFullMleNuisance;
    return r;
  }
  if (text.rfind("noisy:", 0) == 0) {
    r.kind = PilotKind::kNoisyTrue;
    char* end = nullptr;
    const std::string num = text.substr(6);
    r.radius = std::strtod(num.c_str(), &end);
    if (num.empty() || *end != '\0' || !(r.radius >= 0)) {
      throw InputError("bad pilot radius in '" + text + "'");
    }
    return r;
  }
  throw InputError("unknown pilot rule '" + text + "' (true|mle|noisy:<r>)");
}

void McConfig::Validate() const {
  if (replications < 1) throw InputError("replications must be >= 1");
  if (!std::isnan(x) && !(x > 0)) throw InputError("x must be positive");
  if (radius_factor < 1.5) throw InputError("radius_factor must be >= 1.5");
  if (num_directions < 1) throw InputError("num_directions must be >= 1");
  if (threads < 0) throw InputError("threads must be >= 0");
  for (const auto& name : q_maps) {
    if (name != "identity" && name != "d" && name != "fisher") {
      throw InputError("unknown q map '" + name + "'");
    }
  }
  for (Index j : q_selectors) {
    if (j < 0 || (num_players > 0 && j >= num_players)) {
      throw InputError("q selector " + std::to_string(j) + " out of range");
    }
  }
  solver.Validate();
}

int ResolveThreads(int requested) {
  int n = requested > 0 ? requested
                        : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SLSLAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return std::max(1, n);
}

// ---------------------------------------------------------------------------
// Risk statements.

RiskSummary risk_audit(const std::string& q_name,
                       const std::vector<RiskSample>& samples, double q_norm,
                       double tau3, double p_d) {
  RiskSummary r;
  r.q_name = q_name;
  const double n = static_cast<double>(samples.size());
  if (samples.empty()) return r;
  double lin = 0, loss = 0, loss2 = 0, four = 0, first = 0, first2 = 0;
  for (const auto& s : samples) {
    if (!s.on_omega) continue;
    lin += s.lin_sq;
    loss += s.loss_sq;
    loss2 += s.loss_sq * s.loss_sq;
    four += s.score_sq * s.score_sq;
    const double l1 = std::sqrt(s.loss_sq);
    first += l1;
    first2 += l1 * l1;
  }
  r.r_q = lin / n;
  r.empirical = loss / n;
  r.empirical_se = std::sqrt(std::max(0.0, loss2 / n - r.empirical * r.empirical) / n);
  r.c4 = p_d > 0 ? std::sqrt(four / n) / p_d : 0.0;
  r.alpha = r.r_q > 0 ? q_norm * 0.75 * tau3 * r.c4 * p_d / std::sqrt(r.r_q)
                      : std::numeric_limits<double>::infinity();
  r.lower = (1.0 - r.alpha) * (1.0 - r.alpha) * r.r_q;
  r.upper = (1.0 + r.alpha) * (1.0 + r.alpha) * r.r_q;
  r.bracket_width = r.upper - r.lower;
  r.bracket_applicable = r.alpha < 1.0;
  r.se_ok = r.empirical_se < 0.1 * r.bracket_width;
  const double tol = 1e-12 * std::max(1.0, r.r_q);
  r.contained = r.bracket_applicable && r.lower - tol <= r.empirical &&
                r.empirical <= r.upper + tol;
  r.first_moment = first / n;
  r.first_moment_se =
      std::sqrt(std::max(0.0, first2 / n - r.first_moment * r.first_moment) / n);
  r.first_moment_rhs = std::sqrt(r.r_q) + q_norm * 0.75 * tau3 * p_d;
  r.first_moment_ok = r.first_moment <= r.first_moment_rhs + 3.0 * r.first_moment_se;
  return r;
}

PluginRiskSummary plugin_risk_audit(const std::vector<PluginRiskSample>& samples,
                                    const PluginConstants& c, double q_norm,
                                    double sample_size) {
  PluginRiskSummary r;
  r.r_circ = c.r_circ;
  r.conditions = c.conditions;
  const double n = static_cast<double>(samples.size());
  if (samples.empty()) return r;
  double lin = 0, loss = 0, oracle = 0, h2 = 0, h4 = 0, s4 = 0, b2 = 0, v2 = 0;
  double diff2 = 0;
  int on = 0;
  for (const auto& s : samples) {
    if (!s.on_omega) continue;
    ++on;
    lin += s.lin_sq;
    loss += s.loss_sq;
    oracle += s.oracle_sq;
    diff2 += (s.loss_sq - s.oracle_sq) * (s.loss_sq - s.oracle_sq);
    const double hh = s.nuisance_dev * s.nuisance_dev;
    h2 += hh;
    h4 += hh * hh;
    s4 += std::pow(s.score_norm, 4);
    b2 += s.bias_sq;
    v2 += s.var_sq;
  }
  r.omega_coverage = on / n;
  r.r_q = lin / n;
  r.empirical_risk = loss / n;
  r.oracle_risk = oracle / n;
  r.p_d = c.target_spec.p_d;
  r.p_h = h2 / n;
  r.c_h = r.p_h > 0 ? std::sqrt(h4 / n) / r.p_h : 0.0;
  r.c_d = r.p_d > 0 ? std::sqrt(s4 / n) / r.p_d : 0.0;
  const double k = c.kappa;
  const double d21 = c.delta21.value;
  r.rhs = q_norm * ((c.delta_n_plugin + k * d21) * r.c_h * r.p_h +
                    (2.0 * c.tau3.value + d21 / (2.0 * k)) * r.c_d * r.p_d);
  r.lhs = std::abs(std::sqrt(r.empirical_risk) - std::sqrt(r.r_q));
  r.within = r.lhs <= r.rhs * (1.0 + 1e-10) + kAbsoluteSlack;
  r.inflation = std::sqrt(r.empirical_risk) - std::sqrt(r.oracle_risk);
  const double mean_diff = r.empirical_risk - r.oracle_risk;
  const double diff_se = std::sqrt(std::max(0.0, diff2 / n - mean_diff * mean_diff) / n);
  const double denom = std::sqrt(r.empirical_risk) + std::sqrt(r.oracle_risk);
  r.inflation_se = denom > 0 ? diff_se / denom : 0.0;
  r.bias_rms = std::sqrt(b2 / n);
  r.variance_rms = std::sqrt(v2 / n);
  r.adaptivity_ratio = r.p_d > 0 ? c.rho_star * c.r_circ / std::sqrt(r.p_d) : 0.0;
  r.remainder_ratio =
      r.p_d > 0 ? (r.p_d + r.p_h) / std::sqrt(sample_size) / std::sqrt(r.p_d) : 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Replication loop.

namespace {

struct Replication {
  bool used = false;
  bool divergent = false;
  bool on_omega = false;
  double score_inf = 0.0;
  double score_form_ratio = 0.0;
  bool corrected_wins = false;
  std::vector<ExpansionReport> reports;
  std::vector<RiskSample> risk;  // one per Q map
  PluginRiskSample plugin;
};

struct Shared {
  const SlsModel* model;
  const McConfig* cfg;
  FullModelSetting setting;
  std::vector<NamedMap> maps;
  std::vector<double> map_norms;
  std::optional<PluginConstants> plugin;
  std::optional<FisherBundle> plugin_bundle;
  Matrix plugin_q;
  double x = 0.0;
};

Replication RunOne(const Shared& sh, int k, const Realization& real,
                   SolveResult* fit_out = nullptr) {
  const SlsModel& model = *sh.model;
  const McConfig& cfg = *sh.cfg;
  const Vector& truth = model.truth();
  const FisherBundle& b = sh.setting.bundle;
  Replication rep;

  const Objective loglik = [&](const Vector& v) { return model.loglik_eval(real, v); };
  SolveResult fit = maximize_concave(
      loglik, ScoreVector{Vector::Zero(model.dim()), model.gauge(), {}}, cfg.solver);
  if (real.data && !btl_mle_exists(*real.data)) {
    fit.converged = false;
    fit.diverged = true;
  }
  if (fit_out) *fit_out = fit;
  if (fit.diverged || !fit.converged) {
    rep.divergent = true;
    return rep;
  }
  rep.used = true;
  const Vector& est = fit.argmax.values;
  const Vector& score = real.score;
  const bool omega = on_omega(sh.setting, score);
  rep.on_omega = omega;

  for (auto& r : concentration_check(est, truth, sh.setting, omega)) rep.reports.push_back(r);
  rep.reports.push_back(fisher_residual(est, truth, sh.setting, score, omega));
  rep.reports.push_back(wilks_residual(fit.value, loglik(truth).value, sh.setting,
                                       score, omega));
  const Vector lin = b.fisher_pinv * score;
  const double score_sq = b.d.cwiseProduct(lin).squaredNorm();
  for (size_t m = 0; m < sh.maps.size(); ++m) {
    const Matrix& q = sh.maps[m].q;
    rep.reports.push_back(pac_loss_residual(q, sh.maps[m].name, est, truth,
                                            sh.setting, score, omega));
    rep.risk.push_back({omega, (q * (est - truth)).squaredNorm(),
                        (q * lin).squaredNorm(), score_sq});
  }

  const SupNormConstants sc = supnorm_setting(model, b.fisher, b.d, score);
  const auto sup = supnorm_residuals(est, truth, b, score, sc, omega);
  rep.score_inf = sc.score_inf;
  for (const auto& r : sup) {
    if (r.name == "supnorm_score_form" && sc.score_inf > 0) {
      rep.score_form_ratio = r.lhs / sc.score_inf;
    }
  }
  rep.corrected_wins = sup[4].lhs <= sup[3].lhs;
  rep.reports.insert(rep.reports.end(), sup.begin(), sup.end());

  if (sh.plugin) {
    const PluginConstants& pc = *sh.plugin;
    const FisherBundle& pb = *sh.plugin_bundle;
    const Partition& part = *pb.partition;
    Vector base = truth;
    switch (cfg.pilot.kind) {
      case PilotKind::kTrueNuisance:
        break;
      case PilotKind::kFullMleNuisance:
        for (Index m : part.nuisance) base(m) = est(m);
        break;
      case PilotKind::kNoisyTrue: {
        Rng rng(SubSeed(cfg.seed, kStreamPilot, k));
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (size_t m = 0; m < part.nuisance.size(); ++m) {
          base(part.nuisance[m]) += cfg.pilot.radius * unif(rng) / pb.h(m);
        }
        break;
      }
    }
    const SolveResult plug = partial_maximize(loglik, base, part.target, cfg.solver);
    const SolveResult oracle = partial_maximize(loglik, truth, part.target, cfg.solver);
    const PluginExpansionResult pe =
        plugin_expansion(model, pb, pc, plug.argmax.values, score, sh.plugin_q);
    rep.reports.insert(rep.reports.end(), pe.reports.begin(), pe.reports.end());

    const Vector theta_star = Select(truth, part.target);
    const Vector w = Select(Vector(plug.argmax.values - truth), part.nuisance);
    const Vector g = Select(score, part.target);
    PluginRiskSample& ps = rep.plugin;
    ps.on_omega = pe.on_omega;
    ps.loss_sq = (sh.plugin_q * (Select(plug.argmax.values, part.target) - theta_star))
                     .squaredNorm();
    ps.oracle_sq =
        (sh.plugin_q * (Select(oracle.argmax.values, part.target) - theta_star))
            .squaredNorm();
    ps.lin_sq = (sh.plugin_q * pb.f_tt_inv * (g - pb.f_tn * w)).squaredNorm();
    ps.bias_sq = pe.bias_magnitude * pe.bias_magnitude;
    ps.var_sq = pe.variance_magnitude * pe.variance_magnitude;
    ps.nuisance_dev = pe.nuisance_dev;
    ps.score_norm = pe.score_norm;
  }
  return rep;
}

Shared BuildShared(const SlsModel& model, const McConfig& cfg) {
  cfg.Validate();
  for (Index j : cfg.q_selectors) {
    if (j >= model.dim()) throw InputError("q selector " + std::to_string(j) + " out of range");
  }
  Shared sh;
  sh.model = &model;
  sh.cfg = &cfg;
  sh.x = std::isnan(cfg.x) ? default_x(model.sample_size()) : cfg.x;
  const double x = sh.x;
  sh.setting = full_model_setting(model, x, cfg.radius_factor, cfg.num_directions,
                                  SubSeed(cfg.seed, kStreamDirections, 0));
  const FisherBundle& b = sh.setting.bundle;
  for (const auto& m : default_q_maps(b, cfg.q_selectors)) {
    const bool wanted =
        std::find(cfg.q_maps.begin(), cfg.q_maps.end(), m.name) != cfg.q_maps.end() ||
        m.name.rfind("coord_", 0) == 0;
    if (wanted) {
      sh.maps.push_back(m);
      sh.map_norms.push_back(gauge_operator_norm(m.q, b));
    }
  }

  if (cfg.partition) {
    sh.plugin_bundle = fisher_bundle(model, model.truth(), cfg.partition);
    double r_circ = 0.0;
    if (cfg.pilot.kind == PilotKind::kNoisyTrue) {
      r_circ = cfg.pilot.radius;
    } else if (cfg.pilot.kind == PilotKind::kFullMleNuisance) {
      // A-priori sup-norm envelope of the full MLE; realized deviations
      // beyond it are reported as outside the nuisance set.
      r_circ = std::isfinite(sh.setting.spec.r_inf) ? sh.setting.spec.r_inf
                                                     : sh.setting.spec.r_d;
    }
    sh.plugin = plugin_constants(model, *sh.plugin_bundle, r_circ, cfg.nuisance_norm,
                                 x, cfg.num_directions,
                                 SubSeed(cfg.seed, kStreamDirections, 1));
    sh.plugin_q = Matrix(sh.plugin_bundle->d_target.asDiagonal());
  }

  return sh;
}

}  // namespace

RealizationResult evaluate_realization(const SlsModel& model, const McConfig& cfg,
                                       const Realization& realization) {
  const Shared sh = BuildShared(model, cfg);
  RealizationResult out;
  const Replication rep = RunOne(sh, 0, realization, &out.fit);
  out.on_omega = rep.on_omega;
  out.divergent = rep.divergent;
  out.reports = rep.reports;
  return out;
}

McSummary run_mc(const SlsModel& model, const McConfig& cfg) {
  const Shared sh = BuildShared(model, cfg);
  const double x = sh.x;
  const FisherBundle& b = sh.setting.bundle;
  const int reps = cfg.replications;
  std::vector<Replication> results(reps);
  const int workers = std::min(ResolveThreads(cfg.threads), reps);
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](int id) {
    try {
      for (int k = next++; k < reps; k = next++) {
        results[k] = RunOne(sh, k, model.simulate(SubSeed(cfg.seed, kStreamData, k)));
      }
    } catch (...) {
      errors[id] = std::current_exception();
      next = reps;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int id = 0; id < workers; ++id) pool.emplace_back(work, id);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Deterministic reduction in replication order.
  McSummary s;
  s.replications = reps;
  s.x = x;
  s.r_d = sh.setting.spec.r_d;
  s.omega_floor = 1.0 - 3.0 * std::exp(-x);
  s.tau3 = sh.setting.constants.tau3;
  s.kappa = b.kappa;
  s.rho = sh.setting.constants.rho.rho;
  s.rho_exact = sh.setting.constants.rho.rho_exact;
  s.r_loc = sh.setting.constants.r_loc;
  s.p_d = sh.setting.spec.p_d;
  s.conditions = sh.setting.conditions;
  s.theory_applicable = sh.setting.applicable;

  std::vector<std::string> order;
  std::map<std::string, RateSummary> rates;
  std::map<std::string, double> sum_lhs, sum_rhs;
  std::vector<std::vector<RiskSample>> risk(sh.maps.size());
  std::vector<PluginRiskSample> plugin_samples;
  int on = 0, wins = 0;
  double ratio_sum = 0.0, inf_sum = 0.0;
  for (int k = 0; k < reps; ++k) {
    const Replication& rep = results[k];
    if (rep.divergent) {
      ++s.divergent;
      continue;
    }
    ++s.used;
    on += rep.on_omega;
    inf_sum += rep.score_inf;
    ratio_sum += rep.score_form_ratio;
    wins += rep.corrected_wins;
    for (size_t m = 0; m < risk.size(); ++m) risk[m].push_back(rep.risk[m]);
    if (sh.plugin) plugin_samples.push_back(rep.plugin);
    for (const auto& r : rep.reports) {
      auto it = rates.find(r.name);
      if (it == rates.end()) {
        order.push_back(r.name);
        it = rates.emplace(r.name, RateSummary{}).first;
        it->second.name = r.name;
      }
      RateSummary& rs = it->second;
      if (r.applicable) ++rs.applicable;
      if (r.on_omega && r.applicable) {
        ++rs.evaluated;
        rs.violations += r.violated();
        rs.max_ratio = std::max(rs.max_ratio, r.ratio());
        sum_lhs[r.name] += r.lhs;
        sum_rhs[r.name] += r.rhs;
      }
      if (r.name == "supnorm_score_form" && r.applicable) ++s.supnorm_applicable;
      if (cfg.keep_raw) {
        s.raw.push_back({k, r.name, r.lhs, r.rhs, r.on_omega, r.applicable});
      }
    }
  }
  const double used = std::max(1, s.used);
  s.divergent_rate = static_cast<double>(s.divergent) / reps;
  s.unreliable = s.divergent_rate > 0.10;
  s.omega_coverage = on / used;
  s.omega_se = std::sqrt(s.omega_coverage * (1.0 - s.omega_coverage) / used);
  s.coverage_ok = s.omega_coverage >= s.omega_floor - 3.0 * s.omega_se;
  s.mean_score_inf = inf_sum / used;
  s.supnorm_relative_residual = ratio_sum / used;
  s.delta_corrected_win_rate = wins / used;
  for (const auto& name : order) {
    RateSummary rs = rates[name];
    if (rs.evaluated > 0) {
      const double ev = rs.evaluated;
      rs.rate = rs.violations / ev;
      rs.se = std::sqrt(rs.rate * (1.0 - rs.rate) / ev);
      rs.mean_lhs = sum_lhs[name] / ev;
      rs.mean_rhs = sum_rhs[name] / ev;
    }
    s.total_violations += rs.violations;
    s.reports.push_back(rs);
  }
  for (size_t m = 0; m < sh.maps.size(); ++m) {
    s.risks.push_back(risk_audit(sh.maps[m].name, risk[m], sh.map_norms[m], s.tau3, s.p_d));
  }
  if (sh.plugin) {
    const FisherBundle& pb = *sh.plugin_bundle;
    const double qn = SpectralNorm(sh.plugin_q * pb.f_tt_inv * pb.d_target.asDiagonal());
    s.plugin = plugin_risk_audit(plugin_samples, *sh.plugin, qn, model.sample_size());
    s.plugin->pilot = cfg.pilot.ToString();
    s.plugin->inflation_bound = s.plugin->bias_rms + s.plugin->rhs;
  }
  return s;
}

McSummary run_mc(const McConfig& cfg) {
  if (static_cast<Index>(cfg.true_scores.size()) != cfg.num_players) {
    throw InputError("true_scores length must equal num_players");
  }
  const BtlModel model(cfg.num_players, cfg.design, cfg.true_scores);
  return run_mc(model, cfg);
}

}  // namespace slslab
