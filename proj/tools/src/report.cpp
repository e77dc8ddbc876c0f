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


#include "report.hpp"

#include <cmath>
#include <fstream>

namespace slslab::cli {
namespace {

// NaN and infinities have no JSON literal; they are written as null.
Json Num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json ToJson(const Vector& v) {
  Json a = Json::array();
  for (Index k = 0; k < v.size(); ++k) a.push_back(Num(v(k)));
  return a;
}

Json ToJson(const Condition& c) {
  return Json{{"name", c.name}, {"value", Num(c.value)},
              {"threshold", Num(c.threshold)}, {"pass", c.pass}};
}

Json ToJson(const std::vector<Condition>& cs) {
  Json a = Json::array();
  for (const auto& c : cs) a.push_back(ToJson(c));
  return a;
}

Json ToJson(const Certificate& c) {
  return Json{{"value", Num(c.value)},     {"analytic", Num(c.analytic)},
              {"sampled", Num(c.sampled)}, {"certified", c.certified},
              {"dominant", c.dominant}};
}

Json ToJson(const ExpansionReport& r) {
  return Json{{"name", r.name},         {"lhs", Num(r.lhs)},
              {"rhs", Num(r.rhs)},      {"ratio", Num(r.ratio())},
              {"on_omega", r.on_omega}, {"applicable", r.applicable},
              {"satisfied", r.satisfied}};
}

Json ToJson(const std::vector<ExpansionReport>& rs) {
  Json a = Json::array();
  for (const auto& r : rs) a.push_back(ToJson(r));
  return a;
}

Json ToJson(const RateSummary& r) {
  return Json{{"name", r.name},
              {"evaluated", r.evaluated},
              {"applicable", r.applicable},
              {"violations", r.violations},
              {"rate", Num(r.rate)},
              {"se", Num(r.se)},
              {"max_ratio", Num(r.max_ratio)},
              {"mean_lhs", Num(r.mean_lhs)},
              {"mean_rhs", Num(r.mean_rhs)}};
}

Json ToJson(const RiskSummary& r) {
  return Json{{"q", r.q_name},
              {"r_q", Num(r.r_q)},
              {"c4", Num(r.c4)},
              {"alpha_q", Num(r.alpha)},
              {"risk_bracket", {Num(r.lower), Num(r.upper)}},
              {"empirical", Num(r.empirical)},
              {"empirical_se", Num(r.empirical_se)},
              {"bracket_width", Num(r.bracket_width)},
              {"bracket_applicable", r.bracket_applicable},
              {"se_ok", r.se_ok},
              {"contained", r.contained},
              {"first_moment", Num(r.first_moment)},
              {"first_moment_rhs", Num(r.first_moment_rhs)},
              {"first_moment_se", Num(r.first_moment_se)},
              {"first_moment_ok", r.first_moment_ok}};
}

Json ToJson(const PluginRiskSummary& r) {
  return Json{{"pilot", r.pilot},
              {"r_circ", Num(r.r_circ)},
              {"r_q", Num(r.r_q)},
              {"p_d", Num(r.p_d)},
              {"p_h", Num(r.p_h)},
              {"c_h", Num(r.c_h)},
              {"c_d", Num(r.c_d)},
              {"empirical_risk", Num(r.empirical_risk)},
              {"oracle_risk", Num(r.oracle_risk)},
              {"lhs", Num(r.lhs)},
              {"rhs", Num(r.rhs)},
              {"within", r.within},
              {"bias_variance_split", {{"bias_rms", Num(r.bias_rms)},
                                       {"variance_rms", Num(r.variance_rms)}}},
              {"inflation", Num(r.inflation)},
              {"inflation_se", Num(r.inflation_se)},
              {"inflation_bound", Num(r.inflation_bound)},
              {"adaptivity_ratio", Num(r.adaptivity_ratio)},
              {"remainder_ratio", Num(r.remainder_ratio)},
              {"omega_coverage", Num(r.omega_coverage)},
              {"conditions", ToJson(r.conditions)}};
}

Json ToJson(const PluginConstants& c) {
  return Json{{"nuisance_norm", c.norm == NuisanceNorm::kSup ? "sup" : "l2"},
              {"r_circ", Num(c.r_circ)},
              {"kappa", Num(c.kappa)},
              {"rho_star", Num(c.rho_star)},
              {"rho2", Num(c.rho2)},
              {"delta12", ToJson(c.delta12)},
              {"delta21", ToJson(c.delta21)},
              {"tau3", ToJson(c.tau3)},
              {"delta_b", Num(c.delta_b)},
              {"delta_n_fixed", Num(c.delta_n_fixed)},
              {"delta_n_plugin", Num(c.delta_n_plugin)},
              {"bias_radius", Num(c.bias_radius)},
              {"r_loc", Num(c.r_loc)},
              {"omega", Num(c.omega)},
              {"omega_sampled", Num(c.omega_sampled)},
              {"semi_orthogonal", c.semi_orthogonal},
              {"target_z", Num(c.target_spec.z)},
              {"target_p_d", Num(c.target_spec.p_d)},
              {"conditions", ToJson(c.conditions)},
              {"applicable", c.applicable}};
}

Json ToJson(const McSummary& s) {
  Json reports = Json::array();
  for (const auto& r : s.reports) reports.push_back(ToJson(r));
  Json risks = Json::array();
  for (const auto& r : s.risks) risks.push_back(ToJson(r));
  Json j{{"replications", s.replications},
         {"used", s.used},
         {"divergent", s.divergent},
         {"divergent_rate", Num(s.divergent_rate)},
         {"unreliable", s.unreliable},
         {"x", Num(s.x)},
         {"r_d", Num(s.r_d)},
         {"omega_coverage", Num(s.omega_coverage)},
         {"omega_se", Num(s.omega_se)},
         {"omega_floor", Num(s.omega_floor)},
         {"coverage_ok", s.coverage_ok},
         {"constants", {{"tau3", Num(s.tau3)},
                        {"kappa", Num(s.kappa)},
                        {"rho", Num(s.rho)},
                        {"rho_exact", Num(s.rho_exact)},
                        {"r_loc", Num(s.r_loc)},
                        {"p_d", Num(s.p_d)}}},
         {"conditions", ToJson(s.conditions)},
         {"theory_applicable", s.theory_applicable},
         {"supnorm_applicable", s.supnorm_applicable},
         {"mean_score_inf", Num(s.mean_score_inf)},
         {"supnorm_relative_residual", Num(s.supnorm_relative_residual)},
         {"delta_corrected_win_rate", Num(s.delta_corrected_win_rate)},
         {"reports", reports},
         {"total_violations", s.total_violations},
         {"deterministic_audits_pass", s.deterministic_audits_pass()},
         {"risks", risks}};
  j["plugin"] = s.plugin ? ToJson(*s.plugin) : Json(nullptr);
  return j;
}

Json DiagnosticsJson(const FullModelSetting& s, const SupNormSmoothness* sup,
                     const PluginConstants* plugin) {
  const FisherBundle& b = s.bundle;
  const DeviationSpec& d = s.spec;
  const SmoothnessConstants& c = s.constants;
  Json fisher{{"dim", b.dim()},
              {"gauge", b.gauge == Gauge::kSumZero ? "sum_zero" : "free"},
              {"kappa", Num(b.kappa)},
              {"d", ToJson(b.d)},
              {"p_g", Num(d.p_g)},
              {"p_d", Num(d.p_d)},
              {"p_h", Num(d.p_h)}};
  if (b.partition) {
    fisher["kappa_target"] = Num(b.kappa_target);
    fisher["d_target"] = ToJson(b.d_target);
    fisher["h"] = ToJson(b.h);
  }
  Json radii{{"x", Num(d.x)},         {"z", Num(d.z)},
             {"envelope", Num(d.envelope)}, {"r_d", Num(d.r_d)},
             {"r_inf", Num(d.r_inf)}, {"r_loc", Num(c.r_loc)},
             {"omega_prob", Num(d.omega_prob)}};
  Json constants{{"tau3", ToJson(c.tau3_cert)},
                 {"tau4", ToJson(c.tau4_cert)},
                 {"c3", Num(c.c3)},
                 {"c4", Num(c.c4)},
                 {"rho", Num(c.rho.rho)},
                 {"rho_exact", Num(c.rho.rho_exact)},
                 {"rho_per_coordinate", ToJson(c.rho.per_j)}};
  if (sup) {
    constants["supnorm"] = {{"tau3", Num(sup->tau3)},
                            {"delta12", Num(sup->delta12)},
                            {"delta21", Num(sup->delta21)},
                            {"certified", sup->certified}};
  }
  if (plugin) constants["plugin"] = ToJson(*plugin);
  std::vector<Condition> conditions = s.conditions;
  if (plugin) {
    conditions.insert(conditions.end(), plugin->conditions.begin(), plugin->conditions.end());
  }
  return Json{{"fisher", fisher},
              {"radii", radii},
              {"constants", constants},
              {"conditions", ToJson(conditions)}};
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SlsError("cannot write '" + path + "'");
  out << text;
  if (!out) throw SlsError("write failed for '" + path + "'");
}

}  // namespace slslab::cli
