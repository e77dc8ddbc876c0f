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


#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "report.hpp"
#include "slslab/errors.hpp"
#include "slslab/io.hpp"
#include "slslab/rng.hpp"

namespace slslab::cli {
namespace {

// Flags shared by every command. Each flag mirrors a config key.
struct Flags {
  std::string config;
  std::string out = ".";
  std::string data;
  std::optional<long long> num_players;
  std::optional<long long> seed;
  std::optional<double> x;
  std::optional<long long> replications;
  std::optional<std::string> pilot;
  std::vector<long long> target;
  std::optional<std::string> nuisance_norm;
  std::optional<long long> threads;
  std::optional<long long> num_directions;
  std::optional<double> radius_factor;
  std::optional<bool> keep_raw;
  std::optional<double> grad_tol;
  std::optional<long long> max_iters;
  std::optional<double> damping;
  std::optional<double> line_search;
  std::optional<double> r_circ;
  std::optional<double> ridge;
  long long rounds = 0;
};

void AddCommon(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--x", f.x, "deviation parameter x");
  app->add_option("--grad_tol", f.grad_tol, "solver gradient tolerance");
  app->add_option("--max_iters", f.max_iters, "solver iteration cap");
  app->add_option("--damping", f.damping, "solver initial step");
  app->add_option("--line_search", f.line_search, "solver backtracking factor");
}

void AddModel(CLI::App* app, Flags& f) {
  app->add_option("--target", f.target, "target indices, comma separated")->delimiter(',');
  app->add_option("--pilot", f.pilot, "pilot rule: true | mle | noisy:<r>");
  app->add_option("--nuisance_norm", f.nuisance_norm, "sup | l2");
  app->add_option("--num_directions", f.num_directions, "sampled witness directions");
  app->add_option("--radius_factor", f.radius_factor, "localization factor");
}

// Applies flag overrides to the config object.
void Override(Json& j, const Flags& f) {
  auto set = [&](const char* key, const auto& opt) {
    if (opt) j[key] = *opt;
  };
  set("num_players", f.num_players);
  set("seed", f.seed);
  set("x", f.x);
  set("replications", f.replications);
  set("pilot", f.pilot);
  set("nuisance_norm", f.nuisance_norm);
  set("threads", f.threads);
  set("num_directions", f.num_directions);
  set("radius_factor", f.radius_factor);
  set("keep_raw", f.keep_raw);
  if (!f.target.empty()) j["target"] = f.target;
  auto solver = [&](const char* key, const auto& opt) {
    if (opt) j["solver"][key] = *opt;
  };
  solver("grad_tol", f.grad_tol);
  solver("max_iters", f.max_iters);
  solver("damping", f.damping);
  solver("line_search", f.line_search);
}

Json LoadConfig(const Flags& f) {
  Json j = f.config.empty() ? Json::object() : LoadJsonFile(f.config);
  if (!j.is_object()) throw SchemaError("config root must be an object");
  Override(j, f);
  return j;
}

std::string OutPath(const Flags& f, const std::string& name) {
  std::filesystem::create_directories(f.out);
  return (std::filesystem::path(f.out) / name).string();
}

std::string Fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// Keys that only some commands accept are checked against this list.
void RequireKeys(const Json& j, const std::vector<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw SchemaError("config key '" + it.key() + "': not used by this command");
    }
  }
}

McConfig ModelConfig(const Json& j, bool need_model) {
  Json full = j;
  if (!full.contains("replications")) full["replications"] = 1;
  if (!need_model) {
    full["num_players"] = 2;
    full["design"] = Json::array({Json::array({0, 1, 1})});
    full["true_scores"] = Json::array({0.0, 0.0});
  }
  return ParseMcConfig(full);
}

// ---------------------------------------------------------------------------

int CmdFit(const Flags& f, std::ostream& out) {
  Json cfg = LoadConfig(f);
  RequireKeys(cfg, {"num_players", "solver"});
  cfg["data"] = f.data;
  Json resolved{{"command", "fit"}};
  resolved.update(cfg);
  const SolverConfig solver = ParseSolver(cfg.value("solver", Json()));
  const Index p = cfg.contains("num_players") ? cfg["num_players"].get<Index>() : 0;
  const ComparisonData data = read_dataset_csv_file(f.data, p);
  const SolveResult fit = mle(data, solver);
  const Vector& v = fit.argmax.values;
  const Matrix fisher = -btl_hessian(v, data);
  // Unit-size standardized score proxy: D_j^{-1} on the parameter scale.
  Vector indicator(v.size());
  for (Index k = 0; k < v.size(); ++k) {
    const double dk = std::sqrt(std::max(0.0, fisher(k, k)));
    indicator(k) = dk > 0 ? 1.0 / dk : std::numeric_limits<double>::infinity();
  }
  Json j{{"config", resolved},
         {"scores", ToJson(v)},
         {"value", fit.value},
         {"iterations", fit.iterations},
         {"converged", fit.converged},
         {"diverged", fit.diverged},
         {"final_grad_norm", fit.final_grad_norm},
         {"error_indicator", ToJson(indicator)}};
  WriteText(OutPath(f, "fit.json"), Dump(j));
  std::ostringstream csv;
  csv << "# config: " << resolved.dump() << "\nindex,value,error_indicator\n";
  for (Index k = 0; k < v.size(); ++k) {
    csv << k << ',' << FormatDouble(v(k)) << ',' << FormatDouble(indicator(k)) << '\n';
  }
  WriteText(OutPath(f, "scores.csv"), csv.str());
  out << "fit: p=" << data.num_players() << " converged=" << fit.converged
      << " iterations=" << fit.iterations << " loglik=" << Fmt(fit.value) << "\n";
  return fit.converged ? kExitOk : kExitFailure;
}

// Model from the config, or BTL evaluated at the MLE of a dataset.
struct ModelSource {
  std::unique_ptr<BtlModel> model;
  std::optional<ComparisonData> data;
};

ModelSource BuildModel(const Flags& f, const McConfig& c, bool data_truth_from_fit) {
  ModelSource src;
  if (!f.data.empty()) {
    src.data = read_dataset_csv_file(f.data);
    const Index p = src.data->num_players();
    Vector truth;
    if (data_truth_from_fit) {
      const SolveResult fit = mle(*src.data, c.solver);
      if (!fit.converged) throw SlsError("MLE did not converge on the dataset");
      truth = fit.argmax.values;
    } else {
      truth = c.true_scores;
      if (truth.size() != p) throw SchemaError("true_scores length must equal dataset players");
    }
    src.model = std::make_unique<BtlModel>(p, src.data->design(), truth);
  } else {
    src.model = std::make_unique<BtlModel>(c.num_players, c.design, c.true_scores);
  }
  return src;
}

double PilotRadius(const McConfig& c, const Flags& f) {
  if (f.r_circ) return *f.r_circ;
  return c.pilot.kind == PilotKind::kNoisyTrue ? c.pilot.radius : 0.0;
}

int CmdDiagnose(const Flags& f, std::ostream& out) {
  Json cfg = LoadConfig(f);
  if (f.r_circ) cfg["r_circ"] = *f.r_circ;
  Json resolved{{"command", "diagnose"}};
  if (!f.data.empty()) resolved["data"] = f.data;
  resolved.update(cfg);
  Json model_cfg = cfg;
  model_cfg.erase("r_circ");
  const McConfig c = ModelConfig(model_cfg, f.data.empty());
  const ModelSource src = BuildModel(f, c, true);
  const SlsModel& model = *src.model;
  const double x = std::isnan(c.x) ? default_x(model.sample_size()) : c.x;
  const FullModelSetting s = full_model_setting(model, x, c.radius_factor, c.num_directions,
                                                SubSeed(c.seed, kStreamDirections, 0));
  std::optional<SupNormSmoothness> sup;
  if (std::isfinite(s.spec.r_inf)) {
    sup = supnorm_smoothness(model, model.truth(), s.bundle.d, s.spec.r_inf);
  }
  std::optional<PluginConstants> plugin;
  if (c.partition) {
    const FisherBundle pb = fisher_bundle(model, model.truth(), c.partition);
    plugin = plugin_constants(model, pb, PilotRadius(c, f), c.nuisance_norm, x,
                              c.num_directions, SubSeed(c.seed, kStreamDirections, 1));
  }
  Json j{{"config", resolved}};
  j.update(DiagnosticsJson(s, sup ? &*sup : nullptr, plugin ? &*plugin : nullptr));
  WriteText(OutPath(f, "diagnostics.json"), Dump(j));
  out << "diagnose: p=" << model.dim() << " tau3=" << Fmt(s.constants.tau3)
      << " rho=" << Fmt(s.constants.rho.rho) << " r_D=" << Fmt(s.spec.r_d)
      << " applicable=" << s.applicable << "\n";
  return kExitOk;
}

int CmdExpand(const Flags& f, std::ostream& out) {
  Json cfg = LoadConfig(f);
  if (f.ridge) cfg["ridge"] = *f.ridge;
  Json resolved{{"command", "expand"}};
  if (!f.data.empty()) resolved["data"] = f.data;
  resolved.update(cfg);
  Json model_cfg = cfg;
  model_cfg.erase("ridge");
  if (!f.data.empty()) {
    // The dataset supplies players and design; the config supplies the truth.
    if (!model_cfg.contains("true_scores")) throw SchemaError("expand with --data needs true_scores");
    const ComparisonData d = read_dataset_csv_file(f.data);
    model_cfg["num_players"] = d.num_players();
    model_cfg["design"] = Json::array({Json::array({0, 1, 1})});
  }
  McConfig c = ModelConfig(model_cfg, true);
  c.keep_raw = false;
  c.threads = 1;
  const ModelSource src = BuildModel(f, c, false);
  const SlsModel& model = *src.model;
  Realization real;
  if (src.data) {
    real.data = *src.data;
    real.score = btl_score(model.truth(), *src.data);
  } else {
    real = model.simulate(SubSeed(c.seed, kStreamData, 0));
    if (real.data) {
      std::ostringstream csv;
      csv << "# config: " << resolved.dump() << "\n";
      write_dataset_csv(csv, *real.data);
      WriteText(OutPath(f, "data.csv"), csv.str());
    }
  }
  RealizationResult r = evaluate_realization(model, c, real);
  if (r.divergent) {
    out << "expand: MLE diverged on this realization\n";
    return kExitFailure;
  }
  std::vector<ExpansionReport> reports = r.reports;
  if (c.partition && c.pilot.kind == PilotKind::kNoisyTrue) {
    const double x = std::isnan(c.x) ? default_x(model.sample_size()) : c.x;
    const FisherBundle pb = fisher_bundle(model, model.truth(), c.partition);
    const PluginConstants pc =
        plugin_constants(model, pb, c.pilot.radius, c.nuisance_norm, x, c.num_directions,
                         SubSeed(c.seed, kStreamDirections, 1));
    // Alternating-sign nuisance shift on the boundary of the pilot set.
    Vector eta = Select(model.truth(), pb.partition->nuisance);
    for (Index m = 0; m < eta.size(); ++m) {
      eta(m) += (m % 2 == 0 ? 1.0 : -1.0) * c.pilot.radius / pb.h(m);
    }
    const SemiparamBiasResult sb =
        semiparam_bias(model, pb, eta, pc, Matrix(pb.d_target.asDiagonal()));
    reports.insert(reports.end(), sb.reports.begin(), sb.reports.end());
  }
  if (f.ridge) {
    const PerturbedResult pr =
        perturbed_argmax_reports(model, PerturbationSpec::Ridge(model.dim(), *f.ridge), c.solver);
    reports.insert(reports.end(), pr.reports.begin(), pr.reports.end());
  }
  int violations = 0;
  for (const auto& rep : reports) violations += rep.violated();
  Json j{{"config", resolved},
         {"on_omega", r.on_omega},
         {"estimate", ToJson(r.fit.argmax.values)},
         {"reports", ToJson(reports)},
         {"violations", violations}};
  WriteText(OutPath(f, "expansions.json"), Dump(j));
  std::ostringstream csv;
  write_reports_csv(csv, reports, resolved.dump());
  WriteText(OutPath(f, "expansions.csv"), csv.str());
  out << "expand: reports=" << reports.size() << " on_omega=" << r.on_omega
      << " violations=" << violations << "\n";
  return violations == 0 ? kExitOk : kExitFailure;
}

int CmdMc(const Flags& f, std::ostream& out) {
  Json cfg = LoadConfig(f);
  const McConfig c = ParseMcConfig(cfg);
  const McSummary s = run_mc(c);
  Json resolved = cfg;
  resolved["x"] = s.x;
  Json j{{"config", resolved}, {"summary", ToJson(s)}};
  WriteText(OutPath(f, "summary.json"), Dump(j));
  if (c.keep_raw) {
    std::ostringstream csv;
    write_raw_csv(csv, s.raw, resolved.dump());
    WriteText(OutPath(f, "raw.csv"), csv.str());
  }
  out << "mc: R=" << s.replications << " used=" << s.used << " coverage=" << Fmt(s.omega_coverage)
      << " floor=" << Fmt(s.omega_floor) << " violations=" << s.total_violations
      << " audits=" << (s.deterministic_audits_pass() ? "pass" : "fail")
      << (s.unreliable ? " UNRELIABLE" : "") << "\n";
  if (s.unreliable) return kExitUnreliable;
  return s.deterministic_audits_pass() ? kExitOk : kExitFailure;
}

int CmdPlugin(const Flags& f, std::ostream& out) {
  Json cfg = LoadConfig(f);
  if (f.rounds > 0) cfg["rounds"] = f.rounds;
  Json resolved{{"command", "plugin"}, {"data", f.data}};
  resolved.update(cfg);
  Json model_cfg = cfg;
  model_cfg.erase("rounds");
  const bool has_truth = model_cfg.contains("true_scores");
  const ComparisonData data = read_dataset_csv_file(f.data);
  const Index p = data.num_players();
  model_cfg["num_players"] = p;
  model_cfg["design"] = Json::array({Json::array({0, 1, 1})});
  if (!has_truth) model_cfg["true_scores"] = std::vector<double>(p, 0.0);
  if (!model_cfg.contains("pilot")) model_cfg["pilot"] = "mle";
  const McConfig c = ModelConfig(model_cfg, true);
  if (!c.partition) throw SchemaError("plugin needs a target (--target)");
  if (!has_truth && c.pilot.kind != PilotKind::kFullMleNuisance) {
    throw SchemaError("pilot '" + c.pilot.ToString() + "' needs true_scores");
  }
  const Partition& part = *c.partition;
  Vector pilot;
  std::optional<BtlModel> model;
  if (has_truth) model.emplace(p, data.design(), c.true_scores);
  if (c.pilot.kind == PilotKind::kFullMleNuisance) {
    const SolveResult full = mle(data, c.solver);
    if (!full.converged) throw SlsError("full MLE did not converge");
    pilot = Select(full.argmax.values, part.nuisance);
  } else {
    pilot = Select(model->truth(), part.nuisance);
    if (c.pilot.kind == PilotKind::kNoisyTrue) {
      const FisherBundle pb = fisher_bundle(*model, model->truth(), c.partition);
      Rng rng(SubSeed(c.seed, kStreamPilot, 0));
      std::uniform_real_distribution<double> unif(-1.0, 1.0);
      for (Index m = 0; m < pilot.size(); ++m) pilot(m) += c.pilot.radius * unif(rng) / pb.h(m);
    }
  }
  const SolveResult est = plugin_estimate(data, pilot, part.target, c.solver, c.pilot.ToString());
  Json j{{"config", resolved},
         {"target", part.target},
         {"pilot_nuisance", ToJson(pilot)},
         {"theta_hat", ToJson(Select(est.argmax.values, part.target))},
         {"estimate", ToJson(est.argmax.values)},
         {"value", est.value},
         {"iterations", est.iterations},
         {"converged", est.converged},
         {"provenance", est.provenance}};
  if (f.rounds > 0) {
    const auto trace = alternate_optimize(data, Select(est.argmax.values, part.target),
                                          part.target, static_cast<int>(f.rounds), c.solver);
    Json rounds = Json::array();
    for (const auto& [eta_step, theta_step] : trace) {
      rounds.push_back({{"value", theta_step.value},
                        {"theta", ToJson(Select(theta_step.argmax.values, part.target))}});
    }
    j["alternating"] = rounds;
  }
  if (model) {
    const double x = std::isnan(c.x) ? default_x(model->sample_size()) : c.x;
    const FisherBundle pb = fisher_bundle(*model, model->truth(), c.partition);
    const PluginConstants pc =
        plugin_constants(*model, pb, PilotRadius(c, f), c.nuisance_norm, x, c.num_directions,
                         SubSeed(c.seed, kStreamDirections, 1));
    const PluginExpansionResult pe =
        plugin_expansion(*model, pb, pc, est.argmax.values, btl_score(model->truth(), data),
                         Matrix(pb.d_target.asDiagonal()));
    j["constants"] = ToJson(pc);
    j["reports"] = ToJson(pe.reports);
  }
  WriteText(OutPath(f, "plugin.json"), Dump(j));
  out << "plugin: target=" << part.target.size() << " pilot=" << c.pilot.ToString()
      << " converged=" << est.converged << " value=" << Fmt(est.value) << "\n";
  return est.converged ? kExitOk : kExitFailure;
}

}  // namespace

int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"slslab: maximum likelihood diagnostics for pairwise-comparison models"};
  app.require_subcommand(1);
  Flags f;

  auto* fit = app.add_subcommand("fit", "fit BTL scores to a comparison dataset");
  AddCommon(fit, f);
  fit->add_option("--data", f.data, "dataset CSV (i,j,n,wins_i)")->required();
  fit->add_option("--num_players", f.num_players, "number of players");

  auto* diagnose = app.add_subcommand("diagnose", "Fisher, radii, smoothness constants, conditions");
  AddCommon(diagnose, f);
  AddModel(diagnose, f);
  diagnose->add_option("--data", f.data, "dataset CSV; evaluates at its MLE");
  diagnose->add_option("--r_circ", f.r_circ, "nuisance radius for plug-in constants");

  auto* expand = app.add_subcommand("expand", "expansion reports on one realization");
  AddCommon(expand, f);
  AddModel(expand, f);
  expand->add_option("--data", f.data, "dataset CSV; otherwise one simulated realization");
  expand->add_option("--ridge", f.ridge, "add ridge-perturbation reports");

  auto* mc = app.add_subcommand("mc", "Monte Carlo audit");
  AddCommon(mc, f);
  AddModel(mc, f);
  mc->add_option("--replications", f.replications, "number of replications R");
  mc->add_option("--threads", f.threads, "worker threads");
  mc->add_option("--keep_raw", f.keep_raw, "write the raw per-replication table");

  auto* plugin = app.add_subcommand("plugin", "plug-in target estimate on a dataset");
  AddCommon(plugin, f);
  AddModel(plugin, f);
  plugin->add_option("--data", f.data, "dataset CSV")->required();
  plugin->add_option("--rounds", f.rounds, "alternating-optimization rounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  try {
    if (*fit) return CmdFit(f, out);
    if (*diagnose) return CmdDiagnose(f, out);
    if (*expand) return CmdExpand(f, out);
    if (*mc) return CmdMc(f, out);
    if (*plugin) return CmdPlugin(f, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DesignError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: config: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace slslab::cli
