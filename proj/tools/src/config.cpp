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


#include "config.hpp"

#include <fstream>
#include <set>

#include "slslab/io.hpp"

namespace slslab::cli {
namespace {

const std::set<std::string> kKeys = {
    "num_players", "design",        "true_scores",    "replications",
    "x",           "seed",          "target",         "pilot",
    "nuisance_norm", "q_maps",      "q_selectors",    "radius_factor",
    "num_directions", "threads",    "keep_raw",       "solver"};

[[noreturn]] void Bad(const std::string& key, const std::string& what) {
  throw SchemaError("config key '" + key + "': " + what);
}

long long GetInt(const Json& j, const std::string& key) {
  if (!j.is_number_integer()) Bad(key, "expected integer");
  return j.get<long long>();
}

double GetReal(const Json& j, const std::string& key) {
  if (!j.is_number()) Bad(key, "expected number");
  return j.get<double>();
}

std::string GetString(const Json& j, const std::string& key) {
  if (!j.is_string()) Bad(key, "expected string");
  return j.get<std::string>();
}

void OnlyKeys(const Json& j, const std::string& key, const std::set<std::string>& allowed) {
  if (!j.is_object()) Bad(key, "expected object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) Bad(key + "." + it.key(), "unknown key");
  }
}

const Json& Need(const Json& j, const std::string& key, const std::string& field) {
  if (!j.contains(field)) Bad(key + "." + field, "missing");
  return j.at(field);
}

std::vector<Index> GetIndexList(const Json& j, const std::string& key) {
  if (!j.is_array()) Bad(key, "expected array of integers");
  std::vector<Index> out;
  for (const auto& v : j) out.push_back(GetInt(v, key));
  return out;
}

}  // namespace

Json LoadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("'" + path + "': " + e.what());
  }
}

bool HasModel(const Json& j) {
  return j.contains("num_players") && j.contains("design") && j.contains("true_scores");
}

std::vector<DesignEdge> ParseDesign(const Json& j, Index p) {
  if (j.is_array()) {
    std::vector<DesignEdge> design;
    for (const auto& row : j) {
      if (!row.is_array() || row.size() != 3) Bad("design", "rows must be [i, j, n]");
      design.push_back({GetInt(row[0], "design"), GetInt(row[1], "design"),
                        GetInt(row[2], "design")});
    }
    return design;
  }
  const std::string type = GetString(Need(j, "design", "type"), "design.type");
  if (type == "complete") {
    OnlyKeys(j, "design", {"type", "n"});
    return complete_design(p, GetInt(Need(j, "design", "n"), "design.n"));
  }
  if (type == "random") {
    OnlyKeys(j, "design", {"type", "n", "density", "seed"});
    return random_design(p, GetInt(Need(j, "design", "n"), "design.n"),
                         GetReal(Need(j, "design", "density"), "design.density"),
                         GetInt(Need(j, "design", "seed"), "design.seed"));
  }
  if (type == "file") {
    OnlyKeys(j, "design", {"type", "path"});
    return read_design_csv_file(GetString(Need(j, "design", "path"), "design.path"));
  }
  Bad("design.type", "expected complete, random or file");
}

Vector ParseTrueScores(const Json& j, Index p) {
  if (j.is_array()) {
    Vector v(static_cast<Index>(j.size()));
    for (size_t k = 0; k < j.size(); ++k) v(k) = GetReal(j[k], "true_scores");
    if (v.size() != p) Bad("true_scores", "length must equal num_players");
    return v;
  }
  const std::string type = GetString(Need(j, "true_scores", "type"), "true_scores.type");
  if (type == "linspace") {
    OnlyKeys(j, "true_scores", {"type", "lo", "hi"});
    return Vector::LinSpaced(p, GetReal(Need(j, "true_scores", "lo"), "true_scores.lo"),
                             GetReal(Need(j, "true_scores", "hi"), "true_scores.hi"));
  }
  if (type == "file") {
    OnlyKeys(j, "true_scores", {"type", "path"});
    Vector v = read_scores_csv_file(GetString(Need(j, "true_scores", "path"), "true_scores.path"));
    if (v.size() != p) Bad("true_scores", "length must equal num_players");
    return v;
  }
  Bad("true_scores.type", "expected linspace or file");
}

SolverConfig ParseSolver(const Json& j) {
  SolverConfig s;
  if (j.is_null()) return s;
  OnlyKeys(j, "solver", {"grad_tol", "max_iters", "damping", "line_search"});
  if (j.contains("grad_tol")) s.grad_tol = GetReal(j["grad_tol"], "solver.grad_tol");
  if (j.contains("max_iters")) s.max_iters = GetInt(j["max_iters"], "solver.max_iters");
  if (j.contains("damping")) s.damping = GetReal(j["damping"], "solver.damping");
  if (j.contains("line_search")) s.line_search = GetReal(j["line_search"], "solver.line_search");
  s.Validate();
  return s;
}

McConfig ParseMcConfig(const Json& j) {
  OnlyKeys(j, "<root>", kKeys);
  McConfig c;
  c.num_players = GetInt(Need(j, "<root>", "num_players"), "num_players");
  if (c.num_players < 2) Bad("num_players", "must be >= 2");
  c.design = ParseDesign(Need(j, "<root>", "design"), c.num_players);
  c.true_scores = ParseTrueScores(Need(j, "<root>", "true_scores"), c.num_players);
  c.replications = GetInt(Need(j, "<root>", "replications"), "replications");
  if (c.replications < 1) Bad("replications", "must be >= 1");
  if (j.contains("x") && !j["x"].is_null()) c.x = GetReal(j["x"], "x");
  if (j.contains("seed")) {
    const long long s = GetInt(j["seed"], "seed");
    if (s < 0) Bad("seed", "must be >= 0");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (j.contains("target") && !j["target"].is_null()) {
    c.partition = Partition::FromTarget(c.num_players, GetIndexList(j["target"], "target"));
  }
  if (j.contains("pilot")) c.pilot = PilotRule::Parse(GetString(j["pilot"], "pilot"));
  if (j.contains("nuisance_norm")) {
    const std::string n = GetString(j["nuisance_norm"], "nuisance_norm");
    if (n == "sup") {
      c.nuisance_norm = NuisanceNorm::kSup;
    } else if (n == "l2") {
      c.nuisance_norm = NuisanceNorm::kL2;
    } else {
      Bad("nuisance_norm", "expected sup or l2");
    }
  }
  if (j.contains("q_maps")) {
    if (!j["q_maps"].is_array()) Bad("q_maps", "expected array of strings");
    c.q_maps.clear();
    for (const auto& v : j["q_maps"]) c.q_maps.push_back(GetString(v, "q_maps"));
  }
  if (j.contains("q_selectors")) c.q_selectors = GetIndexList(j["q_selectors"], "q_selectors");
  for (Index s : c.q_selectors) {
    if (s < 0 || s >= c.num_players) Bad("q_selectors", "index out of range");
  }
  if (j.contains("radius_factor")) c.radius_factor = GetReal(j["radius_factor"], "radius_factor");
  if (j.contains("num_directions")) c.num_directions = GetInt(j["num_directions"], "num_directions");
  if (j.contains("threads")) c.threads = GetInt(j["threads"], "threads");
  if (j.contains("keep_raw")) {
    if (!j["keep_raw"].is_boolean()) Bad("keep_raw", "expected boolean");
    c.keep_raw = j["keep_raw"].get<bool>();
  }
  if (j.contains("solver")) c.solver = ParseSolver(j["solver"]);
  try {
    c.Validate();
  } catch (const InputError& e) {
    throw SchemaError(e.what());
  }
  return c;
}

}  // namespace slslab::cli
