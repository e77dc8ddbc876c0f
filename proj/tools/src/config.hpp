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


#ifndef SLSLAB_TOOLS_CONFIG_HPP_
#define SLSLAB_TOOLS_CONFIG_HPP_

#include <string>

#include "json.hpp"
#include "slslab/errors.hpp"
#include "slslab/montecarlo.hpp"

namespace slslab::cli {

using Json = nlohmann::ordered_json;

// Schema violations; mapped to exit code 2.
class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

Json LoadJsonFile(const std::string& path);

// Experiment config: a JSON object with the keys below.
//   num_players     integer p >= 2
//   design          [[i,j,n],...] | {"type":"complete","n"} |
//                   {"type":"random","n","density","seed"} | {"type":"file","path"}
//   true_scores     [..] | {"type":"linspace","lo","hi"} | {"type":"file","path"}
//   replications, x, seed, target, pilot, nuisance_norm, q_maps, q_selectors,
//   radius_factor, num_directions, threads, keep_raw,
//   solver {grad_tol, max_iters, damping, line_search}
// Keys not listed are rejected.
McConfig ParseMcConfig(const Json& j);
SolverConfig ParseSolver(const Json& j);

// Parts of the schema usable on their own.
bool HasModel(const Json& j);
std::vector<DesignEdge> ParseDesign(const Json& j, Index p);
Vector ParseTrueScores(const Json& j, Index p);

}  // namespace slslab::cli

#endif  // SLSLAB_TOOLS_CONFIG_HPP_
