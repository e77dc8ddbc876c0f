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


#ifndef SLSLAB_IO_HPP_
#define SLSLAB_IO_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "slslab/expansions.hpp"
#include "slslab/model.hpp"
#include "slslab/montecarlo.hpp"

namespace slslab {

// Comparison dataset: header `i,j,n,wins_i`, 0-based indices.
// num_players <= 0 infers p = 1 + max index.
ComparisonData read_dataset_csv(std::istream& in, Index num_players = 0);
ComparisonData read_dataset_csv_file(const std::string& path, Index num_players = 0);
void write_dataset_csv(std::ostream& out, const ComparisonData& data);

// Design: header `i,j,n`.
std::vector<DesignEdge> read_design_csv(std::istream& in);
std::vector<DesignEdge> read_design_csv_file(const std::string& path);
void write_design_csv(std::ostream& out, const std::vector<DesignEdge>& design);

// Score table: header `index,value[,...]`, one row per coordinate in order;
// extra columns are ignored.
Vector read_scores_csv(std::istream& in);
Vector read_scores_csv_file(const std::string& path);

// Shortest round-trip decimal representation.
std::string FormatDouble(double v);

// Raw per-replication table, preceded by a `# config: ...` provenance line.
void write_raw_csv(std::ostream& out, const std::vector<RawRow>& rows,
                   const std::string& config_line);
void write_reports_csv(std::ostream& out,
                       const std::vector<ExpansionReport>& reports,
                       const std::string& config_line);

}  // namespace slslab

#endif  // SLSLAB_IO_HPP_
