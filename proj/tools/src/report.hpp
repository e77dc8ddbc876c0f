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


#ifndef SLSLAB_TOOLS_REPORT_HPP_
#define SLSLAB_TOOLS_REPORT_HPP_

#include <string>
#include <vector>

#include "config.hpp"
#include "slslab/expansions.hpp"
#include "slslab/montecarlo.hpp"

namespace slslab::cli {

Json ToJson(const Vector& v);
Json ToJson(const Condition& c);
Json ToJson(const std::vector<Condition>& cs);
Json ToJson(const Certificate& c);
Json ToJson(const ExpansionReport& r);
Json ToJson(const std::vector<ExpansionReport>& rs);
Json ToJson(const RateSummary& r);
Json ToJson(const RiskSummary& r);
Json ToJson(const PluginRiskSummary& r);
Json ToJson(const PluginConstants& c);
Json ToJson(const McSummary& s);

// {fisher, radii, constants, conditions}
Json DiagnosticsJson(const FullModelSetting& s, const SupNormSmoothness* sup,
                     const PluginConstants* plugin);

// Pretty JSON with a trailing newline.
std::string Dump(const Json& j);
void WriteText(const std::string& path, const std::string& text);

}  // namespace slslab::cli

#endif  // SLSLAB_TOOLS_REPORT_HPP_
