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


#include "slslab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "slslab/errors.hpp"

namespace slslab {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(Trim(cell));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

[[noreturn]] void Fail(int line, const std::string& what, const std::string& text) {
  throw InputError("line " + std::to_string(line) + ": " + what + " in '" + text + "'");
}

long long ParseInt(const std::string& cell, int line, const std::string& text) {
  long long v = 0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    Fail(line, "expected integer, got '" + cell + "'", text);
  }
  return v;
}

double ParseReal(const std::string& cell, int line, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || *end != '\0' || !std::isfinite(v)) {
    Fail(line, "expected number, got '" + cell + "'", text);
  }
  return v;
}

// Reads rows after checking the header; skips blank lines and `#` comments.
// With allow_extra, further header columns after the required ones are
// accepted and ignored.
template <typename Fn>
void ReadTable(std::istream& in, const std::vector<std::string>& header, Fn&& row,
               bool allow_extra = false) {
  std::string text;
  int line = 0;
  bool seen_header = false;
  size_t width = header.size();
  while (std::getline(in, text)) {
    ++line;
    const std::string t = Trim(text);
    if (t.empty() || t[0] == '#') continue;
    const auto cells = SplitCsv(t);
    if (!seen_header) {
      const bool prefix = allow_extra && cells.size() > header.size() &&
                          std::equal(header.begin(), header.end(), cells.begin());
      if (cells != header && !prefix) {
        std::string want;
        for (size_t k = 0; k < header.size(); ++k) want += (k ? "," : "") + header[k];
        Fail(line, "expected header '" + want + "'", text);
      }
      width = cells.size();
      seen_header = true;
      continue;
    }
    if (cells.size() != width) {
      Fail(line, "expected " + std::to_string(width) + " columns", text);
    }
    row(cells, line, text);
  }
  if (!seen_header) throw InputError("missing header line");
}

std::ifstream OpenOrThrow(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace

ComparisonData read_dataset_csv(std::istream& in, Index num_players) {
  std::vector<PairRecord> pairs;
  Index max_index = -1;
  ReadTable(in, {"i", "j", "n", "wins_i"},
            [&](const std::vector<std::string>& c, int line, const std::string& text) {
              PairRecord r;
              r.i = ParseInt(c[0], line, text);
              r.j = ParseInt(c[1], line, text);
              r.n = ParseInt(c[2], line, text);
              r.wins = ParseInt(c[3], line, text);
              if (r.i < 0 || r.j <= r.i) Fail(line, "need 0 <= i < j", text);
              if (r.n < 1) Fail(line, "need n >= 1", text);
              if (r.wins < 0 || r.wins > r.n) Fail(line, "need 0 <= wins_i <= n", text);
              max_index = std::max(max_index, r.j);
              pairs.push_back(r);
            });
  const Index p = num_players > 0 ? num_players : max_index + 1;
  return ComparisonData(p, std::move(pairs));
}

ComparisonData read_dataset_csv_file(const std::string& path, Index num_players) {
  auto in = OpenOrThrow(path);
  return read_dataset_csv(in, num_players);
}

void write_dataset_csv(std::ostream& out, const ComparisonData& data) {
  out << "i,j,n,wins_i\n";
  for (const auto& r : data.pairs()) {
    out << r.i << ',' << r.j << ',' << r.n << ',' << r.wins << '\n';
  }
}

std::vector<DesignEdge> read_design_csv(std::istream& in) {
  std::vector<DesignEdge> design;
  ReadTable(in, {"i", "j", "n"},
            [&](const std::vector<std::string>& c, int line, const std::string& text) {
              DesignEdge e;
              e.i = ParseInt(c[0], line, text);
              e.j = ParseInt(c[1], line, text);
              e.n = ParseInt(c[2], line, text);
              if (e.i < 0 || e.j <= e.i) Fail(line, "need 0 <= i < j", text);
              if (e.n < 1) Fail(line, "need n >= 1", text);
              design.push_back(e);
            });
  return design;
}

std::vector<DesignEdge> read_design_csv_file(const std::string& path) {
  auto in = OpenOrThrow(path);
  return read_design_csv(in);
}

void write_design_csv(std::ostream& out, const std::vector<DesignEdge>& design) {
  out << "i,j,n\n";
  for (const auto& e : design) out << e.i << ',' << e.j << ',' << e.n << '\n';
}

Vector read_scores_csv(std::istream& in) {
  std::vector<double> values;
  ReadTable(in, {"index", "value"},
            [&](const std::vector<std::string>& c, int line, const std::string& text) {
              const long long k = ParseInt(c[0], line, text);
              if (k != static_cast<long long>(values.size())) {
                Fail(line, "indices must be 0,1,2,... in order", text);
              }
              values.push_back(ParseReal(c[1], line, text));
            },
            true);
  return Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
}

Vector read_scores_csv_file(const std::string& path) {
  auto in = OpenOrThrow(path);
  return read_scores_csv(in);
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

void write_raw_csv(std::ostream& out, const std::vector<RawRow>& rows,
                   const std::string& config_line) {
  out << "# config: " << config_line << '\n';
  out << "replication,report,lhs,rhs,on_omega,applicable\n";
  for (const auto& r : rows) {
    out << r.replication << ',' << r.name << ',' << FormatDouble(r.lhs) << ','
        << FormatDouble(r.rhs) << ',' << (r.on_omega ? 1 : 0) << ','
        << (r.applicable ? 1 : 0) << '\n';
  }
}

void write_reports_csv(std::ostream& out,
                       const std::vector<ExpansionReport>& reports,
                       const std::string& config_line) {
  out << "# config: " << config_line << '\n';
  out << "name,lhs,rhs,ratio,on_omega,applicable,satisfied\n";
  for (const auto& r : reports) {
    out << r.name << ',' << FormatDouble(r.lhs) << ',' << FormatDouble(r.rhs) << ','
        << FormatDouble(r.ratio()) << ',' << (r.on_omega ? 1 : 0) << ','
        << (r.applicable ? 1 : 0) << ',' << (r.satisfied ? 1 : 0) << '\n';
  }
}

}  // namespace slslab
