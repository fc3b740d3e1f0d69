// Copyright 2026 The ssarx-ddpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ssarx/trajectory.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ssarx/csv.hpp"

namespace ssarx {

void write_trajectory_csv(const TrajectoryData& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t";
  for (int i = 0; i < traj.n_u(); ++i) out << ",u_" << (i + 1);
  for (int i = 0; i < traj.n_y(); ++i) out << ",y_" << (i + 1);
  if (traj.has_clean())
    for (int i = 0; i < traj.n_y(); ++i) out << ",y0_" << (i + 1);
  out << "\n";
  for (int t = 0; t < traj.length(); ++t) {
    out << t;
    for (int i = 0; i < traj.n_u(); ++i)
      out << "," << format_double(traj.u(t, i));
    for (int i = 0; i < traj.n_y(); ++i)
      out << "," << format_double(traj.y(t, i));
    if (traj.has_clean())
      for (int i = 0; i < traj.n_y(); ++i)
        out << "," << format_double(traj.y_clean(t, i));
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

TrajectoryData read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty trajectory file: " + path);
  const auto header = split_csv_line(line);
  int n_u = 0, n_y = 0, n_y0 = 0;
  for (const auto& col : header) {
    if (col.rfind("u_", 0) == 0) ++n_u;
    if (col.rfind("y_", 0) == 0) ++n_y;
    if (col.rfind("y0_", 0) == 0) ++n_y0;
  }
  if (header.empty() || header[0] != "t" || n_u == 0 || n_y == 0)
    throw std::runtime_error("bad trajectory header in " + path);

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != 1 + n_u + n_y + n_y0)
      throw std::runtime_error("bad trajectory row in " + path);
    std::vector<double> row;
    for (std::size_t i = 1; i < fields.size(); ++i)
      row.push_back(std::stod(fields[i]));
    rows.push_back(std::move(row));
  }

  TrajectoryData traj;
  const int n = static_cast<int>(rows.size());
  traj.u.resize(n, n_u);
  traj.y.resize(n, n_y);
  if (n_y0 > 0) traj.y_clean.resize(n, n_y0);
  for (int t = 0; t < n; ++t) {
    int k = 0;
    for (int i = 0; i < n_u; ++i) traj.u(t, i) = rows[t][k++];
    for (int i = 0; i < n_y; ++i) traj.y(t, i) = rows[t][k++];
    for (int i = 0; i < n_y0; ++i) traj.y_clean(t, i) = rows[t][k++];
  }
  return traj;
}

}  // namespace ssarx
