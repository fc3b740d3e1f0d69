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

#include "ssarx/stacking.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ssarx/csv.hpp"

namespace ssarx {

namespace {

void check_window(int length, int t, int l_p, int l_f) {
  if (l_p <= 0) throw std::invalid_argument("past window must be nonempty");
  if (l_f <= 0) throw std::invalid_argument("future window must be nonempty");
  if (t < l_p) {
    std::ostringstream msg;
    msg << "anchor " << t << " violates t >= L_p = " << l_p;
    throw std::out_of_range(msg.str());
  }
  if (t + l_f > length) {
    std::ostringstream msg;
    msg << "anchor " << t << " violates t + L_f <= length (" << t << " + "
        << l_f << " > " << length << ")";
    throw std::out_of_range(msg.str());
  }
}

// Stacks rows [t_begin, t_begin + count) of `signal`, oldest first.
Vector stack_rows(const Matrix& signal, int t_begin, int count) {
  const int dim = static_cast<int>(signal.cols());
  Vector out(count * dim);
  for (int k = 0; k < count; ++k)
    out.segment(k * dim, dim) = signal.row(t_begin + k).transpose();
  return out;
}

}  // namespace

StackedWindow stack_window(const TrajectoryData& traj, int t, int l_p,
                           int l_f) {
  check_window(traj.length(), t, l_p, l_f);
  StackedWindow w;
  w.anchor = t;
  w.y_p = stack_rows(traj.y, t - l_p, l_p);
  w.u_p = stack_rows(traj.u, t - l_p, l_p);
  w.y_f = stack_rows(traj.y, t, l_f);
  w.u_f = stack_rows(traj.u, t, l_f);
  w.z_p.resize(w.y_p.size() + w.u_p.size());
  w.z_p << w.y_p, w.u_p;
  return w;
}

HankelSet build_hankels(const TrajectoryData& traj, int l_p, int l_f, int t0,
                        int n_cols) {
  if (t0 < 0) t0 = l_p;
  if (t0 < l_p) throw std::invalid_argument("build_hankels: t0 must be >= L_p");
  const int max_cols = traj.length() - t0 - l_f + 1;
  if (n_cols < 0) n_cols = max_cols;
  if (l_p <= 0 || l_f <= 0)
    throw std::invalid_argument("build_hankels: window lengths must be > 0");
  if (n_cols < 1 || n_cols > max_cols) {
    std::ostringstream msg;
    msg << "build_hankels: need length >= " << (t0 + l_f)
        << " for one column (t0 = " << t0 << ", L_f = " << l_f
        << "), requested " << n_cols << " columns of " << max_cols
        << " available";
    throw std::invalid_argument(msg.str());
  }

  HankelSet h;
  h.t0 = t0;
  h.n_cols = n_cols;
  h.l_p = l_p;
  h.l_f = l_f;
  h.n_y = traj.n_y();
  h.n_u = traj.n_u();
  h.y_p.resize(h.n_y * l_p, n_cols);
  h.u_p.resize(h.n_u * l_p, n_cols);
  h.y_f.resize(h.n_y * l_f, n_cols);
  h.u_f.resize(h.n_u * l_f, n_cols);
  for (int j = 0; j < n_cols; ++j) {
    const StackedWindow w = stack_window(traj, t0 + j, l_p, l_f);
    h.y_p.col(j) = w.y_p;
    h.u_p.col(j) = w.u_p;
    h.y_f.col(j) = w.y_f;
    h.u_f.col(j) = w.u_f;
  }
  h.z_p.resize(h.y_p.rows() + h.u_p.rows(), n_cols);
  h.z_p << h.y_p, h.u_p;
  return h;
}

void dump_hankels_csv(const HankelSet& h, const std::string& prefix) {
  const auto dump = [&](const Matrix& m, const std::string& name) {
    std::ofstream out(prefix + "_" + name + ".csv");
    if (!out) throw std::runtime_error("cannot write " + prefix + "_" + name);
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) {
        if (j) out << ",";
        out << format_double(m(i, j));
      }
      out << "\n";
    }
  };
  dump(h.y_p, "yp");
  dump(h.y_f, "yf");
  dump(h.u_p, "up");
  dump(h.u_f, "uf");
  dump(h.z_p, "zp");
}

}  // namespace ssarx
