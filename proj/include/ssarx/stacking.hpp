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

#ifndef SSARX_STACKING_HPP_
#define SSARX_STACKING_HPP_

#include <string>

#include "ssarx/trajectory.hpp"

namespace ssarx {

// Stacked past/future vectors anchored at time t (0-based; the first
// future sample sits at index t):
//   y_p = [y(t-L_p); ...; y(t-1)]   oldest first
//   y_f = [y(t); ...; y(t+L_f-1)]
//   z_p = [y_p; u_p]
struct StackedWindow {
  Vector y_p;
  Vector u_p;
  Vector y_f;
  Vector u_f;
  Vector z_p;
  int anchor = 0;
};

// Column j of each matrix is the stacked vector anchored at t0 + j.
struct HankelSet {
  Matrix y_p;  // n_y L_p x N
  Matrix y_f;  // n_y L_f x N
  Matrix u_p;  // n_u L_p x N
  Matrix u_f;  // n_u L_f x N
  Matrix z_p;  // (n_y+n_u) L_p x N, block rows [Y_p; U_p]
  int t0 = 0;
  int n_cols = 0;
  int l_p = 0;
  int l_f = 0;
  int n_y = 0;
  int n_u = 0;
};

StackedWindow stack_window(const TrajectoryData& traj, int t, int l_p, int l_f);

// t0 < 0 means the earliest valid anchor (t0 = l_p); n_cols < 0 means
// maximal, N = length - l_p - l_f + 1 for the default anchor.
HankelSet build_hankels(const TrajectoryData& traj, int l_p, int l_f,
                        int t0 = -1, int n_cols = -1);

// Debug dump, one file per matrix: <prefix>_{yp,yf,up,uf,zp}.csv.
void dump_hankels_csv(const HankelSet& h, const std::string& prefix);

}  // namespace ssarx

#endif  // SSARX_STACKING_HPP_
