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

#ifndef SSARX_TRAJECTORY_HPP_
#define SSARX_TRAJECTORY_HPP_

#include <cstdint>
#include <string>

#include "ssarx/state_space_model.hpp"

namespace ssarx {

// Recorded input/output sequences. Row t holds the sample at time t.
// y_clean is the noise-free twin output; empty when not recorded.
struct TrajectoryData {
  Matrix u;        // length x n_u
  Matrix y;        // length x n_y
  Matrix y_clean;  // length x n_y or 0 x 0
  std::uint64_t seed = 0;

  int length() const { return static_cast<int>(y.rows()); }
  int n_u() const { return static_cast<int>(u.cols()); }
  int n_y() const { return static_cast<int>(y.cols()); }
  bool has_clean() const { return y_clean.size() > 0; }
};

// CSV with columns t, u_1..u_{n_u}, y_1..y_{n_y}[, y0_1..y0_{n_y}].
void write_trajectory_csv(const TrajectoryData& traj, const std::string& path);
TrajectoryData read_trajectory_csv(const std::string& path);

}  // namespace ssarx

#endif  // SSARX_TRAJECTORY_HPP_
