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

#ifndef SSARX_LEAST_SQUARES_HPP_
#define SSARX_LEAST_SQUARES_HPP_

#include "ssarx/state_space_model.hpp"

namespace ssarx {

// What to do when the regressor matrix is rank deficient.
//   kError   - throw (excitation failure)
//   kMinNorm - SVD minimum-norm solution (pseudoinverse)
//   kRidge   - augmented-system ridge solve with the given lambda
enum class RankPolicy { kError, kMinNorm, kRidge };

struct LsOptions {
  RankPolicy rank_policy = RankPolicy::kError;
  double ridge_lambda = 0.0;
};

struct LsResult {
  Matrix solution;
  int rank = 0;
  bool rank_deficient = false;
};

// min_X ||A X - B||_F via SVD; never forms normal equations.
// `context` names the regressor in error messages.
LsResult solve_least_squares(const Matrix& a, const Matrix& b,
                             const LsOptions& options = {},
                             const char* context = "regressor");

}  // namespace ssarx

#endif  // SSARX_LEAST_SQUARES_HPP_
