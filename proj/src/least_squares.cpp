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

#include "ssarx/least_squares.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ssarx {

LsResult solve_least_squares(const Matrix& a, const Matrix& b,
                             const LsOptions& options, const char* context) {
  if (a.rows() != b.rows())
    throw std::invalid_argument(std::string("least squares: row mismatch for ") +
                                context);

  if (options.rank_policy == RankPolicy::kRidge) {
    if (options.ridge_lambda <= 0.0)
      throw std::invalid_argument("least squares: ridge requires lambda > 0");
    // Augmented system [A; sqrt(lambda) I] keeps the solve QR/SVD-based.
    Matrix a_aug(a.rows() + a.cols(), a.cols());
    a_aug.topRows(a.rows()) = a;
    a_aug.bottomRows(a.cols()) =
        std::sqrt(options.ridge_lambda) * Matrix::Identity(a.cols(), a.cols());
    Matrix b_aug = Matrix::Zero(a_aug.rows(), b.cols());
    b_aug.topRows(b.rows()) = b;
    Eigen::BDCSVD<Matrix> svd(a_aug, Eigen::ComputeThinU | Eigen::ComputeThinV);
    LsResult res;
    res.solution = svd.solve(b_aug);
    res.rank = static_cast<int>(svd.rank());
    res.rank_deficient = false;
    return res;
  }

  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  LsResult res;
  res.rank = static_cast<int>(svd.rank());
  res.rank_deficient = res.rank < std::min(a.rows(), a.cols());
  if (res.rank_deficient && options.rank_policy == RankPolicy::kError) {
    std::ostringstream msg;
    msg << "least squares: " << context << " is rank deficient (rank "
        << res.rank << " of " << std::min(a.rows(), a.cols())
        << "): excitation failure";
    throw std::runtime_error(msg.str());
  }
  res.solution = svd.solve(b);
  return res;
}

}  // namespace ssarx
