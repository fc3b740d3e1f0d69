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

#ifndef SSARX_STATE_SPACE_MODEL_HPP_
#define SSARX_STATE_SPACE_MODEL_HPP_

#include <Eigen/Dense>

namespace ssarx {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Discrete-time LTI model. One struct covers both forms used here:
//   innovations form  x+ = A x + B u + K e,  y = C x + D u + e
//   plant form        x+ = A x + B u + w,    y = C x + D u + v
// K is empty unless the innovations gain is known (e.g. from solve_dare).
struct StateSpaceModel {
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix D;
  Matrix K;  // n x n_y, size 0 when absent
  double sigma_w = 0.0;
  double sigma_v = 0.0;

  int n() const { return static_cast<int>(A.rows()); }
  int n_u() const { return static_cast<int>(B.cols()); }
  int n_y() const { return static_cast<int>(C.rows()); }
  bool has_gain() const { return K.size() > 0; }

  // Predictor-form matrices; valid only when K is present.
  Matrix a_tilde() const { return A - K * C; }
  Matrix b_tilde() const { return B - K * D; }

  // Throws std::invalid_argument on any dimension inconsistency.
  void validate() const;
};

// Largest eigenvalue magnitude.
double spectral_radius(const Matrix& m);

// The second-order benchmark plant (strictly proper, n=2, n_u=n_y=1).
StateSpaceModel benchmark_model();

// Copy of `model` with the steady-state Kalman gain attached, computed
// from sigma_w/sigma_v (process covariance sigma_w^2 I, measurement
// covariance sigma_v^2 I).
StateSpaceModel with_kalman_gain(const StateSpaceModel& model, double sigma_w,
                                 double sigma_v);

}  // namespace ssarx

#endif  // SSARX_STATE_SPACE_MODEL_HPP_
