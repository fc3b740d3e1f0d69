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

#ifndef SSARX_SIM_HPP_
#define SSARX_SIM_HPP_

#include <cstdint>
#include <string>
#include <utility>

#include "ssarx/state_space_model.hpp"
#include "ssarx/trajectory.hpp"

namespace ssarx {

struct NoiseConfig {
  double sigma_w = 0.0;
  double sigma_v = 0.0;
  std::string label;
};

// Innovations-form simulation: x+ = A x + B u + K e, y = C x + D u + e.
// y_clean comes from a parallel e = 0 run started at the same x0.
TrajectoryData simulate_innovations(const StateSpaceModel& model,
                                    const Matrix& u_seq, const Matrix& e_seq,
                                    const Vector& x0);

// Plant-form simulation: x+ = A x + B u + w, y = C x + D u + v.
// y_clean is the w = v = 0 twin driven by the same u from the same x0.
TrajectoryData simulate_plant(const StateSpaceModel& model, const Matrix& u_seq,
                              const Matrix& w_seq, const Matrix& v_seq,
                              const Vector& x0);

// Square wave, +amplitude for the first half period starting at t = 0,
// plus i.i.d. zero-mean Gaussian jitter of the given variance.
Vector square_wave_reference(int period, double amplitude, double jitter_var,
                             int n, std::uint64_t seed);

// Seeded process/measurement noise sequences (w: n x n_states,
// v: n x n_y). Shared by data collection and the receding-horizon loop
// so paired experiments can replay and hash identical streams.
std::pair<Matrix, Matrix> make_noise_sequences(int n, int n_states, int n_y,
                                               const NoiseConfig& noise,
                                               std::uint64_t seed);

// Closed-loop data collection with the output feedback
// u(t) = r_train(t) - y(t) applied to the measured (noisy) output.
// Requires n_u == n_y and a stable unit-feedback loop. y_clean is the
// noise-free plant twin driven by the recorded u.
TrajectoryData collect_closed_loop(const StateSpaceModel& model,
                                   const Matrix& r_train,
                                   const NoiseConfig& noise, int n,
                                   std::uint64_t seed);

// 10 log10(P[y_clean] / P[y - y_clean]) with P the mean squared value
// over all samples and channels. Returns +inf when the noise power is
// zero; throws when the signal power is zero.
double empirical_snr(const Matrix& y_noisy, const Matrix& y_clean);

struct DareSolution {
  Matrix p;         // stabilizing fixed point
  Matrix k;         // steady-state Kalman gain A P C' (C P C' + sigma_v)^-1
  double residual;  // max-abs DARE residual at exit
  int iterations;
};

// Fixed-point iteration for the discrete algebraic Riccati equation of
// the one-step-ahead predictor. Converges to max-abs residual <= tol or
// throws with the residual reported.
DareSolution solve_dare(const StateSpaceModel& model, const Matrix& sigma_w,
                        const Matrix& sigma_v, double tol = 1e-10,
                        int max_iterations = 1000000);

}  // namespace ssarx

#endif  // SSARX_SIM_HPP_
