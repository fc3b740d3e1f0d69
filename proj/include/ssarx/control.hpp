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

#ifndef SSARX_CONTROL_HPP_
#define SSARX_CONTROL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ssarx/predictor.hpp"
#include "ssarx/qp.hpp"
#include "ssarx/sim.hpp"

namespace ssarx {

struct ControllerConfig {
  Matrix q;  // n_y x n_y output weight per step
  Matrix r;  // n_u x n_u input weight per step, positive definite
  double u_min = -2.0;
  double u_max = 2.0;
  double y_min = -2.0;
  double y_max = 2.0;
  int l_p = 10;
  int l_f = 15;
  double qp_tol = 1e-8;
  double soft_penalty = 1e4;  // L1 weight on output-bound slacks

  void validate(int n_u, int n_y) const;
};

// Per-step outcome of the receding-horizon QP.
enum class StepStatus {
  kHard,          // hard-constrained QP solved
  kSoftFallback,  // hard QP infeasible, soft-constrained QP solved
  kInputFallback  // both failed; previous input (clamped) applied
};

struct ClosedLoopResult {
  Matrix u;        // N_test x n_u, applied inputs
  Matrix y;        // N_test x n_y, measured outputs
  Matrix y_clean;  // N_test x n_y
  Matrix r;        // N_test x n_y
  std::vector<StepStatus> step_status;
  std::vector<double> kkt_residual;       // max KKT residual per step
  int n_soft_fallback = 0;
  int n_input_fallback = 0;
  // Predicted-output bound violation beyond tolerance at solve time,
  // counted only for hard-QP steps (soft steps are logged above).
  int n_predicted_bound_violations = 0;
  std::uint64_t seed = 0;
  std::uint64_t noise_hash = 0;  // hash of the (w, v) test streams
};

// Condensed QP of the horizon cost ||yhat_f - r||_Q + ||u_f||_R with
// box constraints on u_f and on the predicted outputs. y_free is the
// input-independent part of the prediction (P_z z_p for a data-driven
// predictor, Gamma xhat for the oracle).
QpProblem build_qp(const Matrix& p_u, const Vector& y_free,
                   const Vector& r_window, const ControllerConfig& cfg,
                   int n_u, int n_y);

QpProblem build_qp(const CondensedPredictor& cp, const Vector& z_p,
                   const Vector& r_window, const ControllerConfig& cfg);

// Soft-constrained variant: output bounds become L1-penalized slacks;
// input bounds stay hard. Decision vector is [u_f; s].
QpProblem build_soft_qp(const QpProblem& hard, int m_inputs,
                        double soft_penalty);

// Receding-horizon loop against the simulated plant: at each step form
// z_p from the last L_p measured pairs, solve the QP over the next L_f
// steps, apply the first input, advance the plant one step. warmup
// supplies the initial past window (at least L_p samples).
ClosedLoopResult receding_horizon_run(const StateSpaceModel& plant,
                                      const NoiseConfig& noise,
                                      const CondensedPredictor& predictor,
                                      const Matrix& r_seq,
                                      const ControllerConfig& cfg, int n_test,
                                      std::uint64_t seed,
                                      const TrajectoryData& warmup);

// Oracle baseline: same loop, but predictions propagate the true model
// from a steady-state Kalman filter state estimate (innovations set to
// zero over the horizon). model must carry the Kalman gain.
ClosedLoopResult mpc_sskf_run(const StateSpaceModel& plant,
                              const NoiseConfig& noise,
                              const StateSpaceModel& model,
                              const Matrix& r_seq, const ControllerConfig& cfg,
                              int n_test, std::uint64_t seed);

// CSV with columns t, r_*, u_*, y_*, y0_*, qp_status.
void write_closed_loop_csv(const ClosedLoopResult& res,
                           const std::string& path);

}  // namespace ssarx

#endif  // SSARX_CONTROL_HPP_
