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

#ifndef SSARX_IDENT_HPP_
#define SSARX_IDENT_HPP_

#include <string>
#include <vector>

#include "ssarx/least_squares.hpp"
#include "ssarx/stacking.hpp"
#include "ssarx/state_space_model.hpp"
#include "ssarx/trajectory.hpp"

namespace ssarx {

// High-order ARX estimate of the one-step predictor Markov parameters.
// Blocks are indexed by lag: phi_y[i] maps y(t-i), phi_u[j] maps u(t-j).
// phi_y[0] is structurally zero; phi_u[0] is zero unless the regression
// was run with feedthrough enabled.
struct ArxEstimate {
  std::vector<Matrix> phi_y;  // n_a blocks, each n_y x n_y
  std::vector<Matrix> phi_u;  // n_b blocks, each n_y x n_u
  int n_a = 0;
  int n_b = 0;
  Matrix residual_covariance;  // n_y x n_y
  bool rank_deficient = false;
  bool feedthrough = false;
};

enum class Stage2Variant { kLeastSquares, kLowRank };

// Behavior of the whitened reduced-rank regression.
//   regularize  - truncate S-matrix eigenvalues below 1e-12 * lambda_max
//                 instead of erroring on near-singular inputs
//   use_raw_yf  - build the S matrices from the raw future block instead
//                 of the ARX-corrected one
struct RrrOptions {
  bool regularize = false;
  bool use_raw_yf = false;
};

// Identified multi-step predictor: the past-to-future map and the
// block-Toeplitz one-step coefficient matrices.
struct PredictorModel {
  Matrix gamma_k;    // n_y L_f x (n_y+n_u) L_p
  Matrix phi_u_big;  // n_y L_f x n_u L_f, block lower triangular
  Matrix phi_y_big;  // n_y L_f x n_y L_f, strictly block lower triangular
  int l_p = 0;
  int l_f = 0;
  int n_u = 0;
  int n_y = 0;
  Stage2Variant variant = Stage2Variant::kLeastSquares;
  int rank = 0;  // meaningful for kLowRank
  int n_a = 0;
  int n_b = 0;
};

struct SsarxConfig {
  int l_p = 10;
  int l_f = 15;
  int n_a = 15;
  int n_b = 15;
  Stage2Variant variant = Stage2Variant::kLeastSquares;
  int rank = 0;
  bool include_feedthrough = false;
  LsOptions stage2;
  RrrOptions rrr;
};

// Stage 1: least-squares fit of y(t) on past outputs/inputs. The
// regressor excludes y(t), and u(t) unless include_feedthrough. Samples
// run from t = max(n_a, n_b) to the end; no zero padding. Rank-deficient
// regressors (noise-free data) fall back to the pseudoinverse and set
// the rank_deficient flag.
ArxEstimate fit_high_order_arx(const TrajectoryData& traj, int n_a, int n_b,
                               bool include_feedthrough = false);

// Exact predictor Markov parameters of a model with known gain:
// phi_y[0] = 0, phi_y[i] = C Atilde^{i-1} K,
// phi_u[0] = D, phi_u[j] = C Atilde^{j-1} Btilde.
void true_markov_parameters(const StateSpaceModel& model, int count,
                            std::vector<Matrix>* phi_y,
                            std::vector<Matrix>* phi_u);

// Stacks lag blocks into the L_f x L_f block-Toeplitz matrices: block
// (i, j) = blocks[i - j] for i >= j, zero above the diagonal.
Matrix toeplitz_from_blocks(const std::vector<Matrix>& blocks, int l_f);

// Both Toeplitz matrices from an ARX estimate; requires orders >= l_f.
void assemble_toeplitz(const ArxEstimate& arx, int l_f, Matrix* phi_u_big,
                       Matrix* phi_y_big);

// The part of the future block explained by the past alone:
// Ybar_f = Y_f - Phi_u U_f - Phi_y Y_f.
Matrix residual_future(const HankelSet& h, const Matrix& phi_u_big,
                       const Matrix& phi_y_big);

// Stage 2 plain regression of Ybar_f on Z_p.
Matrix ls_regression(const Matrix& ybar_f, const Matrix& z_p,
                     const LsOptions& options = {});

// Stage 2 reduced-rank regression via SVD of the whitened
// cross-covariance; the result has rank exactly r.
Matrix reduced_rank_regression(const Matrix& ybar_f, const Matrix& z_p, int r,
                               const RrrOptions& options = {});

// Singular values of the whitened cross-covariance (the profile used to
// pick r).
Vector rrr_singular_values(const Matrix& ybar_f, const Matrix& z_p,
                           const RrrOptions& options = {});

// The full two-stage identification pipeline.
PredictorModel identify_ssarx(const TrajectoryData& traj,
                              const SsarxConfig& cfg);

// SPC baseline: single regression of Y_f on [Z_p; U_f]. Returns the
// n_y L_f x ((n_y+n_u) L_p + n_u L_f) predictor matrix.
Matrix spc_fit(const HankelSet& h, const LsOptions& options = {});

// Text round trip for PredictorModel (exact: doubles printed with
// enough digits to reparse bit-identically).
void save_predictor_model(const PredictorModel& model, const std::string& path);
PredictorModel load_predictor_model(const std::string& path);

}  // namespace ssarx

#endif  // SSARX_IDENT_HPP_
