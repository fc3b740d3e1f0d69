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

#include "ssarx/ident.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ssarx {

ArxEstimate fit_high_order_arx(const TrajectoryData& traj, int n_a, int n_b,
                               bool include_feedthrough) {
  if (n_a < 1 || n_b < 1)
    throw std::invalid_argument("fit_high_order_arx: orders must be >= 1");
  const int n_y = traj.n_y();
  const int n_u = traj.n_u();
  const int t_begin = std::max(n_a, n_b);
  const int n_samples = traj.length() - t_begin;
  const int n_reg =
      n_y * (n_a - 1) + n_u * (n_b - 1) + (include_feedthrough ? n_u : 0);
  if (n_samples < n_reg) {
    std::ostringstream msg;
    msg << "fit_high_order_arx: " << n_samples << " samples for " << n_reg
        << " regressors; need length >= " << (t_begin + n_reg);
    throw std::invalid_argument(msg.str());
  }

  // Row t: [y(t-1)' ... y(t-n_a+1)'  (u(t)')  u(t-1)' ... u(t-n_b+1)'].
  Matrix x(n_samples, n_reg);
  Matrix target(n_samples, n_y);
  for (int s = 0; s < n_samples; ++s) {
    const int t = t_begin + s;
    int k = 0;
    for (int i = 1; i < n_a; ++i)
      for (int c = 0; c < n_y; ++c) x(s, k++) = traj.y(t - i, c);
    if (include_feedthrough)
      for (int c = 0; c < n_u; ++c) x(s, k++) = traj.u(t, c);
    for (int j = 1; j < n_b; ++j)
      for (int c = 0; c < n_u; ++c) x(s, k++) = traj.u(t - j, c);
    target.row(s) = traj.y.row(t);
  }

  // Noise-free data is rank deficient by design; fall back to the
  // pseudoinverse and flag it.
  LsOptions options;
  options.rank_policy = RankPolicy::kMinNorm;
  const LsResult ls = solve_least_squares(x, target, options, "ARX regressor");
  const Matrix theta = ls.solution;  // n_reg x n_y

  ArxEstimate arx;
  arx.n_a = n_a;
  arx.n_b = n_b;
  arx.rank_deficient = ls.rank_deficient;
  arx.feedthrough = include_feedthrough;
  arx.phi_y.assign(n_a, Matrix::Zero(n_y, n_y));
  arx.phi_u.assign(n_b, Matrix::Zero(n_y, n_u));
  int k = 0;
  for (int i = 1; i < n_a; ++i) {
    arx.phi_y[i] = theta.middleRows(k, n_y).transpose();
    k += n_y;
  }
  if (include_feedthrough) {
    arx.phi_u[0] = theta.middleRows(k, n_u).transpose();
    k += n_u;
  }
  for (int j = 1; j < n_b; ++j) {
    arx.phi_u[j] = theta.middleRows(k, n_u).transpose();
    k += n_u;
  }

  const Matrix residual = target - x * theta;
  arx.residual_covariance =
      residual.transpose() * residual / static_cast<double>(n_samples);
  return arx;
}

void true_markov_parameters(const StateSpaceModel& model, int count,
                            std::vector<Matrix>* phi_y,
                            std::vector<Matrix>* phi_u) {
  model.validate();
  if (!model.has_gain())
    throw std::invalid_argument("true_markov_parameters: model has no gain K");
  if (count < 1)
    throw std::invalid_argument("true_markov_parameters: count must be >= 1");
  const Matrix a_tilde = model.a_tilde();
  const Matrix b_tilde = model.b_tilde();
  phi_y->assign(count, Matrix::Zero(model.n_y(), model.n_y()));
  phi_u->assign(count, Matrix::Zero(model.n_y(), model.n_u()));
  (*phi_u)[0] = model.D;
  Matrix power = Matrix::Identity(model.n(), model.n());
  for (int k = 1; k < count; ++k) {
    (*phi_y)[k] = model.C * power * model.K;
    (*phi_u)[k] = model.C * power * b_tilde;
    power = power * a_tilde;
  }
}

Matrix toeplitz_from_blocks(const std::vector<Matrix>& blocks, int l_f) {
  if (blocks.empty()) throw std::invalid_argument("toeplitz: no blocks");
  if (static_cast<int>(blocks.size()) < l_f) {
    std::ostringstream msg;
    msg << "toeplitz: " << blocks.size() << " lag blocks for L_f = " << l_f;
    throw std::invalid_argument(msg.str());
  }
  const int br = static_cast<int>(blocks[0].rows());
  const int bc = static_cast<int>(blocks[0].cols());
  Matrix big = Matrix::Zero(br * l_f, bc * l_f);
  for (int i = 0; i < l_f; ++i)
    for (int j = 0; j <= i; ++j)
      big.block(i * br, j * bc, br, bc) = blocks[i - j];
  return big;
}

void assemble_toeplitz(const ArxEstimate& arx, int l_f, Matrix* phi_u_big,
                       Matrix* phi_y_big) {
  if (arx.n_a < l_f || arx.n_b < l_f) {
    std::ostringstream msg;
    msg << "assemble_toeplitz: ARX orders (" << arx.n_a << ", " << arx.n_b
        << ") must be >= L_f = " << l_f;
    throw std::invalid_argument(msg.str());
  }
  *phi_u_big = toeplitz_from_blocks(arx.phi_u, l_f);
  *phi_y_big = toeplitz_from_blocks(arx.phi_y, l_f);
}

Matrix residual_future(const HankelSet& h, const Matrix& phi_u_big,
                       const Matrix& phi_y_big) {
  if (phi_u_big.rows() != h.y_f.rows() || phi_u_big.cols() != h.u_f.rows() ||
      phi_y_big.rows() != h.y_f.rows() || phi_y_big.cols() != h.y_f.rows())
    throw std::invalid_argument("residual_future: dimension mismatch");
  return h.y_f - phi_u_big * h.u_f - phi_y_big * h.y_f;
}

Matrix ls_regression(const Matrix& ybar_f, const Matrix& z_p,
                     const LsOptions& options) {
  if (ybar_f.cols() != z_p.cols())
    throw std::invalid_argument("ls_regression: column count mismatch");
  // GammaK Z_p ~ Ybar_f  <=>  Z_p' GammaK' ~ Ybar_f'.
  const LsResult ls = solve_least_squares(z_p.transpose(), ybar_f.transpose(),
                                          options, "Z_p");
  return ls.solution.transpose();
}

namespace {

// Symmetric square root (inverse = true gives S^{-1/2}). Eigenvalues
// below 1e-12 * lambda_max count as zero: truncated from the inverse,
// clamped to zero in the forward root. Without `regularize`, hitting
// one is an error.
Matrix symmetric_root(const Matrix& s, bool inverse, bool regularize,
                      const char* name) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  if (es.info() != Eigen::Success)
    throw std::runtime_error(std::string("eigendecomposition failed for ") +
                             name);
  const Vector& ev = es.eigenvalues();
  const double floor = 1e-12 * std::max(ev.maxCoeff(), 0.0);
  if (ev.minCoeff() <= floor && !regularize) {
    std::ostringstream msg;
    msg << name << " is singular or near-singular (min eigenvalue "
        << ev.minCoeff() << "); set the regularization flag to truncate";
    throw std::runtime_error(msg.str());
  }
  Vector d(ev.size());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] <= floor)
      d[i] = 0.0;
    else
      d[i] = inverse ? 1.0 / std::sqrt(ev[i]) : std::sqrt(ev[i]);
  }
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Vector rrr_singular_values(const Matrix& ybar_f, const Matrix& z_p,
                           const RrrOptions& options) {
  const double n = static_cast<double>(z_p.cols());
  const Matrix s_yy = ybar_f * ybar_f.transpose() / n;
  const Matrix s_zz = z_p * z_p.transpose() / n;
  const Matrix s_yz = ybar_f * z_p.transpose() / n;
  const Matrix w = symmetric_root(s_yy, true, options.regularize, "S_yy") *
                   s_yz *
                   symmetric_root(s_zz, true, options.regularize, "S_zz");
  Eigen::BDCSVD<Matrix> svd(w);
  return svd.singularValues();
}

Matrix reduced_rank_regression(const Matrix& ybar_f, const Matrix& z_p, int r,
                               const RrrOptions& options) {
  if (ybar_f.cols() != z_p.cols())
    throw std::invalid_argument("reduced_rank_regression: column mismatch");
  const int max_rank =
      static_cast<int>(std::min(ybar_f.rows(), z_p.rows()));
  if (r < 1 || r > max_rank) {
    std::ostringstream msg;
    msg << "reduced_rank_regression: rank " << r << " outside [1, " << max_rank
        << "]";
    throw std::invalid_argument(msg.str());
  }
  const double n = static_cast<double>(z_p.cols());
  const Matrix s_yy = ybar_f * ybar_f.transpose() / n;
  const Matrix s_zz = z_p * z_p.transpose() / n;
  const Matrix s_yz = ybar_f * z_p.transpose() / n;
  const Matrix s_yy_isqrt =
      symmetric_root(s_yy, true, options.regularize, "S_yy");
  const Matrix s_yy_sqrt =
      symmetric_root(s_yy, false, options.regularize, "S_yy");
  const Matrix s_zz_isqrt =
      symmetric_root(s_zz, true, options.regularize, "S_zz");
  const Matrix w = s_yy_isqrt * s_yz * s_zz_isqrt;
  Eigen::BDCSVD<Matrix> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Matrix u_r = svd.matrixU().leftCols(r);
  const Matrix v_r = svd.matrixV().leftCols(r);
  const Vector sigma_r = svd.singularValues().head(r);
  return s_yy_sqrt * u_r * sigma_r.asDiagonal() * v_r.transpose() * s_zz_isqrt;
}

PredictorModel identify_ssarx(const TrajectoryData& traj,
                              const SsarxConfig& cfg) {
  if (cfg.n_a < cfg.l_f || cfg.n_b < cfg.l_f) {
    std::ostringstream msg;
    msg << "identify_ssarx: ARX orders (" << cfg.n_a << ", " << cfg.n_b
        << ") must be >= L_f = " << cfg.l_f;
    throw std::invalid_argument(msg.str());
  }
  const ArxEstimate arx =
      fit_high_order_arx(traj, cfg.n_a, cfg.n_b, cfg.include_feedthrough);

  PredictorModel model;
  model.l_p = cfg.l_p;
  model.l_f = cfg.l_f;
  model.n_u = traj.n_u();
  model.n_y = traj.n_y();
  model.n_a = cfg.n_a;
  model.n_b = cfg.n_b;
  model.variant = cfg.variant;
  model.rank = cfg.variant == Stage2Variant::kLowRank ? cfg.rank : 0;
  assemble_toeplitz(arx, cfg.l_f, &model.phi_u_big, &model.phi_y_big);

  const HankelSet h = build_hankels(traj, cfg.l_p, cfg.l_f);
  const Matrix ybar = residual_future(h, model.phi_u_big, model.phi_y_big);
  if (cfg.variant == Stage2Variant::kLowRank) {
    // use_raw_yf switches the whole formula to the raw future block.
    const Matrix& target = cfg.rrr.use_raw_yf ? h.y_f : ybar;
    model.gamma_k = reduced_rank_regression(target, h.z_p, cfg.rank, cfg.rrr);
  } else {
    model.gamma_k = ls_regression(ybar, h.z_p, cfg.stage2);
  }
  return model;
}

Matrix spc_fit(const HankelSet& h, const LsOptions& options) {
  Matrix reg(h.z_p.rows() + h.u_f.rows(), h.n_cols);
  reg << h.z_p, h.u_f;
  const LsResult ls = solve_least_squares(reg.transpose(), h.y_f.transpose(),
                                          options, "[Z_p; U_f]");
  return ls.solution.transpose();
}

}  // namespace ssarx
