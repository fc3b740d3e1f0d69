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

#include "ssarx/control.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "ssarx/csv.hpp"

namespace ssarx {

void ControllerConfig::validate(int n_u, int n_y) const {
  if (q.rows() != n_y || q.cols() != n_y)
    throw std::invalid_argument("ControllerConfig: Q must be n_y x n_y");
  if (r.rows() != n_u || r.cols() != n_u)
    throw std::invalid_argument("ControllerConfig: R must be n_u x n_u");
  Eigen::LLT<Matrix> llt_r(r);
  if (llt_r.info() != Eigen::Success)
    throw std::invalid_argument("ControllerConfig: R must be positive definite");
  Eigen::SelfAdjointEigenSolver<Matrix> es(q);
  if (es.eigenvalues().minCoeff() < -1e-12)
    throw std::invalid_argument("ControllerConfig: Q must be PSD");
  if (u_min >= u_max || y_min >= y_max)
    throw std::invalid_argument("ControllerConfig: bounds must be ordered");
  if (l_p <= 0 || l_f <= 0)
    throw std::invalid_argument("ControllerConfig: horizons must be > 0");
}

namespace {

Matrix horizon_diagonal(const Matrix& block, int l_f) {
  const int d = static_cast<int>(block.rows());
  Matrix big = Matrix::Zero(d * l_f, d * l_f);
  for (int i = 0; i < l_f; ++i) big.block(i * d, i * d, d, d) = block;
  return big;
}

}  // namespace

QpProblem build_qp(const Matrix& p_u, const Vector& y_free,
                   const Vector& r_window, const ControllerConfig& cfg,
                   int n_u, int n_y) {
  cfg.validate(n_u, n_y);
  const int m = n_u * cfg.l_f;
  const int ny_total = n_y * cfg.l_f;
  if (p_u.rows() != ny_total || p_u.cols() != m)
    throw std::invalid_argument("build_qp: P_u dimension mismatch");
  if (y_free.size() != ny_total || r_window.size() != ny_total)
    throw std::invalid_argument("build_qp: y_free/r_window dimension mismatch");

  const Matrix q_bar = horizon_diagonal(cfg.q, cfg.l_f);
  const Matrix r_bar = horizon_diagonal(cfg.r, cfg.l_f);

  QpProblem qp;
  qp.H = 2.0 * (p_u.transpose() * q_bar * p_u + r_bar);
  qp.H = 0.5 * (qp.H + qp.H.transpose());
  qp.f = 2.0 * p_u.transpose() * q_bar * (y_free - r_window);

  // Rows: u <= u_max, -u <= -u_min, P_u u <= y_max - y_free,
  // -P_u u <= y_free - y_min.
  qp.G.resize(2 * m + 2 * ny_total, m);
  qp.h.resize(2 * m + 2 * ny_total);
  qp.G.topRows(m) = Matrix::Identity(m, m);
  qp.G.middleRows(m, m) = -Matrix::Identity(m, m);
  qp.G.middleRows(2 * m, ny_total) = p_u;
  qp.G.bottomRows(ny_total) = -p_u;
  qp.h.head(m).setConstant(cfg.u_max);
  qp.h.segment(m, m).setConstant(-cfg.u_min);
  qp.h.segment(2 * m, ny_total) =
      Vector::Constant(ny_total, cfg.y_max) - y_free;
  qp.h.tail(ny_total) = y_free - Vector::Constant(ny_total, cfg.y_min);
  return qp;
}

QpProblem build_qp(const CondensedPredictor& cp, const Vector& z_p,
                   const Vector& r_window, const ControllerConfig& cfg) {
  if (z_p.size() != cp.p_z.cols())
    throw std::invalid_argument("build_qp: z_p dimension mismatch");
  return build_qp(cp.p_u, cp.p_z * z_p, r_window, cfg, cp.n_u, cp.n_y);
}

QpProblem build_soft_qp(const QpProblem& hard, int m_inputs,
                        double soft_penalty) {
  const int m = m_inputs;
  const int p = static_cast<int>(hard.G.rows());
  const int n_out = (p - 2 * m) / 2;  // output-bound rows per side
  if (n_out < 0 || 2 * m + 2 * n_out != p)
    throw std::invalid_argument("build_soft_qp: unexpected constraint layout");

  // Decision [u; s]: one slack per output-bound pair, L1-penalized.
  QpProblem soft;
  soft.H = Matrix::Zero(m + n_out, m + n_out);
  soft.H.topLeftCorner(m, m) = hard.H;
  soft.f.resize(m + n_out);
  soft.f.head(m) = hard.f;
  soft.f.tail(n_out).setConstant(soft_penalty);

  // u bounds stay hard; each output row gets -s; s >= 0.
  soft.G = Matrix::Zero(p + n_out, m + n_out);
  soft.h.resize(p + n_out);
  soft.G.topLeftCorner(2 * m, m) = hard.G.topRows(2 * m);
  soft.h.head(2 * m) = hard.h.head(2 * m);
  soft.G.block(2 * m, 0, n_out, m) = hard.G.middleRows(2 * m, n_out);
  soft.G.block(2 * m, m, n_out, n_out) = -Matrix::Identity(n_out, n_out);
  soft.h.segment(2 * m, n_out) = hard.h.segment(2 * m, n_out);
  soft.G.block(2 * m + n_out, 0, n_out, m) = hard.G.bottomRows(n_out);
  soft.G.block(2 * m + n_out, m, n_out, n_out) =
      -Matrix::Identity(n_out, n_out);
  soft.h.segment(2 * m + n_out, n_out) = hard.h.tail(n_out);
  soft.G.bottomRightCorner(n_out, n_out) = -Matrix::Identity(n_out, n_out);
  soft.h.tail(n_out).setZero();
  return soft;
}

namespace {

// Shared receding-horizon machinery; `free_response` maps the current
// history to the input-independent prediction over the horizon.
template <typename FreeResponse, typename AfterStep>
ClosedLoopResult run_loop(const StateSpaceModel& plant,
                          const NoiseConfig& noise, const Matrix& p_u,
                          const Matrix& r_seq, const ControllerConfig& cfg,
                          int n_test, std::uint64_t seed,
                          FreeResponse free_response, AfterStep after_step) {
  plant.validate();
  const int n_u = plant.n_u();
  const int n_y = plant.n_y();
  cfg.validate(n_u, n_y);
  if (r_seq.rows() < n_test || r_seq.cols() != n_y)
    throw std::invalid_argument("receding horizon: reference too short");

  auto [w, v] = make_noise_sequences(n_test, plant.n(), n_y, noise, seed);

  ClosedLoopResult res;
  res.seed = seed;
  res.noise_hash = hash_matrix(w) ^ hash_matrix(v);
  res.u.resize(n_test, n_u);
  res.y.resize(n_test, n_y);
  res.y_clean.resize(n_test, n_y);
  res.r = r_seq.topRows(n_test);
  res.step_status.reserve(n_test);
  res.kkt_residual.reserve(n_test);

  const int m = n_u * cfg.l_f;
  // H and G are step-invariant; only f and h change, so the
  // factorizations are shared across the whole run.
  const QpProblem qp_template =
      build_qp(p_u, Vector::Zero(n_y * cfg.l_f), Vector::Zero(n_y * cfg.l_f),
               cfg, n_u, n_y);
  QpSolver hard_solver(qp_template.H, qp_template.G, cfg.qp_tol);
  std::unique_ptr<QpSolver> soft_solver;

  Vector x = Vector::Zero(plant.n());
  Vector xc = Vector::Zero(plant.n());
  Vector u_prev = Vector::Zero(n_u);

  for (int t = 0; t < n_test; ++t) {
    // Reference window, held at the final value past the end.
    Vector r_window(n_y * cfg.l_f);
    for (int k = 0; k < cfg.l_f; ++k) {
      const int idx = std::min(t + k, static_cast<int>(r_seq.rows()) - 1);
      r_window.segment(k * n_y, n_y) = r_seq.row(idx).transpose();
    }

    const Vector y_free = free_response(t);
    const QpProblem qp = build_qp(p_u, y_free, r_window, cfg, n_u, n_y);

    Vector u_f;
    StepStatus status = StepStatus::kHard;
    double kkt = 0.0;
    bool solved = false;
    try {
      const QpSolution sol = hard_solver.solve(qp.f, qp.h);
      if (sol.status == QpStatus::kSolved) {
        u_f = sol.x;
        kkt = std::max({sol.stationarity, sol.feasibility,
                        sol.complementarity});
        solved = true;
      }
    } catch (const std::runtime_error&) {
      // fall through to the soft problem
    }
    if (!solved) {
      try {
        const QpProblem soft = build_soft_qp(qp, m, cfg.soft_penalty);
        if (!soft_solver)
          soft_solver =
              std::make_unique<QpSolver>(soft.H, soft.G, cfg.qp_tol);
        const QpSolution sol = soft_solver->solve(soft.f, soft.h);
        if (sol.status == QpStatus::kSolved) {
          u_f = sol.x.head(m);
          kkt = std::max({sol.stationarity, sol.feasibility,
                          sol.complementarity});
          status = StepStatus::kSoftFallback;
          ++res.n_soft_fallback;
          solved = true;
        }
      } catch (const std::runtime_error&) {
      }
    }
    if (!solved) {
      // Last resort: hold the previous input, clamped into the box.
      u_f = Vector::Zero(m);
      u_f.head(n_u) =
          u_prev.cwiseMax(cfg.u_min).cwiseMin(cfg.u_max);
      status = StepStatus::kInputFallback;
      ++res.n_input_fallback;
    }

    if (status == StepStatus::kHard) {
      // Predicted outputs must respect the bounds at solve time.
      const Vector y_pred = y_free + p_u * u_f;
      const double viol = std::max(
          (y_pred.array() - cfg.y_max).maxCoeff(),
          (cfg.y_min - y_pred.array()).maxCoeff());
      if (viol > 1e-6) ++res.n_predicted_bound_violations;
    }

    const Vector u_t = u_f.head(n_u);
    const Vector y_t = plant.C * x + plant.D * u_t + v.row(t).transpose();
    const Vector yc_t = plant.C * xc + plant.D * u_t;
    res.u.row(t) = u_t.transpose();
    res.y.row(t) = y_t.transpose();
    res.y_clean.row(t) = yc_t.transpose();
    res.step_status.push_back(status);
    res.kkt_residual.push_back(kkt);

    x = plant.A * x + plant.B * u_t + w.row(t).transpose();
    xc = plant.A * xc + plant.B * u_t;
    u_prev = u_t;
    after_step(t, u_t, y_t);
  }
  return res;
}

}  // namespace

ClosedLoopResult receding_horizon_run(const StateSpaceModel& plant,
                                      const NoiseConfig& noise,
                                      const CondensedPredictor& predictor,
                                      const Matrix& r_seq,
                                      const ControllerConfig& cfg, int n_test,
                                      std::uint64_t seed,
                                      const TrajectoryData& warmup) {
  const int n_u = plant.n_u();
  const int n_y = plant.n_y();
  if (warmup.length() < cfg.l_p)
    throw std::invalid_argument(
        "receding_horizon_run: warmup must supply at least L_p samples");
  if (predictor.l_p != cfg.l_p || predictor.l_f != cfg.l_f)
    throw std::invalid_argument(
        "receding_horizon_run: predictor horizons disagree with config");

  // Rolling past window, oldest first, seeded from the warmup tail.
  Matrix past_y(cfg.l_p, n_y);
  Matrix past_u(cfg.l_p, n_u);
  for (int k = 0; k < cfg.l_p; ++k) {
    const int idx = warmup.length() - cfg.l_p + k;
    past_y.row(k) = warmup.y.row(idx);
    past_u.row(k) = warmup.u.row(idx);
  }

  const auto free_response = [&](int) -> Vector {
    Vector z_p((n_y + n_u) * cfg.l_p);
    for (int k = 0; k < cfg.l_p; ++k)
      z_p.segment(k * n_y, n_y) = past_y.row(k).transpose();
    for (int k = 0; k < cfg.l_p; ++k)
      z_p.segment(n_y * cfg.l_p + k * n_u, n_u) = past_u.row(k).transpose();
    return predictor.p_z * z_p;
  };
  const auto after_step = [&](int, const Vector& u_t, const Vector& y_t) {
    for (int k = 0; k + 1 < cfg.l_p; ++k) {
      past_y.row(k) = past_y.row(k + 1);
      past_u.row(k) = past_u.row(k + 1);
    }
    past_y.row(cfg.l_p - 1) = y_t.transpose();
    past_u.row(cfg.l_p - 1) = u_t.transpose();
  };

  return run_loop(plant, noise, predictor.p_u, r_seq, cfg, n_test, seed,
                  free_response, after_step);
}

ClosedLoopResult mpc_sskf_run(const StateSpaceModel& plant,
                              const NoiseConfig& noise,
                              const StateSpaceModel& model,
                              const Matrix& r_seq, const ControllerConfig& cfg,
                              int n_test, std::uint64_t seed) {
  model.validate();
  if (!model.has_gain())
    throw std::invalid_argument("mpc_sskf_run: model needs a Kalman gain");
  const int n_u = model.n_u();
  const int n_y = model.n_y();

  // Horizon maps of the true model: extended observability matrix and
  // the impulse-response Toeplitz matrix.
  Matrix gamma(n_y * cfg.l_f, model.n());
  std::vector<Matrix> impulse(cfg.l_f);
  impulse[0] = model.D;
  Matrix power = Matrix::Identity(model.n(), model.n());
  for (int k = 0; k < cfg.l_f; ++k) {
    gamma.middleRows(k * n_y, n_y) = model.C * power;
    if (k + 1 < cfg.l_f) impulse[k + 1] = model.C * power * model.B;
    power = power * model.A;
  }
  const Matrix p_u = toeplitz_from_blocks(impulse, cfg.l_f);

  // One-step-ahead predictor update: xhat(t+1) = A xhat + B u + K e.
  Vector x_hat = Vector::Zero(model.n());
  const auto free_response = [&](int) -> Vector { return gamma * x_hat; };
  const auto after_step = [&](int, const Vector& u_t, const Vector& y_t) {
    const Vector innovation = y_t - model.C * x_hat - model.D * u_t;
    x_hat = model.A * x_hat + model.B * u_t + model.K * innovation;
  };

  return run_loop(plant, noise, p_u, r_seq, cfg, n_test, seed, free_response,
                  after_step);
}

void write_closed_loop_csv(const ClosedLoopResult& res,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  const int n_u = static_cast<int>(res.u.cols());
  const int n_y = static_cast<int>(res.y.cols());
  out << "t";
  for (int i = 0; i < n_y; ++i) out << ",r_" << (i + 1);
  for (int i = 0; i < n_u; ++i) out << ",u_" << (i + 1);
  for (int i = 0; i < n_y; ++i) out << ",y_" << (i + 1);
  for (int i = 0; i < n_y; ++i) out << ",y0_" << (i + 1);
  out << ",qp_status\n";
  for (int t = 0; t < res.u.rows(); ++t) {
    out << t;
    for (int i = 0; i < n_y; ++i) out << "," << format_double(res.r(t, i));
    for (int i = 0; i < n_u; ++i) out << "," << format_double(res.u(t, i));
    for (int i = 0; i < n_y; ++i) out << "," << format_double(res.y(t, i));
    for (int i = 0; i < n_y; ++i)
      out << "," << format_double(res.y_clean(t, i));
    const char* status = "hard";
    if (res.step_status[t] == StepStatus::kSoftFallback) status = "soft";
    if (res.step_status[t] == StepStatus::kInputFallback) status = "fallback";
    out << "," << status << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ssarx
