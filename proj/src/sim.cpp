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

#include "ssarx/sim.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ssarx/rng.hpp"

namespace ssarx {

void StateSpaceModel::validate() const {
  const auto fail = [](const std::string& what) {
    throw std::invalid_argument("StateSpaceModel: " + what);
  };
  if (A.rows() != A.cols()) fail("A must be square");
  if (B.rows() != A.rows()) fail("B row count must equal n");
  if (C.cols() != A.rows()) fail("C column count must equal n");
  if (D.rows() != C.rows() || D.cols() != B.cols())
    fail("D must be n_y x n_u");
  if (has_gain() && (K.rows() != A.rows() || K.cols() != C.rows()))
    fail("K must be n x n_y");
  if (sigma_w < 0.0 || sigma_v < 0.0) fail("noise stds must be >= 0");
}

double spectral_radius(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

StateSpaceModel benchmark_model() {
  StateSpaceModel m;
  m.A.resize(2, 2);
  m.A << 0.7326, -0.0861, 0.1722, 0.9909;
  m.B.resize(2, 1);
  m.B << 0.0609, 0.0064;
  m.C.resize(1, 2);
  m.C << 0.0, 1.4142;
  m.D = Matrix::Zero(1, 1);
  return m;
}

StateSpaceModel with_kalman_gain(const StateSpaceModel& model, double sigma_w,
                                 double sigma_v) {
  StateSpaceModel out = model;
  out.sigma_w = sigma_w;
  out.sigma_v = sigma_v;
  const Matrix cov_w = sigma_w * sigma_w * Matrix::Identity(model.n(), model.n());
  const Matrix cov_v =
      sigma_v * sigma_v * Matrix::Identity(model.n_y(), model.n_y());
  out.K = solve_dare(model, cov_w, cov_v).k;
  return out;
}

namespace {

void check_sequence(const char* name, const Matrix& seq, int length, int dim) {
  if (seq.rows() != length || seq.cols() != dim) {
    std::ostringstream msg;
    msg << name << " must be " << length << " x " << dim << ", got "
        << seq.rows() << " x " << seq.cols();
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

TrajectoryData simulate_innovations(const StateSpaceModel& model,
                                    const Matrix& u_seq, const Matrix& e_seq,
                                    const Vector& x0) {
  model.validate();
  if (!model.has_gain())
    throw std::invalid_argument("simulate_innovations: model has no gain K");
  const int n = static_cast<int>(u_seq.rows());
  check_sequence("e_seq", e_seq, n, model.n_y());
  check_sequence("u_seq", u_seq, n, model.n_u());
  if (x0.size() != model.n())
    throw std::invalid_argument("simulate_innovations: x0 dimension mismatch");

  TrajectoryData traj;
  traj.u = u_seq;
  traj.y.resize(n, model.n_y());
  traj.y_clean.resize(n, model.n_y());
  Vector x = x0;
  Vector xc = x0;
  for (int t = 0; t < n; ++t) {
    const Vector u = u_seq.row(t).transpose();
    const Vector e = e_seq.row(t).transpose();
    traj.y.row(t) = (model.C * x + model.D * u + e).transpose();
    traj.y_clean.row(t) = (model.C * xc + model.D * u).transpose();
    x = model.A * x + model.B * u + model.K * e;
    xc = model.A * xc + model.B * u;
  }
  return traj;
}

TrajectoryData simulate_plant(const StateSpaceModel& model, const Matrix& u_seq,
                              const Matrix& w_seq, const Matrix& v_seq,
                              const Vector& x0) {
  model.validate();
  const int n = static_cast<int>(u_seq.rows());
  check_sequence("u_seq", u_seq, n, model.n_u());
  check_sequence("w_seq", w_seq, n, model.n());
  check_sequence("v_seq", v_seq, n, model.n_y());
  if (x0.size() != model.n())
    throw std::invalid_argument("simulate_plant: x0 dimension mismatch");

  TrajectoryData traj;
  traj.u = u_seq;
  traj.y.resize(n, model.n_y());
  traj.y_clean.resize(n, model.n_y());
  Vector x = x0;
  Vector xc = x0;
  for (int t = 0; t < n; ++t) {
    const Vector u = u_seq.row(t).transpose();
    traj.y.row(t) =
        (model.C * x + model.D * u + v_seq.row(t).transpose()).transpose();
    traj.y_clean.row(t) = (model.C * xc + model.D * u).transpose();
    x = model.A * x + model.B * u + w_seq.row(t).transpose();
    xc = model.A * xc + model.B * u;
  }
  return traj;
}

Vector square_wave_reference(int period, double amplitude, double jitter_var,
                             int n, std::uint64_t seed) {
  if (period < 2) throw std::invalid_argument("square wave: period must be >= 2");
  if (n <= 0) throw std::invalid_argument("square wave: length must be > 0");
  if (jitter_var < 0.0)
    throw std::invalid_argument("square wave: jitter variance must be >= 0");
  GaussianSampler rng(seed);
  const double jitter_std = std::sqrt(jitter_var);
  const int half = period / 2;
  Vector r(n);
  for (int t = 0; t < n; ++t) {
    const double level = ((t / half) % 2 == 0) ? amplitude : -amplitude;
    r[t] = level + rng.gaussian(jitter_std);
  }
  return r;
}

std::pair<Matrix, Matrix> make_noise_sequences(int n, int n_states, int n_y,
                                               const NoiseConfig& noise,
                                               std::uint64_t seed) {
  GaussianSampler rng_w(derive_seed(seed, 0x77));
  GaussianSampler rng_v(derive_seed(seed, 0x76));
  Matrix w(n, n_states);
  Matrix v(n, n_y);
  for (int t = 0; t < n; ++t)
    for (int i = 0; i < n_states; ++i) w(t, i) = rng_w.gaussian(noise.sigma_w);
  for (int t = 0; t < n; ++t)
    for (int i = 0; i < n_y; ++i) v(t, i) = rng_v.gaussian(noise.sigma_v);
  return {w, v};
}

TrajectoryData collect_closed_loop(const StateSpaceModel& model,
                                   const Matrix& r_train,
                                   const NoiseConfig& noise, int n,
                                   std::uint64_t seed) {
  model.validate();
  if (model.n_u() != model.n_y())
    throw std::invalid_argument(
        "collect_closed_loop: unit feedback needs n_u == n_y");
  if (r_train.rows() < n || r_train.cols() != model.n_y())
    throw std::invalid_argument("collect_closed_loop: reference too short");
  if (model.D.cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument(
        "collect_closed_loop: u(t) = r(t) - y(t) is ill-posed with "
        "direct feedthrough");
  const double rho = spectral_radius(model.A - model.B * model.C);
  if (rho >= 1.0) {
    std::ostringstream msg;
    msg << "collect_closed_loop: unit feedback loop unstable, "
        << "spectral radius " << rho;
    throw std::runtime_error(msg.str());
  }

  auto [w, v] = make_noise_sequences(n, model.n(), model.n_y(), noise, seed);
  TrajectoryData traj;
  traj.seed = seed;
  traj.u.resize(n, model.n_u());
  traj.y.resize(n, model.n_y());
  traj.y_clean.resize(n, model.n_y());
  Vector x = Vector::Zero(model.n());
  Vector xc = Vector::Zero(model.n());
  for (int t = 0; t < n; ++t) {
    const Vector y = model.C * x + v.row(t).transpose();
    const Vector u = r_train.row(t).transpose() - y;
    traj.y.row(t) = y.transpose();
    traj.u.row(t) = u.transpose();
    traj.y_clean.row(t) = (model.C * xc).transpose();
    x = model.A * x + model.B * u + w.row(t).transpose();
    xc = model.A * xc + model.B * u;
  }
  return traj;
}

double empirical_snr(const Matrix& y_noisy, const Matrix& y_clean) {
  if (y_noisy.rows() != y_clean.rows() || y_noisy.cols() != y_clean.cols())
    throw std::invalid_argument("empirical_snr: length mismatch");
  const double p_signal = y_clean.array().square().mean();
  if (p_signal == 0.0)
    throw std::invalid_argument("empirical_snr: zero signal power");
  const double p_noise = (y_noisy - y_clean).array().square().mean();
  if (p_noise == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(p_signal / p_noise);
}

DareSolution solve_dare(const StateSpaceModel& model, const Matrix& sigma_w,
                        const Matrix& sigma_v, double tol,
                        int max_iterations) {
  model.validate();
  const int n = model.n();
  const int n_y = model.n_y();
  if (sigma_w.rows() != n || sigma_w.cols() != n)
    throw std::invalid_argument("solve_dare: sigma_w must be n x n");
  if (sigma_v.rows() != n_y || sigma_v.cols() != n_y)
    throw std::invalid_argument("solve_dare: sigma_v must be n_y x n_y");
  Eigen::LLT<Matrix> llt_v(sigma_v);
  if (llt_v.info() != Eigen::Success)
    throw std::invalid_argument("solve_dare: sigma_v must be positive definite");

  const auto step = [&](const Matrix& p) -> Matrix {
    const Matrix s = model.C * p * model.C.transpose() + sigma_v;
    const Matrix k = model.A * p * model.C.transpose() * s.inverse();
    return model.A * p * model.A.transpose() - k * s * k.transpose() + sigma_w;
  };

  Matrix p = sigma_w;
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < max_iterations; ++it) {
    const Matrix next = step(p);
    residual = (next - p).cwiseAbs().maxCoeff();
    p = next;
    if (residual <= tol) break;
  }
  if (residual > tol) {
    std::ostringstream msg;
    msg << "solve_dare: no convergence after " << max_iterations
        << " iterations, residual " << residual;
    throw std::runtime_error(msg.str());
  }

  DareSolution sol;
  sol.p = p;
  const Matrix s = model.C * p * model.C.transpose() + sigma_v;
  sol.k = model.A * p * model.C.transpose() * s.inverse();
  sol.residual = (step(p) - p).cwiseAbs().maxCoeff();
  sol.iterations = it + 1;
  return sol;
}

}  // namespace ssarx
