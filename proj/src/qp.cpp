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

#include "ssarx/qp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ssarx {

double qp_objective(const QpProblem& qp, const Vector& x) {
  return 0.5 * x.dot(qp.H * x) + qp.f.dot(x);
}

namespace {

struct KktResiduals {
  double stationarity;
  double feasibility;
  double complementarity;
  double max() const {
    return std::max({stationarity, feasibility, complementarity});
  }
};

KktResiduals kkt_residuals(const QpProblem& qp, const Vector& x,
                           const Vector& lambda) {
  KktResiduals r{};
  r.stationarity =
      (qp.H * x + qp.f + qp.G.transpose() * lambda).cwiseAbs().maxCoeff();
  if (qp.G.rows() > 0) {
    const Vector slack = qp.G * x - qp.h;
    r.feasibility = std::max(0.0, slack.maxCoeff());
    r.complementarity = (lambda.array() * slack.array()).abs().maxCoeff();
  }
  return r;
}

// Equality-constrained solve on the guessed active set; returns false
// when the polished point fails the KKT check at `tol`.
bool try_polish(const QpProblem& qp, const std::vector<int>& active,
                double tol, Vector* x, Vector* lambda, KktResiduals* res) {
  const int m = static_cast<int>(qp.H.rows());
  const int na = static_cast<int>(active.size());
  Matrix kkt = Matrix::Zero(m + na, m + na);
  kkt.topLeftCorner(m, m) = qp.H;
  Vector rhs(m + na);
  rhs.head(m) = -qp.f;
  for (int i = 0; i < na; ++i) {
    kkt.block(m + i, 0, 1, m) = qp.G.row(active[i]);
    kkt.block(0, m + i, m, 1) = qp.G.row(active[i]).transpose();
    rhs[m + i] = qp.h[active[i]];
  }
  // COD tolerates redundant active constraints (singular KKT).
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(kkt);
  const Vector sol = cod.solve(rhs);

  Vector x_new = sol.head(m);
  Vector lambda_new = Vector::Zero(qp.G.rows());
  for (int i = 0; i < na; ++i) {
    const double nu = sol[m + i];
    if (nu < -tol) return false;  // wrong active-set guess
    lambda_new[active[i]] = std::max(nu, 0.0);
  }
  const KktResiduals r = kkt_residuals(qp, x_new, lambda_new);
  if (r.max() > tol) return false;
  *x = std::move(x_new);
  *lambda = std::move(lambda_new);
  *res = r;
  return true;
}

constexpr double kSigma = 1e-6;
constexpr double kAlpha = 1.6;
constexpr int kCheckInterval = 25;
constexpr double kInfeasTol = 1e-7;

}  // namespace

struct QpSolver::Impl {
  Matrix H;
  Matrix G;
  double tol;
  int max_iterations;

  double rho = 0.1;
  Eigen::LLT<Matrix> factor;
  // Warm-start state, carried across solves.
  Vector x, z, y;
  bool warm = false;

  Impl(const Matrix& h_in, const Matrix& g_in, double tol_in, int max_it)
      : H(h_in), G(g_in), tol(tol_in), max_iterations(max_it) {
    if (H.rows() != H.cols())
      throw std::invalid_argument("solve_qp: H must be square");
    if (G.size() > 0 && G.cols() != H.rows())
      throw std::invalid_argument("solve_qp: G column count mismatch");
    refactor();
  }

  void refactor() {
    const int m = static_cast<int>(H.rows());
    Matrix reg = H + kSigma * Matrix::Identity(m, m);
    if (G.rows() > 0) reg += rho * G.transpose() * G;
    factor.compute(reg);
    if (factor.info() != Eigen::Success)
      throw std::runtime_error("solve_qp: H is not positive semidefinite");
  }

  QpSolution solve(const Vector& f, const Vector& h) {
    const int m = static_cast<int>(H.rows());
    const int p = static_cast<int>(G.rows());
    if (f.size() != m || h.size() != p)
      throw std::invalid_argument("solve_qp: f/h dimension mismatch");
    QpProblem qp{H, f, G, h};

    // Unconstrained problems polish directly.
    if (p == 0) {
      QpSolution sol;
      sol.lambda = Vector(0);
      Eigen::LDLT<Matrix> ldlt(H);
      sol.x = ldlt.solve(-f);
      KktResiduals r{};
      if (!try_polish(qp, {}, tol, &sol.x, &sol.lambda, &r)) {
        std::ostringstream msg;
        msg << "solve_qp: unconstrained solve failed, stationarity "
            << kkt_residuals(qp, sol.x, Vector::Zero(0)).stationarity;
        throw std::runtime_error(msg.str());
      }
      sol.status = QpStatus::kSolved;
      sol.stationarity = r.stationarity;
      sol.polished = true;
      return sol;
    }

    if (!warm) {
      x = Vector::Zero(m);
      z = Vector::Zero(p);
      y = Vector::Zero(p);
      warm = true;
    }

    const double eps_admm = std::max(tol * 1e-2, 1e-12);
    KktResiduals best{1e300, 1e300, 1e300};
    Vector y_last_check = y;

    for (int it = 1; it <= max_iterations; ++it) {
      const Vector rhs = kSigma * x - f + G.transpose() * (rho * z - y);
      const Vector x_tilde = factor.solve(rhs);
      const Vector z_tilde = G * x_tilde;
      const Vector x_next = kAlpha * x_tilde + (1.0 - kAlpha) * x;
      const Vector z_bar = kAlpha * z_tilde + (1.0 - kAlpha) * z;
      const Vector z_next = (z_bar + y / rho).cwiseMin(h);
      const Vector y_next = y + rho * (z_bar - z_next);

      x = x_next;
      z = z_next;
      y = y_next;

      if (it % kCheckInterval != 0 && it != max_iterations) continue;

      // Primal infeasibility certificate v >= 0, G'v = 0, h'v < 0,
      // tested on the multiplier movement since the last check. The
      // G'v tolerance is kept two orders tighter than the h'v one so a
      // slowly converging feasible problem cannot trip it.
      {
        const Vector v = (y - y_last_check).cwiseMax(0.0);
        y_last_check = y;
        const double v_norm = v.cwiseAbs().maxCoeff();
        if (v_norm > 1e-12 &&
            (G.transpose() * v).cwiseAbs().maxCoeff() <=
                1e-2 * kInfeasTol * v_norm &&
            h.dot(v) <= -kInfeasTol * v_norm) {
          QpSolution sol;
          sol.x = x;
          sol.lambda = v / v_norm;
          sol.status = QpStatus::kInfeasible;
          sol.iterations = it;
          warm = false;
          return sol;
        }
      }

      const double r_prim = (G * x - z).cwiseAbs().maxCoeff();
      const double r_dual =
          (H * x + f + G.transpose() * y).cwiseAbs().maxCoeff();

      const KktResiduals raw = kkt_residuals(qp, x, y);
      if (raw.max() < best.max()) best = raw;

      const bool admm_done = r_prim <= eps_admm && r_dual <= eps_admm;
      if (admm_done || raw.max() <= tol * 0.5 || it == max_iterations) {
        // Polish on the multiplier-supported active set, then with
        // near-tight constraints added.
        std::vector<int> act_y, act_slack;
        const Vector slack = h - G * x;
        for (int i = 0; i < p; ++i) {
          if (y[i] > 0.0) act_y.push_back(i);
          if (y[i] > 0.0 || slack[i] <= 1e-9 * (1.0 + std::abs(h[i])))
            act_slack.push_back(i);
        }
        QpSolution sol;
        KktResiduals polished{};
        for (const auto& act : {act_y, act_slack}) {
          if (try_polish(qp, act, tol, &sol.x, &sol.lambda, &polished)) {
            sol.status = QpStatus::kSolved;
            sol.stationarity = polished.stationarity;
            sol.feasibility = polished.feasibility;
            sol.complementarity = polished.complementarity;
            sol.iterations = it;
            sol.polished = true;
            // Warm start from the ADMM state, not the polished point.
            return sol;
          }
        }
        if (raw.max() <= tol) {
          sol.x = x;
          sol.lambda = y;
          sol.status = QpStatus::kSolved;
          sol.stationarity = raw.stationarity;
          sol.feasibility = raw.feasibility;
          sol.complementarity = raw.complementarity;
          sol.iterations = it;
          return sol;
        }
      }

      // Rho adaptation.
      if (it % (kCheckInterval * 4) == 0) {
        const double prim_scale =
            std::max({(G * x).cwiseAbs().maxCoeff(), z.cwiseAbs().maxCoeff(),
                      1e-10});
        const double dual_scale = std::max(
            {(H * x).cwiseAbs().maxCoeff(), f.cwiseAbs().maxCoeff(),
             (G.transpose() * y).cwiseAbs().maxCoeff(), 1e-10});
        const double ratio =
            std::sqrt((r_prim / prim_scale) / std::max(r_dual / dual_scale,
                                                       1e-16));
        if (ratio > 5.0 || ratio < 0.2) {
          rho = std::clamp(rho * ratio, 1e-6, 1e6);
          refactor();
        }
      }
    }

    std::ostringstream msg;
    msg << "solve_qp: iteration cap " << max_iterations
        << " exceeded; residuals stationarity=" << best.stationarity
        << " feasibility=" << best.feasibility
        << " complementarity=" << best.complementarity;
    warm = false;
    throw std::runtime_error(msg.str());
  }
};

QpSolver::QpSolver(const Matrix& H, const Matrix& G, double tol,
                   int max_iterations)
    : impl_(std::make_shared<Impl>(H, G, tol, max_iterations)) {}

QpSolution QpSolver::solve(const Vector& f, const Vector& h) {
  return impl_->solve(f, h);
}

QpSolution solve_qp(const QpProblem& qp, double tol, int max_iterations) {
  QpSolver solver(qp.H, qp.G, tol, max_iterations);
  return solver.solve(qp.f, qp.h);
}

}  // namespace ssarx
