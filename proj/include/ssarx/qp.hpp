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

#ifndef SSARX_QP_HPP_
#define SSARX_QP_HPP_

#include <memory>

#include "ssarx/state_space_model.hpp"

namespace ssarx {

// min 0.5 x' H x + f' x  s.t.  G x <= h
struct QpProblem {
  Matrix H;  // m x m symmetric, positive definite (PSD for soft form)
  Vector f;
  Matrix G;  // p x m
  Vector h;  // p
};

enum class QpStatus { kSolved, kInfeasible, kMaxIterations };

struct QpSolution {
  Vector x;
  Vector lambda;  // multipliers for G x <= h
  QpStatus status = QpStatus::kMaxIterations;
  double stationarity = 0.0;   // ||H x + f + G' lambda||_inf
  double feasibility = 0.0;    // max(0, max(G x - h))
  double complementarity = 0.0;
  int iterations = 0;
  bool polished = false;
};

double qp_objective(const QpProblem& qp, const Vector& x);

// Operator-splitting (ADMM) solve with an exact active-set polish step;
// deterministic for fixed inputs. On success all three KKT residuals
// are <= tol. Throws on iteration cap; returns kInfeasible with a
// certificate when the constraints are inconsistent.
QpSolution solve_qp(const QpProblem& qp, double tol = 1e-8,
                    int max_iterations = 200000);

// Same algorithm with the H/G factorization cached across solves that
// share them; the receding-horizon loop solves one QP per step where
// only f and h change.
class QpSolver {
 public:
  QpSolver(const Matrix& H, const Matrix& G, double tol = 1e-8,
           int max_iterations = 200000);

  QpSolution solve(const Vector& f, const Vector& h);

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

}  // namespace ssarx

#endif  // SSARX_QP_HPP_
