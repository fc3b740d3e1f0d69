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

#include "ssarx/predictor.hpp"

#include <stdexcept>

namespace ssarx {

CondensedPredictor condense(const PredictorModel& model) {
  const int rows = model.n_y * model.l_f;
  if (model.phi_y_big.rows() != rows || model.phi_y_big.cols() != rows)
    throw std::invalid_argument("condense: phi_y dimension mismatch");
  // (I - Phi_y) is unit lower triangular, so the solve below is plain
  // forward substitution.
  const Matrix lhs = Matrix::Identity(rows, rows) - model.phi_y_big;
  CondensedPredictor cp;
  cp.p_z = lhs.triangularView<Eigen::UnitLower>().solve(model.gamma_k);
  cp.p_u = lhs.triangularView<Eigen::UnitLower>().solve(model.phi_u_big);
  cp.l_p = model.l_p;
  cp.l_f = model.l_f;
  cp.n_u = model.n_u;
  cp.n_y = model.n_y;
  return cp;
}

CondensedPredictor condense_spc(const Matrix& l, int l_p, int l_f, int n_u,
                                int n_y) {
  const int past_cols = (n_y + n_u) * l_p;
  if (l.rows() != n_y * l_f || l.cols() != past_cols + n_u * l_f)
    throw std::invalid_argument("condense_spc: dimension mismatch");
  CondensedPredictor cp;
  cp.p_z = l.leftCols(past_cols);
  cp.p_u = l.rightCols(n_u * l_f);
  cp.l_p = l_p;
  cp.l_f = l_f;
  cp.n_u = n_u;
  cp.n_y = n_y;
  return cp;
}

Vector predict(const CondensedPredictor& cp, const Vector& z_p,
               const Vector& u_f) {
  if (z_p.size() != cp.p_z.cols() || u_f.size() != cp.p_u.cols())
    throw std::invalid_argument("predict: dimension mismatch");
  return cp.p_z * z_p + cp.p_u * u_f;
}

Vector unrolled_predict(const PredictorModel& model, const Vector& z_p,
                        const Vector& u_f) {
  if (z_p.size() != model.gamma_k.cols() || u_f.size() != model.phi_u_big.cols())
    throw std::invalid_argument("unrolled_predict: dimension mismatch");
  const int n_y = model.n_y;
  const Vector base = model.gamma_k * z_p + model.phi_u_big * u_f;
  Vector y_hat = Vector::Zero(base.size());
  // Block row i needs only the rows < i of y_hat: Phi_y is strictly
  // block lower triangular.
  for (int i = 0; i < model.l_f; ++i) {
    Vector row = base.segment(i * n_y, n_y);
    for (int j = 0; j < i; ++j)
      row += model.phi_y_big.block(i * n_y, j * n_y, n_y, n_y) *
             y_hat.segment(j * n_y, n_y);
    y_hat.segment(i * n_y, n_y) = row;
  }
  return y_hat;
}

}  // namespace ssarx
