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

#ifndef SSARX_PREDICTOR_HPP_
#define SSARX_PREDICTOR_HPP_

#include "ssarx/ident.hpp"

namespace ssarx {

// Condensed affine predictor yhat_f = P_z z_p + P_u u_f. For an SSARX
// source, P_z = (I - Phi_y)^-1 GammaK and P_u = (I - Phi_y)^-1 Phi_u,
// and P_u inherits the (strict, when D = 0) block lower triangular
// structure. An SPC source fills the same fields from its single
// regression matrix and carries no structure guarantee.
struct CondensedPredictor {
  Matrix p_z;  // n_y L_f x (n_y+n_u) L_p
  Matrix p_u;  // n_y L_f x n_u L_f
  int l_p = 0;
  int l_f = 0;
  int n_u = 0;
  int n_y = 0;
};

// Solves the implicit predictor by forward substitution on the unit
// lower triangular (I - Phi_y); computed once per identified model.
CondensedPredictor condense(const PredictorModel& model);

// Splits an spc_fit matrix into the same condensed form.
CondensedPredictor condense_spc(const Matrix& l, int l_p, int l_f, int n_u,
                                int n_y);

Vector predict(const CondensedPredictor& cp, const Vector& z_p,
               const Vector& u_f);

// Reference evaluation: unrolls the implicit predictor block row by
// block row. Used by tests to cross-check condense/predict.
Vector unrolled_predict(const PredictorModel& model, const Vector& z_p,
                        const Vector& u_f);

}  // namespace ssarx

#endif  // SSARX_PREDICTOR_HPP_
