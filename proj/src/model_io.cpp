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

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ssarx/csv.hpp"
#include "ssarx/ident.hpp"

namespace ssarx {

namespace {

constexpr const char* kMagic = "ssarx-predictor-model v1";

void write_matrix(std::ofstream& out, const char* name, const Matrix& m) {
  out << "matrix " << name << " " << m.rows() << " " << m.cols() << "\n";
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << " ";
      out << format_double(m(i, j));
    }
    out << "\n";
  }
}

Matrix read_matrix(std::istream& in, const std::string& expected_name) {
  std::string tag, name;
  int rows = 0, cols = 0;
  if (!(in >> tag >> name >> rows >> cols) || tag != "matrix" ||
      name != expected_name)
    throw std::runtime_error("predictor model: expected matrix " +
                             expected_name);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (!(in >> m(i, j)))
        throw std::runtime_error("predictor model: truncated matrix " +
                                 expected_name);
  return m;
}

}  // namespace

void save_predictor_model(const PredictorModel& model,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kMagic << "\n";
  out << "n_u " << model.n_u << "\n";
  out << "n_y " << model.n_y << "\n";
  out << "l_p " << model.l_p << "\n";
  out << "l_f " << model.l_f << "\n";
  out << "n_a " << model.n_a << "\n";
  out << "n_b " << model.n_b << "\n";
  out << "variant "
      << (model.variant == Stage2Variant::kLowRank ? "low_rank" : "ls") << "\n";
  out << "rank " << model.rank << "\n";
  write_matrix(out, "gamma_k", model.gamma_k);
  write_matrix(out, "phi_u", model.phi_u_big);
  write_matrix(out, "phi_y", model.phi_y_big);
  if (!out) throw std::runtime_error("write failed: " + path);
}

PredictorModel load_predictor_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != kMagic)
    throw std::runtime_error("not a predictor model file: " + path);

  PredictorModel model;
  const auto read_field = [&](const char* key) -> std::string {
    std::string name, value;
    if (!(in >> name >> value) || name != key)
      throw std::runtime_error(std::string("predictor model: expected ") + key);
    return value;
  };
  model.n_u = std::stoi(read_field("n_u"));
  model.n_y = std::stoi(read_field("n_y"));
  model.l_p = std::stoi(read_field("l_p"));
  model.l_f = std::stoi(read_field("l_f"));
  model.n_a = std::stoi(read_field("n_a"));
  model.n_b = std::stoi(read_field("n_b"));
  const std::string variant = read_field("variant");
  if (variant == "ls")
    model.variant = Stage2Variant::kLeastSquares;
  else if (variant == "low_rank")
    model.variant = Stage2Variant::kLowRank;
  else
    throw std::runtime_error("predictor model: unknown variant " + variant);
  model.rank = std::stoi(read_field("rank"));
  model.gamma_k = read_matrix(in, "gamma_k");
  model.phi_u_big = read_matrix(in, "phi_u");
  model.phi_y_big = read_matrix(in, "phi_y");

  const int rows = model.n_y * model.l_f;
  if (model.gamma_k.rows() != rows ||
      model.gamma_k.cols() != (model.n_y + model.n_u) * model.l_p ||
      model.phi_u_big.rows() != rows ||
      model.phi_u_big.cols() != model.n_u * model.l_f ||
      model.phi_y_big.rows() != rows || model.phi_y_big.cols() != rows)
    throw std::runtime_error("predictor model: inconsistent dimensions in " +
                             path);
  return model;
}

}  // namespace ssarx
