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

#ifndef SSARX_HARNESS_HPP_
#define SSARX_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ssarx/config.hpp"
#include "ssarx/control.hpp"

namespace ssarx {

enum class Method { kSpc, kSsarx, kSsarxLowRank, kMpcSskf };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct ReferenceSpec {
  enum class Type { kSinusoid, kConstant, kSquareWave };
  Type type = Type::kSinusoid;
  double value = 1.0;      // constant level
  int period = 50;         // square wave
  double amplitude = 2.0;  // square wave
  double jitter_var = 0.0;

  // r(t), t = 0..n-1. Sinusoid is sin(2 pi t / n).
  Vector generate(int n, std::uint64_t seed) const;
  std::string to_string() const;
  static ReferenceSpec parse(const std::string& text);
};

struct ExperimentConfig {
  std::vector<NoiseConfig> noise;
  std::vector<int> n_train = {200};
  int n_test = 100;
  int l_p = 10;
  int l_f = 15;
  int n_a = 15;
  int n_b = 15;
  double q = 1.0;
  double r_weight = 0.01;
  double u_min = -2.0;
  double u_max = 2.0;
  double y_min = -2.0;
  double y_max = 2.0;
  std::vector<Method> methods = {Method::kSpc, Method::kSsarx,
                                 Method::kSsarxLowRank, Method::kMpcSskf};
  int rank = 2;
  int n_mc = 100;
  std::uint64_t master_seed = 1;
  ReferenceSpec reference;
  int n_threads = 0;  // 0 = hardware concurrency

  void validate() const;
  static ExperimentConfig from_config(const KeyValueConfig& kv);
  std::string to_config_text() const;
};

// One (run, method) record. Raw enough that every aggregate is
// recomputable from the per-run table.
struct RunRecord {
  int run_id = 0;
  std::uint64_t seed = 0;
  Method method = Method::kSsarx;
  std::string noise_label;
  int n_train = 0;
  double j = 0.0;        // cost on measured y
  double j_clean = 0.0;  // same cost on the noise-free twin output
  Vector e_n;            // time-averaged stationary tracking error
  int n_soft_fallback = 0;
  int n_qp_fail = 0;
  int n_predicted_bound_violations = 0;
  double max_abs_u = 0.0;
  std::uint64_t train_hash = 0;
  std::uint64_t test_noise_hash = 0;
  bool failed = false;
  std::string failure;
};

struct McResult {
  ExperimentConfig config;
  std::vector<RunRecord> runs;
};

// J = sum_t ||y(t) - r(t)||^2_Q + ||u(t)||^2_R on the measured output.
double control_cost(const ClosedLoopResult& res, const Matrix& q,
                    const Matrix& r);
// Same sum evaluated on y_clean.
double control_cost_clean(const ClosedLoopResult& res, const Matrix& q,
                          const Matrix& r);

// Time-averaged tracking error over the stationary window
// t in [50, 100) (50 samples).
Vector stationary_error(const ClosedLoopResult& res, int window_begin = 50,
                        int window_end = 100);

// Bias = ||mean e||^2, Var = 1/(N-1) sum ||e_n - mean e||^2.
std::pair<double, double> bias_variance(const std::vector<Vector>& errors);

// The 12 (sigma_v, sigma_w) pairs of the benchmark noise table, labeled
// "<snr>-group<k>"; group 1 has measurement noise only.
std::vector<NoiseConfig> noise_grid();
NoiseConfig noise_from_label(const std::string& label);

// Monte Carlo control-cost comparison: per run, fresh closed-loop
// square-wave training data, every configured method identified on the
// same data and tested against the same test-noise realization.
McResult run_cost_experiment(const ExperimentConfig& cfg);

// Constant-reference bias/variance protocol over the n_train sweep.
McResult run_bias_experiment(const ExperimentConfig& cfg);

// Summary statistics for one (method, noise, n_train) cell.
struct SummaryRow {
  Method method;
  std::string noise_label;
  int n_train = 0;
  int n_runs = 0;
  double mean_j = 0.0;
  double median_j = 0.0;
  double mean_j_clean = 0.0;
  double median_j_minus_oracle = 0.0;  // NaN when MPC-SSKF absent
  double bias = 0.0;
  double var = 0.0;
};

std::vector<SummaryRow> summarize(const McResult& res);

// Writes <prefix>_runs.csv, <prefix>_summary.csv and
// <prefix>_config.txt (the config echo).
void emit_results(const McResult& res, const std::string& prefix);

// Reads a per-run CSV back; inverse of the emit_results run table.
std::vector<RunRecord> read_run_csv(const std::string& path);

}  // namespace ssarx

#endif  // SSARX_HARNESS_HPP_
