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

#ifndef SSARX_CSV_HPP_
#define SSARX_CSV_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ssarx/state_space_model.hpp"

namespace ssarx {

// Shortest decimal form that reparses to the same double ("%.17g"
// fallback); keeps emitted CSVs byte-stable across reruns.
std::string format_double(double v);

// FNV-1a over the raw bytes of the doubles.
std::uint64_t hash_doubles(const double* data, std::size_t count);
std::uint64_t hash_matrix(const Matrix& m);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace ssarx

#endif  // SSARX_CSV_HPP_
