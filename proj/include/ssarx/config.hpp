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

#ifndef SSARX_CONFIG_HPP_
#define SSARX_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ssarx/state_space_model.hpp"

namespace ssarx {

// key = value configuration file. '#' starts a comment; keys are
// case-sensitive; later assignments to the same key win.
class KeyValueConfig {
 public:
  static KeyValueConfig from_file(const std::string& path);
  static KeyValueConfig from_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_uint64(const std::string& key,
                           std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // Comma-separated list.
  std::vector<std::string> get_list(const std::string& key) const;
  // Rows separated by ';', entries by whitespace.
  Matrix get_matrix(const std::string& key) const;

  // Throws if any key is outside `allowed`, naming the offender.
  void reject_unknown_keys(const std::set<std::string>& allowed) const;

  const std::map<std::string, std::string>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace ssarx

#endif  // SSARX_CONFIG_HPP_
