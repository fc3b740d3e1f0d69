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

#include "ssarx/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ssarx {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

KeyValueConfig KeyValueConfig::from_string(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << "config line " << line_no << ": expected key = value, got '"
          << line << "'";
      throw std::runtime_error(msg.str());
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config: empty key at line " +
                               std::to_string(line_no));
    cfg.entries_[key] = value;
  }
  return cfg;
}

bool KeyValueConfig::has(const std::string& key) const {
  return entries_.count(key) > 0;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end())
    throw std::runtime_error("config: missing required key '" + key + "'");
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  std::size_t pos = 0;
  const double out = std::stod(v, &pos);
  if (pos != v.size())
    throw std::runtime_error("config: key '" + key + "' is not a number: " + v);
  return out;
}

double KeyValueConfig::get_double(const std::string& key,
                                  double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int KeyValueConfig::get_int(const std::string& key) const {
  const std::string v = get_string(key);
  std::size_t pos = 0;
  const int out = std::stoi(v, &pos);
  if (pos != v.size())
    throw std::runtime_error("config: key '" + key +
                             "' is not an integer: " + v);
  return out;
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t KeyValueConfig::get_uint64(const std::string& key,
                                         std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  return std::stoull(get_string(key));
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::runtime_error("config: key '" + key + "' is not a bool: " + v);
}

std::vector<std::string> KeyValueConfig::get_list(const std::string& key) const {
  std::vector<std::string> items;
  std::istringstream in(get_string(key));
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

Matrix KeyValueConfig::get_matrix(const std::string& key) const {
  const std::string text = get_string(key);
  std::vector<std::vector<double>> rows;
  std::istringstream rows_in(text);
  std::string row_text;
  while (std::getline(rows_in, row_text, ';')) {
    std::istringstream row_in(row_text);
    std::vector<double> row;
    double v;
    while (row_in >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw std::runtime_error("config: key '" + key + "' is not a matrix");
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw std::runtime_error("config: ragged matrix for key '" + key + "'");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void KeyValueConfig::reject_unknown_keys(
    const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : entries_) {
    if (!allowed.count(key))
      throw std::runtime_error("config: unknown key '" + key + "'");
  }
}

}  // namespace ssarx
