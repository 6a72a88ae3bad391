// Copyright 2026 The kdqsl Authors
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

#include "kdqsl/io.hpp"

#include <cstdio>
#include <fstream>

namespace kdqsl {

std::string format_double(double x) {
  if (x == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_optional(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

nlohmann::json optional_to_json(const std::optional<double>& x) {
  if (x) return *x;
  return "unreachable";
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re")) {
    throw ContractError("matrix format", "expected object with fields dim, re, im");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<long>() <= 0) {
    throw ContractError("matrix format", "dim must be a positive integer");
  }
  const long n = j["dim"].get<long>();
  auto read = [&](const char* key) {
    std::vector<double> v(static_cast<std::size_t>(n * n), 0.0);
    if (!j.contains(key)) return v;
    const auto& arr = j[key];
    if (!arr.is_array() || static_cast<long>(arr.size()) != n * n) {
      throw ContractError("matrix format", std::string(key) + " must hold dim*dim numbers");
    }
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!arr[k].is_number()) throw ContractError("matrix format", std::string(key) + " holds a non-number");
      v[k] = arr[k].get<double>();
    }
    return v;
  };
  const auto re = read("re");
  const auto im = read("im");
  Matrix m(n, n);
  for (long r = 0; r < n; ++r)
    for (long c = 0; c < n; ++c) m(r, c) = cplx(re[r * n + c], im[r * n + c]);
  return m;
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return {{"dim", m.rows()}, {"re", re}, {"im", im}};
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("readable input file", path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ContractError("well-formed JSON", path + ": " + e.what());
  }
}

}  // namespace kdqsl
