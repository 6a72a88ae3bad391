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

#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "kdqsl/linop.hpp"

namespace kdqsl {

/// Shortest round-trippable decimal ("%.17g"), deterministic across runs.
std::string format_double(double x);
/// Empty string for nullopt (CSV convention for unreachable times).
std::string format_optional(const std::optional<double>& x);
/// JSON number, or the literal string "unreachable".
nlohmann::json optional_to_json(const std::optional<double>& x);

/// {"dim": n, "re": [row-major], "im": [row-major]}. `im` may be omitted.
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const Matrix& m);

nlohmann::json read_json_file(const std::string& path);

}  // namespace kdqsl
