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

// Command-line front end. Subcommands: two-qubit, bounds, qsl-times, verify,
// sweep. All flags can also come from a flat key=value file (--config);
// flags given on the command line win.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kdqsl/kdq.hpp"
#include "kdqsl/linop.hpp"
#include "kdqsl/oracle.hpp"

namespace kdqsl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  ///< verify found property violations
inline constexpr int kExitContract = 2;
inline constexpr int kExitNoResult = 3;

enum class Format { csv, json };

struct RunConfig {
  double hbar = 1.0;
  double s_th = kDefaultImThreshold;
  std::optional<double> t_max;  ///< command-specific default when unset
  std::optional<int> steps;     ///< command-specific default when unset
  Format format = Format::csv;
  std::string out;  ///< file or directory, depending on the command

  double omega_l = 1.0;
  double omega_int = 5.0;
  double sweep_min = 0.0;
  double sweep_max = 10.0;
  int sweep_count = 41;

  std::string rho_path, a_path, b_path, h_path;

  std::uint64_t seed = 0;
  int seeds = 200;
  int dim_min = 2;
  int dim_max = 6;

  /// Throws ContractError naming the first violated invariant.
  void validate() const;
};

/// Observable file: a Hermitian matrix in the matrix format, or
/// {"values": [...], "projectors": [matrix, ...]}.
ProjectiveObservable observable_from_json(const nlohmann::json& j);

/// Parses argv and runs the selected subcommand. Diagnostics go to `err`,
/// summaries and file-less output to `out`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kdqsl::cli
