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

#include "kdqsl/kdq.hpp"
#include "kdqsl/srbounds.hpp"

namespace kdqsl {

enum class Criterion { re_negative, im_threshold, derivative_zero };

std::string to_string(Criterion c);

struct OutcomePair {
  int ell = 0;
  int j = 0;
};

/// Earliest time a non-classicality criterion can be met; nullopt = unreachable.
struct CrossingTime {
  std::optional<double> value;
  Criterion criterion = Criterion::re_negative;
  OutcomePair pair;
  double delta_l = 0.0;
  double tau0 = 0.0;
  std::optional<double> tau_target;

  bool reachable() const { return value.has_value(); }
};

/// {criterion, ell, j, time | "unreachable", deltaL, tau0, tau_target}.
nlohmann::json to_json(const CrossingTime& c);

/// (tau(rho_l, 0) - tau0_re) / dL_j: earliest time Re q_{l,j} can reach 0.
CrossingTime time_to_negativity(const QuantumState& rho, const HermitianOperator& a_l, const HermitianOperator& b_j,
                                const HermitianOperator& h, double hbar = 1.0, OutcomePair pair = {});

/// Earliest time |Im q_{l,j}| can reach s_th: the upper curve is run to +s_th,
/// the lower curve to -s_th, and the smaller nonnegative time wins.
CrossingTime time_to_im_threshold(const QuantumState& rho, const HermitianOperator& a_l, const HermitianOperator& b_j,
                                  const HermitianOperator& h, double hbar = 1.0, double s_th = kDefaultImThreshold,
                                  OutcomePair pair = {});

/// hbar pi / (2 dH).
double mandelstam_tamm_time(double delta_h, double hbar = 1.0);

/// Bisection tolerance on t for derivative_bound_zero_crossing.
inline constexpr double kCrossingTol = 1e-10;

/// Smallest t >= 0 where a lower_derivative curve reaches zero.
CrossingTime derivative_bound_zero_crossing(const BoundCurve& re_derivative, OutcomePair pair = {});

}  // namespace kdqsl
