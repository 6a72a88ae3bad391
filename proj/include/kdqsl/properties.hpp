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

// Named property checks over seeded random instances. Each check compares the
// bound engine against the exact trajectories of the oracle module and
// reports how many trials violated the property.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kdqsl/oracle.hpp"
#include "kdqsl/srbounds.hpp"

namespace kdqsl {

struct PropertyResult {
  std::string name;
  long trials = 0;
  long failures = 0;
  double worst = 0.0;  ///< largest violation seen (property-specific units)
  std::string first_failure;

  bool passed() const { return trials > 0 && failures == 0; }
};

struct SuiteOptions {
  std::uint64_t seed_begin = 0;
  int seeds = 200;
  int dim_min = 2;
  int dim_max = 6;
  int steps = 2000;
  double slack = 1e-9;
  double s_th = 0.2;
};

using AngleFn = std::function<std::optional<double>(SpectralRange, double)>;
using CurveEval = std::function<double(const BoundCurve&, double)>;

/// Re/Im q stay within every KDQ bound curve on a dense grid of one period.
PropertyResult check_bound_validity(const SuiteOptions& o);
/// Constructed instances follow the bound exactly; perturbed ones do not.
PropertyResult check_saturation(const SuiteOptions& o);
/// dL constant in time, dL <= 2 dH / hbar, equality for pure states, SLD identities.
PropertyResult check_delta_l_laws(const SuiteOptions& o);
/// dX^2 <= (x1 + xd)<X> - <X>^2 - x1 xd along trajectories.
PropertyResult check_variance_bound(const SuiteOptions& o);
/// |d<X>/dt| <= dL dX along trajectories.
PropertyResult check_rate_bound(const SuiteOptions& o);
/// [rho, A] = 0: KDQ equals TPM, Im q = 0, TPM-limit curve nonnegative and below p^TPM.
PropertyResult check_commutative_limit(const SuiteOptions& o);
/// Schrodinger-Robertson gap >= -1e-10 on random (X, Y, rho).
PropertyResult check_sr_gap(const SuiteOptions& o, int triples = 500);
/// E(tau(x)) = x to 1e-12 and E non-increasing on [0, pi].
PropertyResult check_angle_round_trip(const SuiteOptions& o, int triples = 1000,
                                      const AngleFn& angle = interpolation_angle);
/// The derivative-refined curve leaves t = 0 with slope d Re q / dt.
PropertyResult check_derivative_initial_slope(const SuiteOptions& o, const CurveEval& eval = {});
/// Crossing times never exceed the first true crossing (QSL property).
PropertyResult check_crossing_lower_bound(const SuiteOptions& o, int negativity_instances = 200);
/// H -> cH scales finite crossing times by 1/c.
PropertyResult check_time_scaling(const SuiteOptions& o);

std::vector<PropertyResult> run_property_suite(const SuiteOptions& o);

}  // namespace kdqsl
