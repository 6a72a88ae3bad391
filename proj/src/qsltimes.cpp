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

#include "kdqsl/qsltimes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kdqsl/io.hpp"

namespace kdqsl {

namespace {

struct Setup {
  SplitOperators split;
  QuantumState state;  // unit trace
  double scale;
  double delta_l;
};

Setup prepare(const QuantumState& rho, const HermitianOperator& a_l, const HermitianOperator& b_j,
              const HermitianOperator& h, double hbar) {
  SplitOperators split = split_operators(rho, a_l);
  const QuantumState b(b_j);
  const SldResult s = sld(b, -h, hbar);
  return {std::move(split), s.state, b.trace_scale(), s.delta_l};
}

}  // namespace

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::re_negative: return "re_negative";
    case Criterion::im_threshold: return "im_threshold";
    case Criterion::derivative_zero: return "derivative_zero";
  }
  return "unknown";
}

nlohmann::json to_json(const CrossingTime& c) {
  return {{"criterion", to_string(c.criterion)},
          {"ell", c.pair.ell},
          {"j", c.pair.j},
          {"time", optional_to_json(c.value)},
          {"deltaL", c.delta_l},
          {"tau0", c.tau0},
          {"tau_target", optional_to_json(c.tau_target)}};
}

CrossingTime time_to_negativity(const QuantumState& rho, const HermitianOperator& a_l, const HermitianOperator& b_j,
                                const HermitianOperator& h, double hbar, OutcomePair pair) {
  const Setup s = prepare(rho, a_l, b_j, h, hbar);
  const SpectralRange r = spectral_range(s.split.real_part);
  const double x0 = s.state.expectation(s.split.real_part);

  CrossingTime out;
  out.criterion = Criterion::re_negative;
  out.pair = pair;
  out.delta_l = s.delta_l;
  out.tau0 = interpolation_angle(r, x0).value_or(0.0);
  out.tau_target = interpolation_angle(r, 0.0);

  if (re_negative(cplx(s.scale * x0, 0.0))) {
    out.value = 0.0;
  } else if (out.tau_target && s.delta_l >= kZeroRate) {
    out.value = std::max(0.0, (*out.tau_target - out.tau0) / s.delta_l);
  }
  return out;
}

CrossingTime time_to_im_threshold(const QuantumState& rho, const HermitianOperator& a_l, const HermitianOperator& b_j,
                                  const HermitianOperator& h, double hbar, double s_th, OutcomePair pair) {
  if (!(s_th >= 0.0)) throw ContractError("s_th >= 0", "threshold " + format_double(s_th));
  const Setup s = prepare(rho, a_l, b_j, h, hbar);
  const SpectralRange r = spectral_range(s.split.imag_part);
  const double y0 = s.state.expectation(s.split.imag_part);
  // Im q = scale * <sigma_l>, so the threshold in unit-trace terms is s_th / scale.
  const double target = s_th / s.scale;

  CrossingTime out;
  out.criterion = Criterion::im_threshold;
  out.pair = pair;
  out.delta_l = s.delta_l;
  out.tau0 = interpolation_angle(r, y0).value_or(0.0);

  if (std::abs(y0) > target) {
    out.value = 0.0;
    out.tau_target = out.tau0;
    return out;
  }
  if (s.delta_l < kZeroRate) return out;

  // The upper curve E(tau0 - dL t) rises toward +target, the lower one falls toward -target.
  if (const auto up = interpolation_angle(r, target)) {
    out.value = std::max(0.0, (out.tau0 - *up) / s.delta_l);
    out.tau_target = up;
  }
  if (const auto down = interpolation_angle(r, -target)) {
    const double t = std::max(0.0, (*down - out.tau0) / s.delta_l);
    if (!out.value || t < *out.value) {
      out.value = t;
      out.tau_target = down;
    }
  }
  return out;
}

double mandelstam_tamm_time(double delta_h, double hbar) {
  if (!(delta_h > 0.0)) throw ContractError("dH > 0", "energy spread " + format_double(delta_h));
  return hbar * std::numbers::pi / (2.0 * delta_h);
}

CrossingTime derivative_bound_zero_crossing(const BoundCurve& c, OutcomePair pair) {
  if (c.kind != CurveKind::lower_derivative) {
    throw ContractError("lower_derivative curve", "got " + to_string(c.kind));
  }
  CrossingTime out;
  out.criterion = Criterion::derivative_zero;
  out.pair = pair;
  out.delta_l = c.rate;
  out.tau0 = c.dot_tau0;

  if (c(0.0) <= 0.0) {
    out.value = 0.0;
    return out;
  }
  // The curve is concave (its slope E(Xdot, .) is non-increasing), so there is
  // at most one downward crossing after t = 0.
  if (c.rate < kZeroRate) {
    const double slope = c.scale * interpolate(c.dot_range, c.dot_tau0);
    if (slope < 0.0) out.value = -c(0.0) / slope;
    return out;
  }
  const double t_pi = std::max(0.0, (std::numbers::pi - c.dot_tau0) / c.rate);
  const double at_pi = c(t_pi);
  if (at_pi > 0.0) {
    // Terminal branch is linear with slope x1(Xdot).
    const double slope = c.scale * c.dot_range.min;
    if (slope < 0.0) out.value = t_pi + at_pi / -slope;
    return out;
  }
  double lo = 0.0;
  double hi = t_pi;
  for (int it = 0; it < 200 && hi - lo > kCrossingTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (c(mid) > 0.0 ? lo : hi) = mid;
  }
  out.value = 0.5 * (lo + hi);
  return out;
}

}  // namespace kdqsl
