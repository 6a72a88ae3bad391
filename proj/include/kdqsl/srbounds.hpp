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

// Speed-limit bounds on expectation values <X>_t = tr{X rho(t)} for a state
// evolving under a constant generator G, rho(t) = e^{-iGt/hbar} rho e^{iGt/hbar}.
//
// The rate |d<X>/dt| <= dL * sqrt((x1 + xd)<X> - <X>^2 - x1 xd) integrates to
//
//   E(x1, xd, tau0 + dL t) <= <X>_t <= E(x1, xd, tau0 - dL t),
//
// where E interpolates the extreme eigenvalues and tau0 is the angle at which
// E equals <X>_0. dL is the SLD spread, constant in time for constant G.
//
// For the KDQ components the "state" is B_j(t) = U^dag B_j U, which evolves
// under G = -H; kdq_bounds() takes care of that sign and of tr{B_j} != 1.

#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "kdqsl/linop.hpp"

namespace kdqsl {

/// Extreme eigenvalues x1 <= xd of an observable.
struct SpectralRange {
  double min;
  double max;
};

SpectralRange spectral_range(const HermitianOperator& x);

/// arccos arguments within this distance of [-1, 1] are clamped.
inline constexpr double kAngleClampTol = 1e-9;
/// Values this close (relative) to an extreme eigenvalue map to angle 0 or pi.
inline constexpr double kEigenSnapTol = 64.0 * std::numeric_limits<double>::epsilon();
/// Rates below this are treated as frozen dynamics.
inline constexpr double kZeroRate = 1e-14;

/// xd for tau <= 0, xd cos^2(tau/2) + x1 sin^2(tau/2) on [0, pi], x1 for tau >= pi.
double interpolate(SpectralRange r, double tau);

/// Inverse of interpolate() on [0, pi]:
/// arccos((2x - x1 - xd) / (xd - x1)). nullopt when x is out of reach.
std::optional<double> interpolation_angle(SpectralRange r, double x);

/// Antiderivative of interpolate() with value 0 at tau = 0.
double interpolation_primitive(SpectralRange r, double tau);

enum class CurveKind { lower_direct, upper_direct, lower_derivative, unified_lower };

std::string to_string(CurveKind k);

/// Piecewise-analytic bound on <X>_t (times `scale`). Parameters refer to the
/// unit-trace state; `scale` carries tr{B_j} for unnormalized projectors.
struct BoundCurve {
  CurveKind kind = CurveKind::lower_direct;
  SpectralRange range{0.0, 0.0};
  double tau0 = 0.0;
  double rate = 0.0;
  double initial = 0.0;
  // lower_derivative / unified_lower only: spectrum of Xdot and its angle.
  SpectralRange dot_range{0.0, 0.0};
  double dot_tau0 = 0.0;
  double scale = 1.0;

  double operator()(double t) const;
  std::vector<double> sample(const std::vector<double>& times) const;
};

/// CSV columns t,value,kind.
void write_curve_csv(std::ostream& os, const BoundCurve& c, const std::vector<double>& times);

/// Symmetric logarithmic derivative of a state under generator G:
/// d rho/dt = [G, rho]/(i hbar) = {rho, L}/2.
struct SldResult {
  HermitianOperator L;
  double delta_l;
  QuantumState state;  ///< unit-trace state L refers to
  HermitianOperator generator;
};

SldResult sld(const QuantumState& state, const HermitianOperator& generator, double hbar = 1.0);

/// Upper bound on the variance given the mean:
/// (x1 + xd) mean - mean^2 - x1 xd.
double variance_upper_bound(SpectralRange r, double mean);

/// Xdot = [X, G]/(i hbar), so that d<X>_t/dt = <Xdot>_t.
HermitianOperator time_derivative(const HermitianOperator& x, const HermitianOperator& generator, double hbar);

struct ExpvalBounds {
  BoundCurve lower;
  BoundCurve upper;
};

ExpvalBounds expval_bounds(const HermitianOperator& x, const QuantumState& state0,
                           const HermitianOperator& generator, double hbar = 1.0);

/// <X>_0 + (1/dL) * integral_0^{dL t} E(Xdot, tau0' + xi) dxi.
BoundCurve derivative_refined_lower_bound(const HermitianOperator& x, const QuantumState& state0,
                                          const HermitianOperator& generator, double hbar = 1.0);

/// Pointwise max of the direct and derivative-refined lower bounds.
BoundCurve unified_lower_bound(const HermitianOperator& x, const QuantumState& state0,
                               const HermitianOperator& generator, double hbar = 1.0);

struct KdqBounds {
  BoundCurve re_lower;
  BoundCurve re_upper;
  BoundCurve im_lower;
  BoundCurve im_upper;
  BoundCurve re_derivative;
  BoundCurve im_derivative;
  BoundCurve re_unified;
  BoundCurve im_unified;
  double delta_l;  ///< dL_j of the unit-trace B_j under -H
};

/// Bounds on Re/Im q_{l,j}(t) through X = rho_l, sigma_l in the state B_j(t).
KdqBounds kdq_bounds(const QuantumState& rho, const HermitianOperator& a_l, const HermitianOperator& b_j,
                     const HermitianOperator& h, double hbar = 1.0);

/// Bound on p^TPM_{l,j}(t) when [rho, A_l] = 0 and A_l != I; never negative.
BoundCurve tpm_limit_bound(const QuantumState& rho, const HermitianOperator& a_l, const HermitianOperator& b_j,
                           const HermitianOperator& h, double hbar = 1.0);

/// dX^2 dY^2 - (<{X,Y}/2> - <X><Y>)^2 - <[X,Y]/2i>^2, unclamped.
double sr_uncertainty_gap(const HermitianOperator& x, const HermitianOperator& y, const QuantumState& state);

}  // namespace kdqsl
