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

// Ground truth for the bound engine: seeded random instances, instances that
// saturate the bounds exactly, and dense exact trajectories (spectral
// propagators at every grid time, no ODE stepping).

#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <json.hpp>

#include "kdqsl/kdq.hpp"
#include "kdqsl/srbounds.hpp"

namespace kdqsl {

enum class Purity { pure, mixed };
enum class Commutation { commuting, non_commuting };

struct InstanceOptions {
  Purity purity = Purity::mixed;
  Commutation commutation = Commutation::non_commuting;
};

struct Instance {
  QuantumState rho;
  ProjectiveObservable a;
  ProjectiveObservable b;
  HermitianOperator h;
  std::uint64_t seed = 0;
  InstanceOptions options;

  int dim() const { return rho.dim(); }
};

inline constexpr int kMinInstanceDim = 2;
inline constexpr int kMaxInstanceDim = 8;

/// Deterministic in (dim, seed, options). A and B have between 2 and dim
/// outcomes, so higher-rank projectors occur.
Instance random_instance(int dim, std::uint64_t seed, InstanceOptions options = {});

// Ensembles used by random_instance, exposed for property tests.
HermitianOperator random_hermitian(int dim, std::mt19937_64& rng);
QuantumState random_pure_state(int dim, std::mt19937_64& rng);
QuantumState random_mixed_state(int dim, std::mt19937_64& rng);
Matrix random_unitary(int dim, std::mt19937_64& rng);

/// Instance as {"manifest": {seed, dim, options}, "rho", "H", "A", "B"} using
/// the matrix JSON format; observables as {"values": [...], "projectors": [...]}.
nlohmann::json to_json(const Instance& inst);

/// X with eigenvalues {x_min, (x_min+x_max)/2, x_max}, the pure state
/// cos(tau0/2)|x_d> - i sin(tau0/2)|x_1> and H = (hbar w/2)(|x_1><x_d| + h.c.).
/// <X>_t follows the lower bound for tau0 in [0, pi] and the upper bound for
/// tau0 in [pi, 2 pi].
struct SaturationInstance {
  HermitianOperator x;
  QuantumState rho0;
  HermitianOperator h;
};

SaturationInstance saturation_instance(double x_min, double x_max, double tau0, double omega, double hbar = 1.0);

/// rho = |+><+|, A = {|0><0|, |1><1|}, H = (hbar w/2)(|r_1><r_d| + h.c.) from
/// the extreme eigenvectors of rho_1 = {rho, |0><0|}/2, and
/// B = {|psi><psi|, I - |psi><psi|} with
/// psi = cos((pi - tau0)/2)|r_1> + e^{i phase} sin((pi - tau0)/2)|r_d>.
/// The first outcome of each observable (label 1) is |0><0| resp. |psi><psi|.
/// For phase = -pi/2, Re q_{1,1}(t) follows the direct lower bound with
/// initial angle tau0 until it reaches r_1. The default tau0 = 2pi/3 gives
/// amplitudes cos(pi/6), sin(pi/6).
Instance kdq_saturation_instance(double tau0 = 2.0 * std::numbers::pi / 3.0, double omega = 1.0,
                                 double phase = -std::numbers::pi / 2.0, double hbar = 1.0);

/// 2 pi hbar / (spectral width of H); 2 pi for a degenerate spectrum.
double characteristic_period(const HermitianOperator& h, double hbar = 1.0);

/// Dense exact KDQ trajectory of an instance on [0, t_max].
KdqTable trajectory(const Instance& inst, double t_max, int steps, double s_th = kDefaultImThreshold,
                    double hbar = 1.0);

/// q_{l,j}(t) by direct evaluation; indices are outcome positions.
cplx kdq_at(const Instance& inst, std::size_t ell_index, std::size_t j_index, double t, double hbar = 1.0);

/// First time Re q < 0 on [0, t_max] (grid scan, then bisection); nullopt if never.
std::optional<double> first_negativity_time(const Instance& inst, std::size_t ell_index, std::size_t j_index,
                                            double t_max, int steps, double hbar = 1.0);

/// First time |Im q| > s_th on [0, t_max]; nullopt if never.
std::optional<double> first_im_exceed_time(const Instance& inst, std::size_t ell_index, std::size_t j_index,
                                           double s_th, double t_max, int steps, double hbar = 1.0);

struct ExpectationSample {
  double t;
  double mean;
  double stddev;
  double rate;     ///< d<X>/dt = <[X, G]/(i hbar)>
  double delta_l;  ///< SLD spread of the evolved state
};

/// <X>_t for rho(t) = e^{-iGt/hbar} rho e^{iGt/hbar}.
std::vector<ExpectationSample> expectation_trajectory(const HermitianOperator& x, const QuantumState& state0,
                                                      const HermitianOperator& generator,
                                                      const std::vector<double>& times, double hbar = 1.0,
                                                      bool with_delta_l = false);

}  // namespace kdqsl
