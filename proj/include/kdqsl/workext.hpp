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

// Work extraction from the target qubit of a controlled-rotation gate
//
//   H = (w_L/2)(Z_c + Z_t) + (w_int/2) |1><1|_c (x) X_t,
//
// with the control prepared in |1> and the target in |-> = (|0> - |1>)/sqrt 2.
// Z = |1><1| - |0><0| so |0> is the local ground state. Ordering of tensor
// factors is control (x) target throughout.

#pragma once

#include <array>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <vector>

#include "kdqsl/kdq.hpp"
#include "kdqsl/qsltimes.hpp"

namespace kdqsl {

struct WorkScenario {
  double omega_l;
  double omega_int;
  double hbar;
  HermitianOperator hamiltonian;               ///< 4x4 global
  HermitianOperator target_hamiltonian;        ///< 2x2, target dynamics with control in |1>
  HermitianOperator local_target_hamiltonian;  ///< 2x2, (hbar w_L / 2) Z
  QuantumState control_state;
  QuantumState target_state;
  std::array<double, 2> target_energies;  ///< E_0 = -hbar w_L/2, E_1 = +hbar w_L/2

  QuantumState global_state() const;
};

WorkScenario build_two_qubit_scenario(double omega_l, double omega_int, double hbar = 1.0);

/// `full`: 4-dim model, A_l = B_l = I (x) |l><l|. `effective`: target qubit only.
enum class TargetModel { full, effective };

struct WorkEntry {
  int ell;
  int j;
  double w;  ///< E_j - E_l
  cplx q;
  double p_tpm;
};

struct WorkSnapshot {
  double t;
  std::vector<WorkEntry> entries;
  cplx extractable;  ///< sum (E_l - E_j) q_{l,j}; imaginary part cancels
  double extractable_tpm;
};

struct WorkDistribution {
  std::vector<WorkSnapshot> snapshots;
};

WorkDistribution work_distribution(const WorkScenario& s, const std::vector<double>& times,
                                   TargetModel model = TargetModel::full);

/// tr{rho H0} - tr{U rho U^dag H0} for the target's local Hamiltonian H0.
double extractable_work_trace_form(const WorkScenario& s, double t, TargetModel model = TargetModel::effective);

struct PowerNormalization {
  double energy = 0.5;
  double time = std::numbers::pi;
  double power = 0.32;
};

struct PowerReport {
  double omega_l = 0.0;
  double omega_int = 0.0;
  std::optional<double> t_max;  ///< nullopt when no work is extracted at all
  double w_max = 0.0;
  std::optional<double> p_max;
  std::optional<double> t_neg;  ///< only where negativity is present
  std::optional<double> p_neg;  ///< only where negativity is present
  bool negativity_present = false;
  PowerNormalization norm;
};

struct PowerSearch {
  double window = 2.0 * std::numbers::pi;  ///< search [0, window]
  double coarse_step = std::numbers::pi / 2000.0;
  double refine_tol = 1e-8;
  OutcomePair pair{1, 1};
  PowerNormalization norm;
};

PowerReport power_report(const WorkScenario& s, const PowerSearch& search = {});

std::vector<PowerReport> power_sweep(double omega_l, const std::vector<double>& omega_ints, double hbar = 1.0,
                                     const PowerSearch& search = {});

/// CSV columns omega_int, W_max/E_ref, T_max/t_ref, T_neg/t_ref, P_max/P_ref,
/// P_neg/P_ref, negativity_present.
void write_sweep_csv(std::ostream& os, const std::vector<PowerReport>& rows);

/// P_max at w_L = 1, w_int = 5 (the reference point of the power plots).
double reference_power(double omega_l = 1.0, double omega_int = 5.0);

struct AlignmentFlag {
  int ell;
  int j;
  double w;
  double re_q;
  bool negative_mhq;
  bool boosted;  ///< negative MHQ on a positive work value
};

std::vector<AlignmentFlag> negativity_work_alignment(const WorkSnapshot& snapshot);

}  // namespace kdqsl
