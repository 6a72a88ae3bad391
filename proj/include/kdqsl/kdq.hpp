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

// Kirkwood-Dirac quasiprobabilities q_{l,j}(t) = tr{rho A_l B_j(t)} and the
// two-point-measurement joint probabilities they reduce to when [rho, A] = 0.

#pragma once

#include <cmath>
#include <iosfwd>
#include <vector>

#include "kdqsl/linop.hpp"

namespace kdqsl {

inline constexpr double kDefaultImThreshold = 0.2;

/// Values this close to zero are roundoff, not negativity: a commuting pair
/// with rho A_l = 0 produces Re q of order -1e-17.
inline constexpr double kFlagNoiseFloor = 1e-12;

/// Non-classicality criteria shared by every flag in the library.
inline bool re_negative(cplx q) { return q.real() < -kFlagNoiseFloor; }
inline bool im_exceeds(cplx q, double s_th) { return std::abs(q.imag()) > s_th + kFlagNoiseFloor; }

struct Outcome {
  int label;
  double value;
  HermitianOperator projector;
};

/// Complete orthogonal family of projectors with their outcome values.
class ProjectiveObservable {
 public:
  /// Validates idempotence, mutual orthogonality and completeness (1e-9).
  explicit ProjectiveObservable(std::vector<Outcome> outcomes);

  /// Spectral decomposition of X; labels 0..n-1 in ascending eigenvalue order.
  static ProjectiveObservable from_operator(const HermitianOperator& x);
  /// Rank-1 projectors onto the computational basis, values 0..d-1.
  static ProjectiveObservable computational(int dim);

  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  std::size_t size() const { return outcomes_.size(); }
  const Outcome& operator[](std::size_t i) const { return outcomes_[i]; }
  int dim() const { return outcomes_.front().projector.dim(); }

  /// sum_k value_k P_k.
  HermitianOperator observable() const;

 private:
  std::vector<Outcome> outcomes_;
};

/// rho_l = {rho, A_l}/2 and sigma_l = [rho, A_l]/(2i); Re q = <rho_l>, Im q = <sigma_l>.
struct SplitOperators {
  HermitianOperator real_part;
  HermitianOperator imag_part;
};

SplitOperators split_operators(const QuantumState& rho, const HermitianOperator& a_l);

/// tr{rho A_l U^dag B_j U}.
cplx kdq_value(const QuantumState& rho, const HermitianOperator& a_l, const HermitianOperator& b_j,
               const UnitaryPropagator& u);

/// tr{A_l rho A_l U^dag B_j U}.
double tpm_joint(const QuantumState& rho, const HermitianOperator& a_l, const HermitianOperator& b_j,
                 const UnitaryPropagator& u);

struct KdqEntry {
  int ell;
  int j;
  double t;
  cplx value;
  double tpm_value;
  bool re_negative;
  bool im_exceeds;
};

/// KDQ over a time grid. Entries are stored time-major, then l, then j.
class KdqTable {
 public:
  KdqTable(std::vector<double> times, std::size_t n_ell, std::size_t n_j, double s_th,
           std::vector<KdqEntry> entries);

  const std::vector<double>& times() const { return times_; }
  std::size_t n_ell() const { return n_ell_; }
  std::size_t n_j() const { return n_j_; }
  double s_th() const { return s_th_; }
  const std::vector<KdqEntry>& entries() const { return entries_; }

  /// Indices are positions in the observables' outcome lists.
  const KdqEntry& at(std::size_t time_index, std::size_t ell_index, std::size_t j_index) const;

  cplx total(std::size_t time_index) const;
  /// sum_l q_{l,j}(t)
  cplx marginal_final(std::size_t time_index, std::size_t j_index) const;
  /// sum_j q_{l,j}(t)
  cplx marginal_initial(std::size_t time_index, std::size_t ell_index) const;

  /// CSV columns t,ell,j,re_q,im_q,tpm,re_negative,im_exceeds.
  void write_csv(std::ostream& os) const;

 private:
  std::vector<double> times_;
  std::size_t n_ell_;
  std::size_t n_j_;
  double s_th_;
  std::vector<KdqEntry> entries_;
};

/// Flags: re_negative <=> Re q < 0; im_exceeds <=> |Im q| > s_th (both past
/// kFlagNoiseFloor).
KdqTable kdq_table(const QuantumState& rho, const ProjectiveObservable& a, const ProjectiveObservable& b,
                   const HermitianOperator& h, const std::vector<double>& times,
                   double s_th = kDefaultImThreshold, double hbar = 1.0);

/// Uniform grid of `steps` points on [0, t_max].
std::vector<double> uniform_grid(double t_max, int steps);

}  // namespace kdqsl
