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

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace kdqsl {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Max abs deviation from Hermiticity tolerated at construction.
inline constexpr double kHermitianTol = 1e-10;
/// Eigenvalues closer than this (relative to the spectral range) share a projector.
inline constexpr double kDegeneracyTol = 1e-9;
inline constexpr double kPsdTol = 1e-10;

/// Raised when an input violates a structural invariant (non-Hermitian,
/// non-PSD, dimension mismatch, ...). `invariant()` names the violated rule.
class ContractError : public std::invalid_argument {
 public:
  ContractError(std::string invariant, const std::string& detail)
      : std::invalid_argument(invariant + ": " + detail), invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

/// Square complex matrix that is Hermitian up to kHermitianTol. Inputs inside
/// the tolerance are symmetrized as (X + X^dag)/2; anything further out is
/// rejected.
class HermitianOperator {
 public:
  explicit HermitianOperator(const Matrix& m);

  static HermitianOperator zero(int dim);
  static HermitianOperator identity(int dim);
  /// |v><v| for a (not necessarily normalized) vector.
  static HermitianOperator outer(const Eigen::VectorXcd& v);
  static HermitianOperator diagonal(const std::vector<double>& d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

  double trace() const { return m_.trace().real(); }

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator-() const;
  HermitianOperator operator*(double s) const;

 private:
  struct Trusted {};
  HermitianOperator(Matrix m, Trusted) : m_(std::move(m)) {}

  Matrix m_;
};

inline HermitianOperator operator*(double s, const HermitianOperator& h) { return h * s; }

/// Max abs entry deviation between X and X^dag.
double hermiticity_defect(const Matrix& m);

/// Positive semidefinite operator plus its trace. Density operators have unit
/// trace; measurement projectors used as "states" keep their trace here.
class QuantumState {
 public:
  /// Accepts any PSD operator with positive trace.
  explicit QuantumState(const HermitianOperator& op);

  /// Requires unit trace within kHermitianTol.
  static QuantumState density(const HermitianOperator& op);
  static QuantumState pure(const Eigen::VectorXcd& psi);

  const HermitianOperator& op() const { return op_; }
  int dim() const { return op_.dim(); }
  double trace_scale() const { return trace_scale_; }
  bool is_normalized() const;

  /// Unit-trace copy op / trace_scale.
  QuantumState normalized() const;

  /// tr{X op}. Real for Hermitian X.
  double expectation(const HermitianOperator& x) const;

 private:
  HermitianOperator op_;
  double trace_scale_;
};

/// Eigenvalues grouped by degeneracy, ascending, with one projector per group.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<HermitianOperator> projectors;
  /// Raw (ungrouped) eigenvalues ascending and matching orthonormal columns.
  Eigen::VectorXd raw_eigenvalues;
  Matrix eigenvectors;

  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
  int dim() const { return static_cast<int>(eigenvectors.rows()); }

  Matrix reconstruct() const;
};

SpectralDecomposition spectral_decompose(const HermitianOperator& x);

/// U = exp(-i H t / hbar).
class UnitaryPropagator {
 public:
  UnitaryPropagator(Matrix u, double t, double hbar) : u_(std::move(u)), t_(t), hbar_(hbar) {}

  static UnitaryPropagator identity(int dim);

  const Matrix& matrix() const { return u_; }
  int dim() const { return static_cast<int>(u_.rows()); }
  double time() const { return t_; }
  double hbar() const { return hbar_; }

 private:
  Matrix u_;
  double t_;
  double hbar_;
};

UnitaryPropagator propagator(const HermitianOperator& h, double t, double hbar = 1.0);
/// Same, reusing a precomputed decomposition of H (for dense time grids).
UnitaryPropagator propagator(const SpectralDecomposition& h_spec, double t, double hbar = 1.0);

/// U^dag B U.
HermitianOperator heisenberg(const HermitianOperator& b, const UnitaryPropagator& u);
/// U rho U^dag.
HermitianOperator schrodinger(const HermitianOperator& rho, const UnitaryPropagator& u);

/// [X, Y]; anti-Hermitian for Hermitian arguments.
Matrix commutator(const Matrix& x, const Matrix& y);
Matrix commutator(const HermitianOperator& x, const HermitianOperator& y);
HermitianOperator anticommutator(const HermitianOperator& x, const HermitianOperator& y);

/// i*K for anti-Hermitian K, or K/i; the result is Hermitian.
HermitianOperator times_i(const Matrix& anti_hermitian);
HermitianOperator divided_by_i(const Matrix& anti_hermitian);

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

enum class Subsystem { first, second };

/// Trace out `traced` from a state on C^{d1} (x) C^{d2}.
QuantumState partial_trace(const QuantumState& rho, int dim_first, int dim_second, Subsystem traced);

/// Largest singular value.
double operator_norm(const Matrix& m);
double max_abs(const Matrix& m);

/// Standard deviation sqrt(<X^2> - <X>^2) in a unit-trace state.
double standard_deviation(const HermitianOperator& x, const QuantumState& state);

}  // namespace kdqsl
