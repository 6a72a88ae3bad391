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

#include "kdqsl/linop.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kdqsl {

namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": " << a << " vs " << b;
    throw ContractError("dimension mismatch", os.str());
  }
}

}  // namespace

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double operator_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

HermitianOperator::HermitianOperator(const Matrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw ContractError("square matrix", "got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw ContractError("finite entries", "matrix contains NaN or Inf");
  const double defect = hermiticity_defect(m);
  if (defect > kHermitianTol) {
    std::ostringstream os;
    os << "max |X - X^dag| = " << defect << " exceeds " << kHermitianTol;
    throw ContractError("Hermiticity", os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::zero(int dim) { return {Matrix::Zero(dim, dim), Trusted{}}; }

HermitianOperator HermitianOperator::identity(int dim) { return {Matrix::Identity(dim, dim), Trusted{}}; }

HermitianOperator HermitianOperator::outer(const Eigen::VectorXcd& v) {
  Matrix m = v * v.adjoint();
  return {0.5 * (m + m.adjoint()), Trusted{}};
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& d) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return HermitianOperator(m);
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  require_same_dim(dim(), o.dim(), "operator+");
  return {m_ + o.m_, Trusted{}};
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  require_same_dim(dim(), o.dim(), "operator-");
  return {m_ - o.m_, Trusted{}};
}

HermitianOperator HermitianOperator::operator-() const { return {-m_, Trusted{}}; }

HermitianOperator HermitianOperator::operator*(double s) const { return {s * m_, Trusted{}}; }

// ---------------------------------------------------------------------------

QuantumState::QuantumState(const HermitianOperator& op) : op_(op), trace_scale_(op.trace()) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix(), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  if (lo < -kPsdTol) {
    std::ostringstream os;
    os << "minimum eigenvalue " << lo << " < " << -kPsdTol;
    throw ContractError("positive semidefinite", os.str());
  }
  if (!(trace_scale_ > 0.0)) throw ContractError("positive trace", "state has zero trace");
}

QuantumState QuantumState::density(const HermitianOperator& op) {
  QuantumState s(op);
  if (!s.is_normalized()) {
    std::ostringstream os;
    os << "trace " << s.trace_scale() << " != 1";
    throw ContractError("unit trace", os.str());
  }
  return s;
}

QuantumState QuantumState::pure(const Eigen::VectorXcd& psi) {
  const double n = psi.norm();
  if (!(n > 0.0)) throw ContractError("nonzero vector", "pure state from zero vector");
  return QuantumState(HermitianOperator::outer(psi / n));
}

bool QuantumState::is_normalized() const { return std::abs(trace_scale_ - 1.0) <= kHermitianTol; }

QuantumState QuantumState::normalized() const { return QuantumState(op_ * (1.0 / trace_scale_)); }

double QuantumState::expectation(const HermitianOperator& x) const {
  require_same_dim(dim(), x.dim(), "expectation");
  return (x.matrix() * op_.matrix()).trace().real();
}

double standard_deviation(const HermitianOperator& x, const QuantumState& state) {
  const QuantumState s = state.normalized();
  const double mean = s.expectation(x);
  const double second = (x.matrix() * x.matrix() * s.op().matrix()).trace().real();
  return std::sqrt(std::max(0.0, second - mean * mean));
}

// ---------------------------------------------------------------------------

Matrix SpectralDecomposition::reconstruct() const {
  Matrix out = Matrix::Zero(dim(), dim());
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) out += eigenvalues[k] * projectors[k].matrix();
  return out;
}

SpectralDecomposition spectral_decompose(const HermitianOperator& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x.matrix());
  if (es.info() != Eigen::Success) throw std::runtime_error("spectral_decompose: eigensolver did not converge");

  SpectralDecomposition out;
  out.raw_eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();

  const Eigen::Index n = out.raw_eigenvalues.size();
  const double range = out.raw_eigenvalues(n - 1) - out.raw_eigenvalues(0);
  const double tol = kDegeneracyTol * std::max(1.0, range);

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && out.raw_eigenvalues(stop) - out.raw_eigenvalues(stop - 1) <= tol) ++stop;
    const Matrix cols = out.eigenvectors.middleCols(start, stop - start);
    out.eigenvalues.push_back(out.raw_eigenvalues.segment(start, stop - start).mean());
    out.projectors.push_back(HermitianOperator(Matrix(0.5 * (cols * cols.adjoint() + (cols * cols.adjoint()).adjoint()))));
    start = stop;
  }
  return out;
}

// ---------------------------------------------------------------------------

UnitaryPropagator UnitaryPropagator::identity(int dim) { return {Matrix::Identity(dim, dim), 0.0, 1.0}; }

UnitaryPropagator propagator(const SpectralDecomposition& h_spec, double t, double hbar) {
  if (!(hbar > 0.0)) throw ContractError("positive hbar", "hbar = " + std::to_string(hbar));
  const Eigen::Index n = h_spec.raw_eigenvalues.size();
  Eigen::VectorXcd phases(n);
  for (Eigen::Index k = 0; k < n; ++k) phases(k) = std::polar(1.0, -h_spec.raw_eigenvalues(k) * t / hbar);
  Matrix u = h_spec.eigenvectors * phases.asDiagonal() * h_spec.eigenvectors.adjoint();
  return {std::move(u), t, hbar};
}

UnitaryPropagator propagator(const HermitianOperator& h, double t, double hbar) {
  return propagator(spectral_decompose(h), t, hbar);
}

HermitianOperator heisenberg(const HermitianOperator& b, const UnitaryPropagator& u) {
  require_same_dim(b.dim(), u.dim(), "heisenberg");
  const Matrix m = u.matrix().adjoint() * b.matrix() * u.matrix();
  return HermitianOperator(Matrix(0.5 * (m + m.adjoint())));
}

HermitianOperator schrodinger(const HermitianOperator& rho, const UnitaryPropagator& u) {
  require_same_dim(rho.dim(), u.dim(), "schrodinger");
  const Matrix m = u.matrix() * rho.matrix() * u.matrix().adjoint();
  return HermitianOperator(Matrix(0.5 * (m + m.adjoint())));
}

Matrix commutator(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ContractError("dimension mismatch", "commutator of " + std::to_string(x.rows()) + " and " +
                                                  std::to_string(y.rows()) + " dim operators");
  }
  return x * y - y * x;
}

Matrix commutator(const HermitianOperator& x, const HermitianOperator& y) {
  return commutator(x.matrix(), y.matrix());
}

HermitianOperator anticommutator(const HermitianOperator& x, const HermitianOperator& y) {
  require_same_dim(x.dim(), y.dim(), "anticommutator");
  const Matrix m = x.matrix() * y.matrix() + y.matrix() * x.matrix();
  return HermitianOperator(Matrix(0.5 * (m + m.adjoint())));
}

HermitianOperator times_i(const Matrix& anti_hermitian) {
  const Matrix m = cplx(0.0, 1.0) * anti_hermitian;
  return HermitianOperator(Matrix(0.5 * (m + m.adjoint())));
}

HermitianOperator divided_by_i(const Matrix& anti_hermitian) {
  const Matrix m = cplx(0.0, -1.0) * anti_hermitian;
  return HermitianOperator(Matrix(0.5 * (m + m.adjoint())));
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  const int da = a.dim();
  const int db = b.dim();
  Matrix out(da * db, da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  return HermitianOperator(out);
}

QuantumState partial_trace(const QuantumState& rho, int dim_first, int dim_second, Subsystem traced) {
  if (dim_first <= 0 || dim_second <= 0 || dim_first * dim_second != rho.dim()) {
    std::ostringstream os;
    os << "state of dim " << rho.dim() << " is not " << dim_first << " x " << dim_second;
    throw ContractError("factorable dimension", os.str());
  }
  const Matrix& m = rho.op().matrix();
  if (traced == Subsystem::second) {
    Matrix out = Matrix::Zero(dim_first, dim_first);
    for (int i = 0; i < dim_first; ++i)
      for (int j = 0; j < dim_first; ++j)
        for (int k = 0; k < dim_second; ++k) out(i, j) += m(i * dim_second + k, j * dim_second + k);
    return QuantumState(HermitianOperator(out));
  }
  Matrix out = Matrix::Zero(dim_second, dim_second);
  for (int i = 0; i < dim_second; ++i)
    for (int j = 0; j < dim_second; ++j)
      for (int k = 0; k < dim_first; ++k) out(i, j) += m(k * dim_second + i, k * dim_second + j);
  return QuantumState(HermitianOperator(out));
}

}  // namespace kdqsl
