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

#include "kdqsl/srbounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "kdqsl/io.hpp"
#include "kdqsl/kdq.hpp"

namespace kdqsl {

namespace {

constexpr double kPi = std::numbers::pi;
// Eigenvalues of a state below this are treated as exact zeros in the SLD.
constexpr double kZeroPopulation = 1e-13;
constexpr double kCommuteTol = 1e-10;

void check_range(SpectralRange r) {
  if (!(r.min <= r.max)) {
    std::ostringstream os;
    os << "x_min = " << r.min << " > x_max = " << r.max;
    throw ContractError("ordered spectral range", os.str());
  }
}

double angle_or_throw(SpectralRange r, double x, const char* what) {
  const auto tau = interpolation_angle(r, x);
  if (!tau) {
    std::ostringstream os;
    os << what << ": value " << x << " outside [" << r.min << ", " << r.max << "]";
    throw ContractError("reachable interpolation angle", os.str());
  }
  return *tau;
}

}  // namespace

SpectralRange spectral_range(const HermitianOperator& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x.matrix(), Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(0), es.eigenvalues()(es.eigenvalues().size() - 1)};
}

double interpolate(SpectralRange r, double tau) {
  check_range(r);
  if (tau <= 0.0) return r.max;
  if (tau >= kPi) return r.min;
  const double c = std::cos(0.5 * tau);
  const double s = std::sin(0.5 * tau);
  return r.max * c * c + r.min * s * s;
}

std::optional<double> interpolation_angle(SpectralRange r, double x) {
  check_range(r);
  const double width = r.max - r.min;
  if (width <= kAngleClampTol * std::max(1.0, std::abs(r.max))) {
    if (std::abs(x - r.max) <= kAngleClampTol * std::max(1.0, std::abs(x))) return 0.0;
    return std::nullopt;
  }
  double arg = (2.0 * x - r.min - r.max) / width;
  if (arg > 1.0 + kAngleClampTol || arg < -1.0 - kAngleClampTol) return std::nullopt;
  // acos is square-root sensitive at +-1: a target sitting on an extreme
  // eigenvalue would inherit sqrt(roundoff) from the eigensolver.
  const double snap = kEigenSnapTol * std::max({1.0, std::abs(r.min), std::abs(r.max)});
  if (x >= r.max - snap) return 0.0;
  if (x <= r.min + snap) return kPi;
  arg = std::clamp(arg, -1.0, 1.0);
  return std::acos(arg);
}

double interpolation_primitive(SpectralRange r, double tau) {
  check_range(r);
  const double mid = 0.5 * (r.min + r.max);
  const double half = 0.5 * (r.max - r.min);
  if (tau <= 0.0) return r.max * tau;
  if (tau >= kPi) return mid * kPi + r.min * (tau - kPi);
  return mid * tau + half * std::sin(tau);
}

std::string to_string(CurveKind k) {
  switch (k) {
    case CurveKind::lower_direct: return "lower_direct";
    case CurveKind::upper_direct: return "upper_direct";
    case CurveKind::lower_derivative: return "lower_derivative";
    case CurveKind::unified_lower: return "unified_lower";
  }
  return "unknown";
}

double BoundCurve::operator()(double t) const {
  auto direct = [&] { return interpolate(range, tau0 + rate * t); };
  auto derivative = [&] {
    if (rate < kZeroRate) return initial + t * interpolate(dot_range, dot_tau0);
    return initial +
           (interpolation_primitive(dot_range, dot_tau0 + rate * t) - interpolation_primitive(dot_range, dot_tau0)) /
               rate;
  };
  switch (kind) {
    case CurveKind::lower_direct: return scale * direct();
    case CurveKind::upper_direct: return scale * interpolate(range, tau0 - rate * t);
    case CurveKind::lower_derivative: return scale * derivative();
    case CurveKind::unified_lower: return scale * std::max(direct(), derivative());
  }
  return 0.0;
}

std::vector<double> BoundCurve::sample(const std::vector<double>& times) const {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back((*this)(t));
  return out;
}

void write_curve_csv(std::ostream& os, const BoundCurve& c, const std::vector<double>& times) {
  os << "t,value,kind\n";
  const std::string kind = to_string(c.kind);
  for (double t : times) os << format_double(t) << ',' << format_double(c(t)) << ',' << kind << '\n';
}

// ---------------------------------------------------------------------------

SldResult sld(const QuantumState& state, const HermitianOperator& generator, double hbar) {
  if (state.dim() != generator.dim()) throw ContractError("dimension mismatch", "sld state vs generator");
  if (!(hbar > 0.0)) throw ContractError("positive hbar", "sld");
  const QuantumState rho = state.normalized();

  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.op().matrix());
  const Matrix& v = es.eigenvectors();
  Eigen::VectorXd p = es.eigenvalues();
  for (Eigen::Index k = 0; k < p.size(); ++k) p(k) = p(k) < kZeroPopulation ? 0.0 : p(k);

  const Matrix g = v.adjoint() * generator.matrix() * v;
  const Eigen::Index n = p.size();
  Matrix l_eig = Matrix::Zero(n, n);
  const cplx prefactor = 2.0 / cplx(0.0, hbar);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double denom = p(i) + p(j);
      if (denom == 0.0) continue;
      l_eig(i, j) = prefactor * ((p(j) - p(i)) / denom) * g(i, j);
    }
  }
  const Matrix l = v * l_eig * v.adjoint();
  HermitianOperator lop(Matrix(0.5 * (l + l.adjoint())));
  const double second = (lop.matrix() * lop.matrix() * rho.op().matrix()).trace().real();
  return {lop, std::sqrt(std::max(0.0, second)), rho, generator};
}

double variance_upper_bound(SpectralRange r, double mean) {
  check_range(r);
  const double tol = 1e-9 * std::max(1.0, std::max(std::abs(r.min), std::abs(r.max)));
  if (mean < r.min - tol || mean > r.max + tol) {
    std::ostringstream os;
    os << "mean " << mean << " outside [" << r.min << ", " << r.max << "]";
    throw ContractError("mean within spectral range", os.str());
  }
  return std::max(0.0, (r.min + r.max) * mean - mean * mean - r.min * r.max);
}

HermitianOperator time_derivative(const HermitianOperator& x, const HermitianOperator& generator, double hbar) {
  return divided_by_i(commutator(x, generator)) * (1.0 / hbar);
}

ExpvalBounds expval_bounds(const HermitianOperator& x, const QuantumState& state0, const HermitianOperator& generator,
                           double hbar) {
  const SldResult s = sld(state0, generator, hbar);
  const SpectralRange r = spectral_range(x);
  const double x0 = s.state.expectation(x);
  const double tau0 = angle_or_throw(r, x0, "expval_bounds");

  BoundCurve lower;
  lower.kind = CurveKind::lower_direct;
  lower.range = r;
  lower.tau0 = tau0;
  lower.rate = s.delta_l;
  lower.initial = x0;
  lower.scale = state0.trace_scale();

  BoundCurve upper = lower;
  upper.kind = CurveKind::upper_direct;
  return {lower, upper};
}

BoundCurve derivative_refined_lower_bound(const HermitianOperator& x, const QuantumState& state0,
                                          const HermitianOperator& generator, double hbar) {
  const SldResult s = sld(state0, generator, hbar);
  const HermitianOperator xdot = time_derivative(x, generator, hbar);
  const SpectralRange dr = spectral_range(xdot);
  const double x0 = s.state.expectation(x);
  const double xdot0 = s.state.expectation(xdot);

  BoundCurve c;
  c.kind = CurveKind::lower_derivative;
  c.range = spectral_range(x);
  c.tau0 = angle_or_throw(c.range, x0, "derivative_refined_lower_bound");
  c.rate = s.delta_l;
  c.initial = x0;
  c.dot_range = dr;
  c.dot_tau0 = angle_or_throw(dr, xdot0, "derivative_refined_lower_bound (Xdot)");
  c.scale = state0.trace_scale();
  return c;
}

BoundCurve unified_lower_bound(const HermitianOperator& x, const QuantumState& state0,
                               const HermitianOperator& generator, double hbar) {
  BoundCurve c = derivative_refined_lower_bound(x, state0, generator, hbar);
  c.kind = CurveKind::unified_lower;
  return c;
}

KdqBounds kdq_bounds(const QuantumState& rho, const HermitianOperator& a_l, const HermitianOperator& b_j,
                     const HermitianOperator& h, double hbar) {
  const SplitOperators split = split_operators(rho, a_l);
  const QuantumState state(b_j);
  const HermitianOperator generator = -h;

  const ExpvalBounds re = expval_bounds(split.real_part, state, generator, hbar);
  const ExpvalBounds im = expval_bounds(split.imag_part, state, generator, hbar);
  KdqBounds out{re.lower,
                re.upper,
                im.lower,
                im.upper,
                derivative_refined_lower_bound(split.real_part, state, generator, hbar),
                derivative_refined_lower_bound(split.imag_part, state, generator, hbar),
                {},
                {},
                re.lower.rate};
  out.re_unified = out.re_derivative;
  out.re_unified.kind = CurveKind::unified_lower;
  out.im_unified = out.im_derivative;
  out.im_unified.kind = CurveKind::unified_lower;
  return out;
}

BoundCurve tpm_limit_bound(const QuantumState& rho, const HermitianOperator& a_l, const HermitianOperator& b_j,
                           const HermitianOperator& h, double hbar) {
  if (operator_norm(commutator(rho.op(), a_l)) >= kCommuteTol) {
    throw ContractError("[rho, A_l] = 0", "TPM-limit bound needs a state commuting with A_l");
  }
  if (max_abs(a_l.matrix() - Matrix::Identity(a_l.dim(), a_l.dim())) <= 1e-9) {
    throw ContractError("A_l != I", "TPM-limit bound excludes the identity projector");
  }
  const SplitOperators split = split_operators(rho, a_l);
  const QuantumState state(b_j);
  const SldResult s = sld(state, -h, hbar);
  // rho_l = A_l rho A_l here, whose smallest eigenvalue is exactly 0.
  const SpectralRange r{0.0, std::max(0.0, spectral_range(split.real_part).max)};
  const double x0 = s.state.expectation(split.real_part);

  BoundCurve c;
  c.kind = CurveKind::lower_direct;
  c.range = r;
  c.tau0 = angle_or_throw(r, x0, "tpm_limit_bound");
  c.rate = s.delta_l;
  c.initial = x0;
  c.scale = state.trace_scale();
  return c;
}

double sr_uncertainty_gap(const HermitianOperator& x, const HermitianOperator& y, const QuantumState& state) {
  const QuantumState s = state.normalized();
  const double mx = s.expectation(x);
  const double my = s.expectation(y);
  const double vx = s.expectation(HermitianOperator(Matrix(x.matrix() * x.matrix()))) - mx * mx;
  const double vy = s.expectation(HermitianOperator(Matrix(y.matrix() * y.matrix()))) - my * my;
  const double cov = s.expectation(anticommutator(x, y) * 0.5) - mx * my;
  const double comm = s.expectation(divided_by_i(commutator(x, y)) * 0.5);
  return vx * vy - cov * cov - comm * comm;
}

}  // namespace kdqsl
