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

#include <doctest.h>

#include <sstream>

#include "kdqsl/kdq.hpp"
#include "kdqsl/oracle.hpp"
#include "kdqsl/srbounds.hpp"
#include "kdqsl/workext.hpp"
#include "oracles.hpp"

using namespace kdqsl;
using oracle_ref::kPi;

namespace {

const HermitianOperator kOne = HermitianOperator::diagonal({0.0, 1.0});

WorkScenario fig2() { return build_two_qubit_scenario(1.0, 5.0); }

}  // namespace

TEST_CASE("interpolation function branches") {
  const SpectralRange r{-0.7, 1.9};
  CHECK(interpolate(r, -1.0) == r.max);
  CHECK(interpolate(r, 4.0) == r.min);
  CHECK(interpolate(r, kPi / 2) == doctest::Approx(0.5 * (r.min + r.max)).epsilon(1e-14));
  CHECK(interpolate({0.0, 1.0}, kPi / 3) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(interpolate(r, 0.0) == doctest::Approx(r.max));
  CHECK(interpolate(r, kPi) == doctest::Approx(r.min));
  CHECK_THROWS_AS(interpolate({1.0, 0.0}, 0.3), ContractError);
}

TEST_CASE("interpolation angle") {
  const SpectralRange r{-0.7, 1.9};
  CHECK(*interpolation_angle(r, r.max) == doctest::Approx(0.0));
  CHECK(*interpolation_angle(r, r.min) == doctest::Approx(kPi));
  CHECK(*interpolation_angle(r, 0.5 * (r.min + r.max)) == doctest::Approx(kPi / 2));
  // Within the clamp tolerance of the ends, and outside it.
  CHECK(*interpolation_angle(r, r.max + 1e-10) == 0.0);
  CHECK_FALSE(interpolation_angle(r, r.max + 1e-6).has_value());
  CHECK_FALSE(interpolation_angle(r, r.min - 1e-6).has_value());
  // Roundoff-level offsets from an extreme eigenvalue snap to the end angle.
  CHECK(*interpolation_angle({-1e-17, 1.0}, 0.0) == kPi);
  CHECK(*interpolation_angle({0.0, 1.0 + 1e-16}, 1.0) == 0.0);
  CHECK(*interpolation_angle({0.0, 1.0}, 1e-10) < kPi);
  CHECK(*interpolation_angle({2.0, 2.0}, 2.0) == 0.0);
  CHECK_FALSE(interpolation_angle({2.0, 2.0}, 2.5).has_value());
}

TEST_CASE("angle round trip on 1000 random triples and monotonicity") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n(0.0, 3.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    double a = n(rng);
    double b = n(rng);
    if (a > b) std::swap(a, b);
    const double x = a + (b - a) * u(rng);
    const auto tau = interpolation_angle({a, b}, x);
    REQUIRE(tau.has_value());
    CHECK(*tau >= 0.0);
    CHECK(*tau <= kPi);
    worst = std::max(worst, std::abs(interpolate({a, b}, *tau) - x));
  }
  CHECK(worst < 1e-12);
  double prev = interpolate({-1.0, 3.0}, 0.0);
  for (int k = 1; k <= 2000; ++k) {
    const double cur = interpolate({-1.0, 3.0}, kPi * k / 2000);
    CHECK(cur <= prev);
    prev = cur;
  }
}

TEST_CASE("interpolation primitive is the antiderivative") {
  const SpectralRange r{-0.4, 1.3};
  for (double tau : {-1.0, 0.0, 0.3, 1.7, kPi, 4.5}) {
    const double h = 1e-5;
    const double d = (interpolation_primitive(r, tau + h) - interpolation_primitive(r, tau - h)) / (2 * h);
    CHECK(d == doctest::Approx(interpolate(r, tau)).epsilon(1e-8));
  }
  // Continuity at the branch points.
  for (double tau : {0.0, kPi}) {
    CHECK(std::abs(interpolation_primitive(r, tau + 1e-12) - interpolation_primitive(r, tau - 1e-12)) < 1e-10);
  }
}

TEST_CASE("sld examples") {
  std::mt19937_64 rng(5);
  const HermitianOperator h(oracle_ref::random_hermitian(3, rng));

  const QuantumState pure = QuantumState::pure(oracle_ref::random_ket(3, rng));
  const SldResult sp = sld(pure, h);
  CHECK(sp.delta_l == doctest::Approx(2.0 * standard_deviation(h, pure)).epsilon(1e-9));

  const QuantumState mixed = QuantumState::density(HermitianOperator::identity(3) * (1.0 / 3.0));
  const SldResult sm = sld(mixed, h);
  CHECK(max_abs(sm.L.matrix()) < 1e-12);
  CHECK(sm.delta_l == 0.0);

  // |1><1| under the effective target Hamiltonian: Delta H = omega_int / 2.
  const WorkScenario s = fig2();
  const SldResult sb = sld(QuantumState::density(kOne), -s.target_hamiltonian);
  const Matrix hm = s.target_hamiltonian.matrix();
  const double dh = std::sqrt((hm * hm)(1, 1).real() - std::pow(hm(1, 1).real(), 2));
  CHECK(dh == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(sb.delta_l == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("sld agrees with the Lyapunov solve and satisfies its identities") {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 40; ++rep) {
    const int d = 2 + rep % 5;
    const Matrix hm = oracle_ref::random_hermitian(d, rng);
    const Matrix rm = rep % 3 == 0 ? Matrix(oracle_ref::random_ket(d, rng) * oracle_ref::random_ket(d, rng).adjoint())
                                   : oracle_ref::random_density(d, rng);
    if (rep % 3 == 0) continue;  // product of two different kets is not a state
    const QuantumState rho(HermitianOperator{rm});
    const SldResult r = sld(rho, HermitianOperator(hm), 0.9);
    CHECK(r.delta_l == doctest::Approx(oracle_ref::delta_l_lyapunov(rm, hm, 0.9)).epsilon(1e-8));
    CHECK(std::abs(rho.expectation(r.L)) < 1e-10);
    const Matrix lhs = 0.5 * (rm * r.L.matrix() + r.L.matrix() * rm);
    const Matrix rhs = (hm * rm - rm * hm) / cplx(0.0, 0.9);
    CHECK(max_abs(lhs - rhs) < 1e-9);
    CHECK(r.delta_l <= 2.0 * oracle_ref::std_dev(hm, rm) / 0.9 + 1e-9);
  }
}

TEST_CASE("delta L is constant along trajectories") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 10; ++rep) {
    const int d = 2 + rep % 4;
    const HermitianOperator h(oracle_ref::random_hermitian(d, rng));
    const QuantumState rho(HermitianOperator(oracle_ref::random_density(d, rng)));
    const double l0 = sld(rho, h).delta_l;
    for (const auto& p : expectation_trajectory(h, rho, h, uniform_grid(4.0, 9), 1.0, true))
      CHECK(std::abs(p.delta_l - l0) < 1e-9);
  }
}

TEST_CASE("variance upper bound") {
  CHECK(variance_upper_bound({-1.0, 2.0}, -1.0) == doctest::Approx(0.0));
  CHECK(variance_upper_bound({-1.0, 2.0}, 2.0) == doctest::Approx(0.0));
  for (double p : {0.1, 0.5, 0.77}) CHECK(variance_upper_bound({0.0, 1.0}, p) == doctest::Approx(p - p * p));
  CHECK_THROWS_AS(variance_upper_bound({0.0, 1.0}, 1.1), ContractError);

  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 100; ++rep) {
    const int d = 2 + rep % 6;
    const Matrix xm = oracle_ref::random_hermitian(d, rng);
    const Matrix rm = oracle_ref::random_density(d, rng);
    const double mean = (xm * rm).trace().real();
    const double var = std::pow(oracle_ref::std_dev(xm, rm), 2);
    CHECK(var <= variance_upper_bound(spectral_range(HermitianOperator(xm)), mean) + 1e-10);
  }
}

TEST_CASE("expectation bounds: frozen dynamics, saturation, validity") {
  // [H, rho] = 0 freezes both curves.
  const HermitianOperator x = HermitianOperator::diagonal({0.0, 1.0, 3.0});
  const QuantumState rho = QuantumState::density(HermitianOperator::diagonal({0.2, 0.5, 0.3}));
  const ExpvalBounds frozen = expval_bounds(x, rho, HermitianOperator::diagonal({1.0, -2.0, 0.5}));
  for (double t : {0.0, 1.0, 10.0}) {
    CHECK(frozen.lower(t) == doctest::Approx(rho.expectation(x)));
    CHECK(frozen.upper(t) == doctest::Approx(rho.expectation(x)));
  }

  // Saturating construction, written out independently of the oracle module.
  const double x1 = -0.5;
  const double xd = 1.5;
  const double tau0 = 0.9;
  const double w = 1.4;
  Matrix hm = Matrix::Zero(2, 2);
  hm(0, 1) = hm(1, 0) = 0.5 * w;
  Eigen::Vector2cd psi(cplx(0.0, -std::sin(tau0 / 2)), std::cos(tau0 / 2));  // basis |x_1>, |x_d>
  const HermitianOperator x2 = HermitianOperator::diagonal({x1, xd});
  const ExpvalBounds sat = expval_bounds(x2, QuantumState::pure(psi), HermitianOperator(hm));
  for (double t : uniform_grid((kPi - tau0) / w, 50)) {
    const Matrix u = oracle_ref::expm_propagator(hm, t);
    const Eigen::Vector2cd pt = u * psi;
    const double exact = (pt.adjoint() * x2.matrix() * pt)(0, 0).real();
    CHECK(std::abs(exact - sat.lower(t)) < 1e-10);
    CHECK(std::abs(exact - (xd * std::pow(std::cos((tau0 + w * t) / 2), 2) +
                            x1 * std::pow(std::sin((tau0 + w * t) / 2), 2))) < 1e-12);
  }

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::mt19937_64 rng(seed);
    const int d = 2 + static_cast<int>(seed % 5);
    const Matrix xm = oracle_ref::random_hermitian(d, rng);
    const Matrix gm = oracle_ref::random_hermitian(d, rng);
    const Matrix rm = oracle_ref::random_density(d, rng);
    const QuantumState r0(HermitianOperator{rm});
    const ExpvalBounds b = expval_bounds(HermitianOperator(xm), r0, HermitianOperator(gm));
    const BoundCurve dv = derivative_refined_lower_bound(HermitianOperator(xm), r0, HermitianOperator(gm));
    const BoundCurve un = unified_lower_bound(HermitianOperator(xm), r0, HermitianOperator(gm));
    for (double t : uniform_grid(6.0, 300)) {
      const Matrix u = oracle_ref::expm_propagator(gm, t);
      const double exact = (xm * u * rm * u.adjoint()).trace().real();
      CHECK(exact >= b.lower(t) - 1e-9);
      CHECK(exact <= b.upper(t) + 1e-9);
      CHECK(exact >= dv(t) - 1e-9);
      CHECK(exact >= un(t) - 1e-9);
    }
  }
}

TEST_CASE("bound curve shape invariants") {
  std::mt19937_64 rng(53);
  const HermitianOperator x(oracle_ref::random_hermitian(4, rng));
  const HermitianOperator g(oracle_ref::random_hermitian(4, rng));
  const QuantumState rho(HermitianOperator(oracle_ref::random_density(4, rng)));
  const ExpvalBounds b = expval_bounds(x, rho, g);
  const BoundCurve dv = derivative_refined_lower_bound(x, rho, g);
  const double x0 = rho.expectation(x);
  CHECK(std::abs(b.lower(0.0) - x0) < 1e-10);
  CHECK(std::abs(b.upper(0.0) - x0) < 1e-10);
  CHECK(std::abs(dv(0.0) - x0) < 1e-10);
  const SpectralRange r = spectral_range(x);
  double prev_lo = b.lower(0.0);
  double prev_up = b.upper(0.0);
  for (double t : uniform_grid(20.0, 500)) {
    CHECK(b.lower(t) <= prev_lo + 1e-15);
    CHECK(b.upper(t) >= prev_up - 1e-15);
    CHECK(b.lower(t) >= r.min - 1e-15);
    CHECK(b.upper(t) <= r.max + 1e-15);
    prev_lo = b.lower(t);
    prev_up = b.upper(t);
  }
  // Past the angle pi the direct lower curve sits exactly on x_1.
  const double t_pi = (kPi - b.lower.tau0) / b.lower.rate;
  for (double t : {t_pi, t_pi + 0.1, t_pi + 50.0}) CHECK(b.lower(t) == r.min);

  std::ostringstream os;
  write_curve_csv(os, b.lower, {0.0, 1.0});
  CHECK(os.str().rfind("t,value,kind\n0,", 0) == 0);
  CHECK(os.str().find(",lower_direct\n") != std::string::npos);
}

TEST_CASE("derivative bound: conserved observable and initial slope") {
  const HermitianOperator h = HermitianOperator::diagonal({0.3, -1.0, 2.0});
  const HermitianOperator x = HermitianOperator::diagonal({1.0, 5.0, -2.0});
  std::mt19937_64 rng(59);
  const QuantumState rho(HermitianOperator(oracle_ref::random_density(3, rng)));
  const BoundCurve c = derivative_refined_lower_bound(x, rho, h);
  for (double t : {0.0, 0.5, 4.0}) CHECK(c(t) == doctest::Approx(rho.expectation(x)).epsilon(1e-12));

  // Initial slope equals <Xdot>_0, computed here without the library.
  for (int rep = 0; rep < 20; ++rep) {
    const int d = 2 + rep % 4;
    const Matrix xm = oracle_ref::random_hermitian(d, rng);
    const Matrix gm = oracle_ref::random_hermitian(d, rng);
    const Matrix rm = oracle_ref::random_density(d, rng);
    const BoundCurve dv =
        derivative_refined_lower_bound(HermitianOperator(xm), QuantumState(HermitianOperator(rm)), HermitianOperator(gm));
    if (dv.dot_tau0 < 1e-2 || dv.dot_tau0 > kPi - 1e-2) continue;
    const double slope_ref = ((xm * gm - gm * xm) / cplx(0.0, 1.0) * rm).trace().real();
    const double hh = 1e-4 / std::max(1.0, dv.rate);
    const double slope = (-dv(2 * hh) + 8 * dv(hh) - 8 * dv(-hh) + dv(-2 * hh)) / (12 * hh);
    CHECK(slope == doctest::Approx(slope_ref).epsilon(1e-7));
  }
}

TEST_CASE("unified bound is the pointwise maximum") {
  const WorkScenario s = fig2();
  const KdqBounds kb = kdq_bounds(s.target_state, kOne, kOne, s.target_hamiltonian);
  bool direct_wins = false;
  bool derivative_wins = false;
  for (double t : uniform_grid(kPi, 1001)) {
    const double a = kb.re_lower(t);
    const double b = kb.re_derivative(t);
    CHECK(kb.re_unified(t) == std::max(a, b));
    CHECK(kb.re_unified(t) >= a);
    CHECK(kb.re_unified(t) >= b);
    direct_wins = direct_wins || a > b + 1e-6;
    derivative_wins = derivative_wins || b > a + 1e-6;
  }
  CHECK(direct_wins);
  CHECK(derivative_wins);
}

TEST_CASE("kdq bounds on the two-qubit target") {
  const WorkScenario s = fig2();
  const KdqBounds kb = kdq_bounds(s.target_state, kOne, kOne, s.target_hamiltonian);
  CHECK(kb.delta_l == doctest::Approx(5.0).epsilon(1e-12));
  const std::vector<double> grid = uniform_grid(kPi, 4001);

  // Re q_11 crosses zero no earlier than the derivative bound does.
  std::optional<double> t_true;
  std::optional<double> t_bound;
  for (double t : grid) {
    const cplx q = kdq_value(s.target_state, kOne, kOne, propagator(s.target_hamiltonian, t));
    CHECK(q.real() >= kb.re_lower(t) - 1e-9);
    CHECK(q.real() <= kb.re_upper(t) + 1e-9);
    CHECK(q.real() >= kb.re_derivative(t) - 1e-9);
    CHECK(q.imag() >= kb.im_lower(t) - 1e-9);
    CHECK(q.imag() <= kb.im_upper(t) + 1e-9);
    CHECK(q.imag() >= kb.im_derivative(t) - 1e-9);
    if (!t_true && q.real() < 0.0) t_true = t;
    if (!t_bound && kb.re_derivative(t) <= 0.0) t_bound = t;
  }
  REQUIRE(t_true.has_value());
  REQUIRE(t_bound.has_value());
  CHECK(*t_bound <= *t_true);

  // The +0.2 threshold for Im q: the direct upper curve is the operative one.
  // The derivative variant (built for -sigma_1) is valid but looser, so it
  // reaches the threshold earlier; the direct time sits closest to the truth.
  const QuantumState b1 = QuantumState::density(kOne);
  const HermitianOperator sigma = split_operators(s.target_state, kOne).imag_part;
  const BoundCurve neg_dv = derivative_refined_lower_bound(-sigma, b1, -s.target_hamiltonian);
  std::optional<double> t_direct;
  std::optional<double> t_deriv;
  std::optional<double> t_im;
  for (double t : grid) {
    if (!t_direct && kb.im_upper(t) >= 0.2) t_direct = t;
    if (!t_deriv && -neg_dv(t) >= 0.2) t_deriv = t;
    if (!t_im && kdq_value(s.target_state, kOne, kOne, propagator(s.target_hamiltonian, t)).imag() >= 0.2) t_im = t;
  }
  REQUIRE(t_direct.has_value());
  REQUIRE(t_deriv.has_value());
  REQUIRE(t_im.has_value());
  CHECK(*t_deriv <= *t_direct);
  CHECK(*t_direct <= *t_im);
  CHECK(*t_im - *t_direct < 0.01);
}

TEST_CASE("kdq bounds rescale unnormalized B") {
  const Instance inst = random_instance(4, 77);
  for (const auto& a : inst.a.outcomes())
    for (const auto& b : inst.b.outcomes()) {
      const KdqBounds kb = kdq_bounds(inst.rho, a.projector, b.projector, inst.h);
      CHECK(kb.re_lower.scale == doctest::Approx(b.projector.trace()));
      const cplx q0 = kdq_value(inst.rho, a.projector, b.projector, UnitaryPropagator::identity(4));
      CHECK(std::abs(kb.re_lower(0.0) - q0.real()) < 1e-10);
      CHECK(std::abs(kb.im_upper(0.0) - q0.imag()) < 1e-10);
    }
}

TEST_CASE("commuting case: flat imaginary curves and the tpm limit") {
  const Instance inst = random_instance(3, 5, {Purity::mixed, Commutation::commuting});
  const double period = characteristic_period(inst.h);
  for (const auto& a : inst.a.outcomes())
    for (const auto& b : inst.b.outcomes()) {
      const KdqBounds kb = kdq_bounds(inst.rho, a.projector, b.projector, inst.h);
      const BoundCurve tl = tpm_limit_bound(inst.rho, a.projector, b.projector, inst.h);
      double min_curve = 1.0;
      for (double t : uniform_grid(3.0 * period, 600)) {
        CHECK(std::abs(kb.im_lower(t)) < 1e-9);
        CHECK(std::abs(kb.im_upper(t)) < 1e-9);
        CHECK(tl(t) >= 0.0);
        min_curve = std::min(min_curve, tl(t));
        CHECK(tpm_joint(inst.rho, a.projector, b.projector, propagator(inst.h, t)) >= tl(t) - 1e-9);
      }
      CHECK(min_curve == 0.0);
    }
  CHECK_THROWS_AS(tpm_limit_bound(inst.rho, HermitianOperator::identity(3), inst.b[0].projector, inst.h),
                  ContractError);
  const Instance nc = random_instance(3, 5);
  CHECK_THROWS_AS(tpm_limit_bound(nc.rho, nc.a[0].projector, nc.b[0].projector, nc.h), ContractError);
}

TEST_CASE("Schrodinger-Robertson gap") {
  std::mt19937_64 rng(61);
  const HermitianOperator x(oracle_ref::random_hermitian(3, rng));
  const QuantumState rho(HermitianOperator(oracle_ref::random_density(3, rng)));
  CHECK(std::abs(sr_uncertainty_gap(x, x, rho)) < 1e-12);

  // Pauli X and Y. On |0> the commutator term <Z>^2 = 1 uses up the product
  // of variances, so the relation is saturated; on the maximally mixed state
  // both correlation terms vanish and the gap is 1.
  Matrix px(2, 2);
  px << 0, 1, 1, 0;
  Matrix py(2, 2);
  py << 0, cplx(0, -1), cplx(0, 1), 0;
  const QuantumState zero = QuantumState::pure(Eigen::Vector2cd(1.0, 0.0));
  CHECK(std::abs(sr_uncertainty_gap(HermitianOperator(px), HermitianOperator(py), zero)) < 1e-12);
  const QuantumState mm = QuantumState::density(HermitianOperator::identity(2) * 0.5);
  CHECK(sr_uncertainty_gap(HermitianOperator(px), HermitianOperator(py), mm) == doctest::Approx(1.0));
  // On the +1 eigenstate of X, Delta X = 0 and the gap vanishes.
  const QuantumState plus = QuantumState::pure(Eigen::Vector2cd(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)));
  CHECK(std::abs(sr_uncertainty_gap(HermitianOperator(px), HermitianOperator(py), plus)) < 1e-12);

  for (int k = 0; k < 500; ++k) {
    const int d = 2 + k % 5;
    const HermitianOperator a(oracle_ref::random_hermitian(d, rng));
    const HermitianOperator b(oracle_ref::random_hermitian(d, rng));
    const QuantumState r(HermitianOperator(oracle_ref::random_density(d, rng)));
    CHECK(sr_uncertainty_gap(a, b, r) >= -1e-10);
  }
}
