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

#include <unsupported/Eigen/KroneckerProduct>

#include "kdqsl/workext.hpp"
#include "oracles.hpp"

using namespace kdqsl;
using oracle_ref::kPi;

namespace {

// <H0>_0 - <H0>_t for the target Bloch vector precessing about
// (w_int, 0, w_L) / Omega, starting from <X> = -1: <Z> drifts by
// (w_L w_int / Omega^2)(1 - cos Omega t), weighted by w_L / 2.
double w_ext_closed(double wl, double wi, double t) {
  const double om2 = wl * wl + wi * wi;
  if (om2 == 0.0) return 0.0;
  return wl * wl * wi / (2.0 * om2) * (1.0 - std::cos(std::sqrt(om2) * t));
}

oracle_ref::Mat full_h(double wl, double wi) {
  oracle_ref::Mat z(2, 2), x(2, 2), one(2, 2);
  z << -1, 0, 0, 1;
  x << 0, 1, 1, 0;
  one << 0, 0, 0, 1;
  const oracle_ref::Mat id = oracle_ref::Mat::Identity(2, 2);
  return 0.5 * wl * (Eigen::kroneckerProduct(z, id).eval() + Eigen::kroneckerProduct(id, z).eval()) +
         0.5 * wi * Eigen::kroneckerProduct(one, x).eval();
}

}  // namespace

TEST_CASE("scenario construction") {
  const WorkScenario s = build_two_qubit_scenario(1.0, 5.0);
  CHECK(oracle_ref::max_abs(s.hamiltonian.matrix() - full_h(1.0, 5.0)) < 1e-15);
  CHECK(s.target_energies[0] == -0.5);
  CHECK(s.target_energies[1] == 0.5);
  // Delta H of the effective target dynamics on |1> is w_int / 2.
  const oracle_ref::Mat hm = s.target_hamiltonian.matrix();
  oracle_ref::Mat one = oracle_ref::Mat::Zero(2, 2);
  one(1, 1) = 1.0;
  CHECK(oracle_ref::std_dev(hm, one) == doctest::Approx(2.5).epsilon(1e-14));
  // The control population is conserved.
  const oracle_ref::Mat pc = Eigen::kroneckerProduct(one, oracle_ref::Mat::Identity(2, 2)).eval();
  CHECK(oracle_ref::max_abs(pc * s.hamiltonian.matrix() - s.hamiltonian.matrix() * pc) < 1e-15);
  CHECK(s.global_state().expectation(HermitianOperator(pc)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(build_two_qubit_scenario(std::nan(""), 1.0), ContractError);
  CHECK_THROWS_AS(build_two_qubit_scenario(1.0, 1.0, 0.0), ContractError);
}

TEST_CASE("extractable work: closed form, trace form, and both models") {
  for (const auto& [wl, wi] : std::vector<std::pair<double, double>>{{1.0, 5.0}, {1.0, 0.5}, {0.7, 2.0}, {2.0, 0.0}}) {
    const WorkScenario s = build_two_qubit_scenario(wl, wi);
    const std::vector<double> grid = uniform_grid(2.0 * kPi, 201);
    const WorkDistribution full = work_distribution(s, grid, TargetModel::full);
    const WorkDistribution eff = work_distribution(s, grid, TargetModel::effective);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = grid[k];
      const double ref = w_ext_closed(wl, wi, t);
      CHECK(std::abs(full.snapshots[k].extractable.real() - ref) < 1e-9);
      CHECK(std::abs(full.snapshots[k].extractable.imag()) < 1e-12);
      CHECK(std::abs(eff.snapshots[k].extractable.real() - ref) < 1e-9);
      CHECK(std::abs(extractable_work_trace_form(s, t, TargetModel::effective) - ref) < 1e-9);
      CHECK(std::abs(extractable_work_trace_form(s, t, TargetModel::full) - ref) < 1e-9);
      // The first projective measurement dephases |-> into I/2, which the
      // dynamics leaves invariant.
      CHECK(std::abs(full.snapshots[k].extractable_tpm) < 1e-9);

      cplx sum_q = 0.0;
      double sum_p = 0.0;
      for (std::size_t e = 0; e < 4; ++e) {
        const WorkEntry& a = full.snapshots[k].entries[e];
        const WorkEntry& b = eff.snapshots[k].entries[e];
        CHECK(a.ell == b.ell);
        CHECK(a.j == b.j);
        CHECK(std::abs(a.q - b.q) < 1e-9);
        CHECK(std::abs(a.p_tpm - b.p_tpm) < 1e-9);
        CHECK(a.w == s.target_energies[a.j] - s.target_energies[a.ell]);
        sum_q += a.q;
        sum_p += a.p_tpm;
      }
      CHECK(std::abs(sum_q - 1.0) < 1e-12);
      CHECK(std::abs(sum_p - 1.0) < 1e-12);
    }
    CHECK(std::abs(full.snapshots[0].extractable) < 1e-14);
  }
  CHECK_THROWS_AS(work_distribution(build_two_qubit_scenario(1.0, 5.0), {}), ContractError);
}

TEST_CASE("no interaction: real quasiprobabilities and no work") {
  const WorkScenario s = build_two_qubit_scenario(1.0, 0.0);
  for (const auto& snap : work_distribution(s, uniform_grid(10.0, 101)).snapshots) {
    CHECK(std::abs(snap.extractable) < 1e-12);
    for (const auto& e : snap.entries) {
      CHECK(std::abs(e.q.imag()) < 1e-12);
      CHECK(e.q.real() > -1e-12);
    }
  }
  const PowerReport r = power_report(s);
  CHECK_FALSE(r.t_max.has_value());
  CHECK_FALSE(r.p_max.has_value());
  CHECK_FALSE(r.negativity_present);
  CHECK_FALSE(r.t_neg.has_value());
  CHECK(r.w_max == 0.0);
}

TEST_CASE("power at the reference parameters") {
  const PowerReport r = power_report(build_two_qubit_scenario(1.0, 5.0));
  const double omega = std::sqrt(26.0);
  REQUIRE(r.t_max.has_value());
  CHECK(*r.t_max == doctest::Approx(kPi / omega).epsilon(1e-7));
  CHECK(r.w_max == doctest::Approx(5.0 / 26.0).epsilon(1e-12));
  CHECK(*r.p_max == doctest::Approx(5.0 / 26.0 * omega / kPi).epsilon(1e-7));
  CHECK(std::abs(*r.p_max / 0.32 - 1.0) <= 0.05);
  CHECK(reference_power() == doctest::Approx(*r.p_max));
  CHECK(r.negativity_present);
  REQUIRE(r.t_neg.has_value());
  CHECK(*r.t_neg == doctest::Approx(0.4474925986923128).epsilon(1e-9));
  CHECK(*r.t_neg <= *r.t_max);
  CHECK(*r.p_neg >= *r.p_max);

  PowerSearch narrow;
  narrow.window = 0.5;
  CHECK_THROWS_AS(power_report(build_two_qubit_scenario(1.0, 5.0), narrow), ContractError);
}

TEST_CASE("sweep: negativity onset and the T_neg <= T_max law") {
  std::vector<double> w;
  for (int k = 0; k <= 40; ++k) w.push_back(0.25 * k);
  PowerSearch search;
  search.window = 2.0 * kPi / 1.0;  // longest period over the sweep is 2 pi / w_L
  const std::vector<PowerReport> rows = power_sweep(1.0, w, 1.0, search);
  REQUIRE(rows.size() == w.size());
  for (const auto& r : rows) {
    // Re q_11 dips to 1/2 - (w_int^2 + w_L w_int) / (2 Omega^2), which is
    // negative iff w_int > w_L.
    CHECK(r.negativity_present == (r.omega_int > 1.0));
    if (!r.negativity_present) {
      CHECK_FALSE(r.t_neg.has_value());
      continue;
    }
    REQUIRE(r.t_neg.has_value());
    CHECK(*r.t_neg <= *r.t_max + 1e-9);
    CHECK(*r.p_neg >= *r.p_max - 1e-9);
  }

  std::ostringstream os;
  write_sweep_csv(os, {rows[0], rows[20]});
  const std::string csv = os.str();
  CHECK(csv.rfind("omega_int,W_max/E_ref,T_max/t_ref,T_neg/t_ref,P_max/P_ref,P_neg/P_ref,negativity_present\n", 0) ==
        0);
  CHECK(csv.find("\n0,0,,,,,0\n") != std::string::npos);
  CHECK(csv.find("\n5,") != std::string::npos);
}

TEST_CASE("negativity and work alignment") {
  const WorkScenario s = build_two_qubit_scenario(1.0, 5.0);
  int boosted = 0;
  int negative = 0;
  for (const auto& snap : work_distribution(s, uniform_grid(kPi, 401)).snapshots) {
    for (const auto& f : negativity_work_alignment(snap)) {
      const auto& e = snap.entries[static_cast<std::size_t>(2 * f.ell + f.j)];
      CHECK(f.re_q == e.q.real());
      CHECK(f.negative_mhq == (e.q.real() < -kFlagNoiseFloor));
      CHECK(f.boosted == (f.negative_mhq && f.w > 0.0));
      negative += f.negative_mhq ? 1 : 0;
      boosted += f.boosted ? 1 : 0;
      // (1,1) carries zero work, so it is never boosted.
      if (f.ell == 1 && f.j == 1) CHECK_FALSE(f.boosted);
    }
  }
  CHECK(negative > 0);
  // Here only zero- or negative-work pairs turn negative.
  CHECK(boosted == 0);
}

TEST_CASE("Re q_11 closed form on both models") {
  // rho_1 = |1><1| / 2 - X / 4, and the X part picks up n_x n_z (1 - cos Omega t).
  for (const auto& [wl, wi] : std::vector<std::pair<double, double>>{{1.0, 5.0}, {0.7, 2.0}, {1.3, 0.4}}) {
    const WorkScenario s = build_two_qubit_scenario(wl, wi);
    const std::vector<double> grid = uniform_grid(7.0, 301);
    const double om2 = wl * wl + wi * wi;
    for (auto model : {TargetModel::effective, TargetModel::full}) {
      const WorkDistribution d = work_distribution(s, grid, model);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double ref =
            0.5 - (wi * wi + wl * wi) / (2.0 * om2) * std::pow(std::sin(std::sqrt(om2) * grid[k] / 2.0), 2);
        CHECK(std::abs(d.snapshots[k].entries[3].q.real() - ref) < 1e-12);
      }
    }
  }
}
