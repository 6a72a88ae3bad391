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

#include "kdqsl/workext.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "kdqsl/io.hpp"
#include "kdqsl/srbounds.hpp"

namespace kdqsl {

namespace {

constexpr double kNoWork = 1e-12;

HermitianOperator pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianOperator(m);
}

HermitianOperator pauli_z() { return HermitianOperator::diagonal({-1.0, 1.0}); }

HermitianOperator ket_bra(int k) { return HermitianOperator::diagonal({k == 0 ? 1.0 : 0.0, k == 1 ? 1.0 : 0.0}); }

Eigen::VectorXcd minus_ket() {
  Eigen::VectorXcd v(2);
  v << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  return v;
}

struct ModelOperators {
  QuantumState rho;
  HermitianOperator h;
  std::array<HermitianOperator, 2> projectors;
};

ModelOperators model_operators(const WorkScenario& s, TargetModel model) {
  if (model == TargetModel::effective) {
    return {s.target_state, s.target_hamiltonian, {ket_bra(0), ket_bra(1)}};
  }
  const HermitianOperator id = HermitianOperator::identity(2);
  return {s.global_state(), s.hamiltonian, {kron(id, ket_bra(0)), kron(id, ket_bra(1))}};
}

// Golden-section maximization of f on [a, b].
template <class F>
double golden_max(F&& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

QuantumState WorkScenario::global_state() const { return QuantumState(kron(control_state.op(), target_state.op())); }

WorkScenario build_two_qubit_scenario(double omega_l, double omega_int, double hbar) {
  if (!std::isfinite(omega_l) || !std::isfinite(omega_int)) {
    throw ContractError("finite frequencies", "omega_L / omega_int must be finite");
  }
  if (!(hbar > 0.0)) throw ContractError("positive hbar", "build_two_qubit_scenario");
  const HermitianOperator id = HermitianOperator::identity(2);
  const HermitianOperator z = pauli_z();
  const HermitianOperator x = pauli_x();
  const double el = 0.5 * hbar * omega_l;
  const double ei = 0.5 * hbar * omega_int;

  HermitianOperator h = el * (kron(z, id) + kron(id, z)) + ei * kron(ket_bra(1), x);
  HermitianOperator target_h = el * z + ei * x;
  return {omega_l,
          omega_int,
          hbar,
          std::move(h),
          std::move(target_h),
          el * z,
          QuantumState::density(ket_bra(1)),
          QuantumState::pure(minus_ket()),
          {-el, el}};
}

WorkDistribution work_distribution(const WorkScenario& s, const std::vector<double>& times, TargetModel model) {
  if (times.empty()) throw ContractError("non-empty time grid", "work_distribution");
  const ModelOperators m = model_operators(s, model);
  const SpectralDecomposition h_spec = spectral_decompose(m.h);

  WorkDistribution out;
  out.snapshots.reserve(times.size());
  for (double t : times) {
    const UnitaryPropagator u = propagator(h_spec, t, s.hbar);
    WorkSnapshot snap{t, {}, 0.0, 0.0};
    for (int l = 0; l < 2; ++l) {
      for (int j = 0; j < 2; ++j) {
        const double w = s.target_energies[j] - s.target_energies[l];
        const cplx q = kdq_value(m.rho, m.projectors[l], m.projectors[j], u);
        const double p = tpm_joint(m.rho, m.projectors[l], m.projectors[j], u);
        snap.entries.push_back({l, j, w, q, p});
        snap.extractable -= w * q;
        snap.extractable_tpm -= w * p;
      }
    }
    out.snapshots.push_back(std::move(snap));
  }
  return out;
}

double extractable_work_trace_form(const WorkScenario& s, double t, TargetModel model) {
  const ModelOperators m = model_operators(s, model);
  const UnitaryPropagator u = propagator(m.h, t, s.hbar);
  const HermitianOperator evolved = schrodinger(m.rho.op(), u);
  if (model == TargetModel::effective) {
    return m.rho.expectation(s.local_target_hamiltonian) -
           QuantumState(evolved).expectation(s.local_target_hamiltonian);
  }
  // Reduce to the target before measuring its local energy.
  const QuantumState before = partial_trace(m.rho, 2, 2, Subsystem::first);
  const QuantumState after = partial_trace(QuantumState(evolved), 2, 2, Subsystem::first);
  return before.expectation(s.local_target_hamiltonian) - after.expectation(s.local_target_hamiltonian);
}

PowerReport power_report(const WorkScenario& s, const PowerSearch& search) {
  if (!(search.window > 0.0) || !(search.coarse_step > 0.0)) {
    throw ContractError("positive search window", "power_report");
  }
  const SpectralDecomposition h_spec = spectral_decompose(s.target_hamiltonian);
  const double gap = h_spec.raw_eigenvalues(1) - h_spec.raw_eigenvalues(0);
  if (gap > 0.0 && search.window < 2.0 * std::numbers::pi * s.hbar / gap * (1.0 - 1e-12)) {
    throw ContractError("search window covers one period",
                        "window " + format_double(search.window) + " < period " +
                            format_double(2.0 * std::numbers::pi * s.hbar / gap));
  }

  const HermitianOperator& h0 = s.local_target_hamiltonian;
  const double e0 = s.target_state.expectation(h0);
  auto work = [&](double t) {
    return e0 - QuantumState(schrodinger(s.target_state.op(), propagator(h_spec, t, s.hbar))).expectation(h0);
  };

  const int n = std::max(2, static_cast<int>(std::ceil(search.window / search.coarse_step)) + 1);
  const std::vector<double> grid = uniform_grid(search.window, n);
  std::vector<double> values;
  values.reserve(grid.size());
  for (double t : grid) values.push_back(work(t));

  PowerReport r;
  r.omega_l = s.omega_l;
  r.omega_int = s.omega_int;
  r.norm = search.norm;

  // Refine every coarse local maximum and keep the earliest global one.
  std::vector<std::pair<double, double>> peaks;
  for (int k = 0; k < n; ++k) {
    const bool left_ok = k == 0 || values[k] >= values[k - 1];
    const bool right_ok = k == n - 1 || values[k] >= values[k + 1];
    if (!left_ok || !right_ok) continue;
    const double a = grid[std::max(0, k - 1)];
    const double b = grid[std::min(n - 1, k + 1)];
    const double t = golden_max(work, a, b, search.refine_tol);
    peaks.emplace_back(t, work(t));
  }
  double best = 0.0;
  for (const auto& p : peaks) best = std::max(best, p.second);
  r.w_max = best;
  if (best > kNoWork) {
    for (const auto& p : peaks) {
      if (p.second >= best - 1e-9 * std::max(1.0, best)) {
        r.t_max = p.first;
        break;
      }
    }
    r.p_max = r.w_max / *r.t_max;
  }

  // Negativity of Re q on the pair of interest, scanned on the same grid.
  const int ell = search.pair.ell;
  const int j = search.pair.j;
  for (double t : grid) {
    const cplx q = kdq_value(s.target_state, ket_bra(ell), ket_bra(j), propagator(h_spec, t, s.hbar));
    if (re_negative(q)) {
      r.negativity_present = true;
      break;
    }
  }

  // Without negativity the crossing says nothing about T_max; leave it unset.
  if (!r.negativity_present) return r;
  const KdqBounds b = kdq_bounds(s.target_state, ket_bra(ell), ket_bra(j), s.target_hamiltonian, s.hbar);
  r.t_neg = derivative_bound_zero_crossing(b.re_derivative, search.pair).value;
  if (r.t_neg && *r.t_neg > 0.0) r.p_neg = r.w_max / *r.t_neg;
  return r;
}

std::vector<PowerReport> power_sweep(double omega_l, const std::vector<double>& omega_ints, double hbar,
                                     const PowerSearch& search) {
  std::vector<PowerReport> rows;
  rows.reserve(omega_ints.size());
  for (double wi : omega_ints) rows.push_back(power_report(build_two_qubit_scenario(omega_l, wi, hbar), search));
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<PowerReport>& rows) {
  os << "omega_int,W_max/E_ref,T_max/t_ref,T_neg/t_ref,P_max/P_ref,P_neg/P_ref,negativity_present\n";
  auto scaled = [](const std::optional<double>& v, double ref) -> std::optional<double> {
    if (!v) return std::nullopt;
    return *v / ref;
  };
  for (const auto& r : rows) {
    os << format_double(r.omega_int) << ',' << format_double(r.w_max / r.norm.energy) << ','
       << format_optional(scaled(r.t_max, r.norm.time)) << ',' << format_optional(scaled(r.t_neg, r.norm.time)) << ','
       << format_optional(scaled(r.p_max, r.norm.power)) << ',' << format_optional(scaled(r.p_neg, r.norm.power))
       << ',' << (r.negativity_present ? 1 : 0) << '\n';
  }
}

double reference_power(double omega_l, double omega_int) {
  const PowerReport r = power_report(build_two_qubit_scenario(omega_l, omega_int));
  return r.p_max.value_or(0.0);
}

std::vector<AlignmentFlag> negativity_work_alignment(const WorkSnapshot& snapshot) {
  std::vector<AlignmentFlag> out;
  out.reserve(snapshot.entries.size());
  for (const auto& e : snapshot.entries) {
    const bool neg = re_negative(e.q);
    out.push_back({e.ell, e.j, e.w, e.q.real(), neg, neg && e.w > 0.0});
  }
  return out;
}

}  // namespace kdqsl
