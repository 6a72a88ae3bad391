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

#include "kdqsl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "kdqsl/io.hpp"

namespace kdqsl {

namespace {

Matrix complex_normal(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = n(rng);
      const double im = n(rng);
      m(r, c) = cplx(re, im);
    }
  return m;
}

// Groups the columns of an orthonormal basis into k projectors (2 <= k <= dim).
ProjectiveObservable random_observable(const Matrix& basis, std::mt19937_64& rng) {
  const int d = static_cast<int>(basis.cols());
  const int k = std::uniform_int_distribution<int>(2, d)(rng);
  std::vector<int> group(d);
  for (int c = 0; c < d; ++c) group[c] = c < k ? c : std::uniform_int_distribution<int>(0, k - 1)(rng);

  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> values(k);
  for (double& v : values) v = n(rng);

  std::vector<Outcome> outcomes;
  for (int g = 0; g < k; ++g) {
    Matrix p = Matrix::Zero(d, d);
    for (int c = 0; c < d; ++c)
      if (group[c] == g) p += basis.col(c) * basis.col(c).adjoint();
    outcomes.push_back({g, values[g], HermitianOperator(Matrix(0.5 * (p + p.adjoint())))});
  }
  return ProjectiveObservable(std::move(outcomes));
}

nlohmann::json observable_json(const ProjectiveObservable& o) {
  nlohmann::json values = nlohmann::json::array();
  nlohmann::json projectors = nlohmann::json::array();
  for (const auto& out : o.outcomes()) {
    values.push_back(out.value);
    projectors.push_back(matrix_to_json(out.projector.matrix()));
  }
  return {{"values", values}, {"projectors", projectors}};
}

// Scan then bisect for the first t with pred(t) true.
std::optional<double> first_time(const std::function<bool(double)>& pred, double t_max, int steps) {
  const std::vector<double> grid = uniform_grid(t_max, steps);
  if (pred(grid[0])) return 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!pred(grid[k])) continue;
    double lo = grid[k - 1];
    double hi = grid[k];
    for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      (pred(mid) ? hi : lo) = mid;
    }
    return hi;
  }
  return std::nullopt;
}

}  // namespace

HermitianOperator random_hermitian(int dim, std::mt19937_64& rng) {
  const Matrix g = complex_normal(dim, dim, rng);
  return HermitianOperator(Matrix(0.5 * (g + g.adjoint())));
}

Matrix random_unitary(int dim, std::mt19937_64& rng) {
  const Matrix g = complex_normal(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  // Fix column phases with the diagonal of R so the ensemble is Haar.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    const double a = std::abs(r(c, c));
    if (a > 0.0) q.col(c) *= r(c, c) / a;
  }
  return q;
}

QuantumState random_pure_state(int dim, std::mt19937_64& rng) {
  const Matrix v = complex_normal(dim, 1, rng);
  return QuantumState::pure(v.col(0));
}

QuantumState random_mixed_state(int dim, std::mt19937_64& rng) {
  const Matrix g = complex_normal(dim, dim, rng);
  Matrix w = g * g.adjoint();
  w /= w.trace().real();
  return QuantumState(HermitianOperator(Matrix(0.5 * (w + w.adjoint()))));
}

Instance random_instance(int dim, std::uint64_t seed, InstanceOptions options) {
  if (dim < kMinInstanceDim || dim > kMaxInstanceDim) {
    throw ContractError("instance dim in [2, 8]", "dim = " + std::to_string(dim));
  }
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(dim));

  const Matrix basis_a = random_unitary(dim, rng);
  const Matrix basis_b = random_unitary(dim, rng);
  const HermitianOperator h = random_hermitian(dim, rng);

  std::optional<QuantumState> rho;
  if (options.commutation == Commutation::commuting) {
    // rho diagonal in A's eigenbasis.
    std::vector<double> p(dim, 0.0);
    if (options.purity == Purity::pure) {
      p[std::uniform_int_distribution<int>(0, dim - 1)(rng)] = 1.0;
    } else {
      std::exponential_distribution<double> e(1.0);
      double total = 0.0;
      for (double& x : p) total += (x = e(rng));
      for (double& x : p) x /= total;
    }
    Matrix m = basis_a * HermitianOperator::diagonal(p).matrix() * basis_a.adjoint();
    rho.emplace(HermitianOperator(Matrix(0.5 * (m + m.adjoint()))));
  } else {
    rho.emplace(options.purity == Purity::pure ? random_pure_state(dim, rng) : random_mixed_state(dim, rng));
  }

  ProjectiveObservable a = random_observable(basis_a, rng);
  ProjectiveObservable b = random_observable(basis_b, rng);
  return {*rho, std::move(a), std::move(b), h, seed, options};
}

nlohmann::json to_json(const Instance& inst) {
  nlohmann::json manifest = {
      {"seed", inst.seed},
      {"dim", inst.dim()},
      {"options",
       {{"purity", inst.options.purity == Purity::pure ? "pure" : "mixed"},
        {"commutation", inst.options.commutation == Commutation::commuting ? "commuting" : "non_commuting"}}}};
  return {{"manifest", manifest},
          {"rho", matrix_to_json(inst.rho.op().matrix())},
          {"H", matrix_to_json(inst.h.matrix())},
          {"A", observable_json(inst.a)},
          {"B", observable_json(inst.b)}};
}

SaturationInstance saturation_instance(double x_min, double x_max, double tau0, double omega, double hbar) {
  if (!(x_min <= x_max)) throw ContractError("ordered spectral range", "saturation_instance");
  // Basis order: |x_1>, |x_mid>, |x_d>.
  const HermitianOperator x = HermitianOperator::diagonal({x_min, 0.5 * (x_min + x_max), x_max});
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(3);
  psi(2) = std::cos(0.5 * tau0);
  psi(0) = cplx(0.0, -std::sin(0.5 * tau0));
  Matrix h = Matrix::Zero(3, 3);
  h(0, 2) = h(2, 0) = 0.5 * hbar * omega;
  return {x, QuantumState::pure(psi), HermitianOperator(h)};
}

Instance kdq_saturation_instance(double tau0, double omega, double phase, double hbar) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::VectorXcd plus(2);
  plus << s, s;
  const QuantumState rho = QuantumState::pure(plus);
  const HermitianOperator a1 = HermitianOperator::diagonal({1.0, 0.0});
  const HermitianOperator a0 = HermitianOperator::diagonal({0.0, 1.0});

  const SpectralDecomposition rs = spectral_decompose(split_operators(rho, a1).real_part);
  const Eigen::VectorXcd r_min = rs.eigenvectors.col(0);
  const Eigen::VectorXcd r_max = rs.eigenvectors.col(rs.eigenvectors.cols() - 1);

  const Matrix coupling = r_min * r_max.adjoint() + r_max * r_min.adjoint();
  const HermitianOperator h(Matrix(0.5 * hbar * omega * coupling));

  const double half = 0.5 * (std::numbers::pi - tau0);
  const Eigen::VectorXcd psi = std::cos(half) * r_min + std::polar(std::sin(half), phase) * r_max;
  const HermitianOperator b1 = HermitianOperator::outer(psi / psi.norm());
  const HermitianOperator b0 = HermitianOperator::identity(2) - b1;

  ProjectiveObservable a({{1, 1.0, a1}, {0, 0.0, a0}});
  ProjectiveObservable b({{1, 1.0, b1}, {0, 0.0, b0}});
  return {rho, std::move(a), std::move(b), h, 0, {Purity::pure, Commutation::non_commuting}};
}

double characteristic_period(const HermitianOperator& h, double hbar) {
  const SpectralRange r = spectral_range(h);
  const double width = r.max - r.min;
  if (width <= 1e-12) return 2.0 * std::numbers::pi;
  return 2.0 * std::numbers::pi * hbar / width;
}

KdqTable trajectory(const Instance& inst, double t_max, int steps, double s_th, double hbar) {
  return kdq_table(inst.rho, inst.a, inst.b, inst.h, uniform_grid(t_max, steps), s_th, hbar);
}

cplx kdq_at(const Instance& inst, std::size_t ell_index, std::size_t j_index, double t, double hbar) {
  return kdq_value(inst.rho, inst.a[ell_index].projector, inst.b[j_index].projector, propagator(inst.h, t, hbar));
}

std::optional<double> first_negativity_time(const Instance& inst, std::size_t ell_index, std::size_t j_index,
                                            double t_max, int steps, double hbar) {
  const SpectralDecomposition hs = spectral_decompose(inst.h);
  const auto& al = inst.a[ell_index].projector;
  const auto& bj = inst.b[j_index].projector;
  return first_time([&](double t) { return re_negative(kdq_value(inst.rho, al, bj, propagator(hs, t, hbar))); },
                    t_max, steps);
}

std::optional<double> first_im_exceed_time(const Instance& inst, std::size_t ell_index, std::size_t j_index,
                                           double s_th, double t_max, int steps, double hbar) {
  const SpectralDecomposition hs = spectral_decompose(inst.h);
  const auto& al = inst.a[ell_index].projector;
  const auto& bj = inst.b[j_index].projector;
  return first_time(
      [&](double t) { return im_exceeds(kdq_value(inst.rho, al, bj, propagator(hs, t, hbar)), s_th); }, t_max,
      steps);
}

std::vector<ExpectationSample> expectation_trajectory(const HermitianOperator& x, const QuantumState& state0,
                                                      const HermitianOperator& generator,
                                                      const std::vector<double>& times, double hbar,
                                                      bool with_delta_l) {
  const SpectralDecomposition gs = spectral_decompose(generator);
  const QuantumState s0 = state0.normalized();
  const HermitianOperator xdot = time_derivative(x, generator, hbar);
  std::vector<ExpectationSample> out;
  out.reserve(times.size());
  for (double t : times) {
    const QuantumState st(schrodinger(s0.op(), propagator(gs, t, hbar)));
    ExpectationSample s{t, st.expectation(x), standard_deviation(x, st), st.expectation(xdot), 0.0};
    if (with_delta_l) s.delta_l = sld(st, generator, hbar).delta_l;
    out.push_back(s);
  }
  return out;
}

}  // namespace kdqsl
