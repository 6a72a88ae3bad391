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

#include "kdqsl/kdq.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "kdqsl/io.hpp"

namespace kdqsl {

namespace {

constexpr double kProjectorTol = 1e-9;

void require_dims(const QuantumState& rho, const HermitianOperator& a, const HermitianOperator& b) {
  if (rho.dim() != a.dim() || rho.dim() != b.dim()) {
    std::ostringstream os;
    os << "rho " << rho.dim() << ", A_l " << a.dim() << ", B_j " << b.dim();
    throw ContractError("dimension mismatch", os.str());
  }
}

}  // namespace

ProjectiveObservable::ProjectiveObservable(std::vector<Outcome> outcomes) : outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) throw ContractError("complete projector family", "no outcomes");
  const int d = outcomes_.front().projector.dim();
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t a = 0; a < outcomes_.size(); ++a) {
    const Matrix& pa = outcomes_[a].projector.matrix();
    if (pa.rows() != d) throw ContractError("dimension mismatch", "projectors of different dimensions");
    if (max_abs(pa * pa - pa) > kProjectorTol) {
      throw ContractError("idempotent projector", "outcome " + std::to_string(outcomes_[a].label) + " has P^2 != P");
    }
    for (std::size_t b = a + 1; b < outcomes_.size(); ++b) {
      if (max_abs(pa * outcomes_[b].projector.matrix()) > kProjectorTol) {
        throw ContractError("orthogonal projectors", "outcomes " + std::to_string(outcomes_[a].label) + " and " +
                                                         std::to_string(outcomes_[b].label) + " overlap");
      }
    }
    sum += pa;
  }
  if (max_abs(sum - Matrix::Identity(d, d)) > kProjectorTol) {
    throw ContractError("complete projector family", "projectors do not sum to the identity");
  }
}

ProjectiveObservable ProjectiveObservable::from_operator(const HermitianOperator& x) {
  const SpectralDecomposition sd = spectral_decompose(x);
  std::vector<Outcome> out;
  for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k) {
    out.push_back({static_cast<int>(k), sd.eigenvalues[k], sd.projectors[k]});
  }
  return ProjectiveObservable(std::move(out));
}

ProjectiveObservable ProjectiveObservable::computational(int dim) {
  std::vector<Outcome> out;
  for (int k = 0; k < dim; ++k) {
    std::vector<double> d(dim, 0.0);
    d[k] = 1.0;
    out.push_back({k, static_cast<double>(k), HermitianOperator::diagonal(d)});
  }
  return ProjectiveObservable(std::move(out));
}

HermitianOperator ProjectiveObservable::observable() const {
  HermitianOperator sum = HermitianOperator::zero(dim());
  for (const auto& o : outcomes_) sum = sum + o.value * o.projector;
  return sum;
}

SplitOperators split_operators(const QuantumState& rho, const HermitianOperator& a_l) {
  if (rho.dim() != a_l.dim()) throw ContractError("dimension mismatch", "split_operators");
  return {anticommutator(rho.op(), a_l) * 0.5, divided_by_i(commutator(rho.op(), a_l)) * 0.5};
}

cplx kdq_value(const QuantumState& rho, const HermitianOperator& a_l, const HermitianOperator& b_j,
               const UnitaryPropagator& u) {
  require_dims(rho, a_l, b_j);
  const Matrix bt = u.matrix().adjoint() * b_j.matrix() * u.matrix();
  return (rho.op().matrix() * a_l.matrix() * bt).trace();
}

double tpm_joint(const QuantumState& rho, const HermitianOperator& a_l, const HermitianOperator& b_j,
                 const UnitaryPropagator& u) {
  require_dims(rho, a_l, b_j);
  const Matrix bt = u.matrix().adjoint() * b_j.matrix() * u.matrix();
  return (a_l.matrix() * rho.op().matrix() * a_l.matrix() * bt).trace().real();
}

// ---------------------------------------------------------------------------

KdqTable::KdqTable(std::vector<double> times, std::size_t n_ell, std::size_t n_j, double s_th,
                   std::vector<KdqEntry> entries)
    : times_(std::move(times)), n_ell_(n_ell), n_j_(n_j), s_th_(s_th), entries_(std::move(entries)) {
  if (entries_.size() != times_.size() * n_ell_ * n_j_) {
    throw std::logic_error("KdqTable: entry count does not match grid shape");
  }
}

const KdqEntry& KdqTable::at(std::size_t time_index, std::size_t ell_index, std::size_t j_index) const {
  return entries_.at((time_index * n_ell_ + ell_index) * n_j_ + j_index);
}

cplx KdqTable::total(std::size_t time_index) const {
  cplx s = 0.0;
  for (std::size_t l = 0; l < n_ell_; ++l)
    for (std::size_t j = 0; j < n_j_; ++j) s += at(time_index, l, j).value;
  return s;
}

cplx KdqTable::marginal_final(std::size_t time_index, std::size_t j_index) const {
  cplx s = 0.0;
  for (std::size_t l = 0; l < n_ell_; ++l) s += at(time_index, l, j_index).value;
  return s;
}

cplx KdqTable::marginal_initial(std::size_t time_index, std::size_t ell_index) const {
  cplx s = 0.0;
  for (std::size_t j = 0; j < n_j_; ++j) s += at(time_index, ell_index, j).value;
  return s;
}

void KdqTable::write_csv(std::ostream& os) const {
  os << "t,ell,j,re_q,im_q,tpm,re_negative,im_exceeds\n";
  for (const auto& e : entries_) {
    os << format_double(e.t) << ',' << e.ell << ',' << e.j << ',' << format_double(e.value.real()) << ','
       << format_double(e.value.imag()) << ',' << format_double(e.tpm_value) << ',' << (e.re_negative ? 1 : 0)
       << ',' << (e.im_exceeds ? 1 : 0) << '\n';
  }
}

std::vector<double> uniform_grid(double t_max, int steps) {
  if (steps < 2) throw ContractError("grid steps >= 2", "steps = " + std::to_string(steps));
  if (!(t_max > 0.0)) throw ContractError("grid t_max > 0", "t_max = " + format_double(t_max));
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) out[k] = t_max * k / (steps - 1);
  return out;
}

KdqTable kdq_table(const QuantumState& rho, const ProjectiveObservable& a, const ProjectiveObservable& b,
                   const HermitianOperator& h, const std::vector<double>& times, double s_th, double hbar) {
  if (times.empty()) throw ContractError("non-empty time grid", "kdq_table called with no times");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw ContractError("ascending time grid", "grid is not strictly ascending");
  }
  if (rho.dim() != a.dim() || rho.dim() != b.dim() || rho.dim() != h.dim()) {
    throw ContractError("dimension mismatch", "kdq_table operands");
  }

  const SpectralDecomposition h_spec = spectral_decompose(h);
  const Matrix& r = rho.op().matrix();
  std::vector<Matrix> ra;
  std::vector<Matrix> ara;
  for (const auto& o : a.outcomes()) {
    ra.push_back(r * o.projector.matrix());
    ara.push_back(o.projector.matrix() * r * o.projector.matrix());
  }

  std::vector<KdqEntry> entries;
  entries.reserve(times.size() * a.size() * b.size());
  for (double t : times) {
    const UnitaryPropagator u = propagator(h_spec, t, hbar);
    std::vector<Matrix> bt;
    for (const auto& o : b.outcomes()) bt.push_back(u.matrix().adjoint() * o.projector.matrix() * u.matrix());
    for (std::size_t l = 0; l < a.size(); ++l) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        const cplx q = (ra[l] * bt[j]).trace();
        const double tpm = (ara[l] * bt[j]).trace().real();
        entries.push_back({a[l].label, b[j].label, t, q, tpm, kdqsl::re_negative(q), kdqsl::im_exceeds(q, s_th)});
      }
    }
  }
  return KdqTable(times, a.size(), b.size(), s_th, std::move(entries));
}

}  // namespace kdqsl
