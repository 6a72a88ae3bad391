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

#include "kdqsl/properties.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kdqsl/kdq.hpp"
#include "kdqsl/qsltimes.hpp"

namespace kdqsl {

namespace {

constexpr double kPi = std::numbers::pi;

class Tally {
 public:
  explicit Tally(std::string name) { r_.name = std::move(name); }

  // Records one trial; `violation` > 0 means the property failed by that much.
  void record(double violation, const std::string& where) {
    ++r_.trials;
    if (violation > 0.0) {
      ++r_.failures;
      if (r_.first_failure.empty()) r_.first_failure = where;
    }
    r_.worst = std::max(r_.worst, violation);
  }

  PropertyResult result() const { return r_; }

 private:
  PropertyResult r_;
};

std::string where(std::uint64_t seed, int dim, const std::string& what) {
  std::ostringstream os;
  os << "seed " << seed << " dim " << dim << ": " << what;
  return os.str();
}

InstanceOptions cycle_options(std::uint64_t seed) {
  switch (seed % 4) {
    case 0: return {Purity::mixed, Commutation::non_commuting};
    case 1: return {Purity::pure, Commutation::non_commuting};
    case 2: return {Purity::mixed, Commutation::commuting};
    default: return {Purity::pure, Commutation::commuting};
  }
}

template <class F>
void for_each_instance(const SuiteOptions& o, F&& f) {
  for (int s = 0; s < o.seeds; ++s) {
    const std::uint64_t seed = o.seed_begin + static_cast<std::uint64_t>(s);
    for (int d = o.dim_min; d <= o.dim_max; ++d) f(seed, d);
  }
}

}  // namespace

PropertyResult check_bound_validity(const SuiteOptions& o) {
  Tally tally("bound_validity");
  for_each_instance(o, [&](std::uint64_t seed, int dim) {
    const Instance inst = random_instance(dim, seed, cycle_options(seed));
    const double period = characteristic_period(inst.h);
    const KdqTable table = trajectory(inst, period, o.steps, o.s_th);
    for (std::size_t l = 0; l < inst.a.size(); ++l) {
      for (std::size_t j = 0; j < inst.b.size(); ++j) {
        const KdqBounds kb = kdq_bounds(inst.rho, inst.a[l].projector, inst.b[j].projector, inst.h);
        double worst = 0.0;
        for (std::size_t k = 0; k < table.times().size(); ++k) {
          const double t = table.times()[k];
          const cplx q = table.at(k, l, j).value;
          worst = std::max({worst, kb.re_lower(t) - q.real(), q.real() - kb.re_upper(t), kb.im_lower(t) - q.imag(),
                            q.imag() - kb.im_upper(t), kb.re_derivative(t) - q.real(),
                            kb.im_derivative(t) - q.imag(), kb.re_unified(t) - q.real(),
                            kb.im_unified(t) - q.imag()});
        }
        tally.record(worst > o.slack ? worst : 0.0, where(seed, dim, "pair " + std::to_string(l) + "," +
                                                                         std::to_string(j)));
      }
    }
  });
  return tally.result();
}

PropertyResult check_saturation(const SuiteOptions& o) {
  Tally tally("saturation");
  constexpr double kTol = 1e-10;
  std::mt19937_64 rng(o.seed_begin ^ 0x5A7u);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  for (int s = 0; s < o.seeds; ++s) {
    const double a = 4.0 * u(rng) - 2.0;
    const double b = a + 0.1 + 3.0 * u(rng);
    const double tau0 = 2.0 * kPi * u(rng);
    const double omega = 0.2 + 3.0 * u(rng);
    const SaturationInstance si = saturation_instance(a, b, tau0, omega);
    const ExpvalBounds eb = expval_bounds(si.x, si.rho0, si.h);
    const bool lower = tau0 <= kPi;
    // The state angle runs forward until it reaches pi (lower) or 2 pi (upper).
    const double t_end = lower ? (kPi - tau0) / omega : (2.0 * kPi - tau0) / omega;
    const auto traj = expectation_trajectory(si.x, si.rho0, si.h, uniform_grid(std::max(t_end, 1e-9), 200));
    double dev = 0.0;
    for (const auto& p : traj) dev = std::max(dev, std::abs(p.mean - (lower ? eb.lower(p.t) : eb.upper(p.t))));
    tally.record(dev > kTol ? dev : 0.0, "expectation saturation, trial " + std::to_string(s));
  }

  // KDQ saturation: the figure instance plus random angles, each with a
  // phase-perturbed partner that must not saturate.
  for (int s = 0; s <= o.seeds / 10; ++s) {
    const double tau0 = s == 0 ? 2.0 * kPi / 3.0 : 0.05 + (kPi - 0.1) * u(rng);
    const Instance inst = kdq_saturation_instance(tau0);
    const KdqBounds kb = kdq_bounds(inst.rho, inst.a[0].projector, inst.b[0].projector, inst.h);
    const auto grid = uniform_grid((kPi - kb.re_lower.tau0) / kb.delta_l, 200);
    double dev = 0.0;
    for (double t : grid) dev = std::max(dev, std::abs(kdq_at(inst, 0, 0, t).real() - kb.re_lower(t)));
    tally.record(dev > kTol ? dev : 0.0, "kdq saturation, tau0 " + std::to_string(tau0));

    const Instance perturbed = kdq_saturation_instance(tau0, 1.0, -kPi / 2.0 + 0.3);
    const KdqBounds pb = kdq_bounds(perturbed.rho, perturbed.a[0].projector, perturbed.b[0].projector, perturbed.h);
    double gap = 0.0;
    for (double t : uniform_grid(kPi, 200)) gap = std::max(gap, kdq_at(perturbed, 0, 0, t).real() - pb.re_lower(t));
    tally.record(gap > 1e-6 ? 0.0 : 1.0, "perturbed kdq instance still saturates, tau0 " + std::to_string(tau0));
  }
  return tally.result();
}

PropertyResult check_delta_l_laws(const SuiteOptions& o) {
  Tally tally("delta_l_laws");
  for_each_instance(o, [&](std::uint64_t seed, int dim) {
    std::mt19937_64 rng(seed * 7919u + static_cast<std::uint64_t>(dim));
    const bool pure = seed % 2 == 1;
    const QuantumState rho = pure ? random_pure_state(dim, rng) : random_mixed_state(dim, rng);
    const HermitianOperator h = random_hermitian(dim, rng);
    const SldResult s0 = sld(rho, h);
    const double dh = standard_deviation(h, rho);

    double v = std::max(0.0, s0.delta_l - 2.0 * dh - o.slack);
    if (pure) v = std::max(v, std::abs(s0.delta_l - 2.0 * dh) - o.slack);
    // Defining identities: <L> = 0 and {rho, L}/2 = [H, rho]/i.
    v = std::max(v, std::abs(rho.expectation(s0.L)) - 1e-10);
    const Matrix lhs = 0.5 * (rho.op().matrix() * s0.L.matrix() + s0.L.matrix() * rho.op().matrix());
    const Matrix rhs = commutator(h.matrix(), rho.op().matrix()) / cplx(0.0, 1.0);
    v = std::max(v, max_abs(lhs - rhs) - o.slack);

    const auto traj = expectation_trajectory(h, rho, h, uniform_grid(characteristic_period(h), 20), 1.0, true);
    for (const auto& p : traj) v = std::max(v, std::abs(p.delta_l - s0.delta_l) - o.slack);
    tally.record(v > 0.0 ? v : 0.0, where(seed, dim, pure ? "pure" : "mixed"));
  });
  return tally.result();
}

PropertyResult check_variance_bound(const SuiteOptions& o) {
  Tally tally("variance_bound");
  for_each_instance(o, [&](std::uint64_t seed, int dim) {
    std::mt19937_64 rng(seed * 104729u + static_cast<std::uint64_t>(dim));
    const QuantumState rho = seed % 2 ? random_pure_state(dim, rng) : random_mixed_state(dim, rng);
    const HermitianOperator x = random_hermitian(dim, rng);
    const HermitianOperator h = random_hermitian(dim, rng);
    const SpectralRange r = spectral_range(x);
    double v = 0.0;
    for (const auto& p : expectation_trajectory(x, rho, h, uniform_grid(characteristic_period(h), 50))) {
      v = std::max(v, p.stddev * p.stddev - variance_upper_bound(r, p.mean) - 1e-10);
    }
    tally.record(v > 0.0 ? v : 0.0, where(seed, dim, "variance"));
  });
  return tally.result();
}

PropertyResult check_rate_bound(const SuiteOptions& o) {
  Tally tally("rate_bound");
  for_each_instance(o, [&](std::uint64_t seed, int dim) {
    std::mt19937_64 rng(seed * 15485863u + static_cast<std::uint64_t>(dim));
    const QuantumState rho = seed % 2 ? random_pure_state(dim, rng) : random_mixed_state(dim, rng);
    const HermitianOperator x = random_hermitian(dim, rng);
    const HermitianOperator h = random_hermitian(dim, rng);
    const double dl = sld(rho, h).delta_l;
    double v = 0.0;
    for (const auto& p : expectation_trajectory(x, rho, h, uniform_grid(characteristic_period(h), 50))) {
      v = std::max(v, std::abs(p.rate) - dl * p.stddev - o.slack);
    }
    tally.record(v > 0.0 ? v : 0.0, where(seed, dim, "rate"));
  });
  return tally.result();
}

PropertyResult check_commutative_limit(const SuiteOptions& o) {
  Tally tally("commutative_limit");
  for_each_instance(o, [&](std::uint64_t seed, int dim) {
    const InstanceOptions opt{seed % 2 ? Purity::pure : Purity::mixed, Commutation::commuting};
    const Instance inst = random_instance(dim, seed, opt);
    const KdqTable table = trajectory(inst, characteristic_period(inst.h), 200, o.s_th);
    double v = 0.0;
    for (const auto& e : table.entries()) {
      v = std::max({v, std::abs(e.value.real() - e.tpm_value) - o.slack, std::abs(e.value.imag()) - o.slack,
                    e.im_exceeds ? 1.0 : 0.0});
    }
    for (std::size_t l = 0; l < inst.a.size(); ++l) {
      for (std::size_t j = 0; j < inst.b.size(); ++j) {
        const BoundCurve c = tpm_limit_bound(inst.rho, inst.a[l].projector, inst.b[j].projector, inst.h);
        for (std::size_t k = 0; k < table.times().size(); ++k) {
          const double t = table.times()[k];
          v = std::max({v, -c(t), c(t) - table.at(k, l, j).tpm_value - o.slack});
        }
      }
    }
    tally.record(v > 0.0 ? v : 0.0, where(seed, dim, "commuting"));
  });
  return tally.result();
}

PropertyResult check_sr_gap(const SuiteOptions& o, int triples) {
  Tally tally("sr_gap");
  std::mt19937_64 rng(o.seed_begin ^ 0x5E5Eu);
  for (int k = 0; k < triples; ++k) {
    const int dim = o.dim_min + k % (o.dim_max - o.dim_min + 1);
    const HermitianOperator x = random_hermitian(dim, rng);
    const HermitianOperator y = random_hermitian(dim, rng);
    const QuantumState rho = k % 3 == 0 ? random_pure_state(dim, rng) : random_mixed_state(dim, rng);
    const double gap = sr_uncertainty_gap(x, y, rho);
    tally.record(gap < -1e-10 ? -gap : 0.0, "triple " + std::to_string(k));
  }
  return tally.result();
}

PropertyResult check_angle_round_trip(const SuiteOptions& o, int triples, const AngleFn& angle) {
  Tally tally("angle_round_trip");
  std::mt19937_64 rng(o.seed_begin ^ 0xA261u);
  std::normal_distribution<double> n(0.0, 2.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < triples; ++k) {
    double a = n(rng);
    double b = n(rng);
    if (a > b) std::swap(a, b);
    const SpectralRange r{a, b};
    const double x = a + (b - a) * u(rng);
    const auto tau = angle(r, x);
    if (!tau) {
      tally.record(1.0, "unreachable in-range value, triple " + std::to_string(k));
      continue;
    }
    const double err = std::abs(interpolate(r, *tau) - x);
    tally.record(err > 1e-12 ? err : 0.0, "triple " + std::to_string(k));
  }
  // Monotone on [0, pi].
  const SpectralRange r{-1.3, 2.1};
  double prev = interpolate(r, 0.0);
  double v = 0.0;
  for (int k = 1; k <= 1000; ++k) {
    const double cur = interpolate(r, kPi * k / 1000.0);
    v = std::max(v, cur - prev);
    prev = cur;
  }
  tally.record(v > 0.0 ? v : 0.0, "E increases somewhere on [0, pi]");
  return tally.result();
}

PropertyResult check_derivative_initial_slope(const SuiteOptions& o, const CurveEval& eval_in) {
  Tally tally("derivative_initial_slope");
  const CurveEval eval = eval_in ? eval_in : CurveEval([](const BoundCurve& c, double t) { return c(t); });
  for_each_instance(o, [&](std::uint64_t seed, int dim) {
    const Instance inst = random_instance(dim, seed, {seed % 2 ? Purity::pure : Purity::mixed,
                                                      Commutation::non_commuting});
    for (std::size_t l = 0; l < inst.a.size(); ++l) {
      for (std::size_t j = 0; j < inst.b.size(); ++j) {
        const BoundCurve c = kdq_bounds(inst.rho, inst.a[l].projector, inst.b[j].projector, inst.h).re_derivative;
        if (c.rate < 1e-6) continue;
        const double h = 1e-3 / c.rate;
        // Five-point stencil needs the angle to stay inside (0, pi).
        if (c.dot_tau0 - 2.0 * h * c.rate <= 0.0 || c.dot_tau0 + 2.0 * h * c.rate >= kPi) continue;
        const double slope = (-eval(c, 2 * h) + 8 * eval(c, h) - 8 * eval(c, -h) + eval(c, -2 * h)) / (12.0 * h);
        // d/dt Re tr{rho A_l U^dag B_j U} at t = 0 equals Re tr{rho A_l i[H, B_j]}.
        const Matrix db = cplx(0.0, 1.0) * commutator(inst.h.matrix(), inst.b[j].projector.matrix());
        const double expected = (inst.rho.op().matrix() * inst.a[l].projector.matrix() * db).trace().real();
        const double err = std::abs(slope - expected);
        const double tol = 1e-9 * std::max(1.0, std::abs(expected));
        tally.record(err > tol ? err : 0.0, where(seed, dim, "pair " + std::to_string(l) + "," + std::to_string(j)));
      }
    }
  });
  return tally.result();
}

PropertyResult check_crossing_lower_bound(const SuiteOptions& o, int negativity_instances) {
  Tally tally("crossing_lower_bound");
  int found = 0;
  for (std::uint64_t seed = o.seed_begin; found < negativity_instances && seed < o.seed_begin + 100000; ++seed) {
    const int dim = o.dim_min + static_cast<int>(seed % static_cast<std::uint64_t>(o.dim_max - o.dim_min + 1));
    const Instance inst =
        random_instance(dim, seed, {seed % 2 ? Purity::pure : Purity::mixed, Commutation::non_commuting});
    const double period = characteristic_period(inst.h);
    bool any_negative = false;
    for (std::size_t l = 0; l < inst.a.size(); ++l) {
      for (std::size_t j = 0; j < inst.b.size(); ++j) {
        const auto& al = inst.a[l].projector;
        const auto& bj = inst.b[j].projector;
        const auto t_neg = first_negativity_time(inst, l, j, period, o.steps);
        const CrossingTime qre = time_to_negativity(inst.rho, al, bj, inst.h);
        if (t_neg) {
          any_negative = true;
          const double v = qre.value ? *qre.value - *t_neg - o.slack : 1.0;
          tally.record(v > 0.0 ? v : 0.0, where(seed, dim, "T_re vs first negativity"));
        }
        // time = 0 iff the criterion already holds at t = 0.
        const bool neg0 = kdq_at(inst, l, j, 0.0).real() < 0.0;
        if (neg0 != (qre.value && *qre.value == 0.0)) tally.record(1.0, where(seed, dim, "T_re zero iff negative"));

        const auto t_im = first_im_exceed_time(inst, l, j, o.s_th, period, o.steps);
        if (t_im) {
          const CrossingTime qim = time_to_im_threshold(inst.rho, al, bj, inst.h, 1.0, o.s_th);
          const double v = qim.value ? *qim.value - *t_im - o.slack : 1.0;
          tally.record(v > 0.0 ? v : 0.0, where(seed, dim, "T_im vs first threshold crossing"));
        }
      }
    }
    if (any_negative) ++found;
  }
  if (found < negativity_instances) tally.record(1.0, "too few negativity-exhibiting instances");
  return tally.result();
}

PropertyResult check_time_scaling(const SuiteOptions& o) {
  Tally tally("time_scaling");
  for_each_instance(o, [&](std::uint64_t seed, int dim) {
    const Instance inst = random_instance(dim, seed, {Purity::mixed, Commutation::non_commuting});
    const double c = 1.5 + static_cast<double>(seed % 5);
    const HermitianOperator hc = inst.h * c;
    const auto& al = inst.a[0].projector;
    const auto& bj = inst.b[0].projector;
    const CrossingTime a1 = time_to_negativity(inst.rho, al, bj, inst.h);
    const CrossingTime a2 = time_to_negativity(inst.rho, al, bj, hc);
    const CrossingTime b1 = time_to_im_threshold(inst.rho, al, bj, inst.h, 1.0, 0.05);
    const CrossingTime b2 = time_to_im_threshold(inst.rho, al, bj, hc, 1.0, 0.05);
    double v = 0.0;
    for (auto [x, y] : {std::pair{a1, a2}, std::pair{b1, b2}}) {
      if (x.value.has_value() != y.value.has_value()) {
        v = 1.0;
      } else if (x.value) {
        v = std::max(v, std::abs(*x.value / c - *y.value) - 1e-9 * std::max(1.0, *x.value));
      }
    }
    tally.record(v > 0.0 ? v : 0.0, where(seed, dim, "scaling"));
  });
  return tally.result();
}

std::vector<PropertyResult> run_property_suite(const SuiteOptions& o) {
  return {check_bound_validity(o),       check_saturation(o),     check_delta_l_laws(o),
          check_variance_bound(o),       check_rate_bound(o),     check_commutative_limit(o),
          check_sr_gap(o),               check_angle_round_trip(o), check_derivative_initial_slope(o),
          check_crossing_lower_bound(o), check_time_scaling(o)};
}

}  // namespace kdqsl
