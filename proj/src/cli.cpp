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

#include "kdqsl/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "kdqsl/io.hpp"
#include "kdqsl/kdq.hpp"
#include "kdqsl/properties.hpp"
#include "kdqsl/qsltimes.hpp"
#include "kdqsl/srbounds.hpp"
#include "kdqsl/workext.hpp"

namespace kdqsl::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Column-oriented numeric table written as CSV or as a JSON array of rows.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;

  void write(std::ostream& os, Format f) const {
    if (f == Format::csv) {
      for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
      os << '\n';
      for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << format_optional(r[c]);
        os << '\n';
      }
      return;
    }
    os << to_json().dump(2) << '\n';
  }

  json to_json() const {
    json arr = json::array();
    for (const auto& r : rows) {
      json row = json::object();
      for (std::size_t c = 0; c < r.size(); ++c) row[columns[c]] = optional_to_json(r[c]);
      arr.push_back(row);
    }
    return arr;
  }
};

const char* extension(Format f) { return f == Format::csv ? ".csv" : ".json"; }

fs::path output_dir(const RunConfig& c) {
  fs::path dir = c.out.empty() ? fs::path(".") : fs::path(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ContractError("writable output directory", dir.string() + ": " + ec.message());
  return dir;
}

std::ofstream open_file(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ContractError("writable output file", p.string());
  return f;
}

// Writes to c.out, or to `fallback` when no path was given.
template <class F>
void emit(const RunConfig& c, std::ostream& fallback, F&& write) {
  if (c.out.empty()) {
    write(fallback);
    return;
  }
  std::ofstream f = open_file(c.out);
  write(f);
}

std::vector<double> linspace(double a, double b, int n) {
  if (n == 1) return {a};
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[k] = a + (b - a) * k / (n - 1);
  return v;
}

HermitianOperator read_hermitian(const std::string& path, const char* what) {
  if (path.empty()) throw ContractError(std::string("input file for ") + what, "missing --" + std::string(what));
  return HermitianOperator(matrix_from_json(read_json_file(path)));
}

struct Problem {
  QuantumState rho;
  ProjectiveObservable a;
  ProjectiveObservable b;
  HermitianOperator h;
};

Problem load_problem(const RunConfig& c) {
  const HermitianOperator rho_op = read_hermitian(c.rho_path, "rho");
  QuantumState rho(rho_op);
  if (!rho.is_normalized()) throw ContractError("unit-trace density matrix", "tr(rho) != 1");
  if (c.a_path.empty()) throw ContractError("input file for A", "missing --A");
  if (c.b_path.empty()) throw ContractError("input file for B", "missing --B");
  ProjectiveObservable a = observable_from_json(read_json_file(c.a_path));
  ProjectiveObservable b = observable_from_json(read_json_file(c.b_path));
  HermitianOperator h = read_hermitian(c.h_path, "H");
  const int d = rho.dim();
  if (a.dim() != d || b.dim() != d || h.dim() != d) {
    throw ContractError("matching dimensions", "rho, A, B and H must share one dimension");
  }
  return {std::move(rho), std::move(a), std::move(b), std::move(h)};
}

Problem two_qubit_problem(const RunConfig& c) {
  const WorkScenario s = build_two_qubit_scenario(c.omega_l, c.omega_int, c.hbar);
  return {s.target_state, ProjectiveObservable::computational(2), ProjectiveObservable::computational(2),
          s.target_hamiltonian};
}

bool commutes(const QuantumState& rho, const HermitianOperator& a) {
  return max_abs(commutator(rho.op().matrix(), a.matrix())) < 1e-10;
}

bool is_identity(const HermitianOperator& a) {
  return max_abs(a.matrix() - Matrix::Identity(a.dim(), a.dim())) < 1e-10;
}

std::vector<CrossingTime> crossings(const Problem& p, const RunConfig& c) {
  std::vector<CrossingTime> out;
  for (const auto& ol : p.a.outcomes()) {
    for (const auto& oj : p.b.outcomes()) {
      const OutcomePair pair{ol.label, oj.label};
      out.push_back(time_to_negativity(p.rho, ol.projector, oj.projector, p.h, c.hbar, pair));
      out.push_back(time_to_im_threshold(p.rho, ol.projector, oj.projector, p.h, c.hbar, c.s_th, pair));
      const KdqBounds kb = kdq_bounds(p.rho, ol.projector, oj.projector, p.h, c.hbar);
      out.push_back(derivative_bound_zero_crossing(kb.re_derivative, pair));
    }
  }
  return out;
}

json crossings_json(const std::vector<CrossingTime>& v) {
  json arr = json::array();
  for (const auto& x : v) arr.push_back(to_json(x));
  return arr;
}

void write_crossings_csv(std::ostream& os, const std::vector<CrossingTime>& v) {
  os << "criterion,ell,j,time,deltaL,tau0,tau_target\n";
  for (const auto& x : v) {
    os << to_string(x.criterion) << ',' << x.pair.ell << ',' << x.pair.j << ',' << format_optional(x.value) << ','
       << format_double(x.delta_l) << ',' << format_double(x.tau0) << ',' << format_optional(x.tau_target) << '\n';
  }
}

// Sweep rows with a search window that covers one period of every row.
std::vector<PowerReport> run_sweep(const RunConfig& c) {
  const std::vector<double> omegas = linspace(c.sweep_min, c.sweep_max, c.sweep_count);
  double omega_min = std::numeric_limits<double>::infinity();
  for (double w : omegas) omega_min = std::min(omega_min, std::hypot(c.omega_l, w));
  PowerSearch search;
  if (omega_min > 0.0) search.window = std::max(search.window, 2.0 * std::numbers::pi / omega_min);
  return power_sweep(c.omega_l, omegas, c.hbar, search);
}

Table sweep_table(const std::vector<PowerReport>& rows) {
  Table t{{"omega_int", "W_max/E_ref", "T_max/t_ref", "T_neg/t_ref", "P_max/P_ref", "P_neg/P_ref",
           "negativity_present"},
          {}};
  auto scaled = [](const std::optional<double>& v, double ref) -> std::optional<double> {
    if (!v) return std::nullopt;
    return *v / ref;
  };
  for (const auto& r : rows) {
    t.rows.push_back({r.omega_int, r.w_max / r.norm.energy, scaled(r.t_max, r.norm.time),
                      scaled(r.t_neg, r.norm.time), scaled(r.p_max, r.norm.power), scaled(r.p_neg, r.norm.power),
                      r.negativity_present ? 1.0 : 0.0});
  }
  return t;
}

bool any_negativity(const std::vector<PowerReport>& rows) {
  for (const auto& r : rows)
    if (r.negativity_present) return true;
  return false;
}

int cmd_two_qubit(const RunConfig& c, std::ostream& out) {
  const WorkScenario s = build_two_qubit_scenario(c.omega_l, c.omega_int, c.hbar);
  const std::vector<double> times = uniform_grid(c.t_max.value_or(std::numbers::pi), c.steps.value_or(1001));
  const WorkDistribution wd = work_distribution(s, times, TargetModel::full);
  const HermitianOperator one = HermitianOperator::diagonal({0.0, 1.0});
  const KdqBounds kb = kdq_bounds(s.target_state, one, one, s.target_hamiltonian, c.hbar);

  Table traj{{"t", "re_q", "im_q", "tpm", "re_lower", "re_upper", "re_derivative", "re_unified", "im_lower",
              "im_upper", "im_derivative", "im_unified", "w_ext", "w_ext_tpm"},
             {}};
  for (const auto& snap : wd.snapshots) {
    const double t = snap.t;
    const WorkEntry& e = snap.entries[3];  // (l, j) = (1, 1)
    traj.rows.push_back({t, e.q.real(), e.q.imag(), e.p_tpm, kb.re_lower(t), kb.re_upper(t), kb.re_derivative(t),
                         kb.re_unified(t), kb.im_lower(t), kb.im_upper(t), kb.im_derivative(t), kb.im_unified(t),
                         snap.extractable.real(), snap.extractable_tpm});
  }
  const std::vector<PowerReport> rows = run_sweep(c);
  const Table sweep = sweep_table(rows);
  const OutcomePair pair{1, 1};
  const std::vector<CrossingTime> cross = {
      time_to_negativity(s.target_state, one, one, s.target_hamiltonian, c.hbar, pair),
      time_to_im_threshold(s.target_state, one, one, s.target_hamiltonian, c.hbar, c.s_th, pair),
      derivative_bound_zero_crossing(kb.re_derivative, pair)};

  const fs::path dir = output_dir(c);
  if (c.format == Format::csv) {
    std::ofstream f1 = open_file(dir / "two_qubit_trajectory.csv");
    traj.write(f1, Format::csv);
    std::ofstream f2 = open_file(dir / "two_qubit_sweep.csv");
    sweep.write(f2, Format::csv);
    std::ofstream f3 = open_file(dir / "two_qubit_crossings.json");
    f3 << crossings_json(cross).dump(2) << '\n';
  } else {
    json doc = {{"omega_l", c.omega_l},
                {"omega_int", c.omega_int},
                {"hbar", c.hbar},
                {"s_th", c.s_th},
                {"crossings", crossings_json(cross)},
                {"trajectory", traj.to_json()},
                {"sweep", sweep.to_json()}};
    std::ofstream f = open_file(dir / "two_qubit.json");
    f << doc.dump(2) << '\n';
  }
  out << "two-qubit: " << traj.rows.size() << " trajectory rows, " << sweep.rows.size() << " sweep rows -> "
      << dir.string() << '\n';
  if (!any_negativity(rows)) {
    out << "no negativity anywhere in the sweep\n";
    return kExitNoResult;
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const std::vector<PowerReport> rows = run_sweep(c);
  emit(c, out, [&](std::ostream& os) { sweep_table(rows).write(os, c.format); });
  return any_negativity(rows) ? kExitOk : kExitNoResult;
}

int cmd_bounds(const RunConfig& c, std::ostream& out) {
  const Problem p = load_problem(c);
  const std::vector<double> times =
      uniform_grid(c.t_max.value_or(characteristic_period(p.h, c.hbar)), c.steps.value_or(1001));
  const KdqTable table = kdq_table(p.rho, p.a, p.b, p.h, times, c.s_th, c.hbar);
  const fs::path dir = output_dir(c);

  for (std::size_t l = 0; l < p.a.size(); ++l) {
    const auto& al = p.a[l].projector;
    std::optional<BoundCurve> tpm_curve;
    for (std::size_t j = 0; j < p.b.size(); ++j) {
      const auto& bj = p.b[j].projector;
      const KdqBounds kb = kdq_bounds(p.rho, al, bj, p.h, c.hbar);
      if (commutes(p.rho, al) && !is_identity(al)) tpm_curve = tpm_limit_bound(p.rho, al, bj, p.h, c.hbar);
      Table t{{"t", "re_q", "im_q", "tpm", "re_lower", "re_upper", "im_lower", "im_upper", "re_derivative",
               "im_derivative", "re_unified", "im_unified"},
              {}};
      if (tpm_curve) t.columns.push_back("tpm_limit");
      for (std::size_t k = 0; k < times.size(); ++k) {
        const double tt = times[k];
        const KdqEntry& e = table.at(k, l, j);
        std::vector<std::optional<double>> row = {tt,
                                                  e.value.real(),
                                                  e.value.imag(),
                                                  e.tpm_value,
                                                  kb.re_lower(tt),
                                                  kb.re_upper(tt),
                                                  kb.im_lower(tt),
                                                  kb.im_upper(tt),
                                                  kb.re_derivative(tt),
                                                  kb.im_derivative(tt),
                                                  kb.re_unified(tt),
                                                  kb.im_unified(tt)};
        if (tpm_curve) row.push_back((*tpm_curve)(tt));
        t.rows.push_back(std::move(row));
      }
      const std::string name =
          "bounds_" + std::to_string(p.a[l].label) + "_" + std::to_string(p.b[j].label) + extension(c.format);
      std::ofstream f = open_file(dir / name);
      t.write(f, c.format);
    }
  }
  const std::vector<CrossingTime> cross = crossings(p, c);
  std::ofstream f = open_file(dir / "crossings.json");
  f << json{{"s_th", c.s_th}, {"hbar", c.hbar}, {"crossings", crossings_json(cross)}}.dump(2) << '\n';
  out << "bounds: " << p.a.size() * p.b.size() << " pairs -> " << dir.string() << '\n';
  return kExitOk;
}

int cmd_qsl_times(const RunConfig& c, std::ostream& out) {
  const bool from_files = !c.rho_path.empty() || !c.a_path.empty() || !c.b_path.empty() || !c.h_path.empty();
  const Problem p = from_files ? load_problem(c) : two_qubit_problem(c);
  const std::vector<CrossingTime> cross = crossings(p, c);
  emit(c, out, [&](std::ostream& os) {
    if (c.format == Format::json) {
      os << crossings_json(cross).dump(2) << '\n';
    } else {
      write_crossings_csv(os, cross);
    }
  });
  for (const auto& x : cross)
    if (x.value) return kExitOk;
  return kExitNoResult;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  SuiteOptions o;
  o.seed_begin = c.seed;
  o.seeds = c.seeds;
  o.dim_min = c.dim_min;
  o.dim_max = c.dim_max;
  o.steps = c.steps.value_or(2000);
  o.s_th = c.s_th;
  const std::vector<PropertyResult> results = run_property_suite(o);
  int passed = 0;
  for (const auto& r : results) {
    passed += r.passed() ? 1 : 0;
    out << (r.passed() ? "PASS " : "FAIL ") << r.name << " trials=" << r.trials << " failures=" << r.failures
        << " worst=" << format_double(r.worst);
    if (!r.first_failure.empty()) out << " first=\"" << r.first_failure << '"';
    out << '\n';
  }
  out << "passed " << passed << "/" << results.size() << " properties\n";
  return passed == static_cast<int>(results.size()) ? kExitOk : kExitFailure;
}

}  // namespace

void RunConfig::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ContractError("hbar > 0", "hbar = " + format_double(hbar));
  if (!(s_th >= 0.0) || !std::isfinite(s_th)) throw ContractError("s_th >= 0", "s_th = " + format_double(s_th));
  if (t_max && (!(*t_max > 0.0) || !std::isfinite(*t_max))) {
    throw ContractError("t_max > 0", "t_max = " + format_double(*t_max));
  }
  if (steps && *steps < 2) throw ContractError("steps >= 2", "steps = " + std::to_string(*steps));
  if (sweep_count < 1) throw ContractError("sweep-count >= 1", std::to_string(sweep_count));
  if (!std::isfinite(sweep_min) || !std::isfinite(sweep_max) || sweep_min > sweep_max) {
    throw ContractError("finite ordered sweep range", format_double(sweep_min) + ".." + format_double(sweep_max));
  }
  if (seeds < 1) throw ContractError("seeds >= 1", std::to_string(seeds));
  if (dim_min < kMinInstanceDim || dim_max > kMaxInstanceDim || dim_min > dim_max) {
    throw ContractError("dims within [2, 8]", std::to_string(dim_min) + ".." + std::to_string(dim_max));
  }
}

ProjectiveObservable observable_from_json(const json& j) {
  if (j.is_object() && j.contains("projectors")) {
    const json& ps = j["projectors"];
    if (!ps.is_array() || ps.empty()) throw ContractError("matrix format", "projectors must be a non-empty array");
    const json values = j.contains("values") ? j["values"] : json();
    if (!values.is_null() && (!values.is_array() || values.size() != ps.size())) {
      throw ContractError("matrix format", "values must match projectors in length");
    }
    std::vector<Outcome> outcomes;
    for (std::size_t k = 0; k < ps.size(); ++k) {
      if (!values.is_null() && !values[k].is_number()) throw ContractError("matrix format", "non-numeric value");
      const double v = values.is_null() ? static_cast<double>(k) : values[k].get<double>();
      outcomes.push_back({static_cast<int>(k), v, HermitianOperator(matrix_from_json(ps[k]))});
    }
    return ProjectiveObservable(std::move(outcomes));
  }
  return ProjectiveObservable::from_operator(HermitianOperator(matrix_from_json(j)));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Kirkwood-Dirac quasiprobability speed limits"};
  app.set_config("--config", "", "flat key=value file; command-line flags override it");
  app.fallthrough();
  app.require_subcommand(1, 1);

  std::string format = "csv";
  app.add_option("--omega-l", c.omega_l, "Larmor frequency of both qubits");
  app.add_option("--omega-int", c.omega_int, "control-target interaction strength");
  app.add_option("--s-th", c.s_th, "imaginary-part threshold");
  app.add_option("--t-max", c.t_max, "end of the time grid");
  app.add_option("--steps", c.steps, "number of grid points");
  app.add_option("--hbar", c.hbar, "reduced Planck constant");
  app.add_option("--seed", c.seed, "first seed (verify)");
  app.add_option("--seeds", c.seeds, "number of seeds (verify)");
  app.add_option("--dim-min", c.dim_min, "smallest instance dimension (verify)");
  app.add_option("--dim-max", c.dim_max, "largest instance dimension (verify)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", c.out, "output file, or directory for multi-file commands");
  app.add_option("--sweep-min", c.sweep_min, "first omega_int of the sweep");
  app.add_option("--sweep-max", c.sweep_max, "last omega_int of the sweep");
  app.add_option("--sweep-count", c.sweep_count, "number of sweep rows");
  app.add_option("--rho", c.rho_path, "initial state (matrix JSON)");
  app.add_option("--A", c.a_path, "first observable (matrix or projector-family JSON)");
  app.add_option("--B", c.b_path, "second observable (matrix or projector-family JSON)");
  app.add_option("--H", c.h_path, "Hamiltonian (matrix JSON)");

  auto* two_qubit = app.add_subcommand("two-qubit", "controlled-gate trajectory, bounds and power sweep");
  auto* bounds = app.add_subcommand("bounds", "bound curves for user-supplied operators");
  auto* qsl = app.add_subcommand("qsl-times", "crossing-time report");
  auto* verify = app.add_subcommand("verify", "run the property suite");
  auto* sweep = app.add_subcommand("sweep", "power sweep over omega_int");

  std::vector<std::string> args(argv + 1, argv + argc);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: invalid arguments: " << e.what() << '\n';
    return kExitContract;
  }
  c.format = format == "json" ? Format::json : Format::csv;

  try {
    c.validate();
    if (*two_qubit) return cmd_two_qubit(c, out);
    if (*bounds) return cmd_bounds(c, out);
    if (*qsl) return cmd_qsl_times(c, out);
    if (*verify) return cmd_verify(c, out);
    if (*sweep) return cmd_sweep(c, out);
  } catch (const ContractError& e) {
    err << "error: contract violation [" << e.invariant() << "]: " << e.what() << '\n';
    return kExitContract;
  }
  return kExitContract;
}

}  // namespace kdqsl::cli
