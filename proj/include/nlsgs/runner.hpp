#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "dynamics.hpp"
#include "field_io.hpp"
#include "functional.hpp"
#include "hypotheses.hpp"
#include "properties.hpp"
#include "report.hpp"
#include "soliton.hpp"
#include "solver.hpp"

namespace nlsgs {

enum ExitCode : int { kExitOk = 0, kExitChecksFailed = 1, kExitConfig = 2, kExitNonConvergence = 3 };

struct RunOutcome {
  int exit_code = kExitOk;
  std::vector<Check> checks;
  /// Informational lines, in order, before the verdicts.
  std::vector<std::string> notes;
  std::vector<std::filesystem::path> artifacts;

  std::string summary() const {
    std::ostringstream os;
    for (const auto& n : notes) os << n << '\n';
    for (const auto& c : checks) os << c.line() << '\n';
    std::size_t failed = 0;
    for (const auto& c : checks) failed += c.pass() ? 0 : 1;
    os << "checks: " << checks.size() - failed << " passed, " << failed << " failed\n";
    return os.str();
  }
};

namespace detail {

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

inline nlohmann::json num(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(std::to_string(x)); }

inline nlohmann::json checks_json(const std::vector<Check>& cs) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& c : cs) a.push_back(c.to_json());
  return a;
}

class Runner {
 public:
  explicit Runner(const ExperimentConfig& c) : c_(c), dir_(c.out) {}

  RunOutcome run() {
    const std::string& cmd = c_.command;
    if (cmd == "gn-const") gn_const();
    else if (cmd == "minimize") minimize_cmd();
    else if (cmd == "scan-m") scan_m();
    else if (cmd == "subadd") subadd();
    else if (cmd == "rearrange-test") rearrange_test();
    else if (cmd == "eta-limits") eta_limits();
    else if (cmd == "evolve") evolve_cmd();
    else if (cmd == "verify") verify();
    else throw ConfigError(cmd.empty() ? "no command given" : "unknown command '" + cmd + "'");
    if (out_.exit_code == kExitOk && !all_pass(out_.checks)) out_.exit_code = kExitChecksFailed;
    write("summary.txt", out_.summary());
    return out_;
  }

 private:
  void write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    write_atomic(p, text);
    out_.artifacts.push_back(p);
  }

  void write_json(const std::string& name, nlohmann::json j) {
    j["checks"] = checks_json(out_.checks);
    j["config"] = config_to_json(c_);
    write(name, j.dump(2) + "\n");
  }

  void note(std::string s) { out_.notes.push_back(std::move(s)); }
  void check(Check c) { out_.checks.push_back(std::move(c)); }

  // --- gn-const -----------------------------------------------------------

  void gn_const() {
    int N = 0;
    if (c_.N) N = *c_.N;
    else if (c_.nonlinearity) N = c_.make_nonlinearity().dimension();
    else throw ConfigError("gn-const needs \"N\"");
    if (N < 1) throw ConfigError("gn-const: N must be positive");
    const GNData gn = solve_soliton(N);
    note("N = " + std::to_string(N) + ", 2_# = " + fmt(gn.two_sharp));
    note("w(0) = " + fmt(gn.w0));
    note("|w|_2^2 = " + fmt(gn.mass));
    note("C = " + fmt(gn.C));
    note("C^{2_#} = " + fmt(gn.C_power()));
    const auto d = Domain::radial(N, gn.r_cut, 20000);
    const Field w = sample(d, [&](double r) { return gn.value(r); });
    check(at_most("GN ratio of w deviation from 1", std::abs(gn_check(gn, w) - 1.0), 1e-4));
    if (N == 1) {
      check(at_most("w(0) vs 6^{1/4}", std::abs(gn.w0 - std::pow(6.0, 0.25)), 1e-5));
      check(at_most("|w|_2^2 vs pi sqrt(3)/2", std::abs(gn.mass - std::numbers::pi * std::sqrt(3.0) / 2.0), 1e-5));
      check(at_most("C^6 vs 4/pi^2", std::abs(gn.C_power() - 4.0 / (std::numbers::pi * std::numbers::pi)), 1e-5));
    }
    std::ostringstream csv;
    csv.precision(17);
    csv << "r,w,dw\n";
    for (std::size_t k = 0; k < gn.r.size(); ++k) csv << gn.r[k] << ',' << gn.w[k] << ',' << gn.dw[k] << '\n';
    write("soliton.csv", csv.str());
    write_json("gn.json", {{"N", N},
                           {"two_sharp", gn.two_sharp},
                           {"w0", gn.w0},
                           {"mass", gn.mass},
                           {"grad_sq", gn.grad_sq},
                           {"lp_power", gn.lp_power},
                           {"C", gn.C},
                           {"C_power", gn.C_power()},
                           {"delta", gn.delta}});
  }

  // --- ground-state checks shared by minimize and verify ------------------

  void ground_state_checks(const Nonlinearity& F, const MassSpec& a, const MinimizeResult& r, bool strict) {
    const auto rep = verify_ground_state(F, a, r, c_.solver.tol, strict, c_.pohozaev_tol);
    check(at_most("PDE residual", r.pde_residual, c_.solver.tol));
    check(at_most("|Pohozaev residual|", std::abs(r.pohozaev), c_.pohozaev_tol));
    double lmin = std::numeric_limits<double>::infinity(), gap = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      lmin = std::min(lmin, r.lambda[j]);
      gap = std::max(gap, a[j] - std::sqrt(mass(r.u, j)));
    }
    check(at_least("min lambda_j (> 0)", lmin, std::numeric_limits<double>::denorm_min()));
    check(at_most("mass saturation gap", gap, c_.solver.sat_tol));
    check(holds("components positive", rep.components_positive));
    if (rep.monotonicity_checked) {
      check(at_most("radial monotonicity violations", static_cast<double>(rep.monotonicity_violations), 0.0));
      if (strict) check(holds("strictly decreasing profile", rep.strictly_monotone));
    }
    const auto th = check_thresholds(F, a, soliton_for(F.dimension()));
    if (th.etal_ok) check(at_most("energy negative under the lower mass bound", r.energy, -std::numeric_limits<double>::denorm_min()));
    if (c_.expect.energy) {
      const double e = *c_.expect.energy;
      check(at_most("energy relative error vs expected", std::abs(r.energy - e) / std::max(std::abs(e), 1e-300),
                    c_.expect.energy_rel_tol));
    }
    if (!c_.expect.lambda.empty()) {
      if (c_.expect.lambda.size() != r.lambda.size()) throw ConfigError("expect.lambda has the wrong length");
      double e = 0.0;
      for (std::size_t j = 0; j < r.lambda.size(); ++j) e = std::max(e, std::abs(r.lambda[j] - c_.expect.lambda[j]));
      check(at_most("lambda error vs expected", e, c_.expect.lambda_tol));
    }
  }

  void threshold_notes(const Nonlinearity& F, const MassSpec& a) {
    const auto th = check_thresholds(F, a, soliton_for(F.dimension()));
    note("eta0 = " + fmt(th.eta0) + (th.eta0_estimated ? " (estimated)" : "") + ", eta_inf = " + fmt(th.eta_inf) +
         (th.eta_inf_estimated ? " (estimated)" : ""));
    note(std::string("upper mass bound 2 eta_inf C^{2_#} |a|^{4/N} = ") + fmt(th.etas_lhs) + (th.etas_ok ? " < 1 holds" : " >= 1 fails"));
    note(std::string("lower mass bound 2 eta0 C^{2_#} M^{2/N} min a_j^{4/N} = ") + fmt(th.etal_lhs) + (th.etal_ok ? " > 1 holds" : " <= 1 fails"));
  }

  static nlohmann::json result_json(const MinimizeResult& r) {
    return {{"energy", r.energy},
            {"initial_energy", r.initial_energy},
            {"lambda", r.lambda},
            {"pde_residual", r.pde_residual},
            {"pohozaev", r.pohozaev},
            {"stationarity", r.stationarity},
            {"saturation", r.saturation},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"status", to_string(r.status)},
            {"symmetry", to_string(r.symmetry)},
            {"init", r.init},
            {"reason", r.reason},
            {"seed", r.seed},
            {"start", r.start}};
  }

  void write_field(const Field& u) {
    write("field.json", field_to_json(u).dump() + "\n");
    write("field.csv", field_to_csv(u));
  }

  // --- minimize -------------------------------------------------------------

  void minimize_cmd() {
    const auto F = c_.make_nonlinearity();
    const MassSpec a(c_.mass, true);
    const auto d = c_.make_domain();
    const auto o = c_.make_solver_options();
    const auto r = minimize(F, a, d, o);
    threshold_notes(F, a);
    note("status = " + to_string(r.status) + (r.reason.empty() ? "" : " (" + r.reason + ")"));
    note("init = " + r.init + ", iterations = " + std::to_string(r.iterations));
    note("m = J(u) = " + fmt(r.energy));
    for (std::size_t j = 0; j < r.lambda.size(); ++j) note("lambda_" + std::to_string(j + 1) + " = " + fmt(r.lambda[j]));
    if (r.status == SolverStatus::Refused) {
      check(holds("upper mass bound", false));
    } else {
      check(holds("converged", r.converged));
      ground_state_checks(F, a, r, false);
      if (!r.converged) out_.exit_code = kExitNonConvergence;
    }
    if (r.status != SolverStatus::Refused) {
      write_field(r.u);
      std::ostringstream log;
      log.precision(17);
      log << "iteration,energy\n";
      for (std::size_t k = 0; k < r.energy_log.size(); ++k) log << k << ',' << r.energy_log[k] << '\n';
      write("energy_log.csv", log.str());
    }
    write_json("result.json", result_json(r));
  }

  // --- verify ---------------------------------------------------------------

  void verify() {
    const auto F = c_.make_nonlinearity();
    const MassSpec a(c_.mass, true);
    if (c_.verify_field.empty()) throw ConfigError("verify needs \"verify.field\"");
    std::ifstream f(c_.verify_field);
    if (!f) throw ConfigError("cannot read field file '" + c_.verify_field + "'");
    nlohmann::json fj;
    try {
      fj = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(c_.verify_field + ": " + e.what());
    }
    MinimizeResult r{field_from_json(fj)};
    if (r.u.components() != F.components()) throw ConfigError("field and nonlinearity have different M");
    Field g = r.u;
    r.energy = energy_and_gradient(F, r.u, g);
    detail::diagnose(F, a, r, c_.solver.sat_tol);
    r.stationarity = detail::stationarity(r.u, g, a);
    r.converged = true;
    r.status = SolverStatus::Converged;
    r.init = "given";
    threshold_notes(F, a);
    note("J(u) = " + fmt(r.energy));
    for (std::size_t j = 0; j < r.lambda.size(); ++j) note("lambda_" + std::to_string(j + 1) + " = " + fmt(r.lambda[j]));
    note("stationarity = " + fmt(r.stationarity));
    ground_state_checks(F, a, r, c_.verify_strict);
    write_json("verify.json", result_json(r));
  }

  // --- scan-m ---------------------------------------------------------------

  void scan_m() {
    const auto F = c_.make_nonlinearity();
    const auto d = c_.make_domain();
    if (c_.scan_masses.empty()) throw ConfigError("scan-m needs \"scan.masses\"");
    std::vector<MassSpec> grid;
    for (const auto& a : c_.scan_masses) {
      if (a.size() != F.components()) throw ConfigError("scan.masses entries must have M components");
      grid.emplace_back(a, true);
    }
    const auto recs = scan_energy_map(F, grid, d, c_.make_solver_options());
    std::ostringstream csv;
    csv.precision(17);
    for (std::size_t j = 0; j < F.components(); ++j) csv << 'a' << j + 1 << ',';
    csv << "m,converged,status,init,iterations,pde_residual";
    for (std::size_t j = 0; j < F.components(); ++j) csv << ",lambda" << j + 1;
    csv << '\n';
    std::size_t unconverged = 0;
    for (const auto& rec : recs) {
      for (double x : rec.a.a) csv << x << ',';
      csv << rec.m << ',' << (rec.converged ? 1 : 0) << ',' << to_string(rec.result.status) << ',' << rec.init << ','
          << rec.result.iterations << ',' << rec.result.pde_residual;
      for (double l : rec.result.lambda) csv << ',' << l;
      csv << '\n';
      if (!rec.converged) ++unconverged;
      note("m(" + [&] {
        std::string s;
        for (std::size_t j = 0; j < rec.a.size(); ++j) s += (j ? "," : "") + fmt(rec.a[j]);
        return s;
      }() + ") = " + fmt(rec.m) + (rec.converged ? "" : " [" + to_string(rec.result.status) + "]"));
    }
    write("scan.csv", csv.str());
    check(at_most("unconverged scan points", static_cast<double>(unconverged), 0.0));
    // Nonincreasing along the componentwise order.
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < recs.size(); ++i)
      for (std::size_t k = 0; k < recs.size(); ++k) {
        if (i == k) continue;
        bool le = true;
        for (std::size_t j = 0; j < F.components(); ++j) le = le && recs[i].a[j] <= recs[k].a[j];
        if (le) worst = std::max(worst, recs[k].m - recs[i].m);
      }
    if (std::isfinite(worst)) check(at_most("m nonincreasing: max m(b) - m(a) over a <= b", worst, 1e-10));
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& rec : recs)
      pts.push_back({{"a", rec.a.a}, {"m", rec.m}, {"converged", rec.converged}, {"status", to_string(rec.result.status)}});
    write_json("scan.json", {{"points", pts}});
    if (unconverged > 0) out_.exit_code = kExitNonConvergence;
  }

  // --- subadd ---------------------------------------------------------------

  void subadd() {
    const auto F = c_.make_nonlinearity();
    const MassSpec a(c_.mass, true);
    if (c_.subadd_b.empty()) throw ConfigError("subadd needs \"subadd.b\"");
    const MassSpec b(c_.subadd_b, true);
    const auto d = c_.make_domain();
    const auto rep = subadditivity_check(F, a, b, d, c_.make_solver_options(), c_.subadd_scales);
    note("m(a) = " + fmt(rep.m_a) + ", m(b) = " + fmt(rep.m_b) + ", m(c) = " + fmt(rep.m_c));
    note("slack m(a) + m(b) - m(c) = " + fmt(rep.slack));
    check(at_least("subadditivity slack", rep.slack, -1e-6));
    check(holds("a and b minimizers saturated", rep.saturated));
    nlohmann::json sc = nlohmann::json::array();
    for (const auto& s : rep.scaling) {
      check(at_least("m(sqrt(" + fmt(s.s) + ") b) <= J(dilated b-minimizer)", s.j_dilated - s.m_scaled,
                     -1e-8 * std::max(1.0, std::abs(s.j_dilated))));
      sc.push_back({{"s", s.s}, {"m_scaled", s.m_scaled}, {"j_dilated", s.j_dilated}});
    }
    write_json("subadd.json", {{"m_a", rep.m_a},
                               {"m_b", rep.m_b},
                               {"m_c", rep.m_c},
                               {"c", rep.c.a},
                               {"slack", rep.slack},
                               {"saturated", rep.saturated},
                               {"scaling", sc}});
  }

  // --- rearrange-test ---------------------------------------------------------

  void rearrange_test() {
    note("cases = " + std::to_string(c_.rearrange_cases) + ", seed = " + std::to_string(c_.seed));
    for (auto& ch : rearrangement_suite(c_.rearrange_cases, c_.seed, c_.threads)) check(std::move(ch));
    write_json("rearrange.json", {{"cases", c_.rearrange_cases}, {"seed", c_.seed}});
  }

  // --- eta-limits -------------------------------------------------------------

  void eta_limits() {
    const auto F = c_.make_nonlinearity();
    const auto e0 = eta_estimate(F, EtaSide::Zero);
    const auto ei = eta_estimate(F, EtaSide::Infinity);
    const auto c0 = F.eta0(), ci = F.eta_inf();
    note("eta0 estimate = " + fmt(e0.value) + (c0 ? ", catalogue = " + fmt(*c0) : ""));
    note("eta_inf estimate = " + fmt(ei.value) + (ci ? ", catalogue = " + fmt(*ci) : ""));
    auto agree = [&](const char* name, double est, const std::optional<double>& cat) {
      if (!cat) return;
      if (std::isinf(*cat)) {
        check(holds(std::string(name) + " estimate infinite", std::isinf(est)));
        return;
      }
      check(at_most(std::string(name) + " estimate vs catalogue", std::abs(est - *cat), 1e-3 * std::max(1.0, std::abs(*cat))));
    };
    agree("eta0", e0.value, c0);
    agree("eta_inf", ei.value, ci);
    const auto h = check_hypotheses(F);
    check(holds("(F0) " + h.F0.detail, h.F0.pass));
    check(holds("(F1) " + h.F1.detail, h.F1.pass));
    check(holds("(F2) " + h.F2.detail, h.F2.pass));
    check(holds("(F3) " + h.F3.detail, h.F3.pass));
    check(holds("(P) " + h.P.detail, h.P.pass));
    if (!c_.mass.empty()) {
      const MassSpec a(c_.mass, true);
      const auto th = check_thresholds(F, a, soliton_for(F.dimension()));
      check(at_most("upper mass bound lhs", th.etas_lhs, 1.0 - std::numeric_limits<double>::epsilon()));
      check(at_least("lower mass bound lhs", th.etal_lhs, 1.0 + std::numeric_limits<double>::epsilon()));
    }
    std::ostringstream csv;
    csv.precision(17);
    csv << "side,radius,sample,envelope\n";
    for (const auto* e : {&e0, &ei})
      for (std::size_t k = 0; k < e->radii.size(); ++k)
        csv << (e == &e0 ? "zero" : "infinity") << ',' << e->radii[k] << ',' << e->samples[k] << ',' << e->envelope[k]
            << '\n';
    write("eta_samples.csv", csv.str());
    write_json("eta.json", {{"eta0", num(e0.value)},
                            {"eta_inf", num(ei.value)},
                            {"eta0_catalogue", c0 ? num(*c0) : nlohmann::json(nullptr)},
                            {"eta_inf_catalogue", ci ? num(*ci) : nlohmann::json(nullptr)}});
  }

  // --- evolve ---------------------------------------------------------------

  // Seeded smooth perturbation direction, one per component.
  static Field perturbation(const Domain& box, std::size_t M, std::uint64_t seed, std::size_t index) {
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(index), 0x5eedu};
    std::mt19937_64 rng(ss);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Field p(box, M);
    for (std::size_t j = 0; j < M; ++j)
      for (int g = 0; g < 3; ++g) {
        const double amp = 2.0 * U(rng) - 1.0, k = 2.0 * U(rng), ph = 2.0 * std::numbers::pi * U(rng);
        const double c = 4.0 * U(rng) - 2.0, w = 1.0 + 2.0 * U(rng);
        for (std::size_t i = 0; i < box.size(); ++i) {
          const double x = box.axis()[i];
          p[j][i] += amp * std::cos(k * x + ph) / std::cosh((x - c) / w);
        }
      }
    return p;
  }

  void evolve_cmd() {
    const auto F = c_.make_nonlinearity();
    const MassSpec a(c_.mass, true);
    const auto& dc = c_.dynamics;
    const auto box = Domain::periodic_box(dc.box_length, dc.n_points);
    std::optional<BoxGroundState> found;
    try {
      found = box_ground_state(F, a, box, c_.make_solver_options(), dc.refine);
    } catch (const NonConvergenceError& e) {
      note(e.what());
      check(holds("ground state converged", false));
      out_.exit_code = kExitNonConvergence;
      write_json("evolve.json", nlohmann::json::object());
      return;
    }
    const BoxGroundState& gs = *found;
    note("ground state J = " + fmt(gs.radial.energy));
    for (std::size_t j = 0; j < gs.lambda.size(); ++j) note("lambda_" + std::to_string(j + 1) + " = " + fmt(gs.lambda[j]));
    const std::vector<Field> orbit{gs.u};
    const double u_norm = h1_norm(WaveState::from_field(gs.u));
    std::vector<WaveState> init;
    for (std::size_t i = 0; i < dc.perturbations.size(); ++i) {
      Field u = gs.u;
      const double eps = dc.perturbations[i];
      if (eps != 0.0) {
        const Field p = perturbation(box, u.components(), c_.seed, i);
        const double sc = eps * u_norm / h1_norm(WaveState::from_field(p));
        for (std::size_t j = 0; j < u.components(); ++j)
          for (std::size_t k = 0; k < box.size(); ++k) u[j][k] += sc * p[j][k];
      }
      init.push_back(WaveState::from_field(u));
    }
    const EvolveOptions eo{dc.dt, dc.T, dc.sample_every};
    const auto runs = evolve_ensemble(F, init, eo, &orbit, c_.threads);
    nlohmann::json rj = nlohmann::json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& r = runs[i];
      const double eps = dc.perturbations[i];
      const auto rep = conservation_report(r.trajectory);
      const std::string tag = "run " + std::to_string(i) + " (eps = " + fmt(eps) + ")";
      double md = 0.0;
      for (double x : rep.mass_drift) md = std::max(md, x);
      check(at_most(tag + " mass drift", md, 1e-10));
      check(at_most(tag + " energy drift", rep.energy_drift, dc.energy_tol));
      check(at_most(tag + " mass share near the box edge", rep.max_edge_fraction, dc.edge_tol));
      const double d0 = r.trajectory.front().orbital_distance;
      double mod_err = 0.0;
      if (eps == 0.0) {
        const Field m = r.final_state.modulus();
        for (std::size_t j = 0; j < m.components(); ++j)
          for (std::size_t k = 0; k < box.size(); ++k) mod_err = std::max(mod_err, std::abs(m[j][k] - gs.u[j][k]));
        check(at_most(tag + " standing-wave modulus error", mod_err, dc.modulus_tol));
      } else {
        check(at_most(tag + " sup orbital distance / initial", rep.max_orbital_distance / d0, dc.stability_factor));
      }
      note(tag + ": d(0) = " + fmt(d0) + ", sup d = " + fmt(rep.max_orbital_distance));
      std::ostringstream csv;
      write_trajectory_csv(csv, r.trajectory);
      write("trajectory_" + std::to_string(i) + ".csv", csv.str());
      rj.push_back({{"perturbation", eps},
                    {"mass_drift", rep.mass_drift},
                    {"energy_drift", rep.energy_drift},
                    {"max_edge_fraction", rep.max_edge_fraction},
                    {"initial_distance", d0},
                    {"max_distance", rep.max_orbital_distance},
                    {"modulus_error", mod_err}});
    }
    write("ground_state.csv", field_to_csv(gs.u));
    write_json("evolve.json", {{"lambda", gs.lambda}, {"energy", gs.radial.energy}, {"runs", rj}});
  }

  const ExperimentConfig& c_;
  std::filesystem::path dir_;
  RunOutcome out_;
};

}  // namespace detail

/// Execute one configured experiment; throws ConfigError or std::invalid_argument on bad input.
inline RunOutcome run(const ExperimentConfig& c) { return detail::Runner(c).run(); }

/// run() with every failure mapped to an exit code; messages go to `err`.
inline RunOutcome run_guarded(const ExperimentConfig& c, std::ostream& err) {
  try {
    return run(c);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return {kExitConfig, {}, {}, {}};
  } catch (const NonConvergenceError& e) {
    err << "non-convergence: " << e.what() << '\n';
    return {kExitNonConvergence, {}, {}, {}};
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return {kExitConfig, {}, {}, {}};
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return {kExitChecksFailed, {}, {}, {}};
  }
}

}  // namespace nlsgs
