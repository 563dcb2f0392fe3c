#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "field_io.hpp"
#include "grid.hpp"
#include "nonlinearity.hpp"
#include "nonlinearity_io.hpp"
#include "solver.hpp"

namespace nlsgs {

/// Any problem with a configuration: syntax, unknown keys, missing or invalid values.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s{"gn-const", "minimize", "scan-m", "subadd",
                                          "rearrange-test", "eta-limits", "evolve", "verify"};
  return s;
}

struct SolverConfig {
  std::string init = "trial";
  std::string symmetry = "none";
  int max_iter = 5000;
  double tol = 1e-7;
  int rearrange_every = 0;
  int starts = 1;
  bool force = false;
  double sat_tol = 1e-6;
  bool operator==(const SolverConfig&) const = default;
};

struct ExpectConfig {
  std::optional<double> energy;
  double energy_rel_tol = 1e-4;
  std::vector<double> lambda;
  double lambda_tol = 1e-3;
  bool operator==(const ExpectConfig&) const = default;
};

struct DynamicsConfig {
  double box_length = 80.0;
  std::size_t n_points = 1024;
  double dt = 1e-3;
  double T = 10.0;
  std::size_t sample_every = 100;
  std::vector<double> perturbations{0.0};
  std::size_t refine = 8;
  double energy_tol = 1e-4;
  double modulus_tol = 1e-4;
  double stability_factor = 5.0;
  double edge_tol = 1e-3;
  bool operator==(const DynamicsConfig&) const = default;
};

struct ExperimentConfig {
  std::string command;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out = "out";
  std::optional<int> N;
  std::optional<nlohmann::json> nonlinearity;
  std::vector<double> mass;
  std::optional<nlohmann::json> domain;
  SolverConfig solver;
  ExpectConfig expect;
  std::vector<std::vector<double>> scan_masses;
  std::vector<double> subadd_b;
  std::vector<double> subadd_scales{1.5, 2.0};
  std::size_t rearrange_cases = 200;
  DynamicsConfig dynamics;
  std::string verify_field;
  bool verify_strict = false;
  double pohozaev_tol = 5e-3;

  bool operator==(const ExperimentConfig&) const = default;

  Nonlinearity make_nonlinearity() const {
    if (!nonlinearity) throw ConfigError("'" + command + "' needs a \"nonlinearity\" section");
    return nonlinearity_from_json(*nonlinearity);
  }
  Domain make_domain() const {
    if (!domain) throw ConfigError("'" + command + "' needs a \"domain\" section");
    return domain_from_json(*domain);
  }
  MassSpec make_mass() const {
    if (mass.empty()) throw ConfigError("'" + command + "' needs \"mass\"");
    return MassSpec(mass);
  }
  MinimizeOptions make_solver_options() const {
    MinimizeOptions o;
    o.init = init_from_string(solver.init);
    o.symmetry = symmetry_from_string(solver.symmetry);
    o.max_iter = solver.max_iter;
    o.tol = solver.tol;
    o.rearrange_every = solver.rearrange_every;
    o.starts = solver.starts;
    o.seed = seed;
    o.force = solver.force;
    o.sat_tol = solver.sat_tol;
    return o;
  }
};

namespace detail {

template <class T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["command"] = c.command;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["out"] = c.out;
  if (c.N) j["N"] = *c.N;
  if (c.nonlinearity) j["nonlinearity"] = *c.nonlinearity;
  if (!c.mass.empty()) j["mass"] = c.mass;
  if (c.domain) j["domain"] = *c.domain;
  j["solver"] = {{"init", c.solver.init},           {"symmetry", c.solver.symmetry},
                 {"max_iter", c.solver.max_iter},   {"tol", c.solver.tol},
                 {"rearrange_every", c.solver.rearrange_every}, {"starts", c.solver.starts},
                 {"force", c.solver.force},         {"sat_tol", c.solver.sat_tol}};
  nlohmann::json ex = {{"energy_rel_tol", c.expect.energy_rel_tol}, {"lambda_tol", c.expect.lambda_tol}};
  if (c.expect.energy) ex["energy"] = *c.expect.energy;
  if (!c.expect.lambda.empty()) ex["lambda"] = c.expect.lambda;
  j["expect"] = ex;
  j["scan"] = {{"masses", c.scan_masses}};
  j["subadd"] = {{"b", c.subadd_b}, {"scales", c.subadd_scales}};
  j["rearrange"] = {{"cases", c.rearrange_cases}};
  const auto& d = c.dynamics;
  j["dynamics"] = {{"box_length", d.box_length},   {"n_points", d.n_points},     {"dt", d.dt},
                   {"T", d.T},                     {"sample_every", d.sample_every},
                   {"perturbations", d.perturbations}, {"refine", d.refine},   {"energy_tol", d.energy_tol},
                   {"modulus_tol", d.modulus_tol}, {"stability_factor", d.stability_factor},
                   {"edge_tol", d.edge_tol}};
  j["verify"] = {{"field", c.verify_field}, {"strict", c.verify_strict}, {"pohozaev_tol", c.pohozaev_tol}};
  return j;
}

/// Build a config from parsed JSON; every nested object rejects unknown keys.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  try {
    detail::reject_unknown_keys(j, {"command", "seed", "threads", "out", "N", "nonlinearity", "mass", "domain",
                                    "solver", "expect", "scan", "subadd", "rearrange", "dynamics", "verify"},
                                "config");
    ExperimentConfig c;
    detail::read_opt(j, "command", c.command);
    detail::read_opt(j, "seed", c.seed);
    detail::read_opt(j, "threads", c.threads);
    detail::read_opt(j, "out", c.out);
    if (j.contains("N")) c.N = j.at("N").get<int>();
    if (j.contains("nonlinearity")) {
      nonlinearity_from_json(j.at("nonlinearity"));
      c.nonlinearity = j.at("nonlinearity");
    }
    detail::read_opt(j, "mass", c.mass);
    if (j.contains("domain")) {
      domain_from_json(j.at("domain"));
      c.domain = j.at("domain");
    }
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      detail::reject_unknown_keys(s, {"init", "symmetry", "max_iter", "tol", "rearrange_every", "starts", "force",
                                      "sat_tol"},
                                  "solver");
      detail::read_opt(s, "init", c.solver.init);
      detail::read_opt(s, "symmetry", c.solver.symmetry);
      detail::read_opt(s, "max_iter", c.solver.max_iter);
      detail::read_opt(s, "tol", c.solver.tol);
      detail::read_opt(s, "rearrange_every", c.solver.rearrange_every);
      detail::read_opt(s, "starts", c.solver.starts);
      detail::read_opt(s, "force", c.solver.force);
      detail::read_opt(s, "sat_tol", c.solver.sat_tol);
      init_from_string(c.solver.init);
      symmetry_from_string(c.solver.symmetry);
    }
    if (j.contains("expect")) {
      const auto& e = j.at("expect");
      detail::reject_unknown_keys(e, {"energy", "energy_rel_tol", "lambda", "lambda_tol"}, "expect");
      if (e.contains("energy")) c.expect.energy = e.at("energy").get<double>();
      detail::read_opt(e, "energy_rel_tol", c.expect.energy_rel_tol);
      detail::read_opt(e, "lambda", c.expect.lambda);
      detail::read_opt(e, "lambda_tol", c.expect.lambda_tol);
    }
    if (j.contains("scan")) {
      detail::reject_unknown_keys(j.at("scan"), {"masses"}, "scan");
      detail::read_opt(j.at("scan"), "masses", c.scan_masses);
    }
    if (j.contains("subadd")) {
      detail::reject_unknown_keys(j.at("subadd"), {"b", "scales"}, "subadd");
      detail::read_opt(j.at("subadd"), "b", c.subadd_b);
      detail::read_opt(j.at("subadd"), "scales", c.subadd_scales);
    }
    if (j.contains("rearrange")) {
      detail::reject_unknown_keys(j.at("rearrange"), {"cases"}, "rearrange");
      detail::read_opt(j.at("rearrange"), "cases", c.rearrange_cases);
    }
    if (j.contains("dynamics")) {
      const auto& d = j.at("dynamics");
      detail::reject_unknown_keys(d, {"box_length", "n_points", "dt", "T", "sample_every", "perturbations", "refine",
                                      "energy_tol", "modulus_tol", "stability_factor", "edge_tol"},
                                  "dynamics");
      auto& o = c.dynamics;
      detail::read_opt(d, "box_length", o.box_length);
      detail::read_opt(d, "n_points", o.n_points);
      detail::read_opt(d, "dt", o.dt);
      detail::read_opt(d, "T", o.T);
      detail::read_opt(d, "sample_every", o.sample_every);
      detail::read_opt(d, "perturbations", o.perturbations);
      detail::read_opt(d, "refine", o.refine);
      detail::read_opt(d, "energy_tol", o.energy_tol);
      detail::read_opt(d, "modulus_tol", o.modulus_tol);
      detail::read_opt(d, "stability_factor", o.stability_factor);
      detail::read_opt(d, "edge_tol", o.edge_tol);
      if (!(o.dt > 0.0)) throw ConfigError("dynamics: dt must be positive");
      if (!(o.T >= 0.0)) throw ConfigError("dynamics: T must be nonnegative");
      if (o.sample_every == 0 || o.refine == 0) throw ConfigError("dynamics: sample_every and refine must be positive");
      if (o.perturbations.empty()) throw ConfigError("dynamics: perturbations must not be empty");
    }
    if (j.contains("verify")) {
      const auto& v = j.at("verify");
      detail::reject_unknown_keys(v, {"field", "strict", "pohozaev_tol"}, "verify");
      detail::read_opt(v, "field", c.verify_field);
      detail::read_opt(v, "strict", c.verify_strict);
      detail::read_opt(v, "pohozaev_tol", c.pohozaev_tol);
    }
    if (!c.command.empty()) {
      bool known = false;
      for (const auto& s : subcommands()) known = known || s == c.command;
      if (!known) throw ConfigError("unknown command '" + c.command + "'");
    }
    for (double a : c.mass)
      if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("mass entries must be finite and nonnegative");
    if (c.threads == 0) throw ConfigError("threads must be positive");
    return c;
  } catch (const ConfigError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

/// Parse JSON text; syntax errors carry line, column and byte offset.
inline ExperimentConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string(e.what()) + " (byte " + std::to_string(e.byte) + ")");
  }
  return config_from_json(j);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace nlsgs
