// SPDX-License-Identifier: Apache-2.0
//
// risalign - measurement-only phase alignment for RIS energy harvesting
// Copyright (C) 2026 risalign contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "risalign/config.hpp"

#include <yaml-cpp/yaml.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "risalign/errors.hpp"

namespace risalign {
namespace {

using Json = nlohmann::ordered_json;

const std::map<std::string, ExperimentKind>& experiment_names() {
  static const std::map<std::string, ExperimentKind> names{
      {"convergence", ExperimentKind::convergence},
      {"snr_sweep", ExperimentKind::snr_sweep},
      {"discrete", ExperimentKind::discrete},
      {"rmse", ExperimentKind::rmse},
      {"harvest", ExperimentKind::harvest},
  };
  return names;
}

const std::set<std::string>& common_keys() {
  static const std::set<std::string> k{"experiment", "trials", "seed", "output_dir", "format"};
  return k;
}

const std::set<std::string>& experiment_keys(ExperimentKind kind) {
  static const std::map<ExperimentKind, std::set<std::string>> k{
      {ExperimentKind::convergence,
       {"n_elements", "l", "phi", "sweeps", "random_sweeps", "snr_db", "grid_step", "random_initial_phases"}},
      {ExperimentKind::snr_sweep, {"n_elements", "l", "sweeps", "random_sweeps", "snr_db", "random_initial_phases"}},
      {ExperimentKind::discrete,
       {"n_elements", "omega", "probes", "sweeps", "random_sweeps", "snr_db", "grid_step"}},
      {ExperimentKind::rmse, {"phi", "snr_db", "magnitudes", "theta", "include_ml"}},
      {ExperimentKind::harvest, {"l", "phi", "sweeps", "random_sweeps", "snr_db", "geometry", "random_initial_phases"}},
  };
  return k.at(kind);
}

bool known_anywhere(const std::string& key) {
  if (common_keys().count(key)) return true;
  for (const auto& [name, kind] : experiment_names())
    if (experiment_keys(kind).count(key)) return true;
  return false;
}

int line_of(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  return m.line >= 0 ? m.line + 1 : 0;
}

// Reads scalars and lists, recording a diagnostic for every malformed value.
class Reader {
 public:
  explicit Reader(std::vector<Diagnostic>& out) : out_(out) {}

  void error(const std::string& field, const YAML::Node& node, const std::string& message) {
    out_.push_back({field, line_of(node), message});
  }

  std::optional<double> number(const YAML::Node& node, const std::string& field) {
    if (!node.IsScalar()) {
      error(field, node, "expected a number");
      return std::nullopt;
    }
    try {
      const double v = node.as<double>();
      if (std::isfinite(v)) return v;
    } catch (const YAML::Exception&) {
    }
    error(field, node, "expected a finite number, got '" + node.Scalar() + "'");
    return std::nullopt;
  }

  /// Number or an expression of the form [c][*]pi[/d].
  std::optional<double> phase(const YAML::Node& node, const std::string& field) {
    if (node.IsScalar()) {
      static const std::regex expr(R"(^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)?|[+-])\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$)");
      std::smatch m;
      const std::string s = node.Scalar();
      if (std::regex_match(s, m, expr)) {
        const std::string c = m[1].str();
        double coef = 1.0;
        if (c == "-") coef = -1.0;
        else if (!c.empty() && c != "+") coef = std::stod(c);
        double div = m[2].matched ? std::stod(m[2].str()) : 1.0;
        if (div != 0.0) return coef * kPi / div;
      }
    }
    return number(node, field);
  }

  std::optional<long long> integer(const YAML::Node& node, const std::string& field, long long min) {
    if (node.IsScalar()) {
      try {
        const long long v = node.as<long long>();
        if (v >= min) return v;
        error(field, node, field + " must be >= " + std::to_string(min) + ", got " + std::to_string(v));
        return std::nullopt;
      } catch (const YAML::Exception&) {
      }
    }
    error(field, node, "expected an integer");
    return std::nullopt;
  }

  std::optional<bool> boolean(const YAML::Node& node, const std::string& field) {
    if (node.IsScalar()) {
      try {
        return node.as<bool>();
      } catch (const YAML::Exception&) {
      }
    }
    error(field, node, "expected true or false");
    return std::nullopt;
  }

  std::optional<std::string> string(const YAML::Node& node, const std::string& field) {
    if (node.IsScalar()) return node.Scalar();
    error(field, node, "expected a string");
    return std::nullopt;
  }

  /// Scalar or sequence; applies `item` to each entry.
  template <typename T, typename Item>
  std::optional<std::vector<T>> list(const YAML::Node& node, const std::string& field, Item item,
                                     bool allow_scalar = true) {
    std::vector<T> v;
    bool ok = true;
    auto take = [&](const YAML::Node& n, const std::string& f) {
      auto x = item(n, f);
      if (x) v.push_back(static_cast<T>(*x));
      else ok = false;
    };
    if (node.IsSequence()) {
      for (std::size_t i = 0; i < node.size(); ++i) take(node[i], field + "[" + std::to_string(i) + "]");
    } else if (allow_scalar && node.IsScalar()) {
      take(node, field);
    } else {
      error(field, node, "expected a list");
      return std::nullopt;
    }
    if (!ok) return std::nullopt;
    return v;
  }

  std::optional<Snr> snr(const YAML::Node& node, const std::string& field) {
    if (node.IsScalar() && node.Scalar() == "noiseless") return Snr{};
    if (node.IsScalar()) {
      try {
        const double v = node.as<double>();
        if (std::isfinite(v)) return Snr{v};
      } catch (const YAML::Exception&) {
      }
    }
    error(field, node, "expected an SNR in dB or 'noiseless'");
    return std::nullopt;
  }

 private:
  std::vector<Diagnostic>& out_;
};

std::optional<Position> read_position(Reader& r, const YAML::Node& node, const std::string& field) {
  auto v = r.list<double>(node, field, [&](const YAML::Node& n, const std::string& f) { return r.number(n, f); },
                          false);
  if (!v) return std::nullopt;
  if (v->size() != 3) {
    r.error(field, node, "expected 3 coordinates");
    return std::nullopt;
  }
  return Position{(*v)[0], (*v)[1], (*v)[2]};
}

void read_geometry(Reader& r, const YAML::Node& node, ExperimentConfig& c) {
  if (!node.IsMap()) {
    r.error("geometry", node, "expected a mapping");
    return;
  }
  auto count = [&](const YAML::Node& n, const std::string& f) { return r.integer(n, f, 1); };
  for (const auto& kv : node) {
    const std::string key = kv.first.Scalar();
    const YAML::Node& v = kv.second;
    const std::string f = "geometry." + key;
    if (key == "wavelength") {
      if (auto x = r.number(v, f)) c.geometry.wavelength = *x;
    } else if (key == "grid_sides") {
      if (auto x = r.list<std::size_t>(v, f, count)) c.grid_sides = *x;
    } else if (key == "tx_position") {
      if (auto x = read_position(r, v, f)) c.geometry.tx_position = *x;
    } else if (key == "rx_position") {
      if (auto x = read_position(r, v, f)) c.geometry.rx_position = *x;
    } else if (key == "transmit_power") {
      if (auto x = r.number(v, f)) c.geometry.transmit_power = *x;
    } else if (key == "harvester") {
      if (!v.IsMap()) {
        r.error(f, v, "expected a mapping");
        continue;
      }
      for (const auto& hv : v) {
        const std::string hk = hv.first.Scalar();
        const std::string hf = f + "." + hk;
        double* target = hk == "a" ? &c.harvester.a : hk == "b" ? &c.harvester.b : hk == "p_sat" ? &c.harvester.p_sat : nullptr;
        if (target == nullptr) {
          r.error(hf, hv.first, "unknown key '" + hk + "'");
        } else if (auto x = r.number(hv.second, hf)) {
          *target = *x;
        }
      }
    } else {
      r.error(f, kv.first, "unknown key '" + key + "'");
    }
  }
}

void parse_into(const YAML::Node& root, ParseOutcome& out) {
  std::vector<Diagnostic>& diags = out.diagnostics;
  Reader r(diags);
  if (!root.IsMap()) {
    r.error("", root, "configuration must be a mapping of keys to values");
    return;
  }
  const YAML::Node exp = root["experiment"];
  if (!exp) {
    diags.push_back({"experiment", 0, "missing required field 'experiment'"});
    return;
  }
  const auto name = r.string(exp, "experiment");
  if (!name) return;
  const auto it = experiment_names().find(*name);
  if (it == experiment_names().end()) {
    r.error("experiment", exp, "unknown experiment '" + *name + "' (expected convergence, snr_sweep, discrete, rmse or harvest)");
    return;
  }
  const ExperimentKind kind = it->second;
  ExperimentConfig c = ExperimentConfig::defaults(kind);
  const auto& allowed = experiment_keys(kind);

  auto phase = [&](const YAML::Node& n, const std::string& f) { return r.phase(n, f); };
  auto number = [&](const YAML::Node& n, const std::string& f) { return r.number(n, f); };
  auto natural = [&](const YAML::Node& n, const std::string& f) { return r.integer(n, f, 0); };

  bool have_trials = false;
  bool have_l = false;
  for (const auto& kv : root) {
    const std::string key = kv.first.Scalar();
    const YAML::Node& v = kv.second;
    if (!common_keys().count(key) && !allowed.count(key)) {
      if (known_anywhere(key))
        r.error(key, kv.first, "key '" + key + "' is not used by experiment '" + *name + "'");
      else
        r.error(key, kv.first, "unknown key '" + key + "'");
      continue;
    }
    if (key == "experiment") {
      continue;
    } else if (key == "trials") {
      have_trials = true;
      if (auto x = r.integer(v, key, 1)) c.trials = static_cast<std::size_t>(*x);
    } else if (key == "seed") {
      if (auto x = r.integer(v, key, 0)) c.seed = static_cast<std::uint64_t>(*x);
    } else if (key == "output_dir") {
      if (auto x = r.string(v, key)) c.output_dir = *x;
    } else if (key == "format") {
      if (auto x = r.string(v, key)) {
        if (*x == "csv") c.format = OutputFormat::csv;
        else if (*x == "json") c.format = OutputFormat::json;
        else r.error(key, v, "format must be csv or json, got '" + *x + "'");
      }
    } else if (key == "n_elements") {
      if (auto x = natural(v, key)) c.n_elements = static_cast<std::size_t>(*x);
    } else if (key == "sweeps") {
      if (auto x = natural(v, key)) c.sweeps = static_cast<std::size_t>(*x);
    } else if (key == "random_sweeps") {
      if (auto x = natural(v, key)) c.random_sweeps = static_cast<std::size_t>(*x);
    } else if (key == "grid_step") {
      if (auto x = natural(v, key)) c.grid_step = static_cast<std::uint64_t>(*x);
    } else if (key == "l") {
      have_l = true;
      if (auto x = r.list<std::size_t>(v, key, natural)) c.l = *x;
    } else if (key == "phi") {
      if (auto x = r.list<double>(v, key, phase, false)) c.phi = *x;
    } else if (key == "snr_db") {
      if (auto x = r.list<Snr>(v, key, [&](const YAML::Node& n, const std::string& f) { return r.snr(n, f); }))
        c.snr_db = *x;
    } else if (key == "omega") {
      if (v.IsScalar() && v.Scalar().rfind("psk", 0) == 0) {
        try {
          const int order = std::stoi(v.Scalar().substr(3));
          if (order < 1) throw std::invalid_argument("order");
          c.omega.clear();
          for (int k = 0; k < order; ++k) c.omega.push_back(kTwoPi * k / order);
        } catch (const std::exception&) {
          r.error(key, v, "expected a list of phases or pskM, got '" + v.Scalar() + "'");
        }
      } else if (auto x = r.list<double>(v, key, phase, false)) {
        c.omega = *x;
      }
    } else if (key == "probes") {
      if (auto x = r.list<double>(v, key, phase, false)) c.probes = *x;
    } else if (key == "random_initial_phases") {
      if (auto x = r.boolean(v, key)) c.random_initial_phases = *x;
    } else if (key == "magnitudes") {
      if (auto x = r.list<double>(v, key, number)) c.magnitudes = *x;
    } else if (key == "theta") {
      if (auto x = r.list<double>(v, key, phase)) c.theta = *x;
    } else if (key == "include_ml") {
      if (auto x = r.boolean(v, key)) c.include_ml = *x;
    } else if (key == "geometry") {
      read_geometry(r, v, c);
    }
  }
  if (!have_trials) diags.push_back({"trials", 0, "missing required field 'trials'"});
  if (c.phi && (kind == ExperimentKind::convergence || kind == ExperimentKind::harvest)) {
    if (have_l && !(c.l.size() == 1 && c.l[0] == c.phi->size()))
      r.error("l", root["l"], "l must equal the number of phi entries when both are given");
    c.l = {c.phi->size()};
  }

  // semantic checks on whatever parsed; skip fields that already failed
  std::set<std::string> failed;
  for (const Diagnostic& d : diags) failed.insert(d.field.substr(0, d.field.find_first_of(".[")));
  for (Diagnostic d : validate_config(c)) {
    if (failed.count(d.field.substr(0, d.field.find_first_of(".[")))) continue;
    if (d.line == 0) {
      const std::string top = d.field.substr(0, d.field.find_first_of(".["));
      if (const YAML::Node n = root[top]) d.line = line_of(n);
    }
    diags.push_back(d);
  }
  if (diags.empty()) out.config = c;
}

void check_phase_list(std::vector<Diagnostic>& d, const std::vector<double>& v, const std::string& field) {
  for (double x : v)
    if (!std::isfinite(x)) d.push_back({field, 0, "phases must be finite"});
}

Json snr_json(const Snr& s) { return s ? Json(*s) : Json("noiseless"); }

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [name, k] : experiment_names())
    if (k == kind) return name;
  return "unknown";
}

ExperimentConfig ExperimentConfig::defaults(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment = kind;
  switch (kind) {
    case ExperimentKind::convergence: {
      const ConvergenceSpec s;
      c.n_elements = s.n_elements;
      c.l = {s.l};
      c.sweeps = s.sweeps;
      c.random_sweeps = s.random_sweeps;
      c.snr_db = s.snr_db;
      c.grid_step = s.grid_step;
      break;
    }
    case ExperimentKind::snr_sweep: {
      const SnrSweepSpec s;
      c.n_elements = s.n_elements;
      c.l = s.l_values;
      c.sweeps = s.sweeps;
      c.random_sweeps = s.random_sweeps;
      c.snr_db = s.snr_db;
      break;
    }
    case ExperimentKind::discrete: {
      const DiscreteSpec s;
      c.n_elements = s.n_elements;
      c.omega = s.omega;
      c.sweeps = s.sweeps;
      c.random_sweeps = s.random_sweeps;
      c.snr_db = {s.snr_db};
      c.grid_step = s.grid_step;
      break;
    }
    case ExperimentKind::rmse: {
      const RmseSpec s;
      c.phi = s.phi;
      c.magnitudes = s.magnitudes;
      c.theta = s.theta_grid();
      c.snr_db.assign(s.snr_db.begin(), s.snr_db.end());
      c.include_ml = s.include_ml;
      break;
    }
    case ExperimentKind::harvest: {
      const HarvestSpec s;
      c.grid_sides = s.grid_sides;
      c.snr_db = s.snr_db;
      c.l = {s.l};
      c.sweeps = s.sweeps;
      c.random_sweeps = s.random_sweeps;
      c.geometry = s.geometry;
      c.harvester = s.harvester;
      break;
    }
  }
  return c;
}

std::string format_diagnostic(const Diagnostic& d) {
  std::string s;
  if (d.line > 0) s += "line " + std::to_string(d.line) + ": ";
  if (!d.field.empty()) s += d.field + ": ";
  return s + d.message;
}

ParseOutcome parse_config(const std::string& text) {
  ParseOutcome out;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    out.diagnostics.push_back({"", e.mark.line >= 0 ? e.mark.line + 1 : 0, "syntax error: " + e.msg});
    return out;
  }
  if (root.IsMap() && root["config"] && root["config_dialect"]) {
    const YAML::Node dialect = root["config_dialect"];
    if (!dialect.IsScalar() || dialect.Scalar() != kConfigDialect) {
      out.diagnostics.push_back({"config_dialect", line_of(dialect),
                                 std::string("unsupported configuration dialect, expected ") + kConfigDialect});
      return out;
    }
    root = root["config"];
  }
  parse_into(root, out);
  return out;
}

ParseOutcome load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseOutcome out;
    out.diagnostics.push_back({"", 0, "cannot read '" + path + "'"});
    return out;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<Diagnostic> validate_config(const ExperimentConfig& c) {
  std::vector<Diagnostic> d;
  const ExperimentKind k = c.experiment;
  auto need = [&](bool ok, const std::string& field, const std::string& msg) {
    if (!ok) d.push_back({field, 0, msg});
  };
  need(c.trials >= 1, "trials", "trials >= 1 required");
  need(!c.output_dir.empty(), "output_dir", "output_dir must not be empty");
  need(!c.snr_db.empty(), "snr_db", "at least one SNR value required");

  if (k != ExperimentKind::rmse && k != ExperimentKind::harvest) need(c.n_elements >= 1, "n_elements", "N >= 1 required");
  if (k != ExperimentKind::rmse) {
    need(c.sweeps >= 1, "sweeps", "M >= 1 required");
    need(c.random_sweeps >= 1, "random_sweeps", "random_sweeps >= 1 required");
  }
  if (k == ExperimentKind::convergence || k == ExperimentKind::discrete) need(c.grid_step >= 1, "grid_step", "grid_step >= 1 required");

  if (k == ExperimentKind::convergence || k == ExperimentKind::snr_sweep || k == ExperimentKind::harvest) {
    need(!c.l.empty(), "l", "at least one L value required");
    for (std::size_t l : c.l) need(l >= 3, "l", "L ≥ 3 required (got " + std::to_string(l) + ")");
    if (k != ExperimentKind::snr_sweep) need(c.l.size() == 1, "l", "a single L value is expected");
  }

  if (c.phi && k != ExperimentKind::snr_sweep && k != ExperimentKind::discrete) {
    check_phase_list(d, *c.phi, "phi");
    if (c.phi->size() < 3) {
      d.push_back({"phi", 0, "L ≥ 3 required (phi has " + std::to_string(c.phi->size()) + " entries)"});
    } else {
      try {
        (void)pseudoinverse(build_design_matrix(MeasurementPhaseSet(*c.phi)));
      } catch (const std::exception&) {
        d.push_back({"phi", 0, "measurement phases do not give a rank-3 design matrix"});
      }
    }
  }

  if (k == ExperimentKind::rmse) {
    for (const Snr& s : c.snr_db) need(s.has_value(), "snr_db", "rmse needs numeric SNR values, 'noiseless' is not allowed");
    need(!c.magnitudes.empty(), "magnitudes", "at least one |z| value required");
    for (double m : c.magnitudes) need(m > 0.0, "magnitudes", "|z| must be positive");
    need(!c.theta.empty(), "theta", "at least one theta value required");
    check_phase_list(d, c.theta, "theta");
  }

  if (k == ExperimentKind::discrete) {
    check_phase_list(d, c.omega, "omega");
    need(c.omega.size() >= 3, "omega", "omega needs at least 3 phases");
    bool distinct = true;
    for (std::size_t i = 0; i < c.omega.size(); ++i)
      for (std::size_t j = i + 1; j < c.omega.size(); ++j)
        if (circular_distance(c.omega[i], c.omega[j]) <= 1e-12) distinct = false;
    need(distinct, "omega", "omega entries must be distinct modulo 2pi");
    if (c.omega.size() >= 3 && distinct) {
      const double log_size = static_cast<double>(c.n_elements) * std::log10(static_cast<double>(c.omega.size()));
      need(log_size <= 8.0 + 1e-12, "n_elements", "exhaustive search over |omega|^N exceeds 1e8 configurations");
      if (!c.probes)
        need(first_admissible_triple(DiscretePhaseSet(c.omega)).has_value(), "omega",
             "omega has no admissible probe triple");
    }
    if (c.probes) {
      if (c.probes->size() != 3) {
        d.push_back({"probes", 0, "exactly 3 probe phases required"});
      } else {
        bool inside = true;
        for (double p : *c.probes) {
          bool found = false;
          for (double w : c.omega) found = found || circular_distance(p, w) <= 1e-9;
          inside = inside && found;
        }
        need(inside, "probes", "probe phases must be members of omega");
        need(admissible_probe_triple((*c.probes)[0], (*c.probes)[1], (*c.probes)[2]), "probes",
             "probe triple is not admissible: sin(p1-p3)+sin(p2-p1)+sin(p3-p2) = 0");
      }
    }
  }

  if (k == ExperimentKind::harvest) {
    need(!c.grid_sides.empty(), "geometry.grid_sides", "at least one grid size required");
    need(c.harvester.a > 0.0, "geometry.harvester.a", "a > 0 required");
    need(c.harvester.b > 0.0, "geometry.harvester.b", "b > 0 required");
    need(c.harvester.p_sat > 0.0, "geometry.harvester.p_sat", "p_sat > 0 required");
    for (std::size_t side : c.grid_sides) {
      GeometryScenario g = c.geometry;
      g.rows = g.cols = side;
      try {
        g.validate();
      } catch (const GeometryError& e) {
        d.push_back({"geometry", 0, std::string(e.what()) + " (grid side " + std::to_string(side) + ")"});
        break;
      }
    }
  }
  return d;
}

std::string config_to_json(const ExperimentConfig& c) {
  Json j;
  const ExperimentKind k = c.experiment;
  j["experiment"] = to_string(k);
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["format"] = c.format == OutputFormat::csv ? "csv" : "json";
  Json snr = Json::array();
  for (const Snr& s : c.snr_db) snr.push_back(snr_json(s));
  j["snr_db"] = snr;
  if (k != ExperimentKind::rmse && k != ExperimentKind::harvest) j["n_elements"] = c.n_elements;
  if (k != ExperimentKind::rmse) {
    j["sweeps"] = c.sweeps;
    j["random_sweeps"] = c.random_sweeps;
  }
  if (k == ExperimentKind::convergence || k == ExperimentKind::snr_sweep || k == ExperimentKind::harvest) j["l"] = c.l;
  if (c.phi && k != ExperimentKind::snr_sweep && k != ExperimentKind::discrete) j["phi"] = *c.phi;
  if (k == ExperimentKind::convergence || k == ExperimentKind::discrete) j["grid_step"] = c.grid_step;
  if (k != ExperimentKind::rmse && k != ExperimentKind::discrete)
    j["random_initial_phases"] = c.random_initial_phases;
  if (k == ExperimentKind::discrete) {
    j["omega"] = c.omega;
    if (c.probes) j["probes"] = *c.probes;
  }
  if (k == ExperimentKind::rmse) {
    j["magnitudes"] = c.magnitudes;
    j["theta"] = c.theta;
    j["include_ml"] = c.include_ml;
  }
  if (k == ExperimentKind::harvest) {
    Json g;
    g["wavelength"] = c.geometry.wavelength;
    g["grid_sides"] = c.grid_sides;
    g["tx_position"] = c.geometry.tx_position;
    g["rx_position"] = c.geometry.rx_position;
    g["transmit_power"] = c.geometry.transmit_power;
    g["harvester"] = Json{{"a", c.harvester.a}, {"b", c.harvester.b}, {"p_sat", c.harvester.p_sat}};
    j["geometry"] = g;
  }
  return j.dump(2);
}

ExperimentOutput execute(const ExperimentConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentOutput out;
  switch (c.experiment) {
    case ExperimentKind::convergence: {
      ConvergenceSpec s;
      s.n_elements = c.n_elements;
      s.l = c.l.at(0);
      s.phi = c.phi;
      s.sweeps = c.sweeps;
      s.random_sweeps = c.random_sweeps;
      s.snr_db = c.snr_db;
      s.trials = c.trials;
      s.seed = c.seed;
      s.grid_step = c.grid_step;
      s.random_initial_phases = c.random_initial_phases;
      out.table = convergence_table(s, convergence_experiment(s));
      break;
    }
    case ExperimentKind::snr_sweep: {
      SnrSweepSpec s;
      s.n_elements = c.n_elements;
      s.l_values = c.l;
      s.snr_db = c.snr_db;
      s.sweeps = c.sweeps;
      s.random_sweeps = c.random_sweeps;
      s.trials = c.trials;
      s.seed = c.seed;
      s.random_initial_phases = c.random_initial_phases;
      out.table = snr_sweep_table(s, snr_sweep(s));
      break;
    }
    case ExperimentKind::discrete: {
      for (const Snr& snr : c.snr_db) {
        DiscreteSpec s;
        s.n_elements = c.n_elements;
        s.omega = c.omega;
        if (c.probes) {
          const DiscretePhaseSet set(c.omega);
          std::array<std::size_t, 3> idx{};
          for (std::size_t i = 0; i < 3; ++i) idx[i] = *set.index_of((*c.probes)[i], 1e-9);
          s.probes = idx;
        }
        s.snr_db = snr;
        s.sweeps = c.sweeps;
        s.random_sweeps = c.random_sweeps;
        s.trials = c.trials;
        s.seed = c.seed;
        s.grid_step = c.grid_step;
        Table t = discrete_table(s, discrete_experiment(s));
        out.table.insert(out.table.end(), t.begin(), t.end());
      }
      break;
    }
    case ExperimentKind::rmse: {
      RmseSpec s;
      s.theta = c.theta;
      s.magnitudes = c.magnitudes;
      s.snr_db.clear();
      for (const Snr& v : c.snr_db) s.snr_db.push_back(v.value());
      s.phi = c.phi.value_or(RmseSpec{}.phi);
      s.trials = c.trials;
      s.seed = c.seed;
      s.include_ml = c.include_ml;
      out.table = rmse_table(s, rmse_study(s));
      break;
    }
    case ExperimentKind::harvest: {
      HarvestSpec s;
      s.grid_sides = c.grid_sides;
      s.snr_db = c.snr_db;
      s.l = c.l.at(0);
      s.phi = c.phi;
      s.sweeps = c.sweeps;
      s.random_sweeps = c.random_sweeps;
      s.trials = c.trials;
      s.seed = c.seed;
      s.geometry = c.geometry;
      s.harvester = c.harvester;
      s.random_initial_phases = c.random_initial_phases;
      out.table = harvest_table(s, harvest_experiment(s));
      break;
    }
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string table_to_csv(const Table& table) {
  std::string s = "experiment,method,n,l,snr_db,measurements,mnap,ci95,extra\n";
  for (const TableRow& r : table) {
    s += r.experiment + ',' + r.method + ',';
    if (r.n) s += std::to_string(*r.n);
    s += ',';
    if (r.l) s += std::to_string(*r.l);
    s += ',';
    s += r.snr_db ? format_number(*r.snr_db) : std::string("noiseless");
    s += ',';
    if (r.measurements) s += std::to_string(*r.measurements);
    s += ',' + format_number(r.value) + ',';
    if (r.ci95) s += format_number(*r.ci95);
    s += ',';
    if (r.extra.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char ch : r.extra) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      s += q + '"';
    } else {
      s += r.extra;
    }
    s += '\n';
  }
  return s;
}

std::string table_to_json(const Table& table) {
  Json rows = Json::array();
  for (const TableRow& r : table) {
    Json j;
    j["experiment"] = r.experiment;
    j["method"] = r.method;
    j["n"] = r.n ? Json(*r.n) : Json(nullptr);
    j["l"] = r.l ? Json(*r.l) : Json(nullptr);
    j["snr_db"] = snr_json(r.snr_db);
    j["measurements"] = r.measurements ? Json(*r.measurements) : Json(nullptr);
    j["mnap"] = r.value;
    j["ci95"] = r.ci95 ? Json(*r.ci95) : Json(nullptr);
    j["extra"] = r.extra;
    rows.push_back(j);
  }
  return rows.dump(1) + "\n";
}

}  // namespace risalign
