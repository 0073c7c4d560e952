/*
 * Copyright 2026 The Springback Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "springback/experiment.hpp"

namespace springback {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(std::string_view section, std::string_view key, std::string_view value,
                            std::string_view expected) {
  throw std::invalid_argument(std::string(section) + "." + std::string(key) + ": expected " +
                              std::string(expected) + ", got '" + std::string(value) + "'");
}

double to_double(std::string_view section, std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(section, key, v, "a number");
  return out;
}

template <typename Int>
Int to_int(std::string_view section, std::string_view key, std::string_view v) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(section, key, v, "an integer");
  return out;
}

bool to_bool(std::string_view section, std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(section, key, v, "a boolean");
}

std::vector<std::string> split_list(std::string_view v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void assign(ExperimentSpec& spec, std::string_view section, std::string_view key, std::string_view raw) {
  const std::string value = trim(raw);
  const std::string_view v = value;
  auto num = [&] { return to_double(section, key, v); };
  auto count = [&] { return to_int<std::size_t>(section, key, v); };
  auto integer = [&] { return to_int<int>(section, key, v); };
  SolverOptions& o = spec.options;

  if (section == "experiment") {
    if (key == "name") spec.name = value;
    else if (key == "trials") spec.trials = integer();
    else if (key == "master_seed") spec.master_seed = to_int<std::uint64_t>(section, key, v);
    else if (key == "sweep") spec.sweep = parse_sweep_kind(v);
    else if (key == "values") {
      spec.sweep_values.clear();
      for (const auto& item : split_list(v)) spec.sweep_values.push_back(to_double(section, key, item));
    } else if (key == "solvers") {
      spec.solvers.clear();
      for (const auto& item : split_list(v)) spec.solvers.push_back(SolverEntry::parse(item));
    } else if (key == "snr_db") {
      if (v == "none" || v.empty()) spec.snr_db.reset();
      else spec.snr_db = num();
    } else if (key == "omega") spec.omega = num();
    else if (key == "cond_threshold") spec.cond_threshold = num();
    else if (key == "success_tol") spec.success_tol = num();
    else if (key == "acceptance") spec.acceptance = parse_acceptance_rule(v);
    else throw std::invalid_argument("unknown key experiment." + std::string(key));
  } else if (section == "ensemble") {
    if (key == "kind") spec.ensemble.kind = parse_ensemble_kind(v);
    else if (key == "m") spec.ensemble.m = count();
    else if (key == "n") spec.ensemble.n = count();
    else if (key == "refinement") spec.ensemble.refinement = integer();
    else if (key == "construction") spec.ensemble.construction = parse_dct_construction(v);
    else throw std::invalid_argument("unknown key ensemble." + std::string(key));
  } else if (section == "signal") {
    if (key == "sparsity") spec.sparsity = count();
    else if (key == "min_separation") spec.min_separation = count();
    else if (key == "separation_factor") spec.separation_factor = integer();
    else throw std::invalid_argument("unknown key signal." + std::string(key));
  } else if (section == "solver") {
    if (key == "alpha") o.alpha = num();
    else if (key == "rho") o.rho = num();
    else if (key == "zeta") o.zeta = num();
    else if (key == "inner_zeta") o.inner_zeta = num();
    else if (key == "eps_outer") o.eps_outer = num();
    else if (key == "eps_outer_noisy") spec.eps_outer_noisy = num();
    else if (key == "max_outer") o.max_outer = integer();
    else if (key == "eps_inner") o.eps_inner = num();
    else if (key == "max_inner") o.max_inner = integer();
    else if (key == "polish") o.polish = to_bool(section, key, v);
    else if (key == "reg_lambda") o.reg_lambda = num();
    else if (key == "admm_l1_max") o.admm_l1_max = integer();
    else if (key == "p") o.p = num();
    else if (key == "beta") o.beta = num();
    else if (key == "mu") {
      if (v == "auto") o.mu.reset();
      else o.mu = num();
    } else if (key == "irls_eps0") o.irls_eps0 = num();
    else if (key == "irls_eps_floor") o.irls_eps_floor = num();
    else if (key == "irls_tol") o.irls_tol = num();
    else if (key == "irls_max") o.irls_max = integer();
    else if (key == "aiht_max") o.aiht_max = integer();
    else if (key == "aiht_tol") o.aiht_tol = num();
    else throw std::invalid_argument("unknown key solver." + std::string(key));
  } else {
    throw std::invalid_argument("unknown section [" + std::string(section) + "]");
  }
}

}  // namespace

ExperimentSpec parse_config(std::istream& in, std::string_view origin) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string(origin) + ": " + e.message() + " (line " +
                                std::to_string(e.line()) + ")");
  }
  ExperimentSpec spec;
  try {
    for (const auto& [section, body] : tree) {
      if (body.empty() && !body.data().empty())
        throw std::invalid_argument("key '" + section + "' outside a section");
      for (const auto& [key, leaf] : body) assign(spec, section, key, leaf.data());
    }
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string(origin) + ": " + e.what());
  }
  return spec;
}

ExperimentSpec load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path.string() + "'");
  return parse_config(in, path.string());
}

void apply_override(ExperimentSpec& spec, std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq)
    throw std::invalid_argument("override '" + std::string(assignment) + "' is not section.key=value");
  assign(spec, trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
         assignment.substr(eq + 1));
}

void write_config(std::ostream& out, const ExperimentSpec& spec) {
  const SolverOptions& o = spec.options;
  out << "[experiment]\n";
  out << "name = " << spec.name << "\n";
  out << "trials = " << spec.trials << "\n";
  out << "master_seed = " << spec.master_seed << "\n";
  out << "sweep = " << to_string(spec.sweep) << "\n";
  out << "values =";
  for (double v : spec.sweep_values) out << ' ' << fmt(v);
  out << "\nsolvers =";
  for (const auto& e : spec.solvers) out << ' ' << e.label();
  out << "\nsnr_db = " << (spec.snr_db ? fmt(*spec.snr_db) : std::string("none")) << "\n";
  out << "omega = " << fmt(spec.omega) << "\n";
  out << "cond_threshold = " << fmt(spec.cond_threshold) << "\n";
  out << "success_tol = " << fmt(spec.success_tol) << "\n";
  out << "acceptance = " << to_string(spec.acceptance) << "\n\n";

  out << "[ensemble]\n";
  out << "kind = " << to_string(spec.ensemble.kind) << "\n";
  out << "m = " << spec.ensemble.m << "\n";
  out << "n = " << spec.ensemble.n << "\n";
  out << "refinement = " << spec.ensemble.refinement << "\n";
  out << "construction = " << to_string(spec.ensemble.construction) << "\n\n";

  out << "[signal]\n";
  out << "sparsity = " << spec.sparsity << "\n";
  out << "min_separation = " << spec.min_separation << "\n";
  out << "separation_factor = " << spec.separation_factor << "\n\n";

  out << "[solver]\n";
  out << "alpha = " << fmt(o.alpha) << "\n";
  out << "rho = " << fmt(o.rho) << "\n";
  out << "zeta = " << fmt(o.zeta) << "\n";
  out << "inner_zeta = " << fmt(o.inner_zeta) << "\n";
  out << "eps_outer = " << fmt(o.eps_outer) << "\n";
  out << "eps_outer_noisy = " << fmt(spec.eps_outer_noisy) << "\n";
  out << "max_outer = " << o.max_outer << "\n";
  out << "eps_inner = " << fmt(o.eps_inner) << "\n";
  out << "max_inner = " << o.max_inner << "\n";
  out << "polish = " << (o.polish ? "true" : "false") << "\n";
  out << "reg_lambda = " << fmt(o.reg_lambda) << "\n";
  out << "admm_l1_max = " << o.admm_l1_max << "\n";
  out << "p = " << fmt(o.p) << "\n";
  out << "beta = " << fmt(o.beta) << "\n";
  out << "mu = " << (o.mu ? fmt(*o.mu) : std::string("auto")) << "\n";
  out << "irls_eps0 = " << fmt(o.irls_eps0) << "\n";
  out << "irls_eps_floor = " << fmt(o.irls_eps_floor) << "\n";
  out << "irls_tol = " << fmt(o.irls_tol) << "\n";
  out << "irls_max = " << o.irls_max << "\n";
  out << "aiht_max = " << o.aiht_max << "\n";
  out << "aiht_tol = " << fmt(o.aiht_tol) << "\n";
}

}  // namespace springback
