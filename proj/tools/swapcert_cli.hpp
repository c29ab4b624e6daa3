// Copyright 2026 The swapcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command-line front end. Exit codes: 0 success / certification passed,
// 1 certification failed, 2 usage error, 3 validation or parse error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swapcert/swapcert.hpp"

namespace swapcert::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCertFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidation = 3;

/// Environment variable holding the default certification tolerance.
inline constexpr const char* kTolEnv = "SWAPCERT_TOL";

struct RunConfig {
  double tol = kTolerance;
  std::optional<double> tol_sigma;
  double v_ac = 1.0;
  double v_bc = 1.0;
  double theta = 0.0;
  double s_min = 2.0;
  double s_max = kTsirelson;
  int steps = 100;
  std::string input;
  std::string scenario;
  std::string settings;
  std::uint64_t n_per_setting = 0;
  std::uint64_t seed = 0;
  int restarts = 32;
  int iters = 1000;
  std::string format;
  std::string out;
};

inline double default_tolerance() {
  if (const char* env = std::getenv(kTolEnv)) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v >= 0.0) return v;
  }
  return kTolerance;
}

namespace detail {

inline Json bounds_or_error(const std::array<std::optional<double>, 4>& values, double tol) {
  try {
    return bounds_to_json(distance_bounds(values, tol));
  } catch (const ValidationError& e) {
    return {{"error", e.what()}};
  }
}

/// Report, both verdicts, distance bounds and (for rank-1 C3) the trace
/// distance of Charlie's joint measurement.
inline Json scenario_summary(const Scenario& sc, double tol, bool& both_passed) {
  const ChshReport r = chsh_report(sc);
  const Verdict v1 = certify_crit1(r.s_ac, r.s_bc, r.s_ab, tol);
  const Verdict v2 = certify_crit2(r.s_ac, r.s_bc, r.s_ab, tol);
  both_passed = v1.passed && v2.passed;
  Json j = {{"report", report_to_json(r)},
            {"verdicts", {verdict_to_json(v1), verdict_to_json(v2)}},
            {"bounds", bounds_or_error(r.s_ab, tol)}};
  try {
    j["trace_distance"] = round9(trace_distance(sc.charlie3(), r.relabeling.slot_of_outcome));
  } catch (const ValidationError&) {
    j["trace_distance"] = nullptr;
  }
  return j;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json read_json(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace detail

/// Parses argv and runs one subcommand, writing results to `out` (or to the
/// --out file) and diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.tol = default_tolerance();

  CLI::App app{"swapcert: CHSH certification of entangled measurements in entanglement swapping"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", cfg.out, "Write output to PATH instead of stdout");

  auto add_tol = [&](CLI::App* cmd) {
    cmd->add_option("--tol", cfg.tol, "Tolerance for S = 2 sqrt2 tests (default $SWAPCERT_TOL or 1e-9)")
        ->check(CLI::NonNegativeNumber);
  };
  auto add_noise = [&](CLI::App* cmd) {
    cmd->add_option("--v-ac", cfg.v_ac, "Werner visibility of the A-C_A pair")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--v-bc", cfg.v_bc, "Werner visibility of the B-C_B pair")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--theta", cfg.theta, "Rotation of C3 inside span{Phi+, Psi-} (radians)");
  };

  auto* ideal = app.add_subcommand("ideal", "Report and verdicts for the ideal four-qubit scenario");
  add_tol(ideal);
  ideal->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json"}));

  auto* noisy = app.add_subcommand("noisy", "Report and verdicts for a noisy scenario");
  add_tol(noisy);
  add_noise(noisy);
  noisy->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json"}));

  auto* curve = app.add_subcommand("bounds-curve", "Trace-distance bounds as a function of S");
  curve->add_option("--s-min", cfg.s_min, "Smallest S")->check(CLI::Range(0.0, kTsirelson));
  curve->add_option("--s-max", cfg.s_max, "Largest S")->check(CLI::Range(0.0, kTsirelson));
  curve->add_option("--steps", cfg.steps, "Number of intervals")->check(CLI::NonNegativeNumber);
  curve->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  auto* certify = app.add_subcommand("certify", "Certify from a counts CSV or a report JSON");
  certify->add_option("--input", cfg.input, "Counts CSV or report JSON")->required();
  add_tol(certify);
  certify->add_option("--tol-sigma", cfg.tol_sigma,
                      "Use K estimated standard errors as tolerance (counts input)")
      ->check(CLI::NonNegativeNumber);

  auto* decomp = app.add_subcommand("decompose", "Block decomposition of CHSH settings");
  decomp->add_option("--settings", cfg.settings, "Settings JSON {alice, bob}")->required();

  auto* sep = app.add_subcommand("sep-bound", "Separable bound: formula and see-saw oracle");
  sep->add_option("--settings", cfg.settings, "Settings JSON {alice, bob}")->required();
  sep->add_option("--restarts", cfg.restarts, "Oracle restarts")->check(CLI::PositiveNumber);
  sep->add_option("--iters", cfg.iters, "Oracle iterations per restart")->check(CLI::PositiveNumber);
  sep->add_option("--seed", cfg.seed, "Oracle seed")->required();

  auto* sample = app.add_subcommand("sample", "Sample outcome counts from a scenario");
  sample->add_option("--scenario", cfg.scenario, "Scenario JSON (default: noisy builder)");
  add_noise(sample);
  sample->add_option("--n", cfg.n_per_setting, "Samples per setting triple")
      ->required()
      ->check(CLI::PositiveNumber);
  sample->add_option("--seed", cfg.seed, "Sampling seed")->required();
  sample->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::ostringstream buf;
  int code = kExitOk;
  try {
    if (ideal->parsed() || noisy->parsed()) {
      const Scenario sc = ideal->parsed() ? ideal_scenario()
                                          : noisy_scenario(cfg.v_ac, cfg.v_bc, cfg.theta);
      bool both = false;
      buf << detail::scenario_summary(sc, cfg.tol, both).dump(2) << "\n";
      code = both ? kExitOk : kExitCertFail;
    } else if (curve->parsed()) {
      if (cfg.s_min > cfg.s_max) {
        err << "usage error: --s-min exceeds --s-max\n";
        return kExitUsage;
      }
      if (cfg.steps == 0 && cfg.s_min != cfg.s_max) {
        err << "usage error: --steps 0 needs --s-min equal to --s-max\n";
        return kExitUsage;
      }
      const auto rows = bounds_curve(cfg.s_min, cfg.s_max, cfg.steps);
      if (cfg.format == "json") {
        Json j = Json::array();
        for (const auto& r : rows)
          j.push_back({{"S", round9(r.s)}, {"lower", round9(r.lower)}, {"upper", round9(r.upper)}});
        buf << j.dump(2) << "\n";
      } else {
        write_curve_csv(buf, rows);
      }
    } else if (certify->parsed()) {
      const std::string text = detail::read_file(cfg.input);
      const auto first = text.find_first_not_of(" \t\r\n");
      ChshReport r;
      if (first != std::string::npos && text[first] == '{') {
        try {
          r = report_from_json(Json::parse(text));
        } catch (const Json::parse_error& e) {
          throw ParseError(cfg.input + ": " + e.what());
        }
      } else {
        std::istringstream in(text);
        r = estimate_report(read_counts_csv(in));
      }
      HitTolerance hit{cfg.tol, cfg.tol};
      double bound_tol = cfg.tol;
      if (cfg.tol_sigma) {
        if (!r.errors) {
          err << "usage error: --tol-sigma needs standard errors (counts input or report sigma)\n";
          return kExitUsage;
        }
        hit = {*cfg.tol_sigma * r.errors->s_ac, *cfg.tol_sigma * r.errors->s_bc};
        for (const auto& s : r.errors->s_ab)
          if (s) bound_tol = std::max(bound_tol, *cfg.tol_sigma * *s);
      }
      const Verdict v1 = certify_crit1(r.s_ac, r.s_bc, r.s_ab, hit);
      const Verdict v2 = certify_crit2(r.s_ac, r.s_bc, r.s_ab, hit);
      const Json j = {{"report", report_to_json(r)},
                      {"verdicts", {verdict_to_json(v1), verdict_to_json(v2)}},
                      {"bounds", detail::bounds_or_error(r.s_ab, bound_tol)}};
      buf << j.dump(2) << "\n";
      code = v1.passed ? kExitOk : kExitCertFail;
    } else if (decomp->parsed() || sep->parsed()) {
      const SettingsFile s = settings_from_json(detail::read_json(cfg.settings));
      std::optional<OracleOptions> oracle;
      if (sep->parsed()) oracle = OracleOptions{cfg.restarts, cfg.iters, cfg.seed};
      const Decomposition d = decompose(s.alice[0], s.alice[1], s.bob[0], s.bob[1], oracle);
      buf << decomposition_to_json(d).dump(2) << "\n";
    } else if (sample->parsed()) {
      const Scenario sc = cfg.scenario.empty()
                              ? noisy_scenario(cfg.v_ac, cfg.v_bc, cfg.theta)
                              : scenario_from_json(detail::read_json(cfg.scenario));
      const Counts counts = sample_counts(sc, cfg.n_per_setting, cfg.seed);
      if (cfg.format == "json") {
        buf << report_to_json(estimate_report(counts, Binning::of(sc))).dump(2) << "\n";
      } else {
        write_counts_csv(buf, counts);
      }
    }
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Json::exception& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }

  if (cfg.out.empty()) {
    out << buf.str();
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      err << "cannot write " << cfg.out << "\n";
      return kExitUsage;
    }
    f << buf.str();
  }
  return code;
}

}  // namespace swapcert::cli
