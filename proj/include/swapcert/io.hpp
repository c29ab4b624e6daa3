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

// JSON and CSV exchange formats.
//
//   matrix:       {"rows": n, "cols": m, "data": [[re, im], ...]}  (row-major)
//   measurement:  {"dims": [dCA, dCB], "projectors": [matrix x4],
//                  "bit_for_A": [+-1 x4], "bit_for_B": [+-1 x4]}
//   scenario:     {"dims": [dA, dB, dCA, dCB], "state": matrix,
//                  "alice": [matrix, matrix], "bob": [matrix, matrix],
//                  "charlie": [measurement C1, measurement C2, measurement C3]}
//   counts (CSV): header x,y,z,a,b,c,count with x, y in {1,2}, z in {1,2,3},
//                 a, b in {1,-1}, c in {1..4}
//
// Outcome and setting indices are 1-based in every file. Reals are written
// with 9 significant digits.

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "swapcert/bell_decomposition.hpp"
#include "swapcert/certification.hpp"
#include "swapcert/measurements.hpp"
#include "swapcert/protocol.hpp"
#include "swapcert/quantum_core.hpp"

namespace swapcert {

using Json = nlohmann::json;

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

inline std::string format9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

/// v rounded to 9 significant digits.
inline double round9(double v) { return std::strtod(format9(v).c_str(), nullptr); }

inline Json json_optional(const std::optional<double>& v) {
  return v ? Json(round9(*v)) : Json(nullptr);
}

// --- matrices --------------------------------------------------------------

inline Json matrix_to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      data.push_back({round9(m(i, j).real()), round9(m(i, j).imag())});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

namespace detail {

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

}  // namespace detail

inline ComplexMatrix matrix_from_json(const Json& j, const std::string& where = "matrix") {
  const Json& rows = detail::field(j, "rows", where);
  const Json& cols = detail::field(j, "cols", where);
  const Json& data = detail::field(j, "data", where);
  if (!rows.is_number_integer() || !cols.is_number_integer() || rows.get<long>() < 1 ||
      cols.get<long>() < 1)
    throw ParseError(where + ": rows and cols must be positive integers");
  const auto r = rows.get<Eigen::Index>(), c = cols.get<Eigen::Index>();
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != r * c)
    throw ParseError(where + ": data must hold rows*cols entries");
  ComplexMatrix m(r, c);
  for (Eigen::Index k = 0; k < r * c; ++k) {
    const Json& e = data[static_cast<std::size_t>(k)];
    const std::string at = where + ".data[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 2) throw ParseError(at + ": expected [re, im]");
    const Complex z(detail::number(e[0], at), detail::number(e[1], at));
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ParseError(at + ": entry is not finite");
    m(k / c, k % c) = z;
  }
  return m;
}

// --- measurements ------------------------------------------------------------

inline Json measurement_to_json(const FourOutcomeMeasurement& m) {
  Json p = Json::array();
  for (const auto& proj : m.projectors()) p.push_back(matrix_to_json(proj));
  return {{"dims", {m.dims()[0], m.dims()[1]}}, {"projectors", p}};
}

inline Json measurement_to_json(const BinnedMeasurement& m) {
  Json j = measurement_to_json(m.base());
  j["bit_for_A"] = m.bit_for_a();
  j["bit_for_B"] = m.bit_for_b();
  return j;
}

inline FourOutcomeMeasurement measurement_from_json(const Json& j,
                                                    const std::string& where = "measurement") {
  const Json& p = detail::field(j, "projectors", where);
  if (!p.is_array() || p.size() != 4) throw ParseError(where + ": expected four projectors");
  std::array<ComplexMatrix, 4> proj;
  for (int c = 0; c < 4; ++c)
    proj[c] = matrix_from_json(p[c], where + ".projectors[" + std::to_string(c) + "]");
  std::array<int, 2> dims{};
  if (j.contains("dims")) {
    const Json& d = j.at("dims");
    if (!d.is_array() || d.size() != 2) throw ParseError(where + ": dims must have two entries");
    dims = {d[0].get<int>(), d[1].get<int>()};
  } else {
    const int side = static_cast<int>(proj[0].rows());
    const int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(side))));
    if (root * root != side) throw ParseError(where + ": dims required for non-square sides");
    dims = {root, root};
  }
  // files carry 9 significant digits, so projectivity is checked at 1e-8
  return FourOutcomeMeasurement(std::move(proj), dims, 1e-8);
}

inline BinnedMeasurement binned_from_json(const Json& j, const std::string& where) {
  auto bits = [&](const char* key) {
    const Json& b = detail::field(j, key, where);
    if (!b.is_array() || b.size() != 4) throw ParseError(where + ": " + key + " needs 4 entries");
    std::array<int, 4> out{};
    for (int c = 0; c < 4; ++c) out[c] = b[c].get<int>();
    return out;
  };
  return BinnedMeasurement(measurement_from_json(j, where), bits("bit_for_A"), bits("bit_for_B"));
}

// --- scenarios ---------------------------------------------------------------

inline Json scenario_to_json(const Scenario& sc) {
  return {{"dims", sc.dims()},
          {"state", matrix_to_json(sc.state().matrix())},
          {"alice", {matrix_to_json(sc.alice()[0].matrix()), matrix_to_json(sc.alice()[1].matrix())}},
          {"bob", {matrix_to_json(sc.bob()[0].matrix()), matrix_to_json(sc.bob()[1].matrix())}},
          {"charlie",
           {measurement_to_json(sc.charlie(0)), measurement_to_json(sc.charlie(1)),
            measurement_to_json(sc.charlie3())}}};
}

inline std::array<DichotomicObservable, 2> observable_pair_from_json(const Json& j,
                                                                    const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ParseError(where + ": expected two observables");
  return {DichotomicObservable(matrix_from_json(j[0], where + "[0]"), 1e-8),
          DichotomicObservable(matrix_from_json(j[1], where + "[1]"), 1e-8)};
}

inline Scenario scenario_from_json(const Json& j) {
  const Json& dims_j = detail::field(j, "dims", "scenario");
  if (!dims_j.is_array() || dims_j.size() != 4)
    throw ParseError("scenario: dims must list (dA, dB, dCA, dCB)");
  Dims dims = dims_j.get<Dims>();
  DensityMatrix state(matrix_from_json(detail::field(j, "state", "scenario"), "scenario.state"),
                      dims, 1e-8);
  const Json& ch = detail::field(j, "charlie", "scenario");
  if (!ch.is_array() || ch.size() != 3) throw ParseError("scenario: charlie needs C1, C2, C3");
  return Scenario(std::move(state),
                  observable_pair_from_json(detail::field(j, "alice", "scenario"), "scenario.alice"),
                  observable_pair_from_json(detail::field(j, "bob", "scenario"), "scenario.bob"),
                  binned_from_json(ch[0], "scenario.charlie[0]"),
                  binned_from_json(ch[1], "scenario.charlie[1]"),
                  measurement_from_json(ch[2], "scenario.charlie[2]"));
}

// --- reports, verdicts, bounds -------------------------------------------------

inline Json report_to_json(const ChshReport& r) {
  Json s_ab = Json::array(), probs = Json::array(), perm = Json::array();
  for (int c = 0; c < 4; ++c) {
    s_ab.push_back(json_optional(r.s_ab[c]));
    probs.push_back(round9(r.outcome_probs[c]));
    perm.push_back(r.relabeling.slot_of_outcome[c] + 1);
  }
  Json j = {{"S_AC", round9(r.s_ac)},
            {"S_BC", round9(r.s_bc)},
            {"S_AB_given_c", s_ab},
            {"outcome_probs", probs},
            {"relabeling", perm}};
  if (r.errors) {
    Json e_ab = Json::array();
    for (int c = 0; c < 4; ++c) e_ab.push_back(json_optional(r.errors->s_ab[c]));
    j["sigma"] = {{"S_AC", round9(r.errors->s_ac)},
                  {"S_BC", round9(r.errors->s_bc)},
                  {"S_AB_given_c", e_ab}};
  }
  return j;
}

/// Reads the fields certification needs; every conditional value must be
/// present.
inline ChshReport report_from_json(const Json& j) {
  ChshReport r;
  r.s_ac = detail::number(detail::field(j, "S_AC", "report"), "report.S_AC");
  r.s_bc = detail::number(detail::field(j, "S_BC", "report"), "report.S_BC");
  const Json& s = detail::field(j, "S_AB_given_c", "report");
  if (!s.is_array()) throw ParseError("report: S_AB_given_c must be an array");
  for (int c = 0; c < 4; ++c) {
    if (c >= static_cast<int>(s.size()) || s[c].is_null())
      throw ParseError("report: missing conditional CHSH value for outcome c=" +
                       std::to_string(c + 1));
    r.s_ab[c] = detail::number(s[c], "report.S_AB_given_c[" + std::to_string(c) + "]");
  }
  if (s.size() > 4) throw ParseError("report: S_AB_given_c has more than four entries");
  if (j.contains("outcome_probs")) {
    const Json& p = j.at("outcome_probs");
    for (int c = 0; c < 4 && c < static_cast<int>(p.size()); ++c)
      r.outcome_probs[c] = detail::number(p[c], "report.outcome_probs");
  }
  r.relabeling.values = r.s_ab;
  if (j.contains("sigma")) {
    const Json& e = j.at("sigma");
    ChshErrors err;
    err.s_ac = detail::number(detail::field(e, "S_AC", "report.sigma"), "report.sigma.S_AC");
    err.s_bc = detail::number(detail::field(e, "S_BC", "report.sigma"), "report.sigma.S_BC");
    if (e.contains("S_AB_given_c") && e.at("S_AB_given_c").is_array()) {
      const Json& es = e.at("S_AB_given_c");
      for (int c = 0; c < 4 && c < static_cast<int>(es.size()); ++c)
        if (!es[c].is_null()) err.s_ab[c] = detail::number(es[c], "report.sigma.S_AB_given_c");
    }
    r.errors = err;
  }
  return r;
}

inline Json verdict_to_json(const Verdict& v) {
  return {{"criterion", criterion_name(v.criterion)},
          {"passed", v.passed},
          {"S_AC_hit", v.ac_hit},
          {"S_BC_hit", v.bc_hit},
          {"S_AC_margin", round9(v.ac_margin)},
          {"S_BC_margin", round9(v.bc_margin)},
          {"violated_c", v.best_slot ? Json(*v.best_slot + 1) : Json(nullptr)},
          {"S_AB_max", round9(v.ab_max)},
          {"S_AB_threshold", round9(v.ab_threshold)},
          {"S_AB_margin", round9(v.ab_margin)},
          {"tol_AC", round9(v.tol_ac)},
          {"tol_BC", round9(v.tol_bc)}};
}

inline Json bounds_to_json(const DistanceBounds& b) {
  return {{"lower", round9(b.lower)}, {"upper", round9(b.upper)}};
}

inline void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& rows) {
  os << "S,lower,upper\n";
  for (const auto& r : rows)
    os << format9(r.s) << ',' << format9(r.lower) << ',' << format9(r.upper) << '\n';
}

// --- decompositions -------------------------------------------------------------

inline Json blocks_to_json(const ObservableBlocks& b) {
  Json out = Json::array();
  for (const auto& blk : b.blocks)
    out.push_back({{"basis", matrix_to_json(blk.basis)},
                   {"A0", matrix_to_json(blk.a0)},
                   {"A1", matrix_to_json(blk.a1)}});
  return out;
}

inline Json decomposition_to_json(const Decomposition& d) {
  Json alpha = Json::array();
  for (const auto& p : d.structure.pairs)
    alpha.push_back({{"i", p.i + 1}, {"j", p.j + 1}, {"dim", p.beta.rows()}, {"alpha", round9(p.alpha)}});
  Json j = {{"alice_blocks", blocks_to_json(d.alice)},
            {"bob_blocks", blocks_to_json(d.bob)},
            {"alpha", alpha},
            {"lambda", d.structure.has_lambda ? Json(round9(d.structure.lambda)) : Json(nullptr)},
            {"S_sep_formula", round9(d.bound.formula_value)}};
  if (d.bound.oracle_value) {
    j["S_sep_oracle"] = round9(*d.bound.oracle_value);
    j["oracle_state"] = matrix_to_json(ComplexMatrix(d.bound.oracle_state->vector()));
    j["oracle_state_dims"] = d.bound.oracle_state->dims();
  }
  return j;
}

/// Settings file for decompose/sep-bound: {"alice": [A0, A1], "bob": [B0, B1]}.
struct SettingsFile {
  std::array<DichotomicObservable, 2> alice;
  std::array<DichotomicObservable, 2> bob;
};

inline SettingsFile settings_from_json(const Json& j) {
  return {observable_pair_from_json(detail::field(j, "alice", "settings"), "settings.alice"),
          observable_pair_from_json(detail::field(j, "bob", "settings"), "settings.bob")};
}

inline Json settings_to_json(const SettingsFile& s) {
  return {{"alice", {matrix_to_json(s.alice[0].matrix()), matrix_to_json(s.alice[1].matrix())}},
          {"bob", {matrix_to_json(s.bob[0].matrix()), matrix_to_json(s.bob[1].matrix())}}};
}

// --- counts CSV -----------------------------------------------------------------

inline void write_counts_csv(std::ostream& os, const Counts& counts) {
  os << "x,y,z,a,b,c,count\n";
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 3; ++z)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 4; ++c)
              os << x + 1 << ',' << y + 1 << ',' << z + 1 << ',' << outcome_sign(a) << ','
                 << outcome_sign(b) << ',' << c + 1 << ','
                 << counts.at(x, y, z, JointDistribution::cell(a, b, c)) << '\n';
}

/// Rows may come in any order; repeated cells accumulate.
inline Counts read_counts_csv(std::istream& is) {
  Counts counts;
  std::string line;
  int line_no = 0;
  bool header = false;
  auto fail = [&](const std::string& what) {
    throw ParseError("counts CSV line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != "x,y,z,a,b,c,count") fail("expected header x,y,z,a,b,c,count");
      header = true;
      continue;
    }
    std::vector<long long> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      char* end = nullptr;
      const long long v = std::strtoll(tok.c_str(), &end, 10);
      if (tok.empty() || *end != '\0') fail("field \"" + tok + "\" is not an integer");
      f.push_back(v);
    }
    if (f.size() != 7) fail("expected 7 fields");
    if (f[0] < 1 || f[0] > 2 || f[1] < 1 || f[1] > 2) fail("x and y must be 1 or 2");
    if (f[2] < 1 || f[2] > 3) fail("z must be 1, 2 or 3");
    if ((f[3] != 1 && f[3] != -1) || (f[4] != 1 && f[4] != -1)) fail("a and b must be 1 or -1");
    if (f[5] < 1 || f[5] > 4) fail("c must be in 1..4");
    if (f[6] < 0) fail("count must be non-negative");
    const int a = f[3] == 1 ? 0 : 1, b = f[4] == 1 ? 0 : 1;
    counts.at(static_cast<int>(f[0] - 1), static_cast<int>(f[1] - 1), static_cast<int>(f[2] - 1),
              JointDistribution::cell(a, b, static_cast<int>(f[5] - 1))) +=
        static_cast<std::uint64_t>(f[6]);
  }
  if (!header) throw ParseError("counts CSV line 1: empty input");
  return counts;
}

}  // namespace swapcert
