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

// Certification of Charlie's joint measurement from CHSH values.
//
// Conditional CHSH "versions" are indexed by slot v = 0..3 (c = 1..4 in the
// external numbering):
//   v = 0:  E11 + E12 + E21 - E22
//   v = 1:  E11 + E12 - E21 + E22
//   v = 2:  -(version 1)
//   v = 3:  -(version 0)
// With the ideal settings, version v has Bell operator
// 2 sqrt2 (Phi_v - Phi_(3-v)).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swapcert/bell_decomposition.hpp"
#include "swapcert/measurements.hpp"
#include "swapcert/quantum_core.hpp"

namespace swapcert {

/// Radicands of the distance formulas below this are roundoff and read as 0.
inline constexpr double kRoundoff = 1e-14;

inline double sqrt_snapped(double x) { return x <= kRoundoff ? 0.0 : std::sqrt(x); }

/// Correlators E[x][y], x and y 0-based.
using Correlators = std::array<std::array<double, 2>, 2>;

inline double chsh_version(int version, const Correlators& e) {
  const double v0 = e[0][0] + e[0][1] + e[1][0] - e[1][1];
  const double v1 = e[0][0] + e[0][1] - e[1][0] + e[1][1];
  switch (version) {
    case 0: return v0;
    case 1: return v1;
    case 2: return -v1;
    case 3: return -v0;
    default: throw std::out_of_range("chsh_version: version must be 0..3");
  }
}

inline double chsh_value(const Correlators& e) { return chsh_version(0, e); }

/// Bell operator of version `version` for Alice's (A1, A2) and Bob's (B1, B2).
inline ComplexMatrix chsh_version_operator(int version, const ComplexMatrix& a1,
                                           const ComplexMatrix& a2, const ComplexMatrix& b1,
                                           const ComplexMatrix& b2) {
  switch (version) {
    case 0: return chsh_operator(a1, a2, b1, b2);
    case 1: return chsh_operator(a1, a2, b2, b1);
    case 2: return -chsh_operator(a1, a2, b2, b1);
    case 3: return -chsh_operator(a1, a2, b1, b2);
    default: throw std::out_of_range("chsh_version_operator: version must be 0..3");
  }
}

/// Row c holds the value of every version given outcome c; an empty row marks
/// an outcome with zero probability.
using VersionMatrix = std::array<std::optional<std::array<double, 4>>, 4>;

struct Relabeling {
  std::array<int, 4> slot_of_outcome{0, 1, 2, 3};
  std::array<std::optional<double>, 4> values;  // per slot

  std::array<int, 4> outcome_of_slot() const {
    std::array<int, 4> inv{};
    for (int c = 0; c < 4; ++c) inv[slot_of_outcome[c]] = c;
    return inv;
  }
};

/// Assigns outcomes to versions by maximizing the summed assigned value over
/// all 24 bijections. Ties go to the lexicographically first permutation.
/// Flagged outcomes take part in the permutation but contribute nothing and
/// leave their slot empty.
inline Relabeling relabel(const VersionMatrix& raw) {
  int usable = 0;
  for (const auto& row : raw) {
    if (!row) continue;
    ++usable;
    for (double v : *row) detail::require(std::isfinite(v), "relabel: non-finite value");
  }
  std::array<int, 4> perm{0, 1, 2, 3};
  std::array<int, 4> best = perm;
  double best_sum = -std::numeric_limits<double>::infinity();
  do {
    double sum = 0.0;
    for (int c = 0; c < 4; ++c)
      if (raw[c]) sum += (*raw[c])[perm[c]];
    if (sum > best_sum + 1e-12) {
      best_sum = sum;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  Relabeling out;
  out.slot_of_outcome = best;
  if (usable == 0) return out;
  for (int c = 0; c < 4; ++c)
    if (raw[c]) out.values[best[c]] = (*raw[c])[best[c]];
  return out;
}

enum class Criterion { kEntanglingOrEntangled, kEntangled };

inline const char* criterion_name(Criterion c) {
  return c == Criterion::kEntanglingOrEntangled ? "Crit1" : "Crit2";
}

/// Outcome of one certification criterion with its witness.
struct Verdict {
  Criterion criterion = Criterion::kEntanglingOrEntangled;
  bool passed = false;
  bool ac_hit = false;
  bool bc_hit = false;
  double ac_margin = 0.0;  // tol_ac - |S_AC - 2 sqrt2|, >= 0 on a hit
  double bc_margin = 0.0;
  std::optional<int> best_slot;  // slot of the largest conditional value
  double ab_max = 0.0;
  double ab_threshold = 0.0;
  double ab_margin = 0.0;        // ab_max - threshold, > 0 when violated
  double tol_ac = 0.0;
  double tol_bc = 0.0;
};

/// Independent tolerances for the two "S = 2 sqrt2" tests.
struct HitTolerance {
  double ac = kTolerance;
  double bc = kTolerance;
};

namespace detail {

inline Verdict evaluate(Criterion crit, double s_ac, double s_bc,
                        const std::array<std::optional<double>, 4>& s_ab, HitTolerance tol) {
  require(tol.ac >= 0.0 && tol.bc >= 0.0, "certify: tolerance must be non-negative");
  Verdict v;
  v.criterion = crit;
  v.tol_ac = tol.ac;
  v.tol_bc = tol.bc;
  v.ac_margin = tol.ac - std::abs(s_ac - kTsirelson);
  v.bc_margin = tol.bc - std::abs(s_bc - kTsirelson);
  v.ac_hit = v.ac_margin >= 0.0;
  v.bc_hit = v.bc_margin >= 0.0;
  v.ab_threshold = crit == Criterion::kEntanglingOrEntangled ? 2.0 : kSqrt2;
  for (int c = 0; c < 4; ++c) {
    if (s_ab[c] && (!v.best_slot || *s_ab[c] > v.ab_max)) {
      v.best_slot = c;
      v.ab_max = *s_ab[c];
    }
  }
  v.ab_margin = v.best_slot ? v.ab_max - v.ab_threshold : 0.0;
  const bool violated = v.best_slot && v.ab_margin > 0.0;
  const bool hits = crit == Criterion::kEntanglingOrEntangled ? (v.ac_hit || v.bc_hit)
                                                              : (v.ac_hit && v.bc_hit);
  v.passed = hits && violated;
  return v;
}

}  // namespace detail

/// (S_AC = 2 sqrt2 or S_BC = 2 sqrt2) and some S_AB|c > 2.
inline Verdict certify_crit1(double s_ac, double s_bc,
                             const std::array<std::optional<double>, 4>& s_ab, HitTolerance tol) {
  return detail::evaluate(Criterion::kEntanglingOrEntangled, s_ac, s_bc, s_ab, tol);
}

inline Verdict certify_crit1(double s_ac, double s_bc,
                             const std::array<std::optional<double>, 4>& s_ab,
                             double tol = kTolerance) {
  return certify_crit1(s_ac, s_bc, s_ab, HitTolerance{tol, tol});
}

/// S_AC = S_BC = 2 sqrt2 and some S_AB|c > sqrt2.
inline Verdict certify_crit2(double s_ac, double s_bc,
                             const std::array<std::optional<double>, 4>& s_ab, HitTolerance tol) {
  return detail::evaluate(Criterion::kEntangled, s_ac, s_bc, s_ab, tol);
}

inline Verdict certify_crit2(double s_ac, double s_bc,
                             const std::array<std::optional<double>, 4>& s_ab,
                             double tol = kTolerance) {
  return certify_crit2(s_ac, s_bc, s_ab, HitTolerance{tol, tol});
}

/// Eigenvector of a rank-1 projector.
inline ComplexVector rank_one_vector(const ComplexMatrix& p, double tol = 1e-8) {
  const EigenSystem es = eig_hermitian(p, tol);
  const auto n = es.values.size();
  detail::require(std::abs(es.values(n - 1) - 1.0) <= tol &&
                      (n < 2 || std::abs(es.values(n - 2)) <= tol),
                  "projector is not rank 1");
  return es.vectors.col(n - 1);
}

namespace detail {

inline std::array<ComplexVector, 4> eigenstates(const FourOutcomeMeasurement& meas) {
  require(meas.dims()[0] == 2 && meas.dims()[1] == 2, "measurement must act on 2 (x) 2");
  std::array<ComplexVector, 4> e;
  for (int c = 0; c < 4; ++c) e[c] = rank_one_vector(meas.projector(c));
  return e;
}

}  // namespace detail

/// max over slots c of sqrt(1 - |<e_c|Phi_c>|^2), where e_c is the eigenstate
/// of the outcome assigned to slot c.
inline double trace_distance(const FourOutcomeMeasurement& meas,
                             const std::array<int, 4>& slot_of_outcome = {0, 1, 2, 3}) {
  const auto e = detail::eigenstates(meas);
  const auto bell = bell_basis();
  double t = 0.0;
  for (int c = 0; c < 4; ++c) {
    const double ov = std::norm(e[c].dot(bell[slot_of_outcome[c]].vector()));
    t = std::max(t, sqrt_snapped(1.0 - ov));
  }
  return t;
}

/// Version matrix predicted from eigenstate overlaps on the ideal states:
/// value of version v given outcome c is
/// 2 sqrt2 (|<e_c|Phi_v>|^2 - |<e_c|Phi_(3-v)>|^2).
inline VersionMatrix overlap_version_matrix(const FourOutcomeMeasurement& meas) {
  const auto e = detail::eigenstates(meas);
  const auto bell = bell_basis();
  VersionMatrix out;
  for (int c = 0; c < 4; ++c) {
    std::array<double, 4> row{};
    for (int v = 0; v < 4; ++v) {
      row[v] = kTsirelson * (std::norm(e[c].dot(bell[v].vector())) -
                             std::norm(e[c].dot(bell[3 - v].vector())));
    }
    out[c] = row;
  }
  return out;
}

/// S_AB|c predicted from overlaps, each outcome in its own version.
inline std::array<double, 4> overlap_chsh(const FourOutcomeMeasurement& meas) {
  const VersionMatrix m = overlap_version_matrix(meas);
  std::array<double, 4> out{};
  for (int c = 0; c < 4; ++c) out[c] = (*m[c])[c];
  return out;
}

struct DistanceBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Two-sided bounds on the trace distance from relabeled conditional values:
/// lower = sqrt((1 - max S / 2 sqrt2) / 2), upper = sqrt(1 - min S / 2 sqrt2).
/// Values up to `tol` above 2 sqrt2 are clamped.
inline DistanceBounds distance_bounds(const std::array<std::optional<double>, 4>& s_ab,
                                      double tol = kTolerance) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < 4; ++c) {
    detail::require(s_ab[c].has_value(),
                    "distance_bounds: missing conditional value for outcome " +
                        std::to_string(c + 1));
    double s = *s_ab[c];
    detail::require(std::isfinite(s), "distance_bounds: non-finite value");
    detail::require(s <= kTsirelson + tol,
                    "distance_bounds: value exceeds 2 sqrt2 for outcome " + std::to_string(c + 1));
    s = std::min(s, kTsirelson);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  DistanceBounds b;
  b.lower = sqrt_snapped(0.5 * (1.0 - hi / kTsirelson));
  b.upper = std::min(1.0, sqrt_snapped(1.0 - lo / kTsirelson));
  b.lower = std::min(b.lower, b.upper);
  return b;
}

inline DistanceBounds distance_bounds(double common_value, double tol = kTolerance) {
  return distance_bounds({common_value, common_value, common_value, common_value}, tol);
}

/// Smallest common conditional value whose upper bound is <= t_target.
inline double threshold_for_distance(double t_target) {
  detail::require(t_target > 0.0 && t_target <= 1.0,
                  "threshold_for_distance: target must lie in (0, 1]");
  return kTsirelson * (1.0 - t_target * t_target);
}

struct CurveRow {
  double s = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// `steps` intervals between s_min and s_max, endpoints included.
inline std::vector<CurveRow> bounds_curve(double s_min, double s_max, int steps) {
  detail::require(0.0 <= s_min && s_min <= s_max && s_max <= kTsirelson + kTolerance,
                  "bounds_curve: need 0 <= s_min <= s_max <= 2 sqrt2");
  detail::require(steps >= 0, "bounds_curve: steps must be non-negative");
  detail::require(steps > 0 || s_min == s_max, "bounds_curve: steps = 0 needs s_min = s_max");
  std::vector<CurveRow> rows;
  for (int k = 0; k <= steps; ++k) {
    const double s = steps == 0 ? s_min : s_min + (s_max - s_min) * k / steps;
    const DistanceBounds b = distance_bounds(s);
    rows.push_back({s, b.lower, b.upper});
  }
  return rows;
}

}  // namespace swapcert
