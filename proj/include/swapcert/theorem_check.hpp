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

#include <algorithm>
#include <cmath>
#include <limits>

#include "swapcert/bell_decomposition.hpp"
#include "swapcert/protocol.hpp"

namespace swapcert {

struct TheoremReport {
  double s_ac = 0.0;
  double s_bc = 0.0;
  double min_alpha = 0.0;     // over Alice-Bob block pairs
  bool c3_separable = false;  // every projector factors across C_A | C_B
  double max_value = -std::numeric_limits<double>::infinity();  // any version, any outcome
  bool bound_holds = false;   // max_value <= sqrt2 + tol
};

/// Checks the separable-measurement bound on a scenario that meets the
/// hypotheses: S_AC = S_BC = 2 sqrt2 and every Alice-Bob block pair has
/// maximal eigenvalue 2 sqrt2. Throws ValidationError if they fail. The
/// bound is evaluated for all four CHSH versions of every outcome; when C3
/// is not separable the values are still reported (control case).
inline TheoremReport theorem_check(const Scenario& sc, double tol = 1e-8) {
  TheoremReport r;
  r.s_ac = chsh_ac(sc);
  r.s_bc = chsh_bc(sc);
  detail::require(std::abs(r.s_ac - kTsirelson) <= tol && std::abs(r.s_bc - kTsirelson) <= tol,
                  "theorem_check: hypothesis S_AC = S_BC = 2 sqrt2 fails");
  const ObservableBlocks ab = jordan_blocks(sc.alice()[0], sc.alice()[1]);
  const ObservableBlocks bb = jordan_blocks(sc.bob()[0], sc.bob()[1]);
  const ChshBlockStructure st = block_chsh(ab, bb);
  r.min_alpha = std::numeric_limits<double>::infinity();
  for (const auto& p : st.pairs) r.min_alpha = std::min(r.min_alpha, p.alpha);
  detail::require(std::abs(r.min_alpha - kTsirelson) <= tol && st.max_alpha() <= kTsirelson + tol,
                  "theorem_check: some block pair has maximal eigenvalue other than 2 sqrt2");

  const Dims& d = sc.dims();
  r.c3_separable = true;
  for (const auto& p : sc.charlie3().projectors())
    if (operator_schmidt_rank(p, d[2], d[3], 1e-8) > 1) r.c3_separable = false;

  const VersionMatrix m = conditional_statistics(sc).version_matrix();
  for (const auto& row : m)
    if (row)
      for (double v : *row) r.max_value = std::max(r.max_value, v);
  r.bound_holds = r.max_value <= kSqrt2 + tol;
  return r;
}

}  // namespace swapcert
