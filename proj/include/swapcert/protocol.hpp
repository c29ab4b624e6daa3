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

// Three-party entanglement-swapping scenario: exact Born-rule statistics,
// CHSH values between each pair of parties, steered states, and a seeded
// finite-statistics layer.
//
// Settings x, y (Alice, Bob) are 0-based in {0, 1}; Charlie's setting z is in
// {0, 1, 2} where z = 2 is the joint measurement under test. Binary outcomes
// are indexed 0 for +1 and 1 for -1.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swapcert/certification.hpp"
#include "swapcert/measurements.hpp"
#include "swapcert/quantum_core.hpp"
#include "swapcert/random.hpp"

namespace swapcert {

/// Outcomes with probability below this are flagged instead of conditioned on.
inline constexpr double kZeroProbability = 1e-12;

inline constexpr int outcome_sign(int index) { return index == 0 ? 1 : -1; }

/// Full experiment on A (x) B (x) C_A (x) C_B.
class Scenario {
 public:
  Scenario(DensityMatrix state, std::array<DichotomicObservable, 2> alice,
           std::array<DichotomicObservable, 2> bob, BinnedMeasurement c1, BinnedMeasurement c2,
           FourOutcomeMeasurement c3)
      : state_(std::move(state)),
        alice_(std::move(alice)),
        bob_(std::move(bob)),
        charlie12_{std::move(c1), std::move(c2)},
        charlie3_(std::move(c3)) {
    const Dims& d = state_.dims();
    detail::require(d.size() == 4, "scenario state must have four subsystems (A, B, C_A, C_B)");
    for (const auto& a : alice_)
      detail::require(a.dim() == d[0], "Alice's observable does not match d_A");
    for (const auto& b : bob_)
      detail::require(b.dim() == d[1], "Bob's observable does not match d_B");
    const std::array<int, 2> dc{d[2], d[3]};
    for (const auto& c : charlie12_)
      detail::require(c.base().dims() == dc, "Charlie's C1/C2 do not match (d_CA, d_CB)");
    detail::require(charlie3_.dims() == dc, "Charlie's C3 does not match (d_CA, d_CB)");
  }

  const DensityMatrix& state() const { return state_; }
  const Dims& dims() const { return state_.dims(); }
  const std::array<DichotomicObservable, 2>& alice() const { return alice_; }
  const std::array<DichotomicObservable, 2>& bob() const { return bob_; }
  const BinnedMeasurement& charlie(int z) const { return charlie12_.at(z); }
  const FourOutcomeMeasurement& charlie3() const { return charlie3_; }

  /// Projector of Charlie's outcome c under setting z.
  const ComplexMatrix& charlie_projector(int z, int c) const {
    return z == 2 ? charlie3_.projector(c) : charlie12_.at(z).base().projector(c);
  }

  Scenario with_state(DensityMatrix state) const {
    return Scenario(std::move(state), alice_, bob_, charlie12_[0], charlie12_[1], charlie3_);
  }
  Scenario with_charlie3(FourOutcomeMeasurement c3) const {
    return Scenario(state_, alice_, bob_, charlie12_[0], charlie12_[1], std::move(c3));
  }
  Scenario with_alice(std::array<DichotomicObservable, 2> alice) const {
    return Scenario(state_, std::move(alice), bob_, charlie12_[0], charlie12_[1], charlie3_);
  }
  Scenario with_bob(std::array<DichotomicObservable, 2> bob) const {
    return Scenario(state_, alice_, std::move(bob), charlie12_[0], charlie12_[1], charlie3_);
  }

 private:
  DensityMatrix state_;
  std::array<DichotomicObservable, 2> alice_;
  std::array<DichotomicObservable, 2> bob_;
  std::array<BinnedMeasurement, 2> charlie12_;
  FourOutcomeMeasurement charlie3_;
};

/// p(a, b, c) for one setting triple; cell index 8a + 4b + c.
struct JointDistribution {
  std::array<double, 16> p{};

  static constexpr int cell(int a, int b, int c) { return 8 * a + 4 * b + c; }
  double operator()(int a, int b, int c) const { return p[cell(a, b, c)]; }
  double outcome_prob(int c) const {
    double s = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) s += (*this)(a, b, c);
    return s;
  }
  double total() const {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
  }
};

inline JointDistribution joint_distribution(const Scenario& sc, int x, int y, int z) {
  detail::require(x >= 0 && x < 2 && y >= 0 && y < 2 && z >= 0 && z < 3,
                  "joint_distribution: setting out of range");
  const Dims& d = sc.dims();
  const ComplexMatrix id_a = identity(d[0]);
  const ComplexMatrix id_b = identity(d[1]);
  const std::array<ComplexMatrix, 2> pa{0.5 * (id_a + sc.alice()[x].matrix()),
                                        0.5 * (id_a - sc.alice()[x].matrix())};
  const std::array<ComplexMatrix, 2> pb{0.5 * (id_b + sc.bob()[y].matrix()),
                                        0.5 * (id_b - sc.bob()[y].matrix())};
  JointDistribution out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const ComplexMatrix ab = tensor(pa[a], pb[b]);
      for (int c = 0; c < 4; ++c) {
        const double v = sc.state().expectation(tensor(ab, sc.charlie_projector(z, c)));
        out.p[JointDistribution::cell(a, b, c)] = std::max(0.0, v);
      }
    }
  }
  return out;
}

enum class Context { kAliceCharlie, kBobCharlie, kAliceBobGivenC };

struct CorrelationRecord {
  Correlators e{};
  Context context = Context::kAliceCharlie;
  int given_c = -1;  // outcome conditioned on, kAliceBobGivenC only
};

/// E_xz between Alice's outcome and Charlie's bit for Alice (Bob's setting 0).
inline CorrelationRecord correlation_ac(const Scenario& sc) {
  CorrelationRecord rec;
  rec.context = Context::kAliceCharlie;
  for (int x = 0; x < 2; ++x) {
    for (int z = 0; z < 2; ++z) {
      const JointDistribution jd = joint_distribution(sc, x, 0, z);
      const auto& bits = sc.charlie(z).bit_for_a();
      double e = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 4; ++c) e += outcome_sign(a) * bits[c] * jd(a, b, c);
      rec.e[x][z] = e;
    }
  }
  return rec;
}

/// E_yz between Bob's outcome and Charlie's bit for Bob (Alice's setting 0).
inline CorrelationRecord correlation_bc(const Scenario& sc) {
  CorrelationRecord rec;
  rec.context = Context::kBobCharlie;
  for (int y = 0; y < 2; ++y) {
    for (int z = 0; z < 2; ++z) {
      const JointDistribution jd = joint_distribution(sc, 0, y, z);
      const auto& bits = sc.charlie(z).bit_for_b();
      double e = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 4; ++c) e += outcome_sign(b) * bits[c] * jd(a, b, c);
      rec.e[y][z] = e;
    }
  }
  return rec;
}

inline double chsh_ac(const Scenario& sc) { return chsh_value(correlation_ac(sc).e); }
inline double chsh_bc(const Scenario& sc) { return chsh_value(correlation_bc(sc).e); }

struct ConditionalStatistics {
  std::array<std::optional<CorrelationRecord>, 4> correlators;  // per outcome
  std::array<double, 4> outcome_probs{};

  VersionMatrix version_matrix() const {
    VersionMatrix m;
    for (int c = 0; c < 4; ++c) {
      if (!correlators[c]) continue;
      std::array<double, 4> row{};
      for (int v = 0; v < 4; ++v) row[v] = chsh_version(v, correlators[c]->e);
      m[c] = row;
    }
    return m;
  }
};

/// E_xy|c from p(a, b | c) = p(a, b, c) / p(c) under Charlie's setting 2.
inline ConditionalStatistics conditional_statistics(const Scenario& sc) {
  std::array<JointDistribution, 4> jd;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) jd[2 * x + y] = joint_distribution(sc, x, y, 2);

  ConditionalStatistics out;
  for (int c = 0; c < 4; ++c) {
    out.outcome_probs[c] = jd[0].outcome_prob(c);
    if (out.outcome_probs[c] < kZeroProbability) continue;
    CorrelationRecord rec;
    rec.context = Context::kAliceBobGivenC;
    rec.given_c = c;
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        const JointDistribution& j = jd[2 * x + y];
        const double pc = j.outcome_prob(c);
        double e = 0.0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) e += outcome_sign(a) * outcome_sign(b) * j(a, b, c);
        rec.e[x][y] = e / pc;
      }
    }
    out.correlators[c] = rec;
  }
  return out;
}

struct ConditionalChsh {
  std::array<std::optional<double>, 4> values;  // version c given outcome c
  std::array<double, 4> outcome_probs{};
};

inline ConditionalChsh conditional_chsh_ab(const Scenario& sc) {
  const ConditionalStatistics st = conditional_statistics(sc);
  ConditionalChsh out;
  out.outcome_probs = st.outcome_probs;
  const VersionMatrix m = st.version_matrix();
  for (int c = 0; c < 4; ++c)
    if (m[c]) out.values[c] = (*m[c])[c];
  return out;
}

struct SteeredState {
  int outcome = 0;
  double prob = 0.0;
  DensityMatrix state;
};

/// Conditional states of A (x) B for each outcome of Charlie's setting 2.
inline std::vector<SteeredState> steered_states(const Scenario& sc) {
  const Dims& d = sc.dims();
  const ComplexMatrix id_ab = identity(d[0] * d[1]);
  const std::array<int, 2> keep{0, 1};
  std::vector<SteeredState> out;
  for (int c = 0; c < 4; ++c) {
    const ComplexMatrix lift = tensor(id_ab, sc.charlie3().projector(c));
    const ComplexMatrix post = lift * sc.state().matrix() * lift;
    const double p = post.trace().real();
    if (p < kZeroProbability) continue;
    ComplexMatrix reduced = partial_trace(post, d, keep) / p;
    reduced = 0.5 * (reduced + reduced.adjoint());
    out.push_back({c, p, DensityMatrix(std::move(reduced), {d[0], d[1]}, 1e-8)});
  }
  return out;
}

/// Standard errors attached to sampled reports.
struct ChshErrors {
  double s_ac = 0.0;
  double s_bc = 0.0;
  std::array<std::optional<double>, 4> s_ab;  // per slot
};

struct ChshReport {
  double s_ac = 0.0;
  double s_bc = 0.0;
  std::array<std::optional<double>, 4> s_ab;  // per slot, after relabeling
  std::array<double, 4> outcome_probs{};      // per raw outcome
  Relabeling relabeling;
  VersionMatrix raw;
  std::optional<ChshErrors> errors;
};

inline ChshReport chsh_report(const Scenario& sc) {
  ChshReport r;
  r.s_ac = chsh_ac(sc);
  r.s_bc = chsh_bc(sc);
  const ConditionalStatistics st = conditional_statistics(sc);
  r.outcome_probs = st.outcome_probs;
  r.raw = st.version_matrix();
  r.relabeling = relabel(r.raw);
  r.s_ab = r.relabeling.values;
  return r;
}

/// v |Phi+><Phi+| + (1 - v) I/4.
inline DensityMatrix werner_state(double v) {
  detail::require(v >= 0.0 && v <= 1.0, "Werner visibility must lie in [0, 1]");
  const ComplexMatrix phi = bell_basis()[0].projector();
  return DensityMatrix(v * phi + (1.0 - v) * identity(4) / 4.0, {2, 2});
}

/// Reorders rho_(A C_A) (x) rho_(B C_B) into the order (A, B, C_A, C_B).
inline DensityMatrix swap_pair_state(const DensityMatrix& rho_a_ca, const DensityMatrix& rho_b_cb) {
  const Dims& da = rho_a_ca.dims();
  const Dims& db = rho_b_cb.dims();
  detail::require(da.size() == 2 && db.size() == 2, "pair states must be bipartite");
  const int d_a = da[0], d_ca = da[1], d_b = db[0], d_cb = db[1];
  const ComplexMatrix joint = tensor(rho_a_ca.matrix(), rho_b_cb.matrix());  // A C_A B C_B
  const int n = d_a * d_ca * d_b * d_cb;
  auto index = [&](int a, int b, int ca, int cb) { return ((a * d_b + b) * d_ca + ca) * d_cb + cb; };
  auto source = [&](int a, int b, int ca, int cb) { return ((a * d_ca + ca) * d_b + b) * d_cb + cb; };
  std::vector<int> perm(n);
  for (int a = 0; a < d_a; ++a)
    for (int b = 0; b < d_b; ++b)
      for (int ca = 0; ca < d_ca; ++ca)
        for (int cb = 0; cb < d_cb; ++cb) perm[index(a, b, ca, cb)] = source(a, b, ca, cb);
  ComplexMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = joint(perm[i], perm[j]);
  return DensityMatrix(std::move(out), {d_a, d_b, d_ca, d_cb});
}

inline std::array<DichotomicObservable, 2> ideal_alice() {
  return {DichotomicObservable(pauli::Z()), DichotomicObservable(pauli::X())};
}

inline std::array<DichotomicObservable, 2> ideal_bob() {
  return {DichotomicObservable((pauli::Z() + pauli::X()) / kSqrt2),
          DichotomicObservable((pauli::Z() - pauli::X()) / kSqrt2)};
}

/// Werner pairs of visibility v_ac (A-C_A) and v_bc (B-C_B), Charlie's C3
/// rotated by theta inside span{Phi+, Psi-}.
inline Scenario noisy_scenario(double v_ac, double v_bc, double theta) {
  auto [c1, c2] = charlie_settings_ideal();
  return Scenario(swap_pair_state(werner_state(v_ac), werner_state(v_bc)), ideal_alice(),
                  ideal_bob(), std::move(c1), std::move(c2), perturbed_bell_measurement(theta, 1));
}

/// |Phi+>_(A C_A) (x) |Phi+>_(B C_B) with the four-qubit settings that reach
/// 2 sqrt2 in every test.
inline Scenario ideal_scenario() { return noisy_scenario(1.0, 1.0, 0.0); }

/// Counts over (x, y, z) and JointDistribution cells.
struct Counts {
  std::array<std::array<std::array<std::array<std::uint64_t, 16>, 3>, 2>, 2> cells{};

  std::uint64_t& at(int x, int y, int z, int cell) { return cells[x][y][z][cell]; }
  std::uint64_t at(int x, int y, int z, int cell) const { return cells[x][y][z][cell]; }
  std::uint64_t setting_total(int x, int y, int z) const {
    std::uint64_t s = 0;
    for (auto v : cells[x][y][z]) s += v;
    return s;
  }
  bool operator==(const Counts&) const = default;
};

inline int setting_index(int x, int y, int z) { return (x * 2 + y) * 3 + z; }

/// n i.i.d. draws per setting triple by inverse CDF over the 16 cells. Each
/// triple has its own stream seeded from (seed, triple index), so the result
/// does not depend on evaluation order.
inline Counts sample_counts(const Scenario& sc, std::uint64_t n_per_setting, std::uint64_t seed) {
  detail::require(n_per_setting >= 1, "sample_counts: n_per_setting must be >= 1");
  Counts out;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int z = 0; z < 3; ++z) {
        const JointDistribution jd = joint_distribution(sc, x, y, z);
        std::array<double, 16> cdf{};
        double acc = 0.0;
        for (int k = 0; k < 16; ++k) {
          acc += jd.p[k];
          cdf[k] = acc;
        }
        for (double& v : cdf) v /= acc;
        int last = 15;
        while (last > 0 && jd.p[last] <= 0.0) --last;
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(setting_index(x, y, z))));
        auto& cell = out.cells[x][y][z];
        for (std::uint64_t s = 0; s < n_per_setting; ++s) {
          const double u = rng.uniform();
          int k = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
          ++cell[std::min(k, last)];
        }
      }
    }
  }
  return out;
}

/// Bits of Charlie's C1/C2 outcomes; defaults to the product binning used by
/// charlie_settings_ideal.
struct Binning {
  std::array<std::array<int, 4>, 2> bit_for_a{{{1, 1, -1, -1}, {1, 1, -1, -1}}};
  std::array<std::array<int, 4>, 2> bit_for_b{{{1, -1, 1, -1}, {1, -1, 1, -1}}};

  static Binning of(const Scenario& sc) {
    Binning b;
    for (int z = 0; z < 2; ++z) {
      b.bit_for_a[z] = sc.charlie(z).bit_for_a();
      b.bit_for_b[z] = sc.charlie(z).bit_for_b();
    }
    return b;
  }
};

/// Plug-in estimates with standard errors from independent multinomials per
/// setting: var(E) = (1 - E^2) / n for each correlator, summed over the four
/// correlators of a CHSH expression.
inline ChshReport estimate_report(const Counts& counts, const Binning& binning = {}) {
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 3; ++z)
        detail::require(counts.setting_total(x, y, z) > 0,
                        "estimate_report: no counts for setting (x=" + std::to_string(x + 1) +
                            ", y=" + std::to_string(y + 1) + ", z=" + std::to_string(z + 1) + ")");

  ChshReport r;
  ChshErrors err;

  // AC and BC pool over the other party's setting.
  auto pair_chsh = [&](bool alice_side, double& sigma) {
    Correlators e{};
    double var = 0.0;
    for (int s = 0; s < 2; ++s) {
      for (int z = 0; z < 2; ++z) {
        const auto& bits = alice_side ? binning.bit_for_a[z] : binning.bit_for_b[z];
        double sum = 0.0, n = 0.0;
        for (int other = 0; other < 2; ++other) {
          const int x = alice_side ? s : other;
          const int y = alice_side ? other : s;
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              for (int c = 0; c < 4; ++c) {
                const double k = static_cast<double>(
                    counts.at(x, y, z, JointDistribution::cell(a, b, c)));
                const int party = alice_side ? outcome_sign(a) : outcome_sign(b);
                sum += party * bits[c] * k;
                n += k;
              }
        }
        e[s][z] = sum / n;
        var += (1.0 - e[s][z] * e[s][z]) / n;
      }
    }
    sigma = std::sqrt(var);
    return chsh_value(e);
  };
  r.s_ac = pair_chsh(true, err.s_ac);
  r.s_bc = pair_chsh(false, err.s_bc);

  double total3 = 0.0;
  std::array<double, 4> n_c{};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int cell = 0; cell < 16; ++cell) {
        const double k = static_cast<double>(counts.at(x, y, 2, cell));
        n_c[cell % 4] += k;
        total3 += k;
      }

  std::array<std::optional<double>, 4> raw_sigma;
  for (int c = 0; c < 4; ++c) {
    r.outcome_probs[c] = n_c[c] / total3;
    Correlators e{};
    double var = 0.0;
    bool usable = true;
    for (int x = 0; x < 2 && usable; ++x) {
      for (int y = 0; y < 2; ++y) {
        double sum = 0.0, n = 0.0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            const double k =
                static_cast<double>(counts.at(x, y, 2, JointDistribution::cell(a, b, c)));
            sum += outcome_sign(a) * outcome_sign(b) * k;
            n += k;
          }
        if (n == 0.0) {
          usable = false;
          break;
        }
        e[x][y] = sum / n;
        var += (1.0 - e[x][y] * e[x][y]) / n;
      }
    }
    if (!usable) continue;
    std::array<double, 4> row{};
    for (int v = 0; v < 4; ++v) row[v] = chsh_version(v, e);
    r.raw[c] = row;
    raw_sigma[c] = std::sqrt(var);
  }
  r.relabeling = relabel(r.raw);
  r.s_ab = r.relabeling.values;
  for (int c = 0; c < 4; ++c)
    if (raw_sigma[c]) err.s_ab[r.relabeling.slot_of_outcome[c]] = raw_sigma[c];
  r.errors = err;
  return r;
}

}  // namespace swapcert
