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

// Seeded instance generators: planted block observables, random projective
// measurements and direct-sum scenarios.

#include <array>
#include <utility>
#include <vector>

#include "swapcert/measurements.hpp"
#include "swapcert/protocol.hpp"
#include "swapcert/quantum_core.hpp"
#include "swapcert/random.hpp"

namespace swapcert {

inline ComplexMatrix direct_sum(const std::vector<ComplexMatrix>& parts) {
  Eigen::Index n = 0;
  for (const auto& p : parts) n += p.rows();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  Eigen::Index off = 0;
  for (const auto& p : parts) {
    out.block(off, off, p.rows(), p.cols()) = p;
    off += p.rows();
  }
  return out;
}

/// sum_i |ii> / sqrt(d).
inline PureState maximally_entangled(int d) {
  ComplexVector v = ComplexVector::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return PureState(std::move(v), {d, d});
}

/// Pair of +-1 observables built as a direct sum of `qubit_blocks` random
/// qubit pairs and `scalar_blocks` random +-1 scalars, then conjugated by a
/// Haar unitary.
inline std::pair<DichotomicObservable, DichotomicObservable> planted_observable_pair(
    Rng& rng, int qubit_blocks, int scalar_blocks) {
  std::vector<ComplexMatrix> m0, m1;
  for (int k = 0; k < qubit_blocks; ++k) {
    m0.push_back(qubit_observable(random_bloch(rng)).matrix());
    m1.push_back(qubit_observable(random_bloch(rng)).matrix());
  }
  for (int k = 0; k < scalar_blocks; ++k) {
    ComplexMatrix s0(1, 1), s1(1, 1);
    s0(0, 0) = rng.uniform() < 0.5 ? 1.0 : -1.0;
    s1(0, 0) = rng.uniform() < 0.5 ? 1.0 : -1.0;
    m0.push_back(s0);
    m1.push_back(s1);
  }
  const ComplexMatrix a0 = direct_sum(m0);
  const ComplexMatrix a1 = direct_sum(m1);
  const ComplexMatrix u = random_unitary(rng, static_cast<int>(a0.rows()));
  auto conj = [&](const ComplexMatrix& m) {
    ComplexMatrix r = u * m * u.adjoint();
    return ComplexMatrix(0.5 * (r + r.adjoint()));
  };
  return {DichotomicObservable(conj(a0)), DichotomicObservable(conj(a1))};
}

/// Rank-1 projective measurement onto a Haar-rotated Bell basis.
inline FourOutcomeMeasurement random_rank1_measurement(Rng& rng) {
  return FourOutcomeMeasurement::from_basis(random_unitary(rng, 4) * bell_basis_matrix());
}

/// Random two-outcome projective measurement with a rank-`rank` first outcome.
inline TwoOutcomeMeasurement random_two_outcome(Rng& rng, int d, int rank) {
  const ComplexMatrix u = random_unitary(rng, d);
  const ComplexMatrix first = u.leftCols(rank) * u.leftCols(rank).adjoint();
  return TwoOutcomeMeasurement({first, identity(d) - first}, 1e-8);
}

/// Product-projector measurement with random local projectors of random rank.
inline FourOutcomeMeasurement random_product_measurement(Rng& rng, int d_ca, int d_cb) {
  const int ra = 1 + static_cast<int>(rng.uniform() * (d_ca - 1));
  const int rb = 1 + static_cast<int>(rng.uniform() * (d_cb - 1));
  return product_measurement(random_two_outcome(rng, d_ca, ra),
                             random_two_outcome(rng, d_cb, rb));
}

/// Scenario with d = 2 * blocks per subsystem. Each party's settings are a
/// direct sum of copies of the ideal qubit settings, the pairs A-C_A and
/// B-C_B share maximally entangled states of dimension d, and a random local
/// unitary W on each party is compensated by conj(W) on Charlie's side, so
/// S_AC = S_BC = 2 sqrt2 holds exactly.
inline Scenario planted_direct_sum_scenario(Rng& rng, int blocks, FourOutcomeMeasurement c3) {
  const int d = 2 * blocks;
  auto repeat = [&](const ComplexMatrix& m) {
    return direct_sum(std::vector<ComplexMatrix>(static_cast<std::size_t>(blocks), m));
  };
  const ComplexMatrix wa = random_unitary(rng, d);
  const ComplexMatrix wb = random_unitary(rng, d);
  auto rot = [](const ComplexMatrix& w, const ComplexMatrix& m) {
    ComplexMatrix r = w * m * w.adjoint();
    return ComplexMatrix(0.5 * (r + r.adjoint()));
  };
  const ComplexMatrix z = pauli::Z(), x = pauli::X();
  const ComplexMatrix zx_p = (z + x) / kSqrt2, zx_m = (z - x) / kSqrt2;

  std::array<DichotomicObservable, 2> alice{DichotomicObservable(rot(wa, repeat(z))),
                                            DichotomicObservable(rot(wa, repeat(x)))};
  std::array<DichotomicObservable, 2> bob{DichotomicObservable(rot(wb, repeat(zx_p))),
                                          DichotomicObservable(rot(wb, repeat(zx_m)))};
  const ComplexMatrix wa_c = wa.conjugate(), wb_c = wb.conjugate();
  BinnedMeasurement c1 = binned_product(DichotomicObservable(rot(wa_c, repeat(zx_p))),
                                        DichotomicObservable(rot(wb_c, repeat(z))));
  BinnedMeasurement c2 = binned_product(DichotomicObservable(rot(wa_c, repeat(zx_m))),
                                        DichotomicObservable(rot(wb_c, repeat(x))));
  const DensityMatrix pair(maximally_entangled(d));
  return Scenario(swap_pair_state(pair, pair), std::move(alice), std::move(bob), std::move(c1),
                  std::move(c2), std::move(c3));
}

}  // namespace swapcert
