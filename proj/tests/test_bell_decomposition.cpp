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


#include "swapcert/bell_decomposition.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "oracles.hpp"
#include "swapcert/instances.hpp"
#include "swapcert/theorem_check.hpp"

using namespace swapcert;

namespace {

constexpr double kT = 2 * std::numbers::sqrt2;

double bloch_sin(const std::array<double, 3>& u, const std::array<double, 3>& v) {
  const double c = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

}  // namespace

TEST(ChshOperator, MatchesKroneckerExpansion) {
  Rng rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix a0 = random_pm1_matrix(rng, 3, 1), a1 = random_pm1_matrix(rng, 3, 2);
    const ComplexMatrix b0 = random_pm1_matrix(rng, 2, 1), b1 = random_pm1_matrix(rng, 2, 1);
    const oracle::Mat expected = oracle::kron(a0, b0) + oracle::kron(a0, b1) +
                                 oracle::kron(a1, b0) - oracle::kron(a1, b1);
    EXPECT_LT(max_abs(chsh_operator(a0, a1, b0, b1) - expected), 1e-13);
  }
}

TEST(ChshSpectrum, IdealSettings) {
  const auto a = ideal_alice();
  const auto b = ideal_bob();
  const ChshSpectrum s = chsh_spectrum(chsh_operator(a[0], a[1], b[0], b[1]));
  EXPECT_NEAR(s.alpha1, kT, 1e-12);
  EXPECT_NEAR(s.alpha2, 0.0, 1e-12);
}

TEST(ChshSpectrum, QubitClosedForm) {
  // eigenvalues +-2 sqrt(1 +- sin(theta_A) sin(theta_B)), theta the angle
  // between each party's Bloch vectors
  Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a0 = random_bloch(rng), a1 = random_bloch(rng);
    const auto b0 = random_bloch(rng), b1 = random_bloch(rng);
    const ChshSpectrum s = chsh_spectrum(chsh_operator(qubit_observable(a0), qubit_observable(a1),
                                                       qubit_observable(b0), qubit_observable(b1)));
    const double p = bloch_sin(a0, a1) * bloch_sin(b0, b1);
    EXPECT_NEAR(s.alpha1, 2 * std::sqrt(1 + p), 1e-9);
    EXPECT_NEAR(s.alpha2, 2 * std::sqrt(1 - p), 1e-9);
    EXPECT_NEAR(s.alpha1 * s.alpha1 + s.alpha2 * s.alpha2, 8.0, 1e-9);
  }
}

TEST(ChshSpectrum, RejectsNonChshOperators) {
  EXPECT_THROW(chsh_spectrum(identity(4)), ValidationError);
  EXPECT_THROW(chsh_spectrum(identity(2)), ValidationError);
}

TEST(JordanBlocks, IdealQubitPairIsOneBlock) {
  const auto a = ideal_alice();
  const ObservableBlocks b = jordan_blocks(a[0], a[1]);
  ASSERT_EQ(b.blocks.size(), 1u);
  EXPECT_EQ(b.blocks[0].size(), 2);
}

TEST(JordanBlocks, CommutingPairSplitsIntoScalars) {
  const DichotomicObservable z(pauli::Z());
  const ObservableBlocks b = jordan_blocks(z, -z);
  ASSERT_EQ(b.blocks.size(), 2u);
  for (const auto& blk : b.blocks) EXPECT_EQ(blk.size(), 1);
}

TEST(JordanBlocks, RandomReconstructionAndInvariance) {
  Rng rng(53);
  for (int d : {2, 3, 4, 5, 6, 8}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int n0 = 1 + static_cast<int>(rng.uniform() * (d - 1));
      const DichotomicObservable a0(random_pm1_matrix(rng, d, n0));
      const DichotomicObservable a1(random_pm1_matrix(rng, d, d - n0));
      const ObservableBlocks b = jordan_blocks(a0, a1);
      const auto [m0, m1] = b.embed();
      EXPECT_LT(max_abs(m0 - a0.matrix()), 1e-8);
      EXPECT_LT(max_abs(m1 - a1.matrix()), 1e-8);
      int total = 0;
      ComplexMatrix proj_sum = ComplexMatrix::Zero(d, d);
      for (const auto& blk : b.blocks) {
        total += blk.size();
        proj_sum += blk.projector();
        EXPECT_LE(blk.size(), 2);
        EXPECT_LT(max_abs(blk.a0 * blk.a0 - identity(blk.size())), 1e-8);
        EXPECT_LT(max_abs(blk.a1 * blk.a1 - identity(blk.size())), 1e-8);
        // the block subspace is invariant: P A P = A P
        const ComplexMatrix p = blk.projector();
        EXPECT_LT(max_abs(p * a0.matrix() * p - a0.matrix() * p), 1e-8);
        EXPECT_LT(max_abs(p * a1.matrix() * p - a1.matrix() * p), 1e-8);
      }
      EXPECT_EQ(total, d);
      EXPECT_LT(max_abs(proj_sum - identity(d)), 1e-8);
    }
  }
}

TEST(JordanBlocks, PlantedStructureRecovered) {
  Rng rng(54);
  for (int q = 1; q <= 3; ++q) {
    for (int s = 0; s <= 2; ++s) {
      const auto [a0, a1] = planted_observable_pair(rng, q, s);
      const ObservableBlocks b = jordan_blocks(a0, a1);
      int twos = 0;
      for (const auto& blk : b.blocks) twos += blk.size() == 2;
      EXPECT_EQ(twos, q);
      EXPECT_EQ(static_cast<int>(b.blocks.size()), q + s);
    }
  }
}

TEST(BlockChsh, ReconstructsFullOperator) {
  Rng rng(55);
  for (int d : {2, 4, 6}) {
    const DichotomicObservable a0(random_pm1_matrix(rng, d, d / 2));
    const DichotomicObservable a1(random_pm1_matrix(rng, d, d / 2));
    const DichotomicObservable b0(random_pm1_matrix(rng, d, d / 2));
    const DichotomicObservable b1(random_pm1_matrix(rng, d, d / 2));
    const ChshBlockStructure st = block_chsh(jordan_blocks(a0, a1), jordan_blocks(b0, b1));
    EXPECT_LT(max_abs(st.reconstruct() - chsh_operator(a0, a1, b0, b1)), 1e-8);
    for (const auto& p : st.pairs) EXPECT_GE(p.alpha, 2.0 - 1e-9);
    EXPECT_TRUE(st.has_lambda);
  }
}

TEST(SepBoundFormula, Endpoints) {
  EXPECT_NEAR(sep_bound_formula(2.0), 2.0, 1e-15);
  EXPECT_NEAR(sep_bound_formula(kT), std::numbers::sqrt2, 1e-15);
  EXPECT_THROW(sep_bound_formula(1.5), ValidationError);
  EXPECT_THROW(sep_bound_formula(3.0), ValidationError);
}

TEST(SepBoundFormula, AgreesWithProductGridAndOracle) {
  Rng rng(56);
  for (int trial = 0; trial < 6; ++trial) {
    const auto a0 = qubit_observable(random_bloch(rng)), a1 = qubit_observable(random_bloch(rng));
    const auto b0 = qubit_observable(random_bloch(rng)), b1 = qubit_observable(random_bloch(rng));
    const Decomposition d = decompose(a0, a1, b0, b1, OracleOptions{16, 500, 9});
    const ComplexMatrix beta = chsh_operator(a0, a1, b0, b1);
    const double grid = oracle::product_grid_max(beta, 16);
    EXPECT_LE(grid, d.bound.formula_value + 1e-9);
    EXPECT_GE(grid, d.bound.formula_value - 0.1);
    EXPECT_NEAR(*d.bound.oracle_value, d.bound.formula_value, 1e-6);
    // the returned state attains the value it reports
    const PureState s = *d.bound.oracle_state;
    EXPECT_NEAR(s.vector().dot(beta * s.vector()).real(), *d.bound.oracle_value, 1e-9);
  }
}

TEST(SepBoundOracle, DeterministicForSeed) {
  Rng rng(57);
  const ComplexMatrix beta =
      chsh_operator(random_pm1_matrix(rng, 4, 2), random_pm1_matrix(rng, 4, 2),
                    random_pm1_matrix(rng, 4, 2), random_pm1_matrix(rng, 4, 2));
  const OracleResult r1 = sep_bound_oracle(beta, 4, 4, {8, 200, 3});
  const OracleResult r2 = sep_bound_oracle(beta, 4, 4, {8, 200, 3});
  EXPECT_EQ(r1.value, r2.value);
  EXPECT_EQ(r1.best_restart, r2.best_restart);
}

TEST(SepBoundOracle, CommutingObservablesGiveLocalBound) {
  const DichotomicObservable z(pauli::Z());
  const Decomposition d = decompose(z, z, z, -z, OracleOptions{4, 100, 0});
  EXPECT_NEAR(*d.bound.oracle_value, 2.0, 1e-12);
  EXPECT_NEAR(d.bound.formula_value, 2.0, 1e-12);
}

TEST(TheoremCheck, PlantedProductMeasurementsStayBelowSqrt2) {
  Rng rng(58);
  for (int blocks : {1, 2}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Scenario sc =
          planted_direct_sum_scenario(rng, blocks, random_product_measurement(rng, 2 * blocks, 2 * blocks));
      const TheoremReport r = theorem_check(sc);
      EXPECT_TRUE(r.c3_separable);
      EXPECT_TRUE(r.bound_holds) << r.max_value;
    }
  }
}

TEST(TheoremCheck, BellMeasurementIsTheControl) {
  const TheoremReport r = theorem_check(ideal_scenario());
  EXPECT_FALSE(r.c3_separable);
  EXPECT_NEAR(r.max_value, kT, 1e-10);
  EXPECT_FALSE(r.bound_holds);
}

TEST(TheoremCheck, RejectsFailedHypotheses) {
  EXPECT_THROW(theorem_check(noisy_scenario(0.9, 1.0, 0.0)), ValidationError);
}
