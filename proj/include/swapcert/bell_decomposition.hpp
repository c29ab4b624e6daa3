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

// Block structure of CHSH operators.
//
// Any pair of +-1 observables splits the Hilbert space into invariant blocks
// of dimension one or two. A CHSH operator built from two such pairs is the
// direct sum of two-qubit (or smaller) CHSH operators over block pairs, and
// its maximum over product states follows from the smallest block maximum
// eigenvalue lambda:  S_sep = (lambda + sqrt(8 - lambda^2)) / 2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "swapcert/measurements.hpp"
#include "swapcert/quantum_core.hpp"
#include "swapcert/random.hpp"

namespace swapcert {

/// beta = A0 (x) (B0 + B1) + A1 (x) (B0 - B1).
inline ComplexMatrix chsh_operator(const ComplexMatrix& a0, const ComplexMatrix& a1,
                                   const ComplexMatrix& b0, const ComplexMatrix& b1) {
  detail::require(a0.rows() == a1.rows() && a0.cols() == a1.cols(),
                  "chsh_operator: Alice's observables differ in dimension");
  detail::require(b0.rows() == b1.rows() && b0.cols() == b1.cols(),
                  "chsh_operator: Bob's observables differ in dimension");
  return tensor(a0, b0 + b1) + tensor(a1, b0 - b1);
}

inline ComplexMatrix chsh_operator(const DichotomicObservable& a0, const DichotomicObservable& a1,
                                   const DichotomicObservable& b0, const DichotomicObservable& b1) {
  return chsh_operator(a0.matrix(), a1.matrix(), b0.matrix(), b1.matrix());
}

struct ObservableBlock {
  ComplexMatrix basis;  // d x k, orthonormal columns, k in {1, 2}
  ComplexMatrix a0;     // k x k restriction of the first observable
  ComplexMatrix a1;     // k x k restriction of the second observable

  int size() const { return static_cast<int>(basis.cols()); }
  ComplexMatrix projector() const { return basis * basis.adjoint(); }
};

struct ObservableBlocks {
  int dim = 0;
  std::vector<ObservableBlock> blocks;

  /// Reassembles the two observables from their blocks.
  std::pair<ComplexMatrix, ComplexMatrix> embed() const {
    ComplexMatrix m0 = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix m1 = ComplexMatrix::Zero(dim, dim);
    for (const auto& b : blocks) {
      m0 += b.basis * b.a0 * b.basis.adjoint();
      m1 += b.basis * b.a1 * b.basis.adjoint();
    }
    return {m0, m1};
  }
};

/// Eigenvalue groups of the block-angle operator closer than this are merged.
inline constexpr double kAngleGroupTolerance = 1e-7;

/// Splits C^d into blocks of dimension <= 2 invariant under both observables.
///
/// The anticommutator H = (A0 A1 + A1 A0)/2 commutes with A0 and A1, and on
/// each eigenspace with eigenvalue cos(phi) the pair acts as a direct sum of
/// identical qubit blocks. For |cos(phi)| < 1 each +1 eigenvector u of A0
/// restricted to the eigenspace spans a block with A1 u. At cos(phi) = +-1
/// the two observables commute there and the common eigenvectors become
/// 1-dimensional blocks.
inline ObservableBlocks jordan_blocks(const DichotomicObservable& obs0,
                                      const DichotomicObservable& obs1,
                                      double tol = kTolerance) {
  detail::require(obs0.dim() == obs1.dim(), "jordan_blocks: dimension mismatch");
  const ComplexMatrix& a0 = obs0.matrix();
  const ComplexMatrix& a1 = obs1.matrix();
  const int d = obs0.dim();
  const EigenSystem h = eig_hermitian(0.5 * (a0 * a1 + a1 * a0), std::max(tol, 1e-9));

  ObservableBlocks out;
  out.dim = d;
  auto push = [&](ComplexMatrix basis) {
    ObservableBlock blk;
    blk.a0 = basis.adjoint() * a0 * basis;
    blk.a1 = basis.adjoint() * a1 * basis;
    blk.basis = std::move(basis);
    out.blocks.push_back(std::move(blk));
  };

  int start = 0;
  while (start < d) {
    int end = start + 1;
    while (end < d && h.values(end) - h.values(end - 1) <= kAngleGroupTolerance) ++end;
    const int m = end - start;
    const ComplexMatrix space = h.vectors.middleCols(start, m);
    const double cos_phi = h.values.segment(start, m).mean();
    const EigenSystem a0_local = eig_hermitian(space.adjoint() * a0 * space, 1e-7);

    if (std::abs(std::abs(cos_phi) - 1.0) <= kAngleGroupTolerance) {
      for (int k = 0; k < m; ++k) push(space * a0_local.vectors.col(k));
    } else {
      std::vector<int> plus;
      for (int k = 0; k < m; ++k)
        if (a0_local.values(k) > 0.0) plus.push_back(k);
      detail::require(2 * static_cast<int>(plus.size()) == m,
                      "jordan_blocks: unbalanced eigenspace, observables are not +-1");
      for (int k : plus) {
        const ComplexVector u = space * a0_local.vectors.col(k);
        const ComplexVector a1u = a1 * u;
        const Complex c = u.dot(a1u);
        ComplexVector w = a1u - c * u;
        w /= w.norm();
        ComplexMatrix basis(d, 2);
        basis.col(0) = u;
        basis.col(1) = w;
        push(std::move(basis));
      }
    }
    start = end;
  }
  return out;
}

struct BlockPair {
  int i = 0;            // Alice's block index
  int j = 0;            // Bob's block index
  ComplexMatrix basis;  // (dA dB) x (k_i k_j) embedding of the pair subspace
  ComplexMatrix beta;   // restricted CHSH operator
  double alpha = 0.0;   // largest eigenvalue of beta
};

struct ChshBlockStructure {
  int dim_a = 0;
  int dim_b = 0;
  std::vector<BlockPair> pairs;
  double lambda = 0.0;  // smallest alpha among pairs with alpha >= 2
  bool has_lambda = false;

  /// Direct sum of the block operators embedded in the full space.
  ComplexMatrix reconstruct() const {
    const int d = dim_a * dim_b;
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (const auto& p : pairs) out += p.basis * p.beta * p.basis.adjoint();
    return out;
  }

  double max_alpha() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& p : pairs) m = std::max(m, p.alpha);
    return m;
  }
};

/// Pairs with at least one 1-dimensional side have alpha = 2 when the other
/// side is a genuine 2-dimensional block; 1 x 1 pairs are scalars +-2.
inline ChshBlockStructure block_chsh(const ObservableBlocks& alice, const ObservableBlocks& bob,
                                     double tol = kTolerance) {
  ChshBlockStructure out;
  out.dim_a = alice.dim;
  out.dim_b = bob.dim;
  double lambda = std::numeric_limits<double>::infinity();
  for (int i = 0; i < static_cast<int>(alice.blocks.size()); ++i) {
    for (int j = 0; j < static_cast<int>(bob.blocks.size()); ++j) {
      const auto& ba = alice.blocks[i];
      const auto& bb = bob.blocks[j];
      BlockPair pair;
      pair.i = i;
      pair.j = j;
      pair.basis = tensor(ba.basis, bb.basis);
      pair.beta = chsh_operator(ba.a0, ba.a1, bb.a0, bb.a1);
      pair.alpha = max_eigenvalue(pair.beta, 1e-8);
      if (pair.alpha >= 2.0 - tol) lambda = std::min(lambda, pair.alpha);
      out.pairs.push_back(std::move(pair));
    }
  }
  out.has_lambda = std::isfinite(lambda);
  out.lambda = out.has_lambda ? lambda : 0.0;
  return out;
}

struct ChshSpectrum {
  double alpha1 = 0.0;  // largest eigenvalue
  double alpha2 = 0.0;  // second largest, >= 0
  EigenSystem eigen;
};

/// Spectrum {alpha1, alpha2, -alpha2, -alpha1} of a two-qubit CHSH operator,
/// with alpha1^2 + alpha2^2 = 8.
inline ChshSpectrum chsh_spectrum(const ComplexMatrix& beta, double tol = 1e-8) {
  detail::require(beta.rows() == 4 && beta.cols() == 4,
                  "chsh_spectrum: expected a 4x4 operator");
  ChshSpectrum out;
  out.eigen = eig_hermitian(beta, tol);
  const RealVector& w = out.eigen.values;
  detail::require(std::abs(w(3) + w(0)) <= tol && std::abs(w(2) + w(1)) <= tol,
                  "chsh_spectrum: eigenvalues are not paired as +-alpha");
  out.alpha1 = w(3);
  out.alpha2 = w(2);
  detail::require(std::abs(out.alpha1 * out.alpha1 + out.alpha2 * out.alpha2 - 8.0) <= tol,
                  "chsh_spectrum: alpha1^2 + alpha2^2 differs from 8");
  return out;
}

/// (lambda + sqrt(8 - lambda^2)) / 2 for lambda in [2, 2 sqrt2].
inline double sep_bound_formula(double lambda, double tol = kTolerance) {
  detail::require(lambda >= 2.0 - tol && lambda <= kTsirelson + tol,
                  "sep_bound_formula: lambda outside [2, 2 sqrt2]");
  lambda = std::clamp(lambda, 2.0, kTsirelson);
  return 0.5 * (lambda + std::sqrt(std::max(0.0, 8.0 - lambda * lambda)));
}

/// Separable maximum from the block structure. When every block pair is a
/// scalar below 2 (fully commuting observables) the maximum is that scalar.
inline double sep_bound_formula(const ChshBlockStructure& s) {
  if (s.has_lambda) return sep_bound_formula(s.lambda);
  return s.max_alpha();
}

namespace detail {

// <b| beta |b> as an operator on the left factor.
inline ComplexMatrix contract_right(const ComplexMatrix& beta, const ComplexVector& b, int da,
                                    int db) {
  ComplexMatrix out = ComplexMatrix::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int k = 0; k < da; ++k)
      out(i, k) = b.dot(beta.block(i * db, k * db, db, db) * b);
  return out;
}

// <a| beta |a> as an operator on the right factor.
inline ComplexMatrix contract_left(const ComplexMatrix& beta, const ComplexVector& a, int da,
                                   int db) {
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (int i = 0; i < da; ++i)
    for (int k = 0; k < da; ++k)
      out += std::conj(a(i)) * a(k) * beta.block(i * db, k * db, db, db);
  return out;
}

}  // namespace detail

struct OracleResult {
  double value = -std::numeric_limits<double>::infinity();
  ComplexVector state_a;
  ComplexVector state_b;
  int best_restart = -1;

  PureState state() const {
    return tensor(PureState(state_a, {static_cast<int>(state_a.size())}),
                  PureState(state_b, {static_cast<int>(state_b.size())}));
  }
};

struct OracleOptions {
  int restarts = 32;
  int iters = 1000;
  std::uint64_t seed = 0;
};

/// See-saw ascent of <a,b| beta |a,b> over pure product states. Each restart
/// draws a Haar-random |b> from its own derived seed, then alternates top
/// eigenvector updates of the two sides until the value stalls. The result is
/// a lower bound on the separable maximum, achieved by the returned state.
inline OracleResult sep_bound_oracle(const ComplexMatrix& beta, int da, int db,
                                     const OracleOptions& opt = {}) {
  detail::require(beta.rows() == static_cast<Eigen::Index>(da) * db && beta.cols() == beta.rows(),
                  "sep_bound_oracle: operator does not match dims");
  detail::require(is_hermitian(beta, 1e-8), "sep_bound_oracle: operator is not Hermitian");
  detail::require(opt.restarts >= 1 && opt.iters >= 1, "sep_bound_oracle: bad options");
  const ComplexMatrix herm = 0.5 * (beta + beta.adjoint());

  OracleResult best;
  for (int r = 0; r < opt.restarts; ++r) {
    Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(r)));
    ComplexVector b = random_unit_vector(rng, db);
    ComplexVector a;
    double value = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < opt.iters; ++it) {
      const EigenSystem ea = eig_hermitian(detail::contract_right(herm, b, da, db), 1e-8);
      a = ea.vectors.col(da - 1);
      const EigenSystem eb = eig_hermitian(detail::contract_left(herm, a, da, db), 1e-8);
      b = eb.vectors.col(db - 1);
      const double next = eb.values(db - 1);
      const bool stalled = std::abs(next - value) < 1e-12;
      value = next;
      if (stalled) break;
    }
    if (value > best.value) {
      best.value = value;
      best.state_a = a;
      best.state_b = b;
      best.best_restart = r;
    }
  }
  return best;
}

struct SepBoundResult {
  double formula_value = 0.0;
  std::optional<double> oracle_value;
  std::optional<PureState> oracle_state;
};

/// Full pipeline: blocks of both parties, block CHSH structure, the formula
/// and optionally the see-saw oracle on the full operator.
struct Decomposition {
  ObservableBlocks alice;
  ObservableBlocks bob;
  ChshBlockStructure structure;
  SepBoundResult bound;
};

inline Decomposition decompose(const DichotomicObservable& a0, const DichotomicObservable& a1,
                               const DichotomicObservable& b0, const DichotomicObservable& b1,
                               std::optional<OracleOptions> oracle = std::nullopt) {
  Decomposition out;
  out.alice = jordan_blocks(a0, a1);
  out.bob = jordan_blocks(b0, b1);
  out.structure = block_chsh(out.alice, out.bob);
  out.bound.formula_value = sep_bound_formula(out.structure);
  if (oracle) {
    const OracleResult res =
        sep_bound_oracle(chsh_operator(a0, a1, b0, b1), a0.dim(), b0.dim(), *oracle);
    out.bound.oracle_value = res.value;
    out.bound.oracle_state = res.state();
  }
  return out;
}

}  // namespace swapcert
