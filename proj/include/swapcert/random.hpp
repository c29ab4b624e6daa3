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

// Seeded random generators for states, unitaries and observables.
//
// All draws go through Rng, whose output depends only on the seed: uniform
// and normal variates are derived from raw 64-bit words rather than from
// the implementation-defined std:: distributions.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "swapcert/quantum_core.hpp"

namespace swapcert {

/// SplitMix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for substream `index` of `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  Complex complex_normal() {
    const double re = normal();
    return {re, normal()};
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline ComplexMatrix random_ginibre(Rng& rng, int rows, int cols) {
  ComplexMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  return g;
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
inline ComplexMatrix random_unitary(Rng& rng, int d) {
  const ComplexMatrix g = random_ginibre(rng, d, d);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * identity(d);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    const Complex diag = r(k, k);
    const double a = std::abs(diag);
    if (a > 0.0) q.col(k) *= diag / a;
  }
  return q;
}

inline ComplexVector random_unit_vector(Rng& rng, int d) {
  ComplexVector v = random_ginibre(rng, d, 1);
  return v / v.norm();
}

inline PureState random_pure_state(Rng& rng, Dims dims) {
  ComplexVector v = random_unit_vector(rng, dims_product(dims));
  return PureState(std::move(v), std::move(dims));
}

/// Random mixed state G G^dag / Tr, G of size d x rank.
inline DensityMatrix random_density_matrix(Rng& rng, Dims dims, int rank = -1) {
  const int d = dims_product(dims);
  if (rank <= 0) rank = d;
  const ComplexMatrix g = random_ginibre(rng, d, rank);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(std::move(rho), std::move(dims));
}

/// Random Hermitian matrix with i.i.d. Gaussian entries.
inline ComplexMatrix random_hermitian(Rng& rng, int d) {
  const ComplexMatrix g = random_ginibre(rng, d, d);
  return 0.5 * (g + g.adjoint());
}

/// U diag(+1 x n_plus, -1 x rest) U^dag with Haar U.
inline ComplexMatrix random_pm1_matrix(Rng& rng, int d, int n_plus) {
  const ComplexMatrix u = random_unitary(rng, d);
  Eigen::VectorXcd diag(d);
  for (int k = 0; k < d; ++k) diag(k) = k < n_plus ? 1.0 : -1.0;
  ComplexMatrix m = u * diag.asDiagonal() * u.adjoint();
  return 0.5 * (m + m.adjoint());
}

/// Uniformly random point on the unit sphere.
inline std::array<double, 3> random_bloch(Rng& rng) {
  std::array<double, 3> n{rng.normal(), rng.normal(), rng.normal()};
  const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  for (double& c : n) c /= len;
  return n;
}

}  // namespace swapcert
