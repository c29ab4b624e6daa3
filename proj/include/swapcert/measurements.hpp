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

// Measurement objects: +-1 observables, two- and four-outcome projective
// measurements, the Bell basis and Charlie's binned settings.
//
// Outcome indices are 0-based in code. Outcome k of a four-outcome
// measurement is reported as c = k + 1 in files and on the command line.

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "swapcert/quantum_core.hpp"

namespace swapcert {

/// Hermitian operator with spectrum in {-1, +1}.
class DichotomicObservable {
 public:
  explicit DichotomicObservable(ComplexMatrix matrix, double tol = kTolerance)
      : matrix_(std::move(matrix)) {
    detail::require(matrix_.rows() == matrix_.cols() && matrix_.rows() > 0,
                    "observable must be a non-empty square matrix");
    detail::require(is_hermitian(matrix_, tol), "observable is not Hermitian");
    const auto d = matrix_.rows();
    detail::require(max_abs(matrix_ * matrix_ - ComplexMatrix::Identity(d, d)) <= tol,
                    "observable does not square to the identity");
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

  DichotomicObservable operator-() const { return DichotomicObservable(-matrix_); }

 private:
  ComplexMatrix matrix_;
};

/// n . (X, Y, Z) for a unit Bloch vector n.
inline DichotomicObservable qubit_observable(const std::array<double, 3>& bloch,
                                             double tol = kTolerance) {
  const double norm = std::sqrt(bloch[0] * bloch[0] + bloch[1] * bloch[1] + bloch[2] * bloch[2]);
  detail::require(std::abs(norm - 1.0) <= tol, "Bloch vector is not a unit vector");
  return DichotomicObservable(bloch[0] * pauli::X() + bloch[1] * pauli::Y() +
                              bloch[2] * pauli::Z());
}

namespace detail {

inline void check_projective(std::span<const ComplexMatrix> projectors, double tol) {
  require(!projectors.empty(), "measurement has no projectors");
  const auto d = projectors.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k < projectors.size(); ++k) {
    const ComplexMatrix& p = projectors[k];
    require(p.rows() == d && p.cols() == d, "projector dimension mismatch");
    require(is_hermitian(p, tol), "projector " + std::to_string(k + 1) + " is not Hermitian");
    require(max_abs(p * p - p) <= tol,
            "projector " + std::to_string(k + 1) + " is not idempotent");
    for (std::size_t l = k + 1; l < projectors.size(); ++l) {
      require(max_abs(p * projectors[l]) <= tol,
              "projectors " + std::to_string(k + 1) + " and " + std::to_string(l + 1) +
                  " are not orthogonal");
    }
    sum += p;
  }
  require(max_abs(sum - ComplexMatrix::Identity(d, d)) <= tol,
          "projectors do not sum to the identity");
}

}  // namespace detail

/// Two-outcome projective measurement; outcome 0 is the "+1" result.
class TwoOutcomeMeasurement {
 public:
  explicit TwoOutcomeMeasurement(std::array<ComplexMatrix, 2> projectors,
                                 double tol = kTolerance)
      : projectors_(std::move(projectors)) {
    detail::check_projective(projectors_, tol);
  }

  /// Eigenprojectors (I + O)/2 and (I - O)/2.
  static TwoOutcomeMeasurement of(const DichotomicObservable& obs) {
    const ComplexMatrix id = identity(obs.dim());
    return TwoOutcomeMeasurement({0.5 * (id + obs.matrix()), 0.5 * (id - obs.matrix())});
  }

  const std::array<ComplexMatrix, 2>& projectors() const { return projectors_; }
  const ComplexMatrix& projector(int k) const { return projectors_.at(k); }
  int dim() const { return static_cast<int>(projectors_[0].rows()); }
  DichotomicObservable observable() const {
    return DichotomicObservable(projectors_[0] - projectors_[1]);
  }

 private:
  std::array<ComplexMatrix, 2> projectors_;
};

/// Four orthogonal projectors summing to the identity on C_A (x) C_B.
class FourOutcomeMeasurement {
 public:
  FourOutcomeMeasurement(std::array<ComplexMatrix, 4> projectors, std::array<int, 2> dims,
                         double tol = kTolerance)
      : projectors_(std::move(projectors)), dims_(dims) {
    detail::require(dims_[0] >= 1 && dims_[1] >= 1, "measurement dims must be positive");
    detail::require(projectors_[0].rows() == dims_[0] * dims_[1],
                    "projector side does not match declared dims");
    detail::check_projective(projectors_, tol);
  }

  /// Rank-1 projectors onto the four orthonormal columns of `basis` (2 (x) 2).
  static FourOutcomeMeasurement from_basis(const ComplexMatrix& basis,
                                           std::array<int, 2> dims = {2, 2}) {
    detail::require(basis.cols() == 4, "from_basis expects four basis columns");
    std::array<ComplexMatrix, 4> p;
    for (int c = 0; c < 4; ++c) p[c] = basis.col(c) * basis.col(c).adjoint();
    return FourOutcomeMeasurement(std::move(p), dims);
  }

  const std::array<ComplexMatrix, 4>& projectors() const { return projectors_; }
  const ComplexMatrix& projector(int c) const { return projectors_.at(c); }
  const std::array<int, 2>& dims() const { return dims_; }
  int dim() const { return dims_[0] * dims_[1]; }

  /// Conjugation by local unitaries U_A (x) U_B.
  FourOutcomeMeasurement rotated(const ComplexMatrix& u_a, const ComplexMatrix& u_b) const {
    const ComplexMatrix u = tensor(u_a, u_b);
    std::array<ComplexMatrix, 4> p;
    for (int c = 0; c < 4; ++c) p[c] = u * projectors_[c] * u.adjoint();
    return FourOutcomeMeasurement(std::move(p), dims_);
  }

  /// Outcome c reported as permuted[c] = this[order[c]].
  FourOutcomeMeasurement permuted(const std::array<int, 4>& order) const {
    std::array<ComplexMatrix, 4> p;
    for (int c = 0; c < 4; ++c) p[c] = projectors_.at(order[c]);
    return FourOutcomeMeasurement(std::move(p), dims_);
  }

 private:
  std::array<ComplexMatrix, 4> projectors_;
  std::array<int, 2> dims_;
};

/// Four-outcome measurement with a classical map of each outcome to one bit
/// for Alice's test and one bit for Bob's test.
class BinnedMeasurement {
 public:
  BinnedMeasurement(FourOutcomeMeasurement base, std::array<int, 4> bit_for_a,
                    std::array<int, 4> bit_for_b)
      : base_(std::move(base)), bit_for_a_(bit_for_a), bit_for_b_(bit_for_b) {
    for (int c = 0; c < 4; ++c) {
      detail::require(bit_for_a_[c] == 1 || bit_for_a_[c] == -1,
                      "bit_for_A must map every outcome to +1 or -1");
      detail::require(bit_for_b_[c] == 1 || bit_for_b_[c] == -1,
                      "bit_for_B must map every outcome to +1 or -1");
    }
  }

  const FourOutcomeMeasurement& base() const { return base_; }
  const std::array<int, 4>& bit_for_a() const { return bit_for_a_; }
  const std::array<int, 4>& bit_for_b() const { return bit_for_b_; }

  /// sum_c bit_for_A(c) P_c.
  ComplexMatrix marginal_observable_a() const { return signed_sum(bit_for_a_); }
  ComplexMatrix marginal_observable_b() const { return signed_sum(bit_for_b_); }

 private:
  ComplexMatrix signed_sum(const std::array<int, 4>& bits) const {
    ComplexMatrix out = ComplexMatrix::Zero(base_.dim(), base_.dim());
    for (int c = 0; c < 4; ++c) out += static_cast<double>(bits[c]) * base_.projector(c);
    return out;
  }

  FourOutcomeMeasurement base_;
  std::array<int, 4> bit_for_a_;
  std::array<int, 4> bit_for_b_;
};

/// Bell basis in the order Phi+, Phi-, Psi+, Psi-.
inline std::array<PureState, 4> bell_basis() {
  const double h = 1.0 / kSqrt2;
  ComplexVector phi_p(4), phi_m(4), psi_p(4), psi_m(4);
  phi_p << h, 0, 0, h;
  phi_m << h, 0, 0, -h;
  psi_p << 0, h, h, 0;
  psi_m << 0, h, -h, 0;
  return {PureState(phi_p, {2, 2}), PureState(phi_m, {2, 2}), PureState(psi_p, {2, 2}),
          PureState(psi_m, {2, 2})};
}

/// Bell basis vectors as the columns of a unitary.
inline ComplexMatrix bell_basis_matrix() {
  const auto basis = bell_basis();
  ComplexMatrix m(4, 4);
  for (int c = 0; c < 4; ++c) m.col(c) = basis[c].vector();
  return m;
}

inline FourOutcomeMeasurement bell_measurement() {
  return FourOutcomeMeasurement::from_basis(bell_basis_matrix());
}

/// Bell measurement with the plane span{Phi_c, Phi_(5-c)} rotated by theta:
/// e_c = cos(theta) Phi_c + sin(theta) Phi_(5-c),
/// e_(5-c) = -sin(theta) Phi_c + cos(theta) Phi_(5-c).
/// `pair` is the 1-based c in {1, 2}.
inline FourOutcomeMeasurement perturbed_bell_measurement(double theta, int pair = 1) {
  detail::require(pair == 1 || pair == 2, "perturbation pair must be 1 or 2");
  ComplexMatrix basis = bell_basis_matrix();
  const int c = pair - 1;
  const int partner = 3 - c;
  const ComplexVector phi_c = basis.col(c);
  const ComplexVector phi_p = basis.col(partner);
  basis.col(c) = std::cos(theta) * phi_c + std::sin(theta) * phi_p;
  basis.col(partner) = -std::sin(theta) * phi_c + std::cos(theta) * phi_p;
  return FourOutcomeMeasurement::from_basis(basis);
}

/// Product measurement {P_a (x) Q_b}, outcome index 2a + b (0-based).
inline FourOutcomeMeasurement product_measurement(const TwoOutcomeMeasurement& ma,
                                                  const TwoOutcomeMeasurement& mb) {
  std::array<ComplexMatrix, 4> p;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) p[2 * a + b] = tensor(ma.projector(a), mb.projector(b));
  return FourOutcomeMeasurement(std::move(p), {ma.dim(), mb.dim()});
}

/// Product measurement of two observables' eigenbases, binned so that the
/// first factor's sign goes to Alice and the second factor's sign to Bob.
inline BinnedMeasurement binned_product(const DichotomicObservable& for_a,
                                        const DichotomicObservable& for_b) {
  return BinnedMeasurement(
      product_measurement(TwoOutcomeMeasurement::of(for_a), TwoOutcomeMeasurement::of(for_b)),
      {1, 1, -1, -1}, {1, -1, 1, -1});
}

/// C1 = (Z+X)/sqrt2 (x) Z and C2 = (Z-X)/sqrt2 (x) X.
inline std::pair<BinnedMeasurement, BinnedMeasurement> charlie_settings_ideal() {
  const DichotomicObservable zx_plus((pauli::Z() + pauli::X()) / kSqrt2);
  const DichotomicObservable zx_minus((pauli::Z() - pauli::X()) / kSqrt2);
  return {binned_product(zx_plus, DichotomicObservable(pauli::Z())),
          binned_product(zx_minus, DichotomicObservable(pauli::X()))};
}

}  // namespace swapcert
