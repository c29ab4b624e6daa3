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

// Dense complex linear algebra for small multi-qudit systems.
//
// Subsystem ordering is fixed globally: the leftmost tensor factor carries the
// most significant index. Scenario states use the party order (A, B, C_A, C_B).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace swapcert {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<int>;

/// Default absolute tolerance (max-norm) for Hermiticity, positivity, trace.
inline constexpr double kTolerance = 1e-9;

inline const double kSqrt2 = std::sqrt(2.0);
inline const double kTsirelson = 2.0 * std::sqrt(2.0);

/// Raised when an input violates a documented invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline int dims_product(std::span<const int> dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kTolerance) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

inline void check_dims(std::span<const int> dims, Eigen::Index side) {
  require(!dims.empty(), "empty subsystem dimension list");
  for (int d : dims) require(d >= 1, "subsystem dimensions must be positive");
  require(dims_product(dims) == side,
          "subsystem dimensions do not multiply to the matrix side");
}

}  // namespace detail

/// Kronecker product; entries of `a` select the most significant block index.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexMatrix tensor(std::initializer_list<ComplexMatrix> factors) {
  if (factors.size() == 0) return ComplexMatrix::Identity(1, 1);
  auto it = factors.begin();
  ComplexMatrix out = *it++;
  for (; it != factors.end(); ++it) out = tensor(out, *it);
  return out;
}

inline ComplexMatrix identity(int d) { return ComplexMatrix::Identity(d, d); }

namespace pauli {
inline ComplexMatrix I() { return identity(2); }
inline ComplexMatrix X() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline ComplexMatrix Y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
inline ComplexMatrix Z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

/// Unit vector on a declared tensor factorization.
class PureState {
 public:
  PureState(ComplexVector vector, Dims dims, double tol = kTolerance)
      : vector_(std::move(vector)), dims_(std::move(dims)) {
    detail::check_dims(dims_, vector_.size());
    detail::require(std::abs(vector_.norm() - 1.0) <= tol,
                    "pure state is not normalized");
  }

  /// Normalizes `vector` before validation.
  static PureState normalized(const ComplexVector& vector, Dims dims) {
    const double n = vector.norm();
    detail::require(n > 0.0, "cannot normalize the zero vector");
    return PureState(vector / n, std::move(dims));
  }

  /// Computational basis state |index>.
  static PureState basis(int index, Dims dims) {
    ComplexVector v = ComplexVector::Zero(dims_product(dims));
    detail::require(index >= 0 && index < v.size(), "basis index out of range");
    v(index) = 1.0;
    return PureState(std::move(v), std::move(dims));
  }

  const ComplexVector& vector() const { return vector_; }
  const Dims& dims() const { return dims_; }
  int dim() const { return static_cast<int>(vector_.size()); }

  ComplexMatrix projector() const { return vector_ * vector_.adjoint(); }

 private:
  ComplexVector vector_;
  Dims dims_;
};

inline PureState tensor(const PureState& a, const PureState& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return PureState(tensor(ComplexMatrix(a.vector()), ComplexMatrix(b.vector())),
                   std::move(dims));
}

/// Positive unit-trace operator on a declared tensor factorization.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix matrix, Dims dims, double tol = kTolerance)
      : matrix_(std::move(matrix)), dims_(std::move(dims)) {
    detail::require(matrix_.rows() == matrix_.cols(),
                    "density matrix must be square");
    detail::check_dims(dims_, matrix_.rows());
    detail::require(matrix_.allFinite(), "density matrix has non-finite entries");
    detail::require(is_hermitian(matrix_, tol), "density matrix is not Hermitian");
    detail::require(std::abs(matrix_.trace() - Complex(1.0)) <= tol,
                    "density matrix trace differs from 1");
    const ComplexMatrix herm = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
    detail::require(es.eigenvalues().minCoeff() >= -tol,
                    "density matrix has a negative eigenvalue");
  }

  explicit DensityMatrix(const PureState& psi)
      : DensityMatrix(psi.projector(), psi.dims()) {}

  static DensityMatrix maximally_mixed(Dims dims) {
    const int d = dims_product(dims);
    return DensityMatrix(identity(d) / static_cast<double>(d), std::move(dims));
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  const Dims& dims() const { return dims_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

  /// Tr(rho * op).
  double expectation(const ComplexMatrix& op) const {
    detail::require(op.rows() == matrix_.rows() && op.cols() == matrix_.cols(),
                    "operator dimension mismatch");
    // Tr(rho op) = sum_ij rho_ij op_ji
    return (matrix_.transpose().cwiseProduct(op)).sum().real();
  }

 private:
  ComplexMatrix matrix_;
  Dims dims_;
};

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix(tensor(a.matrix(), b.matrix()), std::move(dims));
}

/// Partial trace of an arbitrary square operator; `keep` lists retained
/// subsystems (any order accepted, output keeps the original relative order).
inline ComplexMatrix partial_trace(const ComplexMatrix& op, std::span<const int> dims,
                                   std::span<const int> keep) {
  detail::check_dims(dims, op.rows());
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw std::out_of_range("partial_trace: subsystem index out of range");
    kept[k] = true;
  }
  // strides of each subsystem in the full index
  std::vector<int> stride(n, 1);
  for (int s = n - 2; s >= 0; --s) stride[s] = stride[s + 1] * dims[s + 1];

  std::vector<int> kept_sys, traced_sys;
  for (int s = 0; s < n; ++s) (kept[s] ? kept_sys : traced_sys).push_back(s);

  auto offsets = [&](const std::vector<int>& systems) {
    // full-index offset for each multi-index over `systems`, row-major
    std::vector<int> out{0};
    for (int s : systems) {
      std::vector<int> next;
      next.reserve(out.size() * dims[s]);
      for (int base : out)
        for (int v = 0; v < dims[s]; ++v) next.push_back(base + v * stride[s]);
      out = std::move(next);
    }
    return out;
  };
  const std::vector<int> keep_off = offsets(kept_sys);
  const std::vector<int> trace_off = offsets(traced_sys);

  const auto dk = static_cast<Eigen::Index>(keep_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i) {
    for (Eigen::Index j = 0; j < dk; ++j) {
      Complex acc = 0.0;
      for (int t : trace_off) acc += op(keep_off[i] + t, keep_off[j] + t);
      out(i, j) = acc;
    }
  }
  return out;
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  ComplexMatrix reduced = partial_trace(rho.matrix(), rho.dims(), keep);
  std::vector<int> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Dims dims;
  for (int k : sorted) dims.push_back(rho.dims()[k]);
  if (dims.empty()) dims.push_back(1);
  return DensityMatrix(std::move(reduced), std::move(dims));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep) {
  return partial_trace(rho, std::span<const int>(keep.begin(), keep.size()));
}

struct EigenSystem {
  RealVector values;     // ascending
  ComplexMatrix vectors;  // orthonormal columns
};

/// Hermitian eigendecomposition with eigenvalues in ascending order.
inline EigenSystem eig_hermitian(const ComplexMatrix& h, double tol = kTolerance) {
  detail::require(h.rows() == h.cols(), "eig_hermitian: matrix is not square");
  detail::require(max_abs(h - h.adjoint()) <= tol * std::max(1.0, max_abs(h)),
                  "eig_hermitian: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
  if (es.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: no convergence");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline double max_eigenvalue(const ComplexMatrix& h, double tol = kTolerance) {
  return eig_hermitian(h, tol).values.maxCoeff();
}

/// |<psi|phi>|^2.
inline double overlap_sq(const PureState& psi, const PureState& phi) {
  detail::require(psi.dim() == phi.dim(), "overlap_sq: dimension mismatch");
  return std::norm(psi.vector().dot(phi.vector()));
}

/// Schmidt coefficients of a bipartite vector, descending.
inline RealVector schmidt_coefficients(const ComplexVector& v, int d_left, int d_right) {
  detail::require(v.size() == static_cast<Eigen::Index>(d_left) * d_right,
                  "schmidt_coefficients: dimension mismatch");
  ComplexMatrix m(d_left, d_right);
  for (int i = 0; i < d_left; ++i)
    for (int j = 0; j < d_right; ++j) m(i, j) = v(i * d_right + j);
  return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
}

inline int schmidt_rank(const ComplexVector& v, int d_left, int d_right,
                        double tol = kTolerance) {
  const RealVector s = schmidt_coefficients(v, d_left, d_right);
  return static_cast<int>((s.array() > tol).count());
}

/// Operator Schmidt rank across the cut (d_left | d_right); rank 1 means the
/// operator factors as L (x) R.
inline int operator_schmidt_rank(const ComplexMatrix& op, int d_left, int d_right,
                                 double tol = kTolerance) {
  detail::require(op.rows() == static_cast<Eigen::Index>(d_left) * d_right &&
                      op.cols() == op.rows(),
                  "operator_schmidt_rank: dimension mismatch");
  // realignment: R[(i,k),(j,l)] = op[(i,j),(k,l)]
  ComplexMatrix r(d_left * d_left, d_right * d_right);
  for (int i = 0; i < d_left; ++i)
    for (int k = 0; k < d_left; ++k)
      for (int j = 0; j < d_right; ++j)
        for (int l = 0; l < d_right; ++l)
          r(i * d_left + k, j * d_right + l) = op(i * d_right + j, k * d_right + l);
  const RealVector s = Eigen::JacobiSVD<ComplexMatrix>(r).singularValues();
  return static_cast<int>((s.array() > tol).count());
}

}  // namespace swapcert
