// Copyright 2026 The diqc Authors
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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

namespace diqc {

using Complex = std::complex<double>;

/// Dense square complex matrix restricted to dimensions 2, 4 and 8.
///
/// Every operator, density matrix and Bell operator in the library is one of
/// these. Entries are stored in an Eigen matrix; the class only adds the
/// dimension contract and the handful of operations the rest of the code needs.
class ComplexMatrix {
 public:
  /// Zero matrix.
  explicit ComplexMatrix(std::size_t dim);
  /// Row-major entries; rows.size() must equal every row's length.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);
  explicit ComplexMatrix(Eigen::MatrixXcd m);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(const std::vector<Complex>& diag);
  /// |v><v| for a column vector v.
  static ComplexMatrix outer(const Eigen::VectorXcd& v);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  Complex operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  Complex& operator()(std::size_t i, std::size_t j) { return m_(i, j); }

  const Eigen::MatrixXcd& eigen() const { return m_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  bool is_hermitian(double tol) const;
  /// max_ij |a_ij - b_ij|.
  double max_abs_diff(const ComplexMatrix& other) const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= Complex(s); }
  friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= Complex(s); }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) { return a.m_ == b.m_; }

  /// U * this * U^dagger.
  ComplexMatrix conjugated_by(const ComplexMatrix& u) const;
  /// M * v.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;

 private:
  Eigen::MatrixXcd m_;
};

/// Kronecker product. Throws DimensionError if the result exceeds 8.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigenResult {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // orthonormal columns, same order
};

/// Full spectrum of a Hermitian matrix (tolerance 1e-9 on M - M^dagger).
EigenResult hermitian_eig(const ComplexMatrix& m);

/// Smallest eigenvalue only. Same contract as hermitian_eig; faster for the
/// 4x4 operators evaluated on dense angle grids.
double min_eigenvalue(const ComplexMatrix& m);
double max_eigenvalue(const ComplexMatrix& m);

/// Hermitian PSD square root. Eigenvalues in [-1e-6, 0) are clamped to zero;
/// anything more negative throws NotPsdError.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

/// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), clamped to [0, 1].
/// Both arguments must have unit trace within 1e-6.
double uhlmann_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// Partial trace over the right tensor factor of a (left_dim*right_dim) matrix.
ComplexMatrix partial_trace_right(const ComplexMatrix& m, std::size_t left_dim);
/// Partial trace over the left tensor factor.
ComplexMatrix partial_trace_left(const ComplexMatrix& m, std::size_t left_dim);

/// One classical outcome of a register state: label, probability and the
/// normalized conditional state.
struct RegisterBlock {
  int label;
  double probability;
  ComplexMatrix state;
};

/// sum_l p_l rho_l (x) |l><l|, kept block-wise. Labels are a structural field,
/// never a tensor factor.
class RegisterState {
 public:
  /// Validates that probabilities sum to 1 within 1e-8 and every block with
  /// positive weight is a trace-1 PSD matrix. Labels must be distinct; blocks
  /// are kept sorted by label.
  explicit RegisterState(std::vector<RegisterBlock> blocks);

  const std::vector<RegisterBlock>& blocks() const { return blocks_; }
  const RegisterBlock& block(int label) const;
  double probability(int label) const { return block(label).probability; }

  /// Dense block-diagonal embedding sum_l p_l rho_l (x) |l><l| with the label
  /// as the rightmost factor, labels in ascending order. Dimension must stay
  /// within 8.
  ComplexMatrix dense_embedding() const;

 private:
  std::vector<RegisterBlock> blocks_;
};

/// sum_l sqrt(p_l q_l) F(rho_l, sigma_l) over shared labels. Throws
/// StructureError when the label sets differ.
double block_fidelity(const RegisterState& p, const RegisterState& q);

}  // namespace diqc
