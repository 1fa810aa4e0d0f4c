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

#include "diqc/matrixcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "diqc/errors.hpp"

namespace diqc {
namespace {

constexpr double kHermitianTol = 1e-9;
constexpr double kNegativeEigenTol = 1e-6;
constexpr double kTraceTol = 1e-6;

void check_dim(std::size_t dim) {
  if (dim != 2 && dim != 4 && dim != 8) {
    std::ostringstream msg;
    msg << "matrix dimension " << dim << " not in {2, 4, 8}";
    throw DimensionError(msg.str());
  }
}

void require_hermitian(const ComplexMatrix& m, const char* what) {
  if (!m.is_hermitian(kHermitianTol)) {
    throw ContractError(std::string(what) + ": input is not Hermitian");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : m_(Eigen::MatrixXcd::Zero(dim, dim)) {
  check_dim(dim);
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t n = rows.size();
  check_dim(n);
  m_.resize(n, n);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != n) {
      throw DimensionError("ragged matrix literal");
    }
    std::size_t j = 0;
    for (const auto& x : row) {
      m_(i, j++) = x;
    }
    ++i;
  }
}

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw DimensionError("matrix is not square");
  }
  check_dim(static_cast<std::size_t>(m_.rows()));
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  check_dim(dim);
  return ComplexMatrix(Eigen::MatrixXcd::Identity(dim, dim));
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<Complex>& diag) {
  ComplexMatrix out(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    out.m_(i, i) = diag[i];
  }
  return out;
}

ComplexMatrix ComplexMatrix::outer(const Eigen::VectorXcd& v) {
  return ComplexMatrix(Eigen::MatrixXcd(v * v.adjoint()));
}

ComplexMatrix ComplexMatrix::adjoint() const { return ComplexMatrix(Eigen::MatrixXcd(m_.adjoint())); }

Complex ComplexMatrix::trace() const { return m_.trace(); }

bool ComplexMatrix::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
  if (other.dim() != dim()) {
    throw DimensionError("max_abs_diff: dimension mismatch");
  }
  return (m_ - other.m_).cwiseAbs().maxCoeff();
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (o.dim() != dim()) {
    throw DimensionError("matrix sum: dimension mismatch");
  }
  m_ += o.m_;
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (o.dim() != dim()) {
    throw DimensionError("matrix difference: dimension mismatch");
  }
  m_ -= o.m_;
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  m_ *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("matrix product: dimension mismatch");
  }
  return ComplexMatrix(Eigen::MatrixXcd(a.m_ * b.m_));
}

ComplexMatrix ComplexMatrix::conjugated_by(const ComplexMatrix& u) const {
  if (u.dim() != dim()) {
    throw DimensionError("conjugation: dimension mismatch");
  }
  return ComplexMatrix(Eigen::MatrixXcd(u.m_ * m_ * u.m_.adjoint()));
}

Eigen::VectorXcd ComplexMatrix::apply(const Eigen::VectorXcd& v) const {
  if (static_cast<std::size_t>(v.size()) != dim()) {
    throw DimensionError("matrix-vector product: dimension mismatch");
  }
  return m_ * v;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  if (na * nb > 8) {
    std::ostringstream msg;
    msg << "kron: result dimension " << na * nb << " exceeds 8";
    throw DimensionError(msg.str());
  }
  Eigen::MatrixXcd out(na * nb, na * nb);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      out.block(i * nb, j * nb, nb, nb) = a(i, j) * b.eigen();
    }
  }
  return ComplexMatrix(std::move(out));
}

EigenResult hermitian_eig(const ComplexMatrix& m) {
  require_hermitian(m, "hermitian_eig");
  // Symmetrize so the solver sees an exactly Hermitian input.
  const Eigen::MatrixXcd h = 0.5 * (m.eigen() + m.eigen().adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  EigenResult out{{}, ComplexMatrix(Eigen::MatrixXcd(solver.eigenvectors()))};
  const auto& ev = solver.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  return out;
}

namespace {

template <int N>
Eigen::Matrix<double, N, 1> fixed_eigenvalues(const Eigen::MatrixXcd& m) {
  const Eigen::Matrix<Complex, N, N> h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Complex, N, N>> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Eigen::VectorXd eigenvalues_only(const ComplexMatrix& m) {
  require_hermitian(m, "eigenvalues");
  switch (m.dim()) {
    case 2:
      return fixed_eigenvalues<2>(m.eigen());
    case 4:
      return fixed_eigenvalues<4>(m.eigen());
    default: {
      const Eigen::MatrixXcd h = 0.5 * (m.eigen() + m.eigen().adjoint());
      return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues();
    }
  }
}

}  // namespace

double min_eigenvalue(const ComplexMatrix& m) { return eigenvalues_only(m)(0); }

double max_eigenvalue(const ComplexMatrix& m) {
  const Eigen::VectorXd ev = eigenvalues_only(m);
  return ev(ev.size() - 1);
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const EigenResult eig = hermitian_eig(m);
  // Eigenvalues at roundoff level are treated as exact zeros so that rank
  // deficient inputs keep their rank.
  const double noise = 64 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(eig.eigenvalues.back()));
  std::vector<Complex> roots;
  roots.reserve(eig.eigenvalues.size());
  for (double lambda : eig.eigenvalues) {
    if (lambda < -kNegativeEigenTol) {
      std::ostringstream msg;
      msg << "psd_sqrt: eigenvalue " << lambda << " is negative";
      throw NotPsdError(msg.str());
    }
    roots.emplace_back(lambda <= noise ? 0.0 : std::sqrt(lambda));
  }
  const ComplexMatrix& v = eig.eigenvectors;
  return v * ComplexMatrix::diagonal(roots) * v.adjoint();
}

double uhlmann_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw DimensionError("uhlmann_fidelity: dimension mismatch");
  }
  for (const ComplexMatrix* s : {&rho, &sigma}) {
    const Complex tr = s->trace();
    if (std::abs(tr - Complex(1.0)) > kTraceTol) {
      std::ostringstream msg;
      msg << "uhlmann_fidelity: trace " << tr.real() << " deviates from 1";
      throw NormalizationError(msg.str());
    }
  }
  // Trace norm of sqrt(rho) sqrt(sigma); equal to Tr sqrt(sqrt(rho) sigma
  // sqrt(rho)) but without square-rooting roundoff in the null space.
  const Eigen::MatrixXcd product = psd_sqrt(rho).eigen() * psd_sqrt(sigma).eigen();
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(product);
  return std::clamp(svd.singularValues().sum(), 0.0, 1.0);
}

ComplexMatrix partial_trace_right(const ComplexMatrix& m, std::size_t left_dim) {
  const std::size_t right_dim = m.dim() / left_dim;
  if (left_dim * right_dim != m.dim() || left_dim < 2) {
    throw DimensionError("partial_trace_right: incompatible factor dimension");
  }
  ComplexMatrix out(left_dim);
  for (std::size_t i = 0; i < left_dim; ++i) {
    for (std::size_t j = 0; j < left_dim; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < right_dim; ++k) {
        s += m(i * right_dim + k, j * right_dim + k);
      }
      out(i, j) = s;
    }
  }
  return out;
}

ComplexMatrix partial_trace_left(const ComplexMatrix& m, std::size_t left_dim) {
  const std::size_t right_dim = m.dim() / left_dim;
  if (left_dim * right_dim != m.dim() || right_dim < 2) {
    throw DimensionError("partial_trace_left: incompatible factor dimension");
  }
  ComplexMatrix out(right_dim);
  for (std::size_t i = 0; i < right_dim; ++i) {
    for (std::size_t j = 0; j < right_dim; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < left_dim; ++k) {
        s += m(k * right_dim + i, k * right_dim + j);
      }
      out(i, j) = s;
    }
  }
  return out;
}

RegisterState::RegisterState(std::vector<RegisterBlock> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) {
    throw StructureError("register state has no blocks");
  }
  std::set<int> labels;
  double total = 0.0;
  for (const RegisterBlock& b : blocks_) {
    if (!labels.insert(b.label).second) {
      throw StructureError("register state has duplicate labels");
    }
    if (b.state.dim() != blocks_.front().state.dim()) {
      throw DimensionError("register blocks differ in dimension");
    }
    if (b.probability < 0.0) {
      throw NormalizationError("negative block probability");
    }
    total += b.probability;
    if (std::abs(b.state.trace() - Complex(1.0)) > 1e-8) {
      throw NormalizationError("register block is not trace-normalized");
    }
    if (b.probability > 0.0 && min_eigenvalue(b.state) < -1e-9) {
      throw NotPsdError("register block is not positive semidefinite");
    }
  }
  if (std::abs(total - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << "register probabilities sum to " << total;
    throw NormalizationError(msg.str());
  }
  std::sort(blocks_.begin(), blocks_.end(),
            [](const RegisterBlock& x, const RegisterBlock& y) { return x.label < y.label; });
}

const RegisterBlock& RegisterState::block(int label) const {
  for (const RegisterBlock& b : blocks_) {
    if (b.label == label) {
      return b;
    }
  }
  throw StructureError("register label " + std::to_string(label) + " not present");
}

ComplexMatrix RegisterState::dense_embedding() const {
  const std::size_t n = blocks_.size();
  const std::size_t d = blocks_.front().state.dim();
  if (n != 2 && n != 4) {
    throw DimensionError("dense embedding needs 2 or 4 register labels");
  }
  ComplexMatrix out(d * n);
  for (std::size_t l = 0; l < n; ++l) {
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(n, n);
    proj(l, l) = 1.0;
    out += blocks_[l].probability * kron(blocks_[l].state, ComplexMatrix(proj));
  }
  return out;
}

double block_fidelity(const RegisterState& p, const RegisterState& q) {
  std::set<int> lp, lq;
  for (const auto& b : p.blocks()) lp.insert(b.label);
  for (const auto& b : q.blocks()) lq.insert(b.label);
  if (lp != lq) {
    throw StructureError("block_fidelity: register label sets differ");
  }
  double f = 0.0;
  for (const RegisterBlock& bp : p.blocks()) {
    const RegisterBlock& bq = q.block(bp.label);
    const double w = std::sqrt(bp.probability * bq.probability);
    if (w > 0.0) {
      f += w * uhlmann_fidelity(bp.state, bq.state);
    }
  }
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace diqc
