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

#include "diqc/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "diqc/errors.hpp"

namespace diqc {
namespace {

const double kSqrt2 = std::sqrt(2.0);

void require_range(double x, double lo, double hi, const char* what) {
  if (!(x >= lo && x <= hi)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " = " << x << " outside [" << lo << ", " << hi << "]";
    throw DomainError(msg.str());
  }
}

Eigen::VectorXcd phi_plus() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(0) = v(3) = 1.0 / kSqrt2;
  return v;
}

ComplexMatrix lift(const ComplexMatrix& single, Side side) {
  return side == Side::kAlice ? kron(single, ops::identity2()) : kron(ops::identity2(), single);
}

}  // namespace

std::string to_string(Inequality kind) { return kind == Inequality::kNew ? "new" : "tilted"; }

std::string to_string(DeltaVariant variant) {
  switch (variant) {
    case DeltaVariant::kPrinted:
      return "printed";
    case DeltaVariant::kFallback:
      return "fallback";
    case DeltaVariant::kLogInterpolation:
      return "log-interpolation";
  }
  return "unknown";
}

std::string to_string(BobFrame frame) {
  return frame == BobFrame::kXBisector ? "x-bisector" : "z-bisector";
}

Inequality parse_inequality(const std::string& name) {
  if (name == "new") return Inequality::kNew;
  if (name == "tilted") return Inequality::kTilted;
  throw DomainError("unknown inequality '" + name + "'");
}

DeltaVariant parse_delta_variant(const std::string& name) {
  if (name == "printed") return DeltaVariant::kPrinted;
  if (name == "fallback") return DeltaVariant::kFallback;
  if (name == "log-interpolation") return DeltaVariant::kLogInterpolation;
  throw DomainError("unknown delta variant '" + name + "'");
}

BobFrame bob_frame(Inequality kind) {
  return kind == Inequality::kNew ? BobFrame::kXBisector : BobFrame::kZBisector;
}

namespace ops {
ComplexMatrix identity2() { return ComplexMatrix::identity(2); }
ComplexMatrix pauli_x() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_y() { return ComplexMatrix{{0.0, Complex(0, -1)}, {Complex(0, 1), 0.0}}; }
ComplexMatrix pauli_z() { return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}; }
ComplexMatrix basis_h() { return (1.0 / kSqrt2) * (pauli_z() + pauli_x()); }
ComplexMatrix basis_v() { return (1.0 / kSqrt2) * (pauli_z() - pauli_x()); }
ComplexMatrix rotation_r() { return Complex(0, 1) * pauli_x(); }
}  // namespace ops

PureState::PureState(Eigen::VectorXcd amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() != 2 && amps_.size() != 4) {
    throw DimensionError("pure state dimension must be 2 or 4");
  }
  if (std::abs(amps_.norm() - 1.0) > 1e-10) {
    throw NormalizationError("pure state is not normalized");
  }
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (!m_.is_hermitian(1e-9)) {
    throw ContractError("density matrix is not Hermitian");
  }
  if (std::abs(m_.trace() - Complex(1.0)) > 1e-8) {
    throw NormalizationError("density matrix trace differs from 1");
  }
  if (min_eigenvalue(m_) < -1e-9) {
    throw NotPsdError("density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) { return DensityMatrix(psi.projector()); }

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix((1.0 / static_cast<double>(dim)) * ComplexMatrix::identity(dim));
}

namespace {

void require_index(int index) {
  if (index != 0 && index != 1) throw DomainError("observable index must be 0 or 1");
}

}  // namespace

ComplexMatrix alice_observable(double a, int index) {
  require_index(index);
  const double sign = index == 0 ? 1.0 : -1.0;
  return std::cos(a) * ops::basis_h() + sign * std::sin(a) * ops::basis_v();
}

ComplexMatrix bob_observable(double b, int index, BobFrame frame) {
  require_index(index);
  const double sign = index == 0 ? 1.0 : -1.0;
  const ComplexMatrix bisector = frame == BobFrame::kXBisector ? ops::pauli_x() : ops::pauli_z();
  const ComplexMatrix other = frame == BobFrame::kXBisector ? ops::pauli_z() : ops::pauli_x();
  return std::cos(b) * bisector + sign * std::sin(b) * other;
}

ComplexMatrix QubitObservable::matrix() const {
  if (index != 0 && index != 1) {
    throw DomainError("observable index must be 0 or 1");
  }
  return side == Side::kAlice ? alice_observable(angle, index) : bob_observable(angle, index, frame);
}

KrausInstrument::KrausInstrument(std::vector<std::vector<ComplexMatrix>> branches)
    : branches_(std::move(branches)) {
  if (branches_.empty()) {
    throw ConstructionError("instrument has no outcomes");
  }
  for (const auto& branch : branches_) {
    for (const auto& k : branch) {
      if (k.dim() != 2) {
        throw DimensionError("Kraus operators must be 2x2");
      }
    }
  }
  if (completeness_defect() > 1e-9) {
    throw ConstructionError("Kraus operators violate completeness");
  }
}

double KrausInstrument::completeness_defect() const {
  ComplexMatrix sum(2);
  for (const auto& branch : branches_) {
    for (const auto& k : branch) {
      sum += k.adjoint() * k;
    }
  }
  return sum.max_abs_diff(ops::identity2());
}

PureState partial_entangled_state(double theta, int branch, double theta_min) {
  require_range(theta, theta_min, kPi / 4, "theta");
  if (branch != 0 && branch != 1) {
    throw DomainError("branch must be 0 or 1");
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(0) = branch == 0 ? c : s;
  v(3) = branch == 0 ? s : c;
  return PureState(v);
}

KrausInstrument reference_instrument(double theta) {
  require_range(theta, 0.0, kPi / 4, "theta");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return KrausInstrument({{ComplexMatrix::diagonal({c, s})}, {ComplexMatrix::diagonal({s, c})}});
}

RegisterState apply_instrument(const KrausInstrument& instr, const DensityMatrix& rho, Side side) {
  if (rho.dim() != 4) {
    throw DimensionError("apply_instrument expects a two-qubit state");
  }
  std::vector<RegisterBlock> blocks;
  double max_p = 0.0;
  for (std::size_t l = 0; l < instr.outcomes(); ++l) {
    ComplexMatrix out(4);
    for (const auto& k : instr.branches()[l]) {
      out += rho.matrix().conjugated_by(lift(k, side));
    }
    const double p = out.trace().real();
    max_p = std::max(max_p, p);
    if (p < 1e-12) {
      blocks.push_back({static_cast<int>(l), 0.0, DensityMatrix::maximally_mixed(4).matrix()});
    } else {
      out = (1.0 / p) * out;
      out = 0.5 * (out + out.adjoint());
      blocks.push_back({static_cast<int>(l), p, std::move(out)});
    }
  }
  if (max_p < 1e-12) {
    throw DegenerateInstrumentError("every outcome has vanishing probability");
  }
  // Renormalize away roundoff in the total.
  double total = 0.0;
  for (const auto& b : blocks) total += b.probability;
  for (auto& b : blocks) b.probability /= total;
  return RegisterState(std::move(blocks));
}

RegisterState instrument_choi(const KrausInstrument& instr) {
  return apply_instrument(instr, DensityMatrix(ComplexMatrix::outer(phi_plus())), Side::kBob);
}

DephasingChannel::DephasingChannel(double weight, ComplexMatrix axis)
    : weight_(weight), axis_(std::move(axis)) {
  if (!(weight_ >= 0.0 && weight_ <= 1.0)) {
    throw DomainError("dephasing weight outside [0, 1]");
  }
  if (axis_.dim() != 2 || (axis_ * axis_).max_abs_diff(ops::identity2()) > 1e-12 ||
      !axis_.is_hermitian(1e-12)) {
    throw ConstructionError("dephasing axis must be a Hermitian involution");
  }
}

DephasingChannel DephasingChannel::identity() { return DephasingChannel(1.0, ops::pauli_z()); }

ComplexMatrix DephasingChannel::apply(const ComplexMatrix& rho) const {
  return 0.5 * (1.0 + weight_) * rho + 0.5 * (1.0 - weight_) * (axis_ * rho * axis_);
}

ComplexMatrix DephasingChannel::choi() const {
  return apply_one_sided(*this, ComplexMatrix::outer(phi_plus()), Side::kBob);
}

double dephasing_g(double x) { return (1.0 + kSqrt2) * (std::cos(x) + std::sin(x) - 1.0); }

double bob_ideal_angle(double theta, Inequality kind) {
  const double s2 = std::sin(2 * theta);
  if (kind == Inequality::kTilted) {
    return std::atan(s2);
  }
  const double c2 = std::cos(2 * theta);
  return std::atan(std::sqrt((1.0 + 0.5 * c2 * c2) / (s2 * s2)));
}

std::optional<double> bob_angle_map(double b, double theta, Inequality kind, DeltaVariant variant) {
  const double bt = bob_ideal_angle(theta, kind);
  const double skew = kPi / 2 - 2 * bt;  // zero iff b_theta = pi/4
  // gamma = (4/pi) ln((pi/2 - b_theta)/b_theta), written via log1p for accuracy near b_theta = pi/4.
  const double gamma = (4.0 / kPi) * std::log1p(skew / bt);
  if (variant == DeltaVariant::kLogInterpolation) {
    if (std::abs(skew) < 1e-12) {
      return b;  // gamma -> 0 limit of the interpolation is the identity map
    }
    const double delta = bt * bt / skew;
    const double arg = 1.0 + b / delta;
    if (!(arg > 0.0)) return std::nullopt;
    return std::log1p(b / delta) / gamma;
  }
  const double delta = variant == DeltaVariant::kPrinted ? bt * bt / (kPi * kPi - 2 * bt)
                                                         : 2 * bt * bt / kPi;
  const double arg = (b - delta) / delta;
  if (!(arg > 0.0)) return std::nullopt;
  if (std::abs(gamma) < 1e-15) {
    if (std::abs(std::log(arg)) < 1e-12) return kPi / 4;
    return std::nullopt;
  }
  return std::log(arg) / gamma;
}

DephasingChannel dephasing_alice(double a) {
  require_range(a, 0.0, kPi / 2, "a");
  const double g = std::clamp(dephasing_g(a), 0.0, 1.0);
  return DephasingChannel(g, a <= kPi / 4 ? ops::basis_h() : ops::basis_v());
}

DephasingChannel dephasing_bob(double b, double theta, Inequality kind, DeltaVariant variant) {
  require_range(b, 0.0, kPi / 2, "b");
  const std::optional<double> t = bob_angle_map(b, theta, kind, variant);
  const double g = t ? std::clamp(dephasing_g(*t), 0.0, 1.0) : 0.0;
  const BobFrame frame = bob_frame(kind);
  const ComplexMatrix bisector = frame == BobFrame::kXBisector ? ops::pauli_x() : ops::pauli_z();
  const ComplexMatrix other = frame == BobFrame::kXBisector ? ops::pauli_z() : ops::pauli_x();
  return DephasingChannel(g, b <= bob_ideal_angle(theta, kind) ? bisector : other);
}

ComplexMatrix apply_one_sided(const DephasingChannel& channel, const ComplexMatrix& rho, Side side) {
  if (rho.dim() != 4) {
    throw DimensionError("apply_one_sided expects a 4x4 operator");
  }
  const ComplexMatrix g = lift(channel.axis(), side);
  return 0.5 * (1.0 + channel.weight()) * rho + 0.5 * (1.0 - channel.weight()) * (g * rho * g);
}

DensityMatrix apply_one_sided(const DephasingChannel& channel, const DensityMatrix& rho, Side side) {
  return DensityMatrix(apply_one_sided(channel, rho.matrix(), side));
}

Settings ideal_settings(double theta, Inequality kind) {
  require_range(theta, kThetaMin, kPi / 4, "theta");
  return {kPi / 4, bob_ideal_angle(theta, kind)};
}

}  // namespace diqc
