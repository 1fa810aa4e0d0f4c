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

#include <optional>
#include <string>
#include <vector>

#include "diqc/matrixcore.hpp"

namespace diqc {

inline constexpr double kPi = 3.14159265358979323846;
/// Smallest entanglement angle accepted where a Bell expression divides by
/// sin(2 theta).
inline constexpr double kThetaMin = 0.05;

enum class Side { kAlice, kBob };

enum class Inequality { kNew, kTilted };

/// Orientation of Bob's observable pair B0/B1 = cos(b) X +- sin(b) Y.
///
/// kXBisector: X = sigma_x, Y = sigma_z. The frame of the new inequality.
/// kZBisector: X = sigma_z, Y = sigma_x. The frame of CHSH and tilted-CHSH,
///   where b = pi/4 gives (sigma_z +- sigma_x)/sqrt(2).
enum class BobFrame { kXBisector, kZBisector };

/// Which closed form is used for the offset delta_theta of Bob's angle map.
enum class DeltaVariant {
  kPrinted,           // delta = b^2/(pi^2 - 2b), t = ln((b - delta)/delta)/gamma
  kFallback,          // delta = 2b^2/pi,         t = ln((b - delta)/delta)/gamma
  kLogInterpolation,  // delta = b^2/(pi/2 - 2b), t = ln((b + delta)/delta)/gamma
};

std::string to_string(Inequality kind);
std::string to_string(DeltaVariant variant);
std::string to_string(BobFrame frame);
/// Throws DomainError on unknown names.
Inequality parse_inequality(const std::string& name);
DeltaVariant parse_delta_variant(const std::string& name);

BobFrame bob_frame(Inequality kind);

namespace ops {
ComplexMatrix identity2();
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
/// (sigma_z + sigma_x)/sqrt(2).
ComplexMatrix basis_h();
/// (sigma_z - sigma_x)/sqrt(2).
ComplexMatrix basis_v();
/// exp(i pi/2 sigma_x) = i sigma_x.
ComplexMatrix rotation_r();
}  // namespace ops

class PureState {
 public:
  /// Throws NormalizationError unless the norm is 1 within 1e-10.
  explicit PureState(Eigen::VectorXcd amplitudes);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Complex inner(const PureState& other) const { return amps_.dot(other.amps_); }
  ComplexMatrix projector() const { return ComplexMatrix::outer(amps_); }

 private:
  Eigen::VectorXcd amps_;
};

/// Hermitian PSD trace-1 matrix (trace within 1e-8, lambda_min >= -1e-9).
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.dim(); }

 private:
  ComplexMatrix m_;
};

/// A(a): A0 = cos(a) H + sin(a) V, A1 = cos(a) H - sin(a) V.
ComplexMatrix alice_observable(double a, int index);
/// B(b): B0 = cos(b) X + sin(b) Y, B1 = cos(b) X - sin(b) Y in the given frame.
ComplexMatrix bob_observable(double b, int index, BobFrame frame = BobFrame::kXBisector);

struct QubitObservable {
  double angle;
  Side side;
  int index;
  BobFrame frame = BobFrame::kXBisector;

  ComplexMatrix matrix() const;
};

/// Outcome branches, each a list of 2x2 Kraus operators. Completeness
/// sum K^dagger K = 1 is checked to 1e-9 on construction.
class KrausInstrument {
 public:
  explicit KrausInstrument(std::vector<std::vector<ComplexMatrix>> branches);

  const std::vector<std::vector<ComplexMatrix>>& branches() const { return branches_; }
  std::size_t outcomes() const { return branches_.size(); }
  /// max |sum K^dagger K - 1|.
  double completeness_defect() const;

 private:
  std::vector<std::vector<ComplexMatrix>> branches_;
};

/// branch 0: cos(theta)|00> + sin(theta)|11>; branch 1: sin(theta)|00> + cos(theta)|11>.
/// theta must lie in [theta_min, pi/4].
PureState partial_entangled_state(double theta, int branch, double theta_min = kThetaMin);

/// K0 = cos(theta)|0><0| + sin(theta)|1><1|, K1 = sin(theta)|0><0| + cos(theta)|1><1|,
/// theta in [0, pi/4].
KrausInstrument reference_instrument(double theta);

/// Runs the instrument on one qubit of a two-qubit state. Branches with
/// probability below 1e-12 carry the maximally mixed state as placeholder.
RegisterState apply_instrument(const KrausInstrument& instr, const DensityMatrix& rho, Side side);

/// (id (x) M)[|phi+><phi+|], split by outcome.
RegisterState instrument_choi(const KrausInstrument& instr);

/// rho -> (1+g)/2 rho + (1-g)/2 G rho G for a Pauli-like unitary G (G^2 = 1).
class DephasingChannel {
 public:
  DephasingChannel(double weight, ComplexMatrix axis);

  static DephasingChannel identity();

  double weight() const { return weight_; }
  const ComplexMatrix& axis() const { return axis_; }

  /// Action on a single qubit.
  ComplexMatrix apply(const ComplexMatrix& rho) const;
  /// Normalized Choi state (id (x) Lambda)[|phi+><phi+|].
  ComplexMatrix choi() const;

 private:
  double weight_;
  ComplexMatrix axis_;
};

/// g(x) = (1 + sqrt 2)(cos x + sin x - 1), unclamped.
double dephasing_g(double x);

/// b_theta: half-angle between Bob's ideal observables. New inequality:
/// arctan sqrt((1 + cos^2(2 theta)/2)/sin^2(2 theta)); tilted: arctan(sin 2 theta).
double bob_ideal_angle(double theta, Inequality kind);

/// t_theta(b). Empty when the logarithm is undefined (full dephasing).
std::optional<double> bob_angle_map(double b, double theta, Inequality kind, DeltaVariant variant);

/// Alice's extraction channel for half-angle a in [0, pi/2]: axis H on
/// [0, pi/4], V on (pi/4, pi/2], weight g(a) clamped to [0, 1].
DephasingChannel dephasing_alice(double a);

/// Bob's extraction channel for half-angle b in [0, pi/2]. Weight
/// g(t_theta(b)) clamped to [0, 1]. Axis is the frame's bisector Pauli for
/// b <= b_theta and the other Pauli above.
DephasingChannel dephasing_bob(double b, double theta, Inequality kind,
                               DeltaVariant variant = DeltaVariant::kLogInterpolation);

/// (Lambda (x) id)[rho] or (id (x) Lambda)[rho] for any 4x4 operator.
ComplexMatrix apply_one_sided(const DephasingChannel& channel, const ComplexMatrix& rho, Side side);
DensityMatrix apply_one_sided(const DephasingChannel& channel, const DensityMatrix& rho, Side side);

struct Settings {
  double a;
  double b;
};

/// Settings at which the inequality reaches 1 on |phi_theta^0>: a = pi/4 and
/// b = b_theta.
Settings ideal_settings(double theta, Inequality kind = Inequality::kNew);

}  // namespace diqc
