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

#include "diqc/experiment.hpp"

#include <cmath>
#include <sstream>

#include "diqc/bell.hpp"
#include "diqc/errors.hpp"

namespace diqc {
namespace {

void require_range(double x, double lo, double hi, const char* what) {
  if (!(x >= lo && x <= hi)) {
    std::ostringstream msg;
    msg << what << " = " << x << " outside [" << lo << ", " << hi << "]";
    throw DomainError(msg.str());
  }
}

double step_one_chsh(const ComplexMatrix& rho, const NoiseModel& noise) {
  const CorrelatorTable t = correlators_from_state(rho, kPi / 4 + noise.alice_angle_offset,
                                                   kPi / 4 + noise.bob_angle_offset, BobFrame::kZBisector);
  return chsh_value(t);
}

double score_branch(const ComplexMatrix& rho, int branch, double theta, Inequality kind,
                    const NoiseModel& noise) {
  const BobFrame frame = bob_frame(kind);
  const double a = kPi / 4 + noise.alice_angle_offset;
  const double b = bob_ideal_angle(theta, kind) + noise.bob_angle_offset;
  CorrelatorTable t = correlators_from_state(rho, a, b, frame);
  if (branch == 1) t = relabel_branch1(t, frame);
  return bell_value(BellKind::of(kind, theta), t);
}

}  // namespace

NoiseModel NoiseModel::ideal(double theta) { return {1.0, 0.0, 0.0, theta, 0.0}; }

void NoiseModel::validate() const {
  require_range(visibility, 0.0, 1.0, "visibility");
  require_range(branch_depolarization, 0.0, 1.0, "eta");
  require_range(instrument_theta, 0.0, kPi / 4, "instrument theta");
  require_range(alice_angle_offset, -kPi / 4, kPi / 4, "alice angle offset");
  require_range(bob_angle_offset, -kPi / 4, kPi / 4, "bob angle offset");
}

DensityMatrix noisy_source(double visibility) {
  require_range(visibility, 0.0, 1.0, "visibility");
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  return DensityMatrix(visibility * ComplexMatrix::outer(phi) +
                       (1.0 - visibility) * 0.25 * ComplexMatrix::identity(4));
}

KrausInstrument noisy_instrument(double theta_prime, double eta) {
  require_range(eta, 0.0, 1.0, "eta");
  const KrausInstrument ref = reference_instrument(theta_prime);
  std::vector<std::vector<ComplexMatrix>> branches;
  for (const auto& branch : ref.branches()) {
    const ComplexMatrix& k = branch.front();
    std::vector<ComplexMatrix> ops;
    if (eta < 1.0) ops.push_back(std::sqrt(1.0 - eta) * k);
    if (eta > 0.0) {
      ops.push_back(std::sqrt(eta / 2) * (ops::pauli_x() * k));
      ops.push_back(std::sqrt(eta / 2) * (ops::pauli_z() * k));
    }
    branches.push_back(std::move(ops));
  }
  KrausInstrument out(std::move(branches));
  if (out.completeness_defect() > 1e-10) {
    throw ConstructionError("noisy instrument is not complete");
  }
  return out;
}

RunStatistics simulate_run(const NoiseModel& noise, double theta, Inequality kind) {
  noise.validate();
  const DensityMatrix source = noisy_source(noise.visibility);
  RunStatistics stats;
  stats.beta = step_one_chsh(source.matrix(), noise);
  const RegisterState post =
      apply_instrument(noisy_instrument(noise.instrument_theta, noise.branch_depolarization), source, Side::kBob);
  stats.p0 = post.probability(0);
  stats.i0 = score_branch(post.block(0).state, 0, theta, kind, noise);
  stats.i1 = score_branch(post.block(1).state, 1, theta, kind, noise);
  return stats;
}

FidelityCertificate end_to_end(const NoiseModel& noise, double theta, const LinearBoundCertificate& cert) {
  const RunStatistics s = simulate_run(noise, theta, cert.kind);
  return certify_instrument(s.beta, s.i0, s.i1, s.p0, theta, cert);
}

double oracle_choi_fidelity(const NoiseModel& noise, double theta) {
  noise.validate();
  const RegisterState actual = instrument_choi(noisy_instrument(noise.instrument_theta, noise.branch_depolarization));
  const RegisterState reference = instrument_choi(reference_instrument(theta));
  return block_fidelity(actual, reference);
}

RunStatistics cheating_run(double theta) {
  // Order A (x) B (x) B'; B' is the rightmost qubit.
  const PureState phi0 = partial_entangled_state(theta, 0);
  const PureState phi1 = partial_entangled_state(theta, 1);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  for (int i = 0; i < 4; ++i) {
    psi(2 * i + 0) = phi0.amplitudes()(i) / std::sqrt(2.0);
    psi(2 * i + 1) = phi1.amplitudes()(i) / std::sqrt(2.0);
  }
  const ComplexMatrix rho = ComplexMatrix::outer(psi);

  RunStatistics stats;
  const NoiseModel ideal = NoiseModel::ideal(theta);
  stats.beta = step_one_chsh(partial_trace_right(rho, 4), ideal);

  // Reading B' in the computational basis leaves A B in |phi_theta^l>.
  std::array<ComplexMatrix, 2> conditional = {ComplexMatrix(4), ComplexMatrix(4)};
  std::array<double, 2> prob{};
  for (int l = 0; l < 2; ++l) {
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(2, 2);
    proj(l, l) = 1.0;
    const ComplexMatrix projected = kron(ComplexMatrix::identity(4), ComplexMatrix(proj)) * rho *
                                    kron(ComplexMatrix::identity(4), ComplexMatrix(proj));
    prob[l] = projected.trace().real();
    conditional[l] = (1.0 / prob[l]) * partial_trace_right(projected, 4);
  }
  stats.p0 = prob[0];
  stats.i0 = score_branch(conditional[0], 0, theta, Inequality::kNew, ideal);
  stats.i1 = score_branch(conditional[1], 1, theta, Inequality::kNew, ideal);
  return stats;
}

double cheating_device_fidelity(double theta) {
  return block_fidelity(instrument_choi(reference_instrument(kPi / 4)),
                        instrument_choi(reference_instrument(theta)));
}

}  // namespace diqc
