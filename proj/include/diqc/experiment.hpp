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

#include "diqc/certify.hpp"
#include "diqc/quantum.hpp"

namespace diqc {

/// Imperfections of the simulated setup.
struct NoiseModel {
  double visibility = 1.0;        // isotropic source visibility v
  double alice_angle_offset = 0;  // added to Alice's setting a
  double bob_angle_offset = 0;    // added to Bob's setting b
  double instrument_theta = 0;    // theta' of the implemented Kraus operators
  double branch_depolarization = 0;  // eta: weight of sigma_x / sigma_z kicks

  /// The noiseless model for a target theta.
  static NoiseModel ideal(double theta);
  /// Throws DomainError when a parameter is out of range.
  void validate() const;
};

/// Exact expectation values produced by the two measurement steps.
struct RunStatistics {
  double beta = 0.0;
  double i0 = 0.0;
  double i1 = 0.0;
  double p0 = 0.0;
};

/// v |phi+><phi+| + (1 - v) 1/4.
DensityMatrix noisy_source(double visibility);

/// Branch l: { sqrt(1-eta) K_l(theta'), sqrt(eta/2) sigma_x K_l(theta'), sqrt(eta/2) sigma_z K_l(theta') }.
KrausInstrument noisy_instrument(double theta_prime, double eta);

/// Step I: CHSH on the source at a = pi/4 + eps_a, b = pi/4 + eps_b (z-bisector
/// frame, so b = pi/4 gives (sigma_z +- sigma_x)/sqrt 2). Step II: the
/// instrument acts on Bob's qubit and each branch is scored at
/// (pi/4 + eps_a, b_theta + eps_b); branch 1 through relabel_branch1.
RunStatistics simulate_run(const NoiseModel& noise, double theta, Inequality kind = Inequality::kNew);

/// simulate_run followed by certify_instrument.
FidelityCertificate end_to_end(const NoiseModel& noise, double theta, const LinearBoundCertificate& cert);

/// Choi-state fidelity of the simulated instrument against the reference one
/// with identity extraction maps.
double oracle_choi_fidelity(const NoiseModel& noise, double theta);

/// Source (|phi_theta^0>|0> + |phi_theta^1>|1>)/sqrt 2 with the auxiliary qubit
/// on Bob's side and an instrument that only reads the auxiliary qubit.
/// Statistics are scored exactly as in simulate_run.
RunStatistics cheating_run(double theta);

/// Choi fidelity of the readout-only device (fed |+> on the auxiliary qubit,
/// i.e. the identity channel with a uniformly random label) against the
/// reference instrument.
double cheating_device_fidelity(double theta);

}  // namespace diqc
