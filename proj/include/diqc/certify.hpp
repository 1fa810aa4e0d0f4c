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

#include <string>

#include "diqc/bell.hpp"
#include "diqc/quantum.hpp"

namespace diqc {

/// 2 sqrt 2.
double tsirelson_bound();
/// CHSH value below which the input fidelity certificate is trivial:
/// 2(8 + 7 sqrt 2)/17.
double beta_star();

struct GridSpec {
  int n_a = 201;
  int n_b = 201;
  int refinement_levels = 2;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct CutoffOptions {
  GridSpec grid;
  double tol = 1e-9;
  DeltaVariant delta_variant = DeltaVariant::kLogInterpolation;
  /// Final width of the bisection bracket on i_star.
  double search_width = 1e-7;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Result of the cutoff search: the line s * I + mu lower-bounding the
/// extracted overlap with |phi_theta^0>, verified on an angle grid.
struct LinearBoundCertificate {
  double theta = 0.0;
  Inequality kind = Inequality::kNew;
  double i_star = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  GridSpec grid;
  double tol = 0.0;
  double search_width = 0.0;
  double local_bound = 0.0;
  double worst_margin = 0.0;
  Settings worst_point{0.0, 0.0};
  DeltaVariant delta_variant = DeltaVariant::kLogInterpolation;
  bool monotonicity_checked = false;
};

/// s = (1 - cos^2 theta)/(1 - i_star).
double certificate_slope(double theta, double i_star);
/// mu = (cos^2 theta - i_star)/(1 - i_star).
double certificate_intercept(double theta, double i_star);

/// lambda_min of (Lambda_a (x) Lambda_b)[|phi_theta^0><phi_theta^0|] - s B(a, b) - mu 1.
double operator_margin(double theta, Inequality kind, double i_star, double a, double b,
                       DeltaVariant variant = DeltaVariant::kLogInterpolation);

/// Same with |phi_theta^1> and the branch-1 operator B'(a, b).
double branch1_margin(double theta, Inequality kind, double i_star, double a, double b,
                      DeltaVariant variant = DeltaVariant::kLogInterpolation);

/// Smallest i_star for which operator_margin >= -tol on the whole grid and its
/// refinement patches. The search bracket is [local + g, 1 - g] with
/// g = min(1e-6, 1e-3 (1 - local)), and the bisection stops at
/// min(search_width, 1e-2 (1 - local)). Throws ChannelFamilyError when the
/// top of the bracket is infeasible and ContractError when the spot-checked
/// monotonicity fails.
LinearBoundCertificate find_cutoff(double theta, Inequality kind, const CutoffOptions& options = {});

/// Worst branch-1 margin over the grid with the certificate's slope and
/// intercept. Throws SymmetryViolationError below -10 tol.
double verify_branch1(const LinearBoundCertificate& cert, const GridSpec& grid, unsigned threads = 0);

/// Lower bound on the fidelity of the source with |phi+> from a CHSH value.
/// Floors at 1/sqrt 2. Values above 2 sqrt 2 + 1e-6 throw NonQuantumValueError.
double input_fidelity_bound(double beta);

/// Lower bound on a post-measurement branch fidelity; floors at cos(theta).
double output_fidelity_bound(double i, double theta, double i_star);

/// sqrt(p0/2) f0 + sqrt((1 - p0)/2) f1.
double combine_branches(double p0, double f0, double f1);

/// cos(arccos f_in + arccos f_out), zero once the angles add up past pi/2.
double instrument_fidelity_bound(double f_in, double f_out);

struct FidelityCertificate {
  double theta = 0.0;
  double i_star = 0.0;
  double beta = 0.0;
  double i0 = 0.0;
  double i1 = 0.0;
  double p0 = 0.0;
  double f_in = 0.0;
  double f_out0 = 0.0;
  double f_out1 = 0.0;
  double f_out = 0.0;
  double bound = 0.0;
};

/// Composes the CHSH certificate, both branch certificates and the register
/// combination into a lower bound on the instrument fidelity.
FidelityCertificate certify_instrument(double beta, double i0, double i1, double p0, double theta,
                                       const LinearBoundCertificate& cert);

}  // namespace diqc
