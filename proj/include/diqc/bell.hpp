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

#include <array>

#include "diqc/matrixcore.hpp"
#include "diqc/quantum.hpp"

namespace diqc {

/// Two-setting, two-outcome correlators: joint[k][j] = <A_k B_j>,
/// alice[k] = <A_k>, bob[j] = <B_j>.
struct CorrelatorTable {
  std::array<std::array<double, 2>, 2> joint{};
  std::array<double, 2> alice{};
  std::array<double, 2> bob{};

  /// Every entry in [-1 - tol, 1 + tol].
  bool is_valid(double tol = 1e-9) const;
  friend bool operator==(const CorrelatorTable&, const CorrelatorTable&) = default;
};

struct BellKind {
  enum class Tag { kChsh, kNew, kTilted };
  Tag tag;
  double theta;  // unused for kChsh

  static BellKind chsh() { return {Tag::kChsh, 0.0}; }
  static BellKind new_inequality(double theta) { return {Tag::kNew, theta}; }
  static BellKind tilted(double theta) { return {Tag::kTilted, theta}; }
  static BellKind of(Inequality kind, double theta) {
    return kind == Inequality::kNew ? new_inequality(theta) : tilted(theta);
  }
};

/// <A0B0> + <A0B1> + <A1B0> - <A1B1>.
double chsh_value(const CorrelatorTable& t);

/// The partially-entangled self-test expression; quantum maximum 1 at
/// ideal_settings(theta) on |phi_theta^0>. theta in [0.05, pi/4].
double new_bell_value(const CorrelatorTable& t, double theta);

/// Bell operator of new_bell_value with A(a) and B(b) in the x-bisector frame.
ComplexMatrix new_bell_operator(double theta, double a, double b);

/// 1/4 [cos 2theta + (2 + cos 2theta) sqrt((7 - cos 4theta)/(5 + cos 4theta))].
double local_bound_new(double theta);

/// alpha_theta = 2/sqrt(1 + 2 tan^2 2theta), exactly 0 at theta = pi/4.
double tilted_alpha(double theta);
/// (2 + alpha)/sqrt(8 + 2 alpha^2).
double local_bound_tilted(double theta);

/// (alpha <A0> + <A0(B0+B1)> + <A1(B0-B1)>)/sqrt(8 + 2 alpha^2).
double tilted_bell_value(const CorrelatorTable& t, double theta);
/// Operator of tilted_bell_value with Bob's pair in the z-bisector frame.
ComplexMatrix tilted_operator(double theta, double a, double b);

double bell_value(const BellKind& kind, const CorrelatorTable& t);

/// Bell operator of the given inequality in its own Bob frame.
ComplexMatrix bell_operator(Inequality kind, double theta, double a, double b);

/// Operator of the branch-1 expression: (R (x) R) B(pi/2 - a, b) (R (x) R)^dagger.
ComplexMatrix branch1_operator(Inequality kind, double theta, double a, double b);

/// A deterministic local strategy: each observable outputs a fixed +-1.
struct DeterministicStrategy {
  std::array<int, 2> alice{};
  std::array<int, 2> bob{};

  CorrelatorTable table() const;
  friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;
};

struct LocalBoundResult {
  double value;
  DeterministicStrategy vertex;  // first maximizer in enumeration order
};

/// Maximum over the 16 deterministic strategies.
LocalBoundResult brute_force_local_bound(const BellKind& kind);

/// Born-rule correlators of A(a) and B(b) on a two-qubit state.
CorrelatorTable correlators_from_state(const ComplexMatrix& rho, double a, double b,
                                       BobFrame frame = BobFrame::kXBisector);

/// Relabeling applied to outcome-1 data so that the unchanged expression
/// evaluates the branch-1 inequality. x-bisector frame: A0 -> -A0 and
/// B0 <-> B1. z-bisector frame: A0 -> -A0, B0 -> -B1, B1 -> -B0.
CorrelatorTable relabel_branch1(const CorrelatorTable& t, BobFrame frame = BobFrame::kXBisector);

}  // namespace diqc
