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

#include "diqc/bell.hpp"

#include <cmath>
#include <sstream>

#include "diqc/errors.hpp"

namespace diqc {
namespace {

void require_theta(double theta) {
  if (!(theta >= kThetaMin && theta <= kPi / 4)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "theta = " << theta << " outside [" << kThetaMin << ", pi/4]";
    throw DomainError(msg.str());
  }
}

}  // namespace

bool CorrelatorTable::is_valid(double tol) const {
  auto ok = [tol](double x) { return std::isfinite(x) && std::abs(x) <= 1.0 + tol; };
  for (const auto& row : joint) {
    for (double x : row) {
      if (!ok(x)) return false;
    }
  }
  return ok(alice[0]) && ok(alice[1]) && ok(bob[0]) && ok(bob[1]);
}

double chsh_value(const CorrelatorTable& t) {
  return t.joint[0][0] + t.joint[0][1] + t.joint[1][0] - t.joint[1][1];
}

double new_bell_value(const CorrelatorTable& t, double theta) {
  require_theta(theta);
  const double bt = bob_ideal_angle(theta, Inequality::kNew);
  const double sb = std::sin(bt);
  const double cb = std::cos(bt);
  const double a0_bdiff = t.joint[0][0] - t.joint[0][1];
  const double a1_bsum = t.joint[1][0] + t.joint[1][1];
  const double bdiff = t.bob[0] - t.bob[1];
  return 0.25 * (a0_bdiff / sb + std::sin(2 * theta) / cb * a1_bsum +
                 std::cos(2 * theta) * (t.alice[0] + bdiff / (2 * sb)));
}

ComplexMatrix new_bell_operator(double theta, double a, double b) {
  require_theta(theta);
  const double bt = bob_ideal_angle(theta, Inequality::kNew);
  const double sb = std::sin(bt);
  const double cb = std::cos(bt);
  const ComplexMatrix a0 = alice_observable(a, 0);
  const ComplexMatrix a1 = alice_observable(a, 1);
  const ComplexMatrix b0 = bob_observable(b, 0, BobFrame::kXBisector);
  const ComplexMatrix b1 = bob_observable(b, 1, BobFrame::kXBisector);
  const ComplexMatrix id = ops::identity2();
  ComplexMatrix op = (1.0 / sb) * kron(a0, b0 - b1);
  op += (std::sin(2 * theta) / cb) * kron(a1, b0 + b1);
  op += std::cos(2 * theta) * (kron(a0, id) + (1.0 / (2 * sb)) * kron(id, b0 - b1));
  return 0.25 * op;
}

double local_bound_new(double theta) {
  require_theta(theta);
  const double c2 = std::cos(2 * theta);
  const double c4 = std::cos(4 * theta);
  return 0.25 * (c2 + (2 + c2) * std::sqrt((7 - c4) / (5 + c4)));
}

double tilted_alpha(double theta) {
  require_theta(theta);
  if (theta == kPi / 4) {
    return 0.0;
  }
  // 2/sqrt(1 + 2 tan^2 2theta) multiplied through by cos 2theta, finite up to pi/4.
  const double c2 = std::cos(2 * theta);
  const double s2 = std::sin(2 * theta);
  return 2 * c2 / std::sqrt(c2 * c2 + 2 * s2 * s2);
}

double local_bound_tilted(double theta) {
  const double alpha = tilted_alpha(theta);
  return (2 + alpha) / std::sqrt(8 + 2 * alpha * alpha);
}

double tilted_bell_value(const CorrelatorTable& t, double theta) {
  const double alpha = tilted_alpha(theta);
  const double raw = alpha * t.alice[0] + t.joint[0][0] + t.joint[0][1] + t.joint[1][0] - t.joint[1][1];
  return raw / std::sqrt(8 + 2 * alpha * alpha);
}

ComplexMatrix tilted_operator(double theta, double a, double b) {
  const double alpha = tilted_alpha(theta);
  const ComplexMatrix a0 = alice_observable(a, 0);
  const ComplexMatrix a1 = alice_observable(a, 1);
  const ComplexMatrix b0 = bob_observable(b, 0, BobFrame::kZBisector);
  const ComplexMatrix b1 = bob_observable(b, 1, BobFrame::kZBisector);
  ComplexMatrix op = alpha * kron(a0, ops::identity2());
  op += kron(a0, b0 + b1);
  op += kron(a1, b0 - b1);
  return (1.0 / std::sqrt(8 + 2 * alpha * alpha)) * op;
}

double bell_value(const BellKind& kind, const CorrelatorTable& t) {
  switch (kind.tag) {
    case BellKind::Tag::kChsh:
      return chsh_value(t);
    case BellKind::Tag::kNew:
      return new_bell_value(t, kind.theta);
    case BellKind::Tag::kTilted:
      return tilted_bell_value(t, kind.theta);
  }
  throw ContractError("unknown Bell kind");
}

ComplexMatrix bell_operator(Inequality kind, double theta, double a, double b) {
  return kind == Inequality::kNew ? new_bell_operator(theta, a, b) : tilted_operator(theta, a, b);
}

ComplexMatrix branch1_operator(Inequality kind, double theta, double a, double b) {
  const ComplexMatrix rr = kron(ops::rotation_r(), ops::rotation_r());
  return bell_operator(kind, theta, kPi / 2 - a, b).conjugated_by(rr);
}

CorrelatorTable DeterministicStrategy::table() const {
  CorrelatorTable t;
  for (int k = 0; k < 2; ++k) {
    t.alice[k] = alice[k];
    t.bob[k] = bob[k];
    for (int j = 0; j < 2; ++j) {
      t.joint[k][j] = alice[k] * bob[j];
    }
  }
  return t;
}

LocalBoundResult brute_force_local_bound(const BellKind& kind) {
  LocalBoundResult best{-1e300, {}};
  // Enumerate with +1 before -1 so the all-ones strategy comes first.
  for (int mask = 0; mask < 16; ++mask) {
    DeterministicStrategy s;
    s.alice = {mask & 1 ? -1 : 1, mask & 2 ? -1 : 1};
    s.bob = {mask & 4 ? -1 : 1, mask & 8 ? -1 : 1};
    const double v = bell_value(kind, s.table());
    if (v > best.value) {
      best = {v, s};
    }
  }
  return best;
}

CorrelatorTable correlators_from_state(const ComplexMatrix& rho, double a, double b, BobFrame frame) {
  if (rho.dim() != 4) {
    throw DimensionError("correlators_from_state expects a two-qubit state");
  }
  const ComplexMatrix id = ops::identity2();
  const std::array<ComplexMatrix, 2> as = {alice_observable(a, 0), alice_observable(a, 1)};
  const std::array<ComplexMatrix, 2> bs = {bob_observable(b, 0, frame), bob_observable(b, 1, frame)};
  auto expect = [&rho](const ComplexMatrix& op) { return (rho * op).trace().real(); };
  CorrelatorTable t;
  for (int k = 0; k < 2; ++k) {
    t.alice[k] = expect(kron(as[k], id));
    t.bob[k] = expect(kron(id, bs[k]));
    for (int j = 0; j < 2; ++j) {
      t.joint[k][j] = expect(kron(as[k], bs[j]));
    }
  }
  return t;
}

CorrelatorTable relabel_branch1(const CorrelatorTable& t, BobFrame frame) {
  // Outcome-1 observable j is read from observable src[j] with sign bob_sign.
  const std::array<int, 2> src = {1, 0};
  const double bob_sign = frame == BobFrame::kXBisector ? 1.0 : -1.0;
  const std::array<double, 2> alice_sign = {-1.0, 1.0};
  CorrelatorTable out;
  for (int k = 0; k < 2; ++k) {
    out.alice[k] = alice_sign[k] * t.alice[k];
    out.bob[k] = bob_sign * t.bob[src[k]];
    for (int j = 0; j < 2; ++j) {
      out.joint[k][j] = alice_sign[k] * bob_sign * t.joint[k][src[j]];
    }
  }
  return out;
}

}  // namespace diqc
