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

#include <gtest/gtest.h>

#include <cmath>

#include "diqc/errors.hpp"
#include "test_support.hpp"

namespace diqc {
namespace {

using testing::Rng;

const double kRt2 = std::sqrt(2.0);

// Textbook expression for the new inequality, written out independently.
double new_value_oracle(const CorrelatorTable& t, double theta) {
  const double bt = std::atan(std::sqrt((1 + 0.5 * std::pow(std::cos(2 * theta), 2)) / std::pow(std::sin(2 * theta), 2)));
  const double a0b = t.joint[0][0] - t.joint[0][1];
  const double a1b = t.joint[1][0] + t.joint[1][1];
  return 0.25 * (a0b / std::sin(bt) + std::sin(2 * theta) / std::cos(bt) * a1b +
                 std::cos(2 * theta) * (t.alice[0] + (t.bob[0] - t.bob[1]) / (2 * std::sin(bt))));
}

CorrelatorTable random_table(Rng& rng) {
  CorrelatorTable t;
  for (auto& row : t.joint) {
    for (double& x : row) x = rng.uniform(-1, 1);
  }
  for (double& x : t.alice) x = rng.uniform(-1, 1);
  for (double& x : t.bob) x = rng.uniform(-1, 1);
  return t;
}

double expectation(const ComplexMatrix& op, const ComplexMatrix& rho) { return (op * rho).trace().real(); }

TEST(Chsh, Examples) {
  EXPECT_EQ(chsh_value(CorrelatorTable{}), 0.0);
  const DeterministicStrategy ones{{1, 1}, {1, 1}};
  EXPECT_EQ(chsh_value(ones.table()), 2.0);
  const ComplexMatrix phi = partial_entangled_state(kPi / 4, 0).projector();
  EXPECT_NEAR(chsh_value(correlators_from_state(phi, kPi / 4, kPi / 4, BobFrame::kZBisector)), 2 * kRt2, 1e-12);
}

TEST(CorrelatorTable, Validity) {
  CorrelatorTable t;
  EXPECT_TRUE(t.is_valid());
  t.bob[1] = 1.01;
  EXPECT_FALSE(t.is_valid());
}

TEST(NewBellValue, MatchesOracleAndDomain) {
  Rng rng(30);
  for (int k = 0; k < 50; ++k) {
    const double theta = rng.uniform(kThetaMin, kPi / 4);
    const CorrelatorTable t = random_table(rng);
    EXPECT_NEAR(new_bell_value(t, theta), new_value_oracle(t, theta), 1e-12);
  }
  EXPECT_THROW(new_bell_value(CorrelatorTable{}, 0.01), DomainError);
  EXPECT_THROW(new_bell_value(CorrelatorTable{}, 0.9), DomainError);
}

TEST(NewBellValue, IdealSettingsReachOne) {
  for (double theta : {0.05, 0.2, 0.45, 0.6, kPi / 4}) {
    const Settings s = ideal_settings(theta);
    const ComplexMatrix rho = partial_entangled_state(theta, 0).projector();
    EXPECT_NEAR(new_bell_value(correlators_from_state(rho, s.a, s.b), theta), 1.0, 1e-10);
  }
}

TEST(NewBellValue, ReducesToChshAtMaximalEntanglement) {
  Rng rng(31);
  for (int k = 0; k < 20; ++k) {
    const CorrelatorTable t = random_table(rng);
    // Flipping B1 lands on the standard CHSH form.
    CorrelatorTable c = t;
    for (int i = 0; i < 2; ++i) c.joint[i][1] = -t.joint[i][1];
    EXPECT_NEAR(new_bell_value(t, kPi / 4), chsh_value(c) / (2 * kRt2), 1e-12);
  }
}

TEST(NewBellValue, LocalStrategyReachesClosedForm) {
  for (double theta : {0.1, 0.4, kPi / 4}) {
    const DeterministicStrategy s{{1, 1}, {1, -1}};
    EXPECT_NEAR(new_bell_value(s.table(), theta), local_bound_new(theta), 1e-12);
  }
}

TEST(NewBellOperator, HermitianAndDualPath) {
  Rng rng(32);
  for (int k = 0; k < 20; ++k) {
    const double theta = rng.uniform(kThetaMin, kPi / 4);
    const double a = rng.uniform(0, kPi / 2);
    const double b = rng.uniform(0, kPi / 2);
    const ComplexMatrix rho = rng.density(4);
    const ComplexMatrix op = new_bell_operator(theta, a, b);
    EXPECT_TRUE(op.is_hermitian(1e-12));
    EXPECT_NEAR(expectation(op, rho), new_bell_value(correlators_from_state(rho, a, b), theta), 1e-10);
    EXPECT_LE(bell_operator(Inequality::kNew, theta, a, b).max_abs_diff(op), 0.0);
  }
}

TEST(TiltedOperator, DualPath) {
  Rng rng(33);
  for (int k = 0; k < 20; ++k) {
    const double theta = rng.uniform(kThetaMin, kPi / 4);
    const double a = rng.uniform(0, kPi / 2);
    const double b = rng.uniform(0, kPi / 2);
    const ComplexMatrix rho = rng.density(4);
    const CorrelatorTable t = correlators_from_state(rho, a, b, BobFrame::kZBisector);
    EXPECT_NEAR(expectation(tilted_operator(theta, a, b), rho), tilted_bell_value(t, theta), 1e-10);
  }
}

TEST(NewBellOperator, MaximumEigenvalueOneAtMaximalEntanglement) {
  const Settings s = ideal_settings(kPi / 4);
  EXPECT_NEAR(max_eigenvalue(new_bell_operator(kPi / 4, s.a, s.b)), 1.0, 1e-12);
}

TEST(BellOperators, QuantumMaximumOnGrid) {
  for (double theta : {0.1, 0.3, 0.6, kPi / 4}) {
    for (Inequality kind : {Inequality::kNew, Inequality::kTilted}) {
      double best = -10.0;
      const int n = 61;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double a = (kPi / 2) * i / (n - 1);
          const double b = (kPi / 2) * j / (n - 1);
          best = std::max(best, max_eigenvalue(bell_operator(kind, theta, a, b)));
        }
      }
      EXPECT_LE(best, 1.0 + 1e-6) << to_string(kind) << " theta " << theta;
      const Settings s = ideal_settings(theta, kind);
      EXPECT_NEAR(max_eigenvalue(bell_operator(kind, theta, s.a, s.b)), 1.0, 1e-9);
    }
  }
}

TEST(Tilted, AlphaAndLimits) {
  EXPECT_NEAR(tilted_alpha(kPi / 8), 2 / std::sqrt(3.0), 1e-12);
  EXPECT_EQ(tilted_alpha(kPi / 4), 0.0);
  EXPECT_NEAR(local_bound_tilted(kPi / 4), 1 / kRt2, 1e-15);
  Rng rng(34);
  for (int k = 0; k < 20; ++k) {
    const CorrelatorTable t = random_table(rng);
    EXPECT_NEAR(tilted_bell_value(t, kPi / 4), chsh_value(t) / (2 * kRt2), 1e-15);
  }
}

TEST(Tilted, IdealStateAndSettingsReachOne) {
  for (double theta : {0.05, 0.3, 0.6, kPi / 4}) {
    const Settings s = ideal_settings(theta, Inequality::kTilted);
    const ComplexMatrix rho = partial_entangled_state(theta, 0).projector();
    const CorrelatorTable t = correlators_from_state(rho, s.a, s.b, BobFrame::kZBisector);
    EXPECT_NEAR(tilted_bell_value(t, theta), 1.0, 1e-9);
  }
}

TEST(LocalBounds, ClosedFormValues) {
  EXPECT_NEAR(local_bound_new(kPi / 4), 1 / kRt2, 1e-15);
  EXPECT_EQ(brute_force_local_bound(BellKind::chsh()).value, 2.0);
}

TEST(LocalBounds, EnumerationMatchesClosedForms) {
  for (int k = 0; k < 50; ++k) {
    const double theta = kThetaMin + (kPi / 4 - kThetaMin) * k / 49;
    const LocalBoundResult n = brute_force_local_bound(BellKind::new_inequality(theta));
    EXPECT_NEAR(n.value, local_bound_new(theta), 1e-12);
    EXPECT_EQ(n.vertex, (DeterministicStrategy{{1, 1}, {1, -1}}));
    EXPECT_NEAR(brute_force_local_bound(BellKind::tilted(theta)).value, local_bound_tilted(theta), 1e-12);
    EXPECT_GE(local_bound_new(theta), local_bound_tilted(theta) - 1e-15);
  }
}

TEST(Correlators, Examples) {
  const CorrelatorTable mixed = correlators_from_state(ComplexMatrix::identity(4) * 0.25, 0.3, 0.7);
  EXPECT_EQ(mixed, CorrelatorTable{});
  const ComplexMatrix phi = partial_entangled_state(kPi / 4, 0).projector();
  EXPECT_NEAR(correlators_from_state(phi, kPi / 4, kPi / 4).joint[0][0], 1 / kRt2, 1e-15);
  Rng rng(35);
  for (int k = 0; k < 50; ++k) {
    const CorrelatorTable t = correlators_from_state(rng.density(4), rng.uniform(0, 1.6), rng.uniform(0, 1.6));
    EXPECT_TRUE(t.is_valid(1e-12));
  }
}

TEST(Relabel, Involution) {
  Rng rng(36);
  for (int k = 0; k < 20; ++k) {
    const CorrelatorTable t = random_table(rng);
    for (BobFrame f : {BobFrame::kXBisector, BobFrame::kZBisector}) {
      EXPECT_EQ(relabel_branch1(relabel_branch1(t, f), f), t);
    }
  }
}

TEST(Relabel, ReproducesRotatedOperator) {
  // Tr(B'(a,b) rho) must equal the unchanged expression on relabeled data.
  Rng rng(37);
  for (int k = 0; k < 40; ++k) {
    const double theta = rng.uniform(kThetaMin, kPi / 4);
    const double a = rng.uniform(0, kPi / 2);
    const double b = rng.uniform(0, kPi / 2);
    const ComplexMatrix rho = rng.density(4);
    for (Inequality kind : {Inequality::kNew, Inequality::kTilted}) {
      const BobFrame f = bob_frame(kind);
      const CorrelatorTable t = relabel_branch1(correlators_from_state(rho, a, b, f), f);
      EXPECT_NEAR(expectation(branch1_operator(kind, theta, a, b), rho), bell_value(BellKind::of(kind, theta), t),
                  1e-10);
    }
  }
}

TEST(Relabel, BranchOneIdealReachesOneAndBranchZeroDoesNot) {
  for (double theta : {0.2, 0.45, 0.6}) {
    for (Inequality kind : {Inequality::kNew, Inequality::kTilted}) {
      const BobFrame f = bob_frame(kind);
      const Settings s = ideal_settings(theta, kind);
      const ComplexMatrix r1 = partial_entangled_state(theta, 1).projector();
      const ComplexMatrix r0 = partial_entangled_state(theta, 0).projector();
      const BellKind bk = BellKind::of(kind, theta);
      EXPECT_NEAR(bell_value(bk, relabel_branch1(correlators_from_state(r1, s.a, s.b, f), f)), 1.0, 1e-10);
      EXPECT_LT(bell_value(bk, relabel_branch1(correlators_from_state(r0, s.a, s.b, f), f)), 1.0 - 1e-3);
    }
  }
}

TEST(Branch1Operator, RotationConsistency) {
  Rng rng(38);
  const ComplexMatrix rr = kron(ops::rotation_r(), ops::rotation_r());
  for (int k = 0; k < 20; ++k) {
    const double theta = rng.uniform(kThetaMin, kPi / 4);
    const double a = rng.uniform(0, kPi / 2);
    const double b = rng.uniform(0, kPi / 2);
    const ComplexMatrix rho = rng.density(4);
    const double lhs = expectation(branch1_operator(Inequality::kNew, theta, a, b), rho.conjugated_by(rr));
    EXPECT_NEAR(lhs, expectation(new_bell_operator(theta, kPi / 2 - a, b), rho), 1e-10);
  }
}

}  // namespace
}  // namespace diqc
