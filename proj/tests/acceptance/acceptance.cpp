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

// Acceptance suite. Prints one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance N          run criterion N only
//
// Cutoff certificates are shared between criteria through the on-disk cache
// ($DIQC_CACHE_DIR, default ./acceptance_cache).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "diqc/bell.hpp"
#include "diqc/certify.hpp"
#include "diqc/cli.hpp"
#include "diqc/errors.hpp"
#include "diqc/experiment.hpp"

#ifndef DIQC_UNIT_TEST_DIR
#define DIQC_UNIT_TEST_DIR "."
#endif

namespace {

using namespace diqc;

// Pinned tolerances and budgets.
constexpr double kLocalBoundTol = 1e-12;
constexpr double kQuantumBoundTol = 1e-10;
constexpr double kAnchorTol = 0.01;
constexpr double kAcceptTol = 1e-9;
constexpr double kBranch1GridTol = 1e-8;
constexpr double kMirrorTol = 1e-9;
constexpr double kEndpointTopTol = 1e-9;
constexpr double kEndpointStarTol = 1e-6;
constexpr double kSoundnessTol = 1e-6;
constexpr double kCornerTol = 1e-9;
constexpr double kMonotoneSlack = 1e-12;
constexpr double kCheatStatTol = 1e-9;
constexpr int kThetaSamples = 50;
constexpr int kMirrorSamples = 100;
constexpr int kNoiseSamples = 250;
constexpr int kFig5N = 50;
constexpr double kBudget1 = 1.0;
constexpr double kBudget2 = 1.0;
constexpr double kBudget3 = 300.0;
constexpr double kBudget7 = 600.0;
constexpr double kBudget10 = 120.0;

const double kRt2 = std::sqrt(2.0);

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Outcome {
  bool pass;
  std::string detail;
};

const CertificateCache& cache() {
  static const CertificateCache c(CertificateCache::resolve_dir(std::nullopt).string() == ".diqc_cache"
                                      ? std::filesystem::path("acceptance_cache")
                                      : CertificateCache::resolve_dir(std::nullopt));
  return c;
}

LinearBoundCertificate cutoff(double theta, Inequality kind) {
  return cache().get_or_compute(theta, kind, CutoffOptions{});
}

// Fresh solve, timed, then written to the cache for later criteria.
LinearBoundCertificate fresh_cutoff(double theta, Inequality kind, double* seconds) {
  const Stopwatch w;
  const LinearBoundCertificate c = find_cutoff(theta, kind, CutoffOptions{});
  if (seconds) *seconds = w.seconds();
  cache().store(c);
  return c;
}

const std::vector<double>& fig4_thetas() {
  static const std::vector<double> t{0.3, 0.45, 0.6, kPi / 4 - 0.01};
  return t;
}

std::string fmt(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

Outcome criterion1() {
  const Stopwatch w;
  double worst = 0.0;
  bool vertex_ok = true;
  const DeterministicStrategy expected{{1, 1}, {1, -1}};
  for (int k = 0; k < kThetaSamples; ++k) {
    const double theta = kThetaMin + (kPi / 4 - kThetaMin) * k / (kThetaSamples - 1);
    const LocalBoundResult r = brute_force_local_bound(BellKind::new_inequality(theta));
    worst = std::max(worst, std::abs(r.value - local_bound_new(theta)));
    vertex_ok = vertex_ok && r.vertex == expected;
  }
  const double t = w.seconds();
  return {worst <= kLocalBoundTol && vertex_ok && t < kBudget1,
          "max |enum - closed form| = " + fmt(worst) + ", vertex A0=A1=B0=1,B1=-1: " + (vertex_ok ? "yes" : "no") +
              ", " + fmt(t, 3) + " s"};
}

Outcome criterion2() {
  const Stopwatch w;
  double worst = 0.0;
  for (int k = 0; k < kThetaSamples; ++k) {
    const double theta = kThetaMin + (kPi / 4 - kThetaMin) * k / (kThetaSamples - 1);
    const Settings s = ideal_settings(theta);
    const ComplexMatrix rho = partial_entangled_state(theta, 0).projector();
    worst = std::max(worst, std::abs(new_bell_value(correlators_from_state(rho, s.a, s.b), theta) - 1.0));
  }
  const double t = w.seconds();
  return {worst <= kQuantumBoundTol && t < kBudget2, "max |I - 1| = " + fmt(worst) + ", " + fmt(t, 3) + " s"};
}

Outcome criterion3() {
  double t = 0.0;
  const LinearBoundCertificate c = fresh_cutoff(kPi / 4, Inequality::kNew, &t);
  const double anchor = (8 + 7 * kRt2) / (17 * kRt2);
  const bool ok = std::abs(c.i_star - anchor) <= kAnchorTol && c.worst_margin >= -kAcceptTol && t < kBudget3;
  return {ok, "i_star = " + fmt(c.i_star, 9) + " vs " + fmt(anchor, 9) + ", worst margin " + fmt(c.worst_margin) +
                  ", grid 201x201, " + fmt(t, 3) + " s"};
}

Outcome criterion4() {
  bool ok = true;
  std::ostringstream d;
  for (double theta : fig4_thetas()) {
    const LinearBoundCertificate n = fresh_cutoff(theta, Inequality::kNew, nullptr);
    const LinearBoundCertificate t = fresh_cutoff(theta, Inequality::kTilted, nullptr);
    const bool here = n.i_star <= t.i_star && n.worst_margin >= -kAcceptTol && t.worst_margin >= -kAcceptTol;
    ok = ok && here;
    if (d.tellp() > 0) d << "; ";
    d << "theta " << fmt(theta, 4) << ": " << fmt(n.i_star, 7) << " <= " << fmt(t.i_star, 7) << (here ? "" : " (!)");
  }
  return {ok, d.str()};
}

Outcome criterion5() {
  std::vector<LinearBoundCertificate> certs{cutoff(kPi / 4, Inequality::kNew)};
  for (double theta : fig4_thetas()) {
    certs.push_back(cutoff(theta, Inequality::kNew));
    certs.push_back(cutoff(theta, Inequality::kTilted));
  }
  double worst_grid = 1.0;
  bool ok = true;
  for (const LinearBoundCertificate& c : certs) {
    try {
      worst_grid = std::min(worst_grid, verify_branch1(c, c.grid));
    } catch (const SymmetryViolationError&) {
      ok = false;
      worst_grid = -1.0;
    }
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.0, kPi / 2);
  double worst_mirror = 0.0;
  for (const LinearBoundCertificate& c : certs) {
    for (int k = 0; k < kMirrorSamples; ++k) {
      const double a = angle(rng);
      const double b = angle(rng);
      const double m1 = branch1_margin(c.theta, c.kind, c.i_star, a, b, c.delta_variant);
      const double m0 = operator_margin(c.theta, c.kind, c.i_star, kPi / 2 - a, b, c.delta_variant);
      worst_mirror = std::max(worst_mirror, std::abs(m1 - m0));
    }
  }
  ok = ok && worst_grid >= -kBranch1GridTol && worst_mirror <= kMirrorTol;
  return {ok, std::to_string(certs.size()) + " certificates, worst branch-1 grid margin " + fmt(worst_grid) +
                  ", max |margin1(a,b) - margin0(pi/2-a,b)| = " + fmt(worst_mirror)};
}

Outcome criterion6() {
  const double theta = fig5_theta();
  const LinearBoundCertificate c = cutoff(theta, Inequality::kNew);
  const double top = certify_instrument(tsirelson_bound(), 1, 1, 0.5, theta, c).bound;
  const double star = certify_instrument(beta_star(), 1, 1, 0.5, theta, c).bound;
  const bool ok = std::abs(top - 1.0) <= kEndpointTopTol && std::abs(star - 1 / kRt2) <= kEndpointStarTol;
  return {ok, "bound(2 sqrt2,1,1,1/2) = " + fmt(top, 12) + ", bound(beta*,1,1,1/2) = " + fmt(star, 12)};
}

Outcome criterion7() {
  const double theta = fig5_theta();
  const LinearBoundCertificate c = cutoff(theta, Inequality::kNew);
  const Stopwatch w;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  double min_gap = 1.0;
  double max_bound = 0.0;
  for (int k = 0; k < kNoiseSamples; ++k) {
    NoiseModel n;
    n.visibility = 0.9 + 0.1 * u(rng);
    n.alice_angle_offset = -0.05 + 0.1 * u(rng);
    n.bob_angle_offset = -0.05 + 0.1 * u(rng);
    n.instrument_theta = std::min(kPi / 4, theta - 0.05 + 0.1 * u(rng));
    n.branch_depolarization = 0.1 * u(rng);
    const double bound = end_to_end(n, theta, c).bound;
    const double oracle = oracle_choi_fidelity(n, theta);
    if (bound > oracle + kSoundnessTol) ++violations;
    min_gap = std::min(min_gap, oracle - bound);
    max_bound = std::max(max_bound, bound);
  }
  const double t = w.seconds();
  return {violations == 0 && t < kBudget7,
          std::to_string(kNoiseSamples) + " noise models, violations " + std::to_string(violations) +
              ", min(oracle - bound) = " + fmt(min_gap) + ", max bound " + fmt(max_bound) + ", " + fmt(t, 3) + " s"};
}

Outcome criterion8() {
  const LinearBoundCertificate c = cutoff(fig5_theta(), Inequality::kNew);
  const std::vector<Fig5Row> rows = sweep_fig5(c, kFig5N);
  bool shape = rows.size() == static_cast<std::size_t>(kFig5N * kFig5N);
  const double corner = rows.back().bound;
  bool monotone = true;
  int clamped = 0;
  double lowest = 1.0;
  for (int i = 0; i < kFig5N; ++i) {
    for (int j = 0; j < kFig5N; ++j) {
      const Fig5Row& r = rows[static_cast<std::size_t>(i * kFig5N + j)];
      if (i > 0) monotone = monotone && r.bound >= rows[static_cast<std::size_t>((i - 1) * kFig5N + j)].bound - kMonotoneSlack;
      if (j > 0) monotone = monotone && r.bound >= rows[static_cast<std::size_t>(i * kFig5N + j - 1)].bound - kMonotoneSlack;
      if (r.bound == 0.0) ++clamped;
      lowest = std::min(lowest, r.bound);
    }
  }
  const bool corner_ok = std::abs(corner - 1.0) <= kCornerTol;
  const bool ok = shape && corner_ok && monotone && clamped > 0;
  std::string d = "50x50 grid: " + std::string(shape ? "yes" : "no") + ", bound(2 sqrt2, 1) = " + fmt(corner, 12) +
                  ", monotone: " + (monotone ? "yes" : "no") + ", rows at the 0 clamp: " + std::to_string(clamped) +
                  ", lowest bound " + fmt(lowest);
  if (clamped == 0) {
    d += " (floors 1/sqrt2 and cos(theta) keep arccos sums at most pi/4 + theta = " + fmt(kPi / 4 + c.theta, 4) +
         " < pi/2)";
  }
  return {ok, d};
}

Outcome criterion9() {
  bool ok = true;
  std::ostringstream d;
  // beta of the cheating source is sqrt2 (1 + sin 2 theta), at most 2 for
  // theta <= asin(sqrt2 - 1)/2 ~ 0.2137.
  for (double theta : {0.1, 0.15, 0.2}) {
    const RunStatistics r = cheating_run(theta);
    const LinearBoundCertificate c = cutoff(theta, Inequality::kNew);
    const FidelityCertificate f = certify_instrument(r.beta, r.i0, r.i1, r.p0, theta, c);
    const bool stats = std::abs(r.i0 - 1) <= kCheatStatTol && std::abs(r.i1 - 1) <= kCheatStatTol && r.beta <= 2.0;
    const bool trivial = f.f_in == 1 / kRt2 && f.bound <= 1 / kRt2 + 1e-12;
    const bool sound = f.bound <= cheating_device_fidelity(theta) + kSoundnessTol;
    ok = ok && stats && trivial && sound;
    d << "theta " << theta << ": beta " << fmt(r.beta) << ", i0 " << fmt(r.i0, 12) << ", i1 " << fmt(r.i1, 12)
      << ", f_in " << fmt(f.f_in) << ", bound " << fmt(f.bound) << "; ";
  }
  const double theta = fig5_theta();
  const RunStatistics r = cheating_run(theta);
  const FidelityCertificate f = certify_instrument(r.beta, r.i0, r.i1, r.p0, theta, cutoff(theta, Inequality::kNew));
  const double device = cheating_device_fidelity(theta);
  ok = ok && f.bound <= device + kSoundnessTol;
  d << "theta " << fmt(theta, 4) << " (beta " << fmt(r.beta) << " > 2): bound " << fmt(f.bound)
    << " <= device fidelity " << fmt(device);
  return {ok, d.str()};
}

Outcome criterion10() {
  const Stopwatch w;
  int failed = 0;
  std::string names;
  for (const char* suite : {"matrixcore", "quantum", "bell", "certify", "experiment", "cli"}) {
    const std::string cmd = std::string(DIQC_UNIT_TEST_DIR) + "/" + suite + "_test --gtest_brief=1 > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) {
      ++failed;
      names += std::string(" ") + suite;
    }
  }
  const double t = w.seconds();
  return {failed == 0 && t < kBudget10,
          "6 unit suites, failing:" + (names.empty() ? std::string(" none") : names) + ", " + fmt(t, 3) + " s"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > static_cast<int>(criteria.size())) {
      std::cerr << "usage: acceptance [1-" << criteria.size() << "]\n";
      return 2;
    }
  }
  int failures = 0;
  for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) {
    if (only && i != only) continue;
    Outcome o{false, ""};
    try {
      o = criteria[static_cast<std::size_t>(i - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << i << ": " << (o.pass ? "PASS" : "FAIL") << " | " << o.detail << std::endl;
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
