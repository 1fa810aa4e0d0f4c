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

#include "diqc/certify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "diqc/errors.hpp"

namespace diqc {
namespace {

using Mat4 = Eigen::Matrix<Complex, 4, 4>;

constexpr double kBracketGap = 1e-6;

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Calls fn(i) for i in [0, n) across threads; fn writes only its own slot.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([=, &fn] {
      for (std::size_t i = t; i < n; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

double lambda_min(const Mat4& m) {
  const Mat4 h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

ComplexMatrix extracted_target(double theta, Inequality kind, int branch, double a, double b,
                               DeltaVariant variant) {
  const ComplexMatrix target = partial_entangled_state(theta, branch).projector();
  const ComplexMatrix alice = apply_one_sided(dephasing_alice(a), target, Side::kAlice);
  return apply_one_sided(dephasing_bob(b, theta, kind, variant), alice, Side::kBob);
}

// Operator pair (extracted projector, Bell operator) at one grid point.
struct PointOps {
  Settings at;
  Mat4 target;
  Mat4 bell;
};

PointOps point_ops(double theta, Inequality kind, int branch, double a, double b, DeltaVariant variant) {
  const ComplexMatrix bell =
      branch == 0 ? bell_operator(kind, theta, a, b) : branch1_operator(kind, theta, a, b);
  return {{a, b}, extracted_target(theta, kind, branch, a, b, variant).eigen(), bell.eigen()};
}

double margin_of(const PointOps& p, double slope, double intercept) {
  return lambda_min(p.target - slope * p.bell - intercept * Mat4::Identity());
}

struct Worst {
  double margin = 1e300;
  Settings at{0.0, 0.0};
};

// Grid scan with refinement patches around the worst coarse cell and the
// ideal point. Coarse operators are precomputed once per search.
class GridScanner {
 public:
  GridScanner(double theta, Inequality kind, int branch, const GridSpec& grid, DeltaVariant variant,
              unsigned threads)
      : theta_(theta), kind_(kind), branch_(branch), grid_(grid), variant_(variant), threads_(threads) {
    if (grid.n_a < 2 || grid.n_b < 2 || grid.refinement_levels < 0) {
      throw DomainError("grid needs at least 2 points per axis");
    }
    step_a_ = (kPi / 2) / (grid.n_a - 1);
    step_b_ = (kPi / 2) / (grid.n_b - 1);
    coarse_.resize(static_cast<std::size_t>(grid.n_a) * grid.n_b);
    parallel_for(coarse_.size(), threads_, [this](std::size_t idx) {
      const double a = std::min(step_a_ * static_cast<double>(idx / grid_.n_b), kPi / 2);
      const double b = std::min(step_b_ * static_cast<double>(idx % grid_.n_b), kPi / 2);
      coarse_[idx] = point_ops(theta_, kind_, branch_, a, b, variant_);
    });
    const Settings ideal = ideal_settings(theta, kind);
    // Branch-1 ideal point sits at pi/2 - a, which for a = pi/4 is the same.
    ideal_ = ideal;
  }

  Worst scan(double slope, double intercept) const {
    std::vector<double> margins(coarse_.size());
    parallel_for(coarse_.size(), threads_,
                 [&](std::size_t i) { margins[i] = margin_of(coarse_[i], slope, intercept); });
    // Sequential reduction keeps ties deterministic (smallest index wins).
    std::size_t arg = 0;
    for (std::size_t i = 1; i < margins.size(); ++i) {
      if (margins[i] < margins[arg]) arg = i;
    }
    Worst worst{margins[arg], coarse_[arg].at};
    for (Settings center : {coarse_[arg].at, ideal_}) {
      double ha = step_a_;
      double hb = step_b_;
      for (int level = 0; level < grid_.refinement_levels; ++level) {
        const Worst local = patch(center, ha, hb, slope, intercept);
        if (local.margin < worst.margin) worst = local;
        center = local.at;
        ha /= 4;
        hb /= 4;
      }
    }
    return worst;
  }

 private:
  static constexpr int kPatch = 9;

  Worst patch(Settings center, double ha, double hb, double slope, double intercept) const {
    std::vector<PointOps> pts;
    pts.reserve(kPatch * kPatch);
    for (int i = 0; i < kPatch; ++i) {
      for (int j = 0; j < kPatch; ++j) {
        const double a = std::clamp(center.a + ha * (2.0 * i / (kPatch - 1) - 1.0), 0.0, kPi / 2);
        const double b = std::clamp(center.b + hb * (2.0 * j / (kPatch - 1) - 1.0), 0.0, kPi / 2);
        pts.push_back(point_ops(theta_, kind_, branch_, a, b, variant_));
      }
    }
    Worst w;
    for (const PointOps& p : pts) {
      const double m = margin_of(p, slope, intercept);
      if (m < w.margin) w = {m, p.at};
    }
    return w;
  }

  double theta_;
  Inequality kind_;
  int branch_;
  GridSpec grid_;
  DeltaVariant variant_;
  unsigned threads_;
  double step_a_ = 0.0;
  double step_b_ = 0.0;
  std::vector<PointOps> coarse_;
  Settings ideal_{0.0, 0.0};
};

void require_unit(double x, const char* what) {
  if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << what << " = " << x << " outside [0, 1]";
    throw DomainError(msg.str());
  }
}

}  // namespace

double tsirelson_bound() { return 2.0 * std::sqrt(2.0); }

double beta_star() { return 2.0 * (8.0 + 7.0 * std::sqrt(2.0)) / 17.0; }

double certificate_slope(double theta, double i_star) {
  const double c2 = std::cos(theta) * std::cos(theta);
  return (1.0 - c2) / (1.0 - i_star);
}

double certificate_intercept(double theta, double i_star) {
  const double c2 = std::cos(theta) * std::cos(theta);
  return (c2 - i_star) / (1.0 - i_star);
}

double operator_margin(double theta, Inequality kind, double i_star, double a, double b,
                       DeltaVariant variant) {
  const ComplexMatrix m = extracted_target(theta, kind, 0, a, b, variant) -
                          certificate_slope(theta, i_star) * bell_operator(kind, theta, a, b) -
                          certificate_intercept(theta, i_star) * ComplexMatrix::identity(4);
  return min_eigenvalue(m);
}

double branch1_margin(double theta, Inequality kind, double i_star, double a, double b,
                      DeltaVariant variant) {
  const ComplexMatrix m = extracted_target(theta, kind, 1, a, b, variant) -
                          certificate_slope(theta, i_star) * branch1_operator(kind, theta, a, b) -
                          certificate_intercept(theta, i_star) * ComplexMatrix::identity(4);
  return min_eigenvalue(m);
}

LinearBoundCertificate find_cutoff(double theta, Inequality kind, const CutoffOptions& options) {
  if (!(options.search_width > 0.0 && options.search_width <= 1e-4)) {
    throw DomainError("search width must lie in (0, 1e-4]");
  }
  const unsigned threads = resolve_threads(options.threads);
  const double local = kind == Inequality::kNew ? local_bound_new(theta) : local_bound_tilted(theta);
  const GridScanner scanner(theta, kind, 0, options.grid, options.delta_variant, threads);

  auto scan_at = [&](double i_star) {
    return scanner.scan(certificate_slope(theta, i_star), certificate_intercept(theta, i_star));
  };
  auto feasible = [&](double i_star) { return scan_at(i_star).margin >= -options.tol; };

  // For small theta the local bound crowds 1, so the bracket and the
  // bisection width scale with the gap 1 - local.
  const double span = 1.0 - local;
  const double gap = std::min(kBracketGap, 1e-3 * span);
  const double width = std::min(options.search_width, 1e-2 * span);
  double lo = local + gap;
  double hi = 1.0 - gap;
  const Worst top = scan_at(hi);
  if (top.margin < -options.tol) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "operator inequality infeasible at i_star = " << hi << " for theta = " << theta
        << " (" << to_string(kind) << ", delta " << to_string(options.delta_variant)
        << "): margin " << top.margin << " at a = " << top.at.a << ", b = " << top.at.b;
    throw ChannelFamilyError(msg.str());
  }
  if (feasible(lo)) {
    hi = lo;
  } else {
    while (hi - lo > width) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? hi : lo) = mid;
    }
  }

  // Feasibility must be monotone in i_star; spot-check above the cutoff.
  const double upper = 1.0 - gap;
  for (double frac : {0.25, 0.5, 0.75}) {
    if (!feasible(hi + frac * (upper - hi))) {
      throw ContractError("feasibility is not monotone in i_star above the cutoff");
    }
  }

  const Worst worst = scan_at(hi);
  LinearBoundCertificate cert;
  cert.theta = theta;
  cert.kind = kind;
  cert.i_star = hi;
  cert.slope = certificate_slope(theta, hi);
  cert.intercept = certificate_intercept(theta, hi);
  cert.grid = options.grid;
  cert.tol = options.tol;
  cert.search_width = options.search_width;
  cert.local_bound = local;
  cert.worst_margin = worst.margin;
  cert.worst_point = worst.at;
  cert.delta_variant = options.delta_variant;
  cert.monotonicity_checked = true;
  return cert;
}

double verify_branch1(const LinearBoundCertificate& cert, const GridSpec& grid, unsigned threads) {
  const GridScanner scanner(cert.theta, cert.kind, 1, grid, cert.delta_variant, resolve_threads(threads));
  const Worst worst = scanner.scan(cert.slope, cert.intercept);
  if (worst.margin < -10.0 * cert.tol) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "branch-1 operator inequality fails: margin " << worst.margin << " at a = " << worst.at.a
        << ", b = " << worst.at.b;
    throw SymmetryViolationError(msg.str());
  }
  return worst.margin;
}

double input_fidelity_bound(double beta) {
  const double tsirelson = tsirelson_bound();
  if (beta > tsirelson + 1e-6) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "CHSH value " << beta << " exceeds 2 sqrt 2";
    throw NonQuantumValueError(msg.str());
  }
  if (beta < -4.0) {
    throw DomainError("CHSH value below -4");
  }
  beta = std::min(beta, tsirelson);
  const double star = beta_star();
  const double sq = 0.5 + 0.5 * (beta - star) / (tsirelson - star);
  const double floor = 1.0 / std::sqrt(2.0);
  return sq > 0.5 ? std::min(std::sqrt(sq), 1.0) : floor;
}

double output_fidelity_bound(double i, double theta, double i_star) {
  if (i > 1.0 + 1e-6) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "Bell value " << i << " exceeds the quantum maximum 1";
    throw NonQuantumValueError(msg.str());
  }
  if (!(i_star < 1.0)) {
    throw DomainError("cutoff must be below 1");
  }
  i = std::min(i, 1.0);
  const double c = std::cos(theta);
  const double sq = c * c + (1.0 - c * c) * (i - i_star) / (1.0 - i_star);
  return sq > c * c ? std::min(std::sqrt(sq), 1.0) : c;
}

double combine_branches(double p0, double f0, double f1) {
  require_unit(p0, "p0");
  require_unit(f0, "f0");
  require_unit(f1, "f1");
  p0 = std::clamp(p0, 0.0, 1.0);
  return std::sqrt(p0 / 2) * f0 + std::sqrt((1.0 - p0) / 2) * f1;
}

double instrument_fidelity_bound(double f_in, double f_out) {
  require_unit(f_in, "f_in");
  require_unit(f_out, "f_out");
  const double angle = std::acos(std::clamp(f_in, 0.0, 1.0)) + std::acos(std::clamp(f_out, 0.0, 1.0));
  if (angle >= kPi / 2) return 0.0;
  return std::clamp(std::cos(angle), 0.0, 1.0);
}

FidelityCertificate certify_instrument(double beta, double i0, double i1, double p0, double theta,
                                       const LinearBoundCertificate& cert) {
  if (std::abs(cert.theta - theta) > 1e-12) {
    throw DomainError("cutoff certificate was computed for a different theta");
  }
  FidelityCertificate out;
  out.theta = theta;
  out.i_star = cert.i_star;
  out.beta = beta;
  out.i0 = i0;
  out.i1 = i1;
  out.p0 = p0;
  out.f_in = input_fidelity_bound(beta);
  out.f_out0 = output_fidelity_bound(i0, theta, cert.i_star);
  out.f_out1 = output_fidelity_bound(i1, theta, cert.i_star);
  out.f_out = combine_branches(p0, out.f_out0, out.f_out1);
  out.bound = instrument_fidelity_bound(out.f_in, out.f_out);
  return out;
}

}  // namespace diqc
