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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "diqc/certify.hpp"

namespace diqc {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;

/// Shortest round-trip text for a double (17 significant digits).
std::string format_real(double x);

nlohmann::json to_json(const LinearBoundCertificate& cert);
LinearBoundCertificate cutoff_certificate_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FidelityCertificate& cert);
FidelityCertificate fidelity_certificate_from_json(const nlohmann::json& j);

/// Field-exact equality, used for round-trip checks.
bool same_certificate(const LinearBoundCertificate& x, const LinearBoundCertificate& y);
bool same_certificate(const FidelityCertificate& x, const FidelityCertificate& y);

/// Cutoff certificates on disk, one JSON file per
/// (theta, kind, grid, tol, delta variant, search width).
class CertificateCache {
 public:
  explicit CertificateCache(std::filesystem::path dir);

  /// --cache-dir if given, else $DIQC_CACHE_DIR, else ./.diqc_cache.
  static std::filesystem::path resolve_dir(const std::optional<std::string>& flag);

  std::filesystem::path path_for(double theta, Inequality kind, const CutoffOptions& options) const;
  std::optional<LinearBoundCertificate> load(double theta, Inequality kind, const CutoffOptions& options) const;
  void store(const LinearBoundCertificate& cert) const;
  /// Loads, or runs find_cutoff and stores the result.
  LinearBoundCertificate get_or_compute(double theta, Inequality kind, const CutoffOptions& options) const;

 private:
  std::filesystem::path dir_;
};

struct Fig4Row {
  double theta;
  Inequality inequality;
  double i_star;
  double slope;
  double intercept;
  double worst_margin;
  int grid_n;
  DeltaVariant delta_variant;
};

struct Fig5Row {
  double theta;
  double beta;
  double i_theta;
  double p0;
  double f_in;
  double f_out;
  double bound;
};

/// Cutoffs for both inequalities on `points` equally spaced theta in
/// [0.05, pi/4], sorted by (theta, inequality).
std::vector<Fig4Row> sweep_fig4(int points, const CutoffOptions& options, const CertificateCache* cache);

/// n x n grid of beta in [2, 2 sqrt 2] and I in [local bound, 1] with
/// p0 = 1/2 and i0 = i1 = I, sorted by (beta, i_theta).
std::vector<Fig5Row> sweep_fig5(const LinearBoundCertificate& cert, int n = 50);

/// theta = (2 pi + 7)/22, the angle of the fidelity surface.
double fig5_theta();

std::string fig4_csv_header();
std::string fig5_csv_header();
std::string certify_csv_header();
std::string cutoff_csv_header();
std::string to_csv_row(const Fig4Row& row);
std::string to_csv_row(const Fig5Row& row);
std::string to_csv_row(const FidelityCertificate& cert);
std::string to_csv_row(const LinearBoundCertificate& cert);

/// Parses one CSV row written by to_csv_row.
FidelityCertificate fidelity_certificate_from_csv(const std::string& row);

/// Entry point of the diqc tool. Output goes to `out` unless --out is given.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace diqc
