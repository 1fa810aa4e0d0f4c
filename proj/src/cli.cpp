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

#include "diqc/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "diqc/errors.hpp"
#include "diqc/experiment.hpp"

namespace diqc {
namespace {

using nlohmann::json;

json settings_json(const Settings& s) { return json{{"a", s.a}, {"b", s.b}}; }

std::vector<std::string> split_csv(const std::string& row) {
  std::vector<std::string> cells;
  std::stringstream ss(row);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json to_json(const LinearBoundCertificate& c) {
  return json{{"theta", c.theta},
              {"inequality", to_string(c.kind)},
              {"i_star", c.i_star},
              {"slope", c.slope},
              {"intercept", c.intercept},
              {"grid", {{"n_a", c.grid.n_a}, {"n_b", c.grid.n_b}, {"refinement_levels", c.grid.refinement_levels}}},
              {"tol", c.tol},
              {"search_width", c.search_width},
              {"local_bound", c.local_bound},
              {"worst_margin", c.worst_margin},
              {"worst_point", settings_json(c.worst_point)},
              {"delta_variant", to_string(c.delta_variant)},
              {"monotonicity_checked", c.monotonicity_checked}};
}

LinearBoundCertificate cutoff_certificate_from_json(const json& j) {
  try {
    LinearBoundCertificate c;
    c.theta = j.at("theta").get<double>();
    c.kind = parse_inequality(j.at("inequality").get<std::string>());
    c.i_star = j.at("i_star").get<double>();
    c.slope = j.at("slope").get<double>();
    c.intercept = j.at("intercept").get<double>();
    c.grid.n_a = j.at("grid").at("n_a").get<int>();
    c.grid.n_b = j.at("grid").at("n_b").get<int>();
    c.grid.refinement_levels = j.at("grid").at("refinement_levels").get<int>();
    c.tol = j.at("tol").get<double>();
    c.search_width = j.at("search_width").get<double>();
    c.local_bound = j.at("local_bound").get<double>();
    c.worst_margin = j.at("worst_margin").get<double>();
    c.worst_point = {j.at("worst_point").at("a").get<double>(), j.at("worst_point").at("b").get<double>()};
    c.delta_variant = parse_delta_variant(j.at("delta_variant").get<std::string>());
    c.monotonicity_checked = j.at("monotonicity_checked").get<bool>();
    return c;
  } catch (const json::exception& e) {
    throw StructureError(std::string("malformed cutoff certificate: ") + e.what());
  }
}

json to_json(const FidelityCertificate& c) {
  return json{{"theta", c.theta}, {"i_star", c.i_star}, {"beta", c.beta},     {"i0", c.i0},
              {"i1", c.i1},       {"p0", c.p0},         {"f_in", c.f_in},     {"f_out0", c.f_out0},
              {"f_out1", c.f_out1}, {"f_out", c.f_out}, {"bound", c.bound}};
}

FidelityCertificate fidelity_certificate_from_json(const json& j) {
  try {
    FidelityCertificate c;
    c.theta = j.at("theta").get<double>();
    c.i_star = j.at("i_star").get<double>();
    c.beta = j.at("beta").get<double>();
    c.i0 = j.at("i0").get<double>();
    c.i1 = j.at("i1").get<double>();
    c.p0 = j.at("p0").get<double>();
    c.f_in = j.at("f_in").get<double>();
    c.f_out0 = j.at("f_out0").get<double>();
    c.f_out1 = j.at("f_out1").get<double>();
    c.f_out = j.at("f_out").get<double>();
    c.bound = j.at("bound").get<double>();
    return c;
  } catch (const json::exception& e) {
    throw StructureError(std::string("malformed fidelity certificate: ") + e.what());
  }
}

bool same_certificate(const LinearBoundCertificate& x, const LinearBoundCertificate& y) {
  return x.theta == y.theta && x.kind == y.kind && x.i_star == y.i_star && x.slope == y.slope &&
         x.intercept == y.intercept && x.grid == y.grid && x.tol == y.tol && x.search_width == y.search_width &&
         x.local_bound == y.local_bound && x.worst_margin == y.worst_margin && x.worst_point.a == y.worst_point.a &&
         x.worst_point.b == y.worst_point.b && x.delta_variant == y.delta_variant &&
         x.monotonicity_checked == y.monotonicity_checked;
}

bool same_certificate(const FidelityCertificate& x, const FidelityCertificate& y) {
  return x.theta == y.theta && x.i_star == y.i_star && x.beta == y.beta && x.i0 == y.i0 && x.i1 == y.i1 &&
         x.p0 == y.p0 && x.f_in == y.f_in && x.f_out0 == y.f_out0 && x.f_out1 == y.f_out1 && x.f_out == y.f_out &&
         x.bound == y.bound;
}

CertificateCache::CertificateCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path CertificateCache::resolve_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv("DIQC_CACHE_DIR"); env && *env) return env;
  return ".diqc_cache";
}

std::filesystem::path CertificateCache::path_for(double theta, Inequality kind, const CutoffOptions& o) const {
  std::ostringstream name;
  name << "cutoff_" << to_string(kind) << "_theta" << format_real(theta) << "_grid" << o.grid.n_a << "x"
       << o.grid.n_b << "r" << o.grid.refinement_levels << "_tol" << format_real(o.tol) << "_w"
       << format_real(o.search_width) << "_" << to_string(o.delta_variant) << ".json";
  return dir_ / name.str();
}

std::optional<LinearBoundCertificate> CertificateCache::load(double theta, Inequality kind,
                                                             const CutoffOptions& o) const {
  std::ifstream in(path_for(theta, kind, o));
  if (!in) return std::nullopt;
  json j;
  try {
    in >> j;
  } catch (const json::exception&) {
    return std::nullopt;  // unreadable entries are recomputed
  }
  LinearBoundCertificate c = cutoff_certificate_from_json(j);
  if (c.theta != theta || c.kind != kind || !(c.grid == o.grid) || c.tol != o.tol ||
      c.delta_variant != o.delta_variant || c.search_width != o.search_width) {
    return std::nullopt;
  }
  return c;
}

void CertificateCache::store(const LinearBoundCertificate& cert) const {
  std::filesystem::create_directories(dir_);
  CutoffOptions o;
  o.grid = cert.grid;
  o.tol = cert.tol;
  o.search_width = cert.search_width;
  o.delta_variant = cert.delta_variant;
  std::ofstream out(path_for(cert.theta, cert.kind, o));
  out << std::setprecision(17) << to_json(cert).dump(2) << '\n';
}

LinearBoundCertificate CertificateCache::get_or_compute(double theta, Inequality kind,
                                                        const CutoffOptions& o) const {
  if (auto hit = load(theta, kind, o)) return *hit;
  LinearBoundCertificate cert = find_cutoff(theta, kind, o);
  store(cert);
  return cert;
}

std::vector<Fig4Row> sweep_fig4(int points, const CutoffOptions& options, const CertificateCache* cache) {
  if (points < 2) throw DomainError("fig4 sweep needs at least 2 theta points");
  std::vector<Fig4Row> rows;
  for (int i = 0; i < points; ++i) {
    const double theta = i == points - 1 ? kPi / 4 : kThetaMin + (kPi / 4 - kThetaMin) * i / (points - 1);
    for (Inequality kind : {Inequality::kNew, Inequality::kTilted}) {
      const LinearBoundCertificate c =
          cache ? cache->get_or_compute(theta, kind, options) : find_cutoff(theta, kind, options);
      rows.push_back({theta, kind, c.i_star, c.slope, c.intercept, c.worst_margin, c.grid.n_a, c.delta_variant});
    }
  }
  return rows;
}

double fig5_theta() { return (2 * kPi + 7) / 22; }

std::vector<Fig5Row> sweep_fig5(const LinearBoundCertificate& cert, int n) {
  if (n < 2) throw DomainError("fig5 sweep needs at least 2 points per axis");
  const double lo_i = cert.kind == Inequality::kNew ? local_bound_new(cert.theta) : local_bound_tilted(cert.theta);
  std::vector<Fig5Row> rows;
  rows.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double beta = i == n - 1 ? tsirelson_bound() : 2.0 + (tsirelson_bound() - 2.0) * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double iv = j == n - 1 ? 1.0 : lo_i + (1.0 - lo_i) * j / (n - 1);
      const FidelityCertificate f = certify_instrument(beta, iv, iv, 0.5, cert.theta, cert);
      rows.push_back({cert.theta, beta, iv, 0.5, f.f_in, f.f_out, f.bound});
    }
  }
  return rows;
}

std::string fig4_csv_header() { return "theta,inequality,i_star,slope,intercept,worst_margin,grid_n,delta_variant"; }
std::string fig5_csv_header() { return "theta,beta,i_theta,p0,f_in,f_out,bound"; }
std::string certify_csv_header() { return "theta,i_star,beta,i0,i1,p0,f_in,f_out0,f_out1,f_out,bound"; }
std::string cutoff_csv_header() {
  return "theta,inequality,i_star,slope,intercept,local_bound,worst_margin,worst_a,worst_b,grid_n_a,grid_n_b,"
         "refinement_levels,tol,search_width,delta_variant";
}

std::string to_csv_row(const Fig4Row& r) {
  return join({format_real(r.theta), to_string(r.inequality), format_real(r.i_star), format_real(r.slope),
               format_real(r.intercept), format_real(r.worst_margin), std::to_string(r.grid_n),
               to_string(r.delta_variant)});
}

std::string to_csv_row(const Fig5Row& r) {
  return join({format_real(r.theta), format_real(r.beta), format_real(r.i_theta), format_real(r.p0),
               format_real(r.f_in), format_real(r.f_out), format_real(r.bound)});
}

std::string to_csv_row(const FidelityCertificate& c) {
  return join({format_real(c.theta), format_real(c.i_star), format_real(c.beta), format_real(c.i0),
               format_real(c.i1), format_real(c.p0), format_real(c.f_in), format_real(c.f_out0),
               format_real(c.f_out1), format_real(c.f_out), format_real(c.bound)});
}

std::string to_csv_row(const LinearBoundCertificate& c) {
  return join({format_real(c.theta), to_string(c.kind), format_real(c.i_star), format_real(c.slope),
               format_real(c.intercept), format_real(c.local_bound), format_real(c.worst_margin),
               format_real(c.worst_point.a), format_real(c.worst_point.b), std::to_string(c.grid.n_a),
               std::to_string(c.grid.n_b), std::to_string(c.grid.refinement_levels), format_real(c.tol),
               format_real(c.search_width), to_string(c.delta_variant)});
}

FidelityCertificate fidelity_certificate_from_csv(const std::string& row) {
  const std::vector<std::string> cells = split_csv(row);
  if (cells.size() != 11) throw StructureError("certify row needs 11 fields");
  std::vector<double> v;
  for (const auto& s : cells) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size()) throw StructureError("non-numeric certify field '" + s + "'");
    v.push_back(x);
  }
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10]};
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Device-independent certification of qubit instruments"};
  app.require_subcommand(1);

  double theta = fig5_theta();
  std::string inequality = "new";
  int grid_n = 201;
  int refine = 2;
  double tol = 1e-9;
  std::string delta = "log-interpolation";
  std::string format = "csv";
  std::string out_path;
  std::string cache_dir;
  bool no_cache = false;
  int points = 25;
  int fig5_n = 50;
  double beta = 0, i0 = 0, i1 = 0, p0 = 0.5;
  NoiseModel noise;
  bool theta_prime_set = false;

  auto add_solver_opts = [&](CLI::App* sub) {
    sub->add_option("--grid-n", grid_n, "Grid points per angle axis")->check(CLI::Range(101, 100000));
    sub->add_option("--refine", refine, "Refinement passes")->check(CLI::Range(0, 10));
    sub->add_option("--tol", tol, "PSD tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--delta-variant", delta, "printed | fallback | log-interpolation")
        ->check(CLI::IsMember({"printed", "fallback", "log-interpolation"}));
    sub->add_option("--cache-dir", cache_dir, "Cutoff cache directory (default $DIQC_CACHE_DIR)");
    sub->add_flag("--no-cache", no_cache, "Always recompute cutoffs");
  };
  auto add_common = [&](CLI::App* sub, bool with_theta) {
    if (with_theta) sub->add_option("--theta", theta, "Target angle in radians");
    sub->add_option("--inequality", inequality, "new | tilted")->check(CLI::IsMember({"new", "tilted"}));
    sub->add_option("--out", out_path, "Output file (default stdout)");
    sub->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* cutoff = app.add_subcommand("cutoff", "Compute the cutoff certificate I*_theta");
  add_common(cutoff, true);
  add_solver_opts(cutoff);

  CLI::App* certify = app.add_subcommand("certify", "Certify an instrument from observed violations");
  add_common(certify, true);
  add_solver_opts(certify);
  certify->add_option("--beta", beta, "CHSH value of step I")->required();
  certify->add_option("--i0", i0, "Violation on outcome 0")->required();
  certify->add_option("--i1", i1, "Violation on outcome 1 (relabeled)")->required();
  certify->add_option("--p0", p0, "Probability of outcome 0")->required();

  CLI::App* simulate = app.add_subcommand("simulate", "Simulate a noisy setup and certify it");
  add_common(simulate, true);
  add_solver_opts(simulate);
  simulate->add_option("--visibility", noise.visibility, "Source visibility")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--eps-a", noise.alice_angle_offset, "Alice angle offset");
  simulate->add_option("--eps-b", noise.bob_angle_offset, "Bob angle offset");
  simulate->add_option("--theta-prime", noise.instrument_theta, "Implemented instrument angle")
      ->each([&](const std::string&) { theta_prime_set = true; });
  simulate->add_option("--eta", noise.branch_depolarization, "Branch depolarization")->check(CLI::Range(0.0, 1.0));

  CLI::App* fig4 = app.add_subcommand("sweep-fig4", "Cutoffs of both inequalities over theta");
  add_common(fig4, false);
  add_solver_opts(fig4);
  fig4->add_option("--points", points, "Number of theta values")->check(CLI::Range(2, 10000));

  CLI::App* fig5 = app.add_subcommand("sweep-fig5", "Certified fidelity over (beta, I_theta)");
  add_common(fig5, true);
  add_solver_opts(fig5);
  fig5->add_option("--n", fig5_n, "Points per axis")->check(CLI::Range(2, 10000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  // Angles typed with ten digits land a hair above pi/4.
  if (std::abs(theta - kPi / 4) <= 1e-9) theta = kPi / 4;

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      err << "error: cannot open " << out_path << "\n";
      return kExitUsage;
    }
  }
  std::ostream& sink = out_path.empty() ? out : file;
  const bool as_json = format == "json";

  CutoffOptions options;
  options.grid = {grid_n, grid_n, refine};
  options.tol = tol;

  try {
    options.delta_variant = parse_delta_variant(delta);
    const Inequality kind = parse_inequality(inequality);
    const CertificateCache cache(CertificateCache::resolve_dir(cache_dir.empty() ? std::nullopt
                                                                                 : std::optional(cache_dir)));
    auto cutoff_for = [&](double t) {
      return no_cache ? find_cutoff(t, kind, options) : cache.get_or_compute(t, kind, options);
    };
    auto emit_fidelity = [&](const FidelityCertificate& f) {
      if (as_json) {
        sink << to_json(f).dump(2) << '\n';
      } else {
        sink << certify_csv_header() << '\n' << to_csv_row(f) << '\n';
      }
    };

    if (cutoff->parsed()) {
      const LinearBoundCertificate c = cutoff_for(theta);
      if (as_json) {
        sink << to_json(c).dump(2) << '\n';
      } else {
        sink << cutoff_csv_header() << '\n' << to_csv_row(c) << '\n';
      }
    } else if (certify->parsed()) {
      emit_fidelity(certify_instrument(beta, i0, i1, p0, theta, cutoff_for(theta)));
    } else if (simulate->parsed()) {
      if (!theta_prime_set) noise.instrument_theta = theta;
      const LinearBoundCertificate c = cutoff_for(theta);
      const FidelityCertificate f = end_to_end(noise, theta, c);
      if (as_json) {
        json j = to_json(f);
        j["oracle_choi_fidelity"] = oracle_choi_fidelity(noise, theta);
        sink << j.dump(2) << '\n';
      } else {
        emit_fidelity(f);
      }
    } else if (fig4->parsed()) {
      const std::vector<Fig4Row> rows = sweep_fig4(points, options, no_cache ? nullptr : &cache);
      if (as_json) {
        json arr = json::array();
        for (const auto& r : rows) {
          arr.push_back({{"theta", r.theta}, {"inequality", to_string(r.inequality)}, {"i_star", r.i_star},
                         {"slope", r.slope}, {"intercept", r.intercept}, {"worst_margin", r.worst_margin},
                         {"grid_n", r.grid_n}, {"delta_variant", to_string(r.delta_variant)}});
        }
        sink << arr.dump(2) << '\n';
      } else {
        sink << fig4_csv_header() << '\n';
        for (const auto& r : rows) sink << to_csv_row(r) << '\n';
      }
    } else if (fig5->parsed()) {
      const std::vector<Fig5Row> rows = sweep_fig5(cutoff_for(theta), fig5_n);
      if (as_json) {
        json arr = json::array();
        for (const auto& r : rows) {
          arr.push_back({{"theta", r.theta}, {"beta", r.beta}, {"i_theta", r.i_theta}, {"p0", r.p0},
                         {"f_in", r.f_in}, {"f_out", r.f_out}, {"bound", r.bound}});
        }
        sink << arr.dump(2) << '\n';
      } else {
        sink << fig5_csv_header() << '\n';
        for (const auto& r : rows) sink << to_csv_row(r) << '\n';
      }
    }
  } catch (const ChannelFamilyError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace diqc
