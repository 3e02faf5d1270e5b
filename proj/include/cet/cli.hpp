//------------------------------------------------------------------------------
//
//   Copyright 2026 The cet Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------
#pragma once

// Command-line front end. Exit codes: 0 success, 1 bad input or failed
// verification, 2 solver infeasibility.

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cet/error.hpp"
#include "cet/json_io.hpp"
#include "cet/multiletter.hpp"
#include "cet/oracle.hpp"
#include "cet/simcode.hpp"
#include "cet/solver.hpp"
#include "cet/wyner_region.hpp"

namespace cet::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kInfeasible = 2 };

namespace detail {

inline std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

inline Json envelope(const std::string& command) {
  Json o;
  o["tool_version"] = kVersion;
  o["command"] = command;
  return o;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
  if (!out) throw ValidationError("failed writing " + path);
}

struct SolverFlags {
  int card = 0;
  int restarts = 64;
  std::uint64_t seed = 0;
  double feas_tol = 1e-10;
  int threads = 0;

  void add(CLI::App* app) {
    app->add_option("--card", card, "cardinality limit for W (0: automatic)")->check(CLI::NonNegativeNumber);
    app->add_option("--restarts", restarts, "solver restarts")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "solver seed");
    app->add_option("--feas-tol", feas_tol, "feasibility tolerance")->check(CLI::PositiveNumber);
    app->add_option("--threads", threads, "worker threads (0: CET_THREADS or all cores)")->check(CLI::NonNegativeNumber);
  }

  [[nodiscard]] SolveConfig config() const {
    SolveConfig c;
    c.max_card = card;
    c.restarts = restarts;
    c.seed = seed;
    c.feas_tol = feas_tol;
    c.threads = threads;
    return c;
  }
};

/// Quotes a CSV field when it holds a comma or quote.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline JointPmf load_pmf(const std::string& path, bool normalize) { return pmf_from_json(read_json_file(path), normalize); }

}  // namespace detail

/// Runs the tool on argv, writing the primary output to `out` and
/// diagnostics to `err`. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"cet: common entropy, Wyner common information and exact simulation codes", "cet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  bool normalize = false;
  app.add_flag("--normalize", normalize, "renormalize input pmfs instead of rejecting mass off by > 1e-9");

  // g
  std::string g_pmf;
  bool g_oracle = false;
  detail::SolverFlags g_flags;
  auto* g = app.add_subcommand("g", "common entropy of a pmf");
  g->add_option("pmf", g_pmf, "pmf JSON file")->required();
  g->add_flag("--oracle", g_oracle, "add a grid-oracle cross-check");
  g_flags.add(g);

  // sbes
  double sbes_p = 0.0;
  auto* sb = app.add_subcommand("sbes", "closed-form G of the symmetric binary erasure source");
  sb->add_option("--p", sbes_p, "erasure probability")->required()->check(CLI::Range(0.0, 1.0));

  // wyner-sbes
  double wy_p = 0.0;
  int wy_steps = 1001;
  auto* wy = app.add_subcommand("wyner-sbes", "Wyner common information of the SBES");
  wy->add_option("--p", wy_p, "erasure probability")->required()->check(CLI::Range(0.0, 1.0));
  wy->add_option("--steps", wy_steps, "grid points before refinement")->check(CLI::Range(2, 100000000));

  // multiletter
  std::string ml_pmf;
  int ml_n = 2;
  bool ml_subadd = false;
  detail::SolverFlags ml_flags;
  auto* ml = app.add_subcommand("multiletter", "per-letter common entropy of product sources");
  ml->add_option("pmf", ml_pmf, "pmf JSON file")->required();
  ml->add_option("--n", ml_n, "number of letters")->required()->check(CLI::PositiveNumber);
  ml->add_flag("--check-subadd", ml_subadd, "check subadditivity for (1, n-1)");
  ml_flags.add(ml);

  // region
  double rg_p = 0.0;
  int rg_steps = 101;
  std::string rg_out;
  auto* rg = app.add_subcommand("region", "BEC exact channel-simulation rate region boundary");
  rg->add_option("--p", rg_p, "erasure probability")->required();
  rg->add_option("--steps", rg_steps, "number of r samples")->check(CLI::Range(2, 100000000));
  rg->add_option("--out", rg_out, "CSV output file (default: stdout)");

  // code
  std::string cd_pmf, cd_out;
  detail::SolverFlags cd_flags;
  auto* cd = app.add_subcommand("code", "build a simulation code");
  cd->add_option("pmf", cd_pmf, "pmf JSON file")->required();
  cd->add_option("--out", cd_out, "simulation code JSON output")->required();
  cd_flags.add(cd);

  // simulate
  std::string sm_code, sm_out, sm_target;
  std::uint64_t sm_samples = 0, sm_seed = 0;
  auto* sm = app.add_subcommand("simulate", "sample (x, y) pairs from a simulation code");
  sm->add_option("simcode", sm_code, "simulation code JSON file")->required();
  sm->add_option("--samples", sm_samples, "number of samples")->required()->check(CLI::PositiveNumber);
  sm->add_option("--seed", sm_seed, "sampler seed");
  sm->add_option("--out", sm_out, "CSV file for the x,y samples");
  sm->add_option("--target", sm_target, "pmf JSON to measure the empirical TV against");

  // verify
  std::string vf_fact, vf_pmf;
  double vf_tol = 1e-10;
  auto* vf = app.add_subcommand("verify", "check that a factorization generates a pmf");
  vf->add_option("factorization", vf_fact, "factorization JSON file")->required();
  vf->add_option("pmf", vf_pmf, "pmf JSON file")->required();
  vf->add_option("--tol", vf_tol, "max absolute entry error")->check(CLI::PositiveNumber);

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << detail::one_line(e.what()) << "\n";
    return kInvalid;
  }

  try {
    Json report;
    int code = kOk;
    if (*g) {
      const JointPmf j = detail::load_pmf(g_pmf, normalize);
      const SolveConfig cfg = g_flags.config();
      SolveReport r = g_general(j, cfg);
      if (j.nx() == 2 && j.ny() == 2) {
        const SolveReport c = g_closed_form_2x2(j);
        r.closed_form = c.g_bits;
        if (c.g_bits < r.g_bits - 1e-12 && (cfg.max_card == 0 || c.certificate.card() <= cfg.max_card)) {
          auto restarts = std::move(r.per_restart);
          r = c;
          r.per_restart = std::move(restarts);
        }
      }
      report = detail::envelope("g");
      report["config"] = to_json(cfg);
      report["source"] = to_json(j);
      report["result"] = to_json(r);
      if (g_oracle) {
        const SolveReport o = g_oracle_grid(j);
        Json oj;
        oj["g_bits"] = o.g_bits;
        oj["difference"] = r.g_bits - o.g_bits;
        oj["certificate"] = to_json(o.certificate);
        report["oracle"] = oj;
      }
    } else if (*sb) {
      const SolveReport r = g_closed_form_sbes(sbes_p);
      report = detail::envelope("sbes");
      report["config"] = {{"p", sbes_p}};
      report["g_bits"] = r.g_bits;
      report["result"] = to_json(r);
    } else if (*wy) {
      const WynerNumeric n = wyner_sbes_numeric(wy_p, wy_steps);
      report = detail::envelope("wyner-sbes");
      report["config"] = {{"p", wy_p}, {"steps", wy_steps}};
      report["j_closed"] = wyner_sbes_closed(wy_p);
      report["j_numeric"] = n.j;
      report["argmin"] = {{"p1", n.argmin.p1}, {"p2", n.argmin.p2}};
    } else if (*ml) {
      const JointPmf j = detail::load_pmf(ml_pmf, normalize);
      const SolveConfig cfg = ml_flags.config();
      const MultiletterResult r = g_multiletter(j, ml_n, cfg);
      const SolveReport single = g_best(j, cfg);
      report = detail::envelope("multiletter");
      Json c = to_json(cfg);
      c["n"] = ml_n;
      c["check_subadd"] = ml_subadd;
      report["config"] = c;
      report["n"] = ml_n;
      report["g_1"] = single.g_bits;
      report["g_n"] = r.g_n;
      report["per_letter"] = r.per_letter;
      report["mutual_info"] = mutual_information(j);
      report["gbar_interval"] = {mutual_information(j), std::min(single.g_bits, r.per_letter)};
      report["result"] = to_json(r.report);
      if (ml_subadd) {
        if (ml_n < 2) throw ValidationError("--check-subadd needs --n >= 2");
        const SubadditivityReport s = subadditivity_check(j, 1, ml_n - 1, cfg);
        Json sj;
        sj["m"] = s.m;
        sj["n"] = s.n;
        sj["g_m"] = s.g_m;
        sj["g_n"] = s.g_n;
        sj["g_m_plus_n"] = s.g_sum;
        sj["slack"] = s.slack;
        sj["holds"] = s.holds;
        sj["concatenated"] = to_json(s.concatenated);
        sj["ok"] = s.ok;
        report["subadditivity"] = sj;
        if (!s.ok) code = kInvalid;
      }
    } else if (*rg) {
      const auto pts = bec_region_boundary(rg_p, rg_steps);
      std::ostringstream csv;
      write_region_csv(csv, pts);
      if (rg_out.empty()) {
        out << csv.str();
        return kOk;
      }
      detail::write_file(rg_out, csv.str());
      report = detail::envelope("region");
      report["config"] = {{"p", rg_p}, {"steps", rg_steps}, {"out", rg_out}};
      report["points"] = pts.size();
    } else if (*cd) {
      const JointPmf j = detail::load_pmf(cd_pmf, normalize);
      const SolveConfig cfg = cd_flags.config();
      const SimulationBuild b = build_simulation_code(j, cfg);
      const GenerationReport gen = exact_generation_check(b.code, j);
      detail::write_file(cd_out, to_json(b.code).dump(2) + "\n");
      report = detail::envelope("code");
      Json c = to_json(cfg);
      c["out"] = cd_out;
      report["config"] = c;
      report["g_bits"] = b.rate_lower;
      report["expected_length"] = b.rate_upper;
      report["bracket"] = {b.rate_lower, b.rate_upper};
      report["kraft_sum"] = b.code.code.kraft_sum();
      report["exact_generation"] = {{"tv", gen.tv}, {"tolerance", gen.tolerance}, {"ok", gen.ok}};
      report["method"] = to_string(b.report.method);
      if (!gen.ok) code = kInvalid;
    } else if (*sm) {
      const SimulationCode s = simcode_from_json(read_json_file(sm_code));
      const SampleReport r = sample_pairs(s, sm_samples, sm_seed);
      report = detail::envelope("simulate");
      report["config"] = {{"samples", sm_samples}, {"seed", sm_seed}, {"generator", kSamplerName}};
      double tv = r.empirical_tv;
      if (!sm_target.empty()) {
        const JointPmf t = detail::load_pmf(sm_target, normalize);
        if (t.nx() != s.factorization.nx() || t.ny() != s.factorization.ny()) {
          throw ValidationError("target pmf does not match the simulation code alphabets");
        }
        Matrix counts = Matrix::Zero(t.nx(), t.ny());
        for (const auto& [x, y] : r.samples) counts(x, y) += 1.0;
        tv = total_variation(counts / static_cast<double>(sm_samples), t.matrix());
      }
      report["empirical_tv"] = tv;
      report["mean_code_length"] = r.mean_code_length;
      report["expected_length"] = s.code.expected_length;
      if (!sm_out.empty()) {
        const auto xl = s.x_labels.empty() ? index_labels(s.factorization.nx()) : s.x_labels;
        const auto yl = s.y_labels.empty() ? index_labels(s.factorization.ny()) : s.y_labels;
        std::ostringstream csv;
        csv << "x,y\n";
        for (const auto& [x, y] : r.samples)
          csv << detail::csv_field(xl[static_cast<std::size_t>(x)]) << ","
              << detail::csv_field(yl[static_cast<std::size_t>(y)]) << "\n";
        detail::write_file(sm_out, csv.str());
      }
    } else if (*vf) {
      const MarkovFactorization f = factorization_from_json(read_json_file(vf_fact));
      const JointPmf j = detail::load_pmf(vf_pmf, normalize);
      const VerifyReport v = verify(f, j, vf_tol);
      report = detail::envelope("verify");
      report["config"] = {{"tol", vf_tol}};
      report["result"] = to_json(v);
      report["h_w"] = weight_entropy(f);
      if (!v.ok) code = kInvalid;
    }
    out << report.dump(2) << "\n";
    return code;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << detail::one_line(e.what()) << "\n";
    return kInfeasible;
  } catch (const ValidationError& e) {
    err << "error: " << detail::one_line(e.what()) << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << detail::one_line(e.what()) << "\n";
    return kInvalid;
  }
}

}  // namespace cet::cli
