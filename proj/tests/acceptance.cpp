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
// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cet/cet.hpp"
#include "cet/cli.hpp"
#include "cet/json_io.hpp"
#include "properties.hpp"

namespace fs = std::filesystem;
using namespace cet;
using cet::testing::Gen;
using cet::testing::ref_h;
using cet::testing::ref_h2;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "cet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "cet_acceptance";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = work_dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// 1
Outcome sbes_closed_form() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_value = 0.0, worst_tv = 0.0;
  bool ok = true;
  for (int i = 1; i <= 19; ++i) {
    const double p = 0.05 * i;
    char arg[32];
    std::snprintf(arg, sizeof arg, "%.17g", p);
    const CliRun r = cli_run({"sbes", "--p", arg});
    if (r.code != 0) return {false, "sbes exited " + std::to_string(r.code) + ": " + r.err};
    const Json j = Json::parse(r.out);
    const double g = j["g_bits"].get<double>();
    const MarkovFactorization f = factorization_from_json(j["result"]["certificate"]);
    const double tv = total_variation(induced_matrix(f), sbes(p).matrix());
    worst_value = std::max(worst_value, std::abs(g - std::min(1.0, ref_h2(p) + 1.0 - p)));
    worst_tv = std::max(worst_tv, tv);
    ok = ok && verify(f, sbes(p), 1e-12).ok;
  }
  const double secs = seconds_since(t0);
  const bool pass = ok && worst_value <= 1e-9 && worst_tv < 1e-12 && secs < 1.0;
  return {pass, fmt("max |G - formula| = %.3g, max TV = %.3g, %.3f s", worst_value, worst_tv, secs)};
}

// 2
Outcome binary_vs_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  Gen g(2024);
  double worst_oracle = 0.0, worst_general = 0.0;
  for (int i = 0; i < 200; ++i) {
    const JointPmf j = validate(g.positive(2, 2), true);
    const double closed = g_closed_form_2x2(j).g_bits;
    const double oracle = g_oracle_grid(j).g_bits;
    SolveConfig cfg;
    cfg.restarts = 64;
    cfg.seed = static_cast<std::uint64_t>(i);
    const double general = g_general(j, cfg).g_bits;
    worst_oracle = std::max(worst_oracle, std::abs(closed - oracle));
    worst_general = std::max(worst_general, std::abs(closed - general));
  }
  const double secs = seconds_since(t0);
  const bool pass = worst_oracle <= 2e-3 && worst_general <= 1e-6 && secs < 120.0;
  return {pass, fmt("max |closed - oracle| = %.3g, max |closed - general| = %.3g, %.1f s", worst_oracle,
                    worst_general, secs)};
}

// 3
Outcome two_letter_example() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string pmf = write_file(
      "example.json", R"({"pmf":[[0.3333333333333333,0.3333333333333333],[0.3333333333333334,0]]})");
  const CliRun a = cli_run({"g", pmf});
  if (a.code != 0) return {false, "g exited " + std::to_string(a.code) + ": " + a.err};
  const double g1 = Json::parse(a.out)["result"]["g_bits"].get<double>();
  const CliRun b = cli_run({"multiletter", pmf, "--n", "2", "--check-subadd"});
  if (b.code != 0) return {false, "multiletter exited " + std::to_string(b.code) + ": " + b.err};
  const Json m = Json::parse(b.out);
  const double g2 = m["g_n"].get<double>();
  const bool subadd = m["subadditivity"]["ok"].get<bool>();
  const double secs = seconds_since(t0);
  const bool pass = std::abs(g1 - ref_h2(1.0 / 3)) <= 1e-6 && g2 <= 1.752749 + 1e-6 && g2 < 2 * g1 - 0.05 && subadd &&
                    secs < 60.0;
  return {pass, fmt("g1 = %.9f, g2 = %.9f (2 g1 = %.6f)", g1, g2, 2 * g1) + (subadd ? ", subadditivity ok" : ", subadditivity FAILED") +
                    fmt(", %.1f s", secs)};
}

// 4
Outcome cardinality_tightness() {
  const std::string pmf = write_file("sbes09.json", R"({"pmf":[[0.05,0,0.45],[0,0.05,0.45]]})");
  const CliRun a = cli_run({"g", pmf});
  if (a.code != 0) return {false, "g exited " + std::to_string(a.code) + ": " + a.err};
  const Json ra = Json::parse(a.out)["result"];
  const CliRun b = cli_run({"g", pmf, "--card", "2"});
  if (b.code != 0) return {false, "g --card 2 exited " + std::to_string(b.code) + ": " + b.err};
  const Json rb = Json::parse(b.out)["result"];
  const double h3 = ra["g_bits"].get<double>(), h2 = rb["g_bits"].get<double>();
  const int k3 = ra["card"].get<int>(), k2 = rb["card"].get<int>();
  const bool pass = k3 == 3 && std::abs(h3 - 0.568996) <= 1e-6 && k2 <= 2 && h2 >= 1.0 - 1e-9;
  return {pass, "optimal |W| = " + std::to_string(k3) + fmt(" H = %.9f; |W| <= 2 gives H = %.9f", h3, h2)};
}

// 5
Outcome wyner_agreement() {
  double worst = 0.0, worst_order = 0.0;
  for (int i = 1; i <= 99; ++i) {
    const double p = i / 100.0;
    worst = std::max(worst, std::abs(wyner_sbes_numeric(p).j - wyner_sbes_closed(p)));
    worst_order = std::max(worst_order, wyner_sbes_closed(p) - g_closed_form_sbes(p).g_bits);
  }
  const bool pass = worst <= 1e-6 && worst_order <= 1e-9;
  return {pass, fmt("max |numeric - closed| = %.3g, max (J - G) = %.3g", worst, worst_order)};
}

// 6
Outcome bec_region() {
  const std::string csv = (work_dir() / "region.csv").string();
  const CliRun r = cli_run({"region", "--p", "0.5", "--steps", "101", "--out", csv});
  if (r.code != 0) return {false, "region exited " + std::to_string(r.code) + ": " + r.err};
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  if (line != "r,R_min,sum_min") return {false, "bad header: " + line};
  bool found_a = false, found_b = false;
  while (std::getline(in, line)) {
    double rr = 0, rm = 0, sm = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &rr, &rm, &sm) != 3) return {false, "bad row: " + line};
    if (std::abs(rr - 0.5) <= 1e-9 && std::abs(rm - 0.5) <= 1e-9 && std::abs(sm - 1.5) <= 1e-9) found_a = true;
    if (std::abs(rr - 1.0) <= 1e-9 && std::abs(rm - 1.0) <= 1e-9 && std::abs(sm - 1.0) <= 1e-9) found_b = true;
  }
  int violations = 0;
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const int n = 50;
    std::vector<std::vector<bool>> c(n, std::vector<bool>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) c[a][b] = bec_region_contains(p, 1.5 * a / (n - 1), 2.0 * b / (n - 1));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (!c[a][b]) continue;
        if (a + 1 < n && !c[a + 1][b]) ++violations;
        if (b + 1 < n && !c[a][b + 1]) ++violations;
      }
  }
  const bool pass = found_a && found_b && violations == 0;
  return {pass, std::string("r=0.5 row ") + (found_a ? "ok" : "missing") + ", r=1.0 row " + (found_b ? "ok" : "missing") +
                    ", monotonicity violations " + std::to_string(violations) + " on 5 x 50 x 50 probes"};
}

// 7
Outcome prop_one_bracket() {
  std::vector<JointPmf> corpus;
  for (const auto& e : fs::directory_iterator(CET_DATA_DIR))
    if (e.path().extension() == ".json") corpus.push_back(pmf_from_json(read_json_file(e.path().string())));
  const std::size_t from_data = corpus.size();
  for (int i = 1; i <= 19; ++i) corpus.push_back(sbes(0.05 * i));
  Gen g(77);
  for (int i = 0; i < 40; ++i) corpus.push_back(validate(g.sparse(g.integer(2, 3), g.integer(2, 4), 0.3), true));
  int bad = 0;
  double worst_tv = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    SolveConfig cfg;
    cfg.restarts = 16;
    cfg.seed = i;
    const SimulationBuild b = build_simulation_code(corpus[i], cfg);
    const GenerationReport gen = exact_generation_check(b.code, corpus[i]);
    worst_tv = std::max(worst_tv, gen.tv);
    const bool bracket = b.rate_lower <= b.rate_upper + 1e-12 && b.rate_upper < b.rate_lower + 1.0;
    if (!bracket || !(gen.tv < 1e-10) || !b.code.code.is_prefix_free()) ++bad;
  }
  return {bad == 0 && from_data > 0, std::to_string(corpus.size()) + " codes (" + std::to_string(from_data) +
                                          " from data/), " + std::to_string(bad) + " violations" +
                                          fmt(", max TV = %.3g", worst_tv)};
}

// 8
Outcome property_suite() {
  using namespace cet::testing;
  const int n = 500;
  struct Named {
    const char* name;
    std::function<PropertyResult()> run;
  };
  const std::vector<Named> props{
      {"zero-iff-independent", [&] { return zero_iff_independent(n, 8001); }},
      {"data-processing", [&] { return data_processing(n, 8002); }},
      {"subadditivity", [&] { return subadditivity(n, 8003); }},
      {"distinct-supports", [&] { return distinct_supports(n, 8004); }},
      {"common-part", [&] { return common_part_identity(n, 8005); }},
  };
  bool pass = true;
  std::string detail;
  for (const auto& p : props) {
    const auto t0 = std::chrono::steady_clock::now();
    const PropertyResult r = p.run();
    pass = pass && r.ok() && r.instances == n;
    detail += std::string(detail.empty() ? "" : "; ") + p.name + " " + std::to_string(r.instances - r.failures) + "/" +
              std::to_string(r.instances) + fmt(" (%.0f s)", seconds_since(t0));
    if (r.failures > 0) detail += " first failure " + r.first_failure + fmt(" worst %.3g", r.worst);
  }
  return {pass, detail};
}

// 9
Outcome reductions() {
  const cet::testing::PropertyResult r = cet::testing::support_reduction(500, 9001);
  std::string d = std::to_string(r.instances - r.failures) + "/" + std::to_string(r.instances) + " inflated factorizations reduced";
  if (r.failures > 0) d += ", first failure " + r.first_failure + fmt(" worst %.3g", r.worst);
  return {r.ok() && r.instances == 500, d};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"sbes closed form", sbes_closed_form},
      {"binary closed form vs oracle", binary_vs_oracle},
      {"two-letter example", two_letter_example},
      {"cardinality tightness", cardinality_tightness},
      {"wyner sbes agreement", wyner_agreement},
      {"bec rate region", bec_region},
      {"simulation code bracket", prop_one_bracket},
      {"property suite", property_suite},
      {"support reduction", reductions},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(work_dir());
  return failed;
}
