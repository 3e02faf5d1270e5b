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

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cet/error.hpp"
#include "cet/factorization.hpp"
#include "cet/prob_core.hpp"
#include "cet/solver.hpp"

namespace cet {

inline constexpr int kProductCardCap = 16;

struct MultiletterResult {
  int n = 1;
  double g_n = 0.0;
  double per_letter = 0.0;
  MarkovFactorization certificate;
  SolveReport report;
};

namespace detail {

/// n-fold concatenation of a single-letter certificate.
inline MarkovFactorization power_certificate(const MarkovFactorization& f, int n) {
  MarkovFactorization out = f;
  for (int i = 1; i < n; ++i) out = concatenate(out, f);
  return out;
}

inline SolveConfig product_config(const JointPmf& product, SolveConfig cfg, std::vector<std::string>& warnings) {
  if (cfg.max_card == 0) {
    const long long bound = cardinality_bound(product.nx(), product.ny());
    if (bound > kProductCardCap) {
      warnings.push_back("max_card capped at " + std::to_string(kProductCardCap) + " (bound " +
                         std::to_string(bound) + ")");
    }
    cfg.max_card = static_cast<int>(std::min<long long>(bound, kProductCardCap));
  }
  return cfg;
}

}  // namespace detail

/// G(X^n;Y^n) and its per-letter value. The product of the single-letter
/// certificate competes as a warm start, so g_n <= n G(X;Y) as found.
inline MultiletterResult g_multiletter(const JointPmf& j, int n, const SolveConfig& cfg = {},
                                       std::size_t cell_budget = kDefaultCellBudget) {
  if (n < 1) throw ValidationError("g_multiletter: n must be >= 1");
  const JointPmf product = product_source(j, n, cell_budget);
  std::vector<std::string> warnings;
  SolveConfig c = detail::product_config(product, cfg, warnings);
  if (n > 1) {
    const SolveReport single = g_best(j, cfg);
    MarkovFactorization ws = detail::power_certificate(single.certificate, n);
    if (ws.card() <= c.max_card) c.warm_starts.push_back(std::move(ws));
  }
  MultiletterResult r;
  r.n = n;
  r.report = g_general(product, c);
  r.report.warnings.insert(r.report.warnings.end(), warnings.begin(), warnings.end());
  r.g_n = r.report.g_bits;
  r.per_letter = r.g_n / n;
  r.certificate = r.report.certificate;
  return r;
}

struct SubadditivityReport {
  int m = 1;
  int n = 1;
  double g_m = 0.0;
  double g_n = 0.0;
  double g_sum = 0.0;  // G for m + n letters
  double slack = 2e-3;
  bool holds = false;
  VerifyReport concatenated;  // (W_m, W_n) against the (m+n)-product
  bool ok = false;
};

/// Checks g_{m+n} <= g_m + g_n + slack and that the concatenated pair of
/// certificates generates the (m+n)-letter product.
inline SubadditivityReport subadditivity_check(const JointPmf& j, int m, int n, const SolveConfig& cfg = {},
                                               double slack = 2e-3) {
  if (m < 1 || n < 1) throw ValidationError("subadditivity_check: m and n must be >= 1");
  const MultiletterResult a = g_multiletter(j, m, cfg);
  const MultiletterResult b = m == n ? a : g_multiletter(j, n, cfg);
  const MultiletterResult s = g_multiletter(j, m + n, cfg);
  SubadditivityReport r;
  r.m = m;
  r.n = n;
  r.g_m = a.g_n;
  r.g_n = b.g_n;
  r.g_sum = s.g_n;
  r.slack = slack;
  r.holds = r.g_sum <= r.g_m + r.g_n + slack;
  r.concatenated = verify(concatenate(a.certificate, b.certificate), product_source(j, m + n), tol::kNumeric);
  r.ok = r.holds && r.concatenated.ok;
  return r;
}

struct GbarInterval {
  double lower = 0.0;  // max(I(X;Y), J hint)
  double upper = 0.0;  // min over n of g_n / n
  int best_n = 1;
  std::vector<double> per_letter;  // index n-1
};

/// Interval containing the limit of G(X^n;Y^n)/n. The upper end is certified
/// by the factorizations found; the lower end is I(X;Y) or a supplied J.
inline GbarInterval gbar_upper(const JointPmf& j, int n_max, const SolveConfig& cfg = {},
                               std::optional<double> j_hint = std::nullopt) {
  if (n_max < 1) throw ValidationError("gbar_upper: n_max must be >= 1");
  GbarInterval r;
  r.lower = std::max(mutual_information(j), j_hint.value_or(0.0));
  r.upper = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= n_max; ++n) {
    const double v = n == 1 ? g_best(j, cfg).g_bits : g_multiletter(j, n, cfg).per_letter;
    r.per_letter.push_back(v);
    if (v < r.upper - 1e-12) {
      r.upper = v;
      r.best_n = n;
    }
  }
  return r;
}

}  // namespace cet
