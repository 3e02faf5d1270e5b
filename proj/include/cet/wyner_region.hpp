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

// Wyner common information of the symmetric binary erasure source and the
// exact channel-simulation rate region of the binary erasure channel.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "cet/error.hpp"
#include "cet/prob_core.hpp"

namespace cet {

inline void check_probability(double p, const char* where) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(std::string(where) + ": p must lie in [0,1]");
}

/// J = 1 for p <= 1/2, H(p) above.
inline double wyner_sbes_closed(double p) {
  check_probability(p, "wyner_sbes_closed");
  return p <= 0.5 ? 1.0 : binary_entropy(p);
}

/// Two cascaded erasure stages; p1 + p2 - p1 p2 = p.
struct SbesWynerParams {
  double p1 = 0.0;
  double p2 = 0.0;
};

struct WynerNumeric {
  double j = 0.0;
  SbesWynerParams argmin;
};

/// f(p1) = (1 - p1) + H(p) - (1 - p1) H(p2), p2 = (p - p1) / (1 - p1).
inline double sbes_wyner_objective(double p, double p1) {
  if (p1 >= 1.0) return binary_entropy(p);
  const double p2 = std::clamp((p - p1) / (1.0 - p1), 0.0, 1.0);
  return (1.0 - p1) + binary_entropy(p) - (1.0 - p1) * binary_entropy(p2);
}

/// Grid of `steps` points on [0,p], then golden-section search in the
/// bracket around the best grid point.
inline WynerNumeric wyner_sbes_numeric(double p, int steps = 1001) {
  check_probability(p, "wyner_sbes_numeric");
  if (steps < 2) throw ValidationError("wyner_sbes_numeric: steps must be >= 2");
  auto f = [p](double p1) { return sbes_wyner_objective(p, p1); };
  int best = 0;
  double fbest = f(0.0);
  const double h = p / (steps - 1);
  for (int i = 1; i < steps; ++i) {
    const double v = f(i * h);
    if (v < fbest) {
      fbest = v;
      best = i;
    }
  }
  double a = std::max(0.0, (best - 1) * h), b = std::min(p, (best + 1) * h);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  double p1 = best * h;
  for (double cand : {a, b, (a + b) / 2}) {
    if (f(cand) < fbest) {
      fbest = f(cand);
      p1 = cand;
    }
  }
  WynerNumeric r;
  r.j = fbest;
  r.argmin.p1 = p1;
  r.argmin.p2 = p1 >= 1.0 ? 0.0 : std::clamp((p - p1) / (1.0 - p1), 0.0, 1.0);
  return r;
}

struct RateRegionPoint {
  double r = 0.0;
  double R_min = 0.0;
  double sum_min = 0.0;
};

/// Admissible interval [1 - p, min(2(1 - p), 1)] for the rate parameter.
inline std::pair<double, double> bec_r_interval(double p) {
  return {1.0 - p, std::min(2.0 * (1.0 - p), 1.0)};
}

/// H(p) + r (1 - H((1 - p)/r)), argument clamped at 1.
inline double bec_sum_min(double p, double r) {
  return binary_entropy(p) + r * (1.0 - binary_entropy(std::min(1.0, (1.0 - p) / r)));
}

inline std::vector<RateRegionPoint> bec_region_boundary(double p, int steps) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("bec_region_boundary: p must lie in (0,1)");
  if (steps < 2) throw ValidationError("bec_region_boundary: steps must be >= 2");
  const auto [lo, hi] = bec_r_interval(p);
  std::vector<RateRegionPoint> out;
  for (int i = 0; i < steps; ++i) {
    const double r = i == steps - 1 ? hi : lo + (hi - lo) * i / (steps - 1);
    out.push_back({r, r, bec_sum_min(p, r)});
  }
  return out;
}

/// Whether (R, R0) is achievable: some admissible r with R >= r and
/// R + R0 >= sum_min(r).
inline bool bec_region_contains(double p, double R, double R0) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("bec_region_contains: p must lie in (0,1)");
  if (!(R >= 0.0 && R0 >= 0.0)) throw ValidationError("bec_region_contains: rates must be >= 0");
  const auto [lo, hi] = bec_r_interval(p);
  if (R < lo) return false;
  const double eps = 1e-12;
  const double r_star = std::clamp(R, lo, hi);
  if (R + R0 >= bec_sum_min(p, r_star) - eps) return true;
  for (int i = 0; i <= 32; ++i) {
    const double r = lo + (hi - lo) * i / 32.0;
    if (r <= R && R + R0 >= bec_sum_min(p, r) - eps) return true;
  }
  return false;
}

/// `r,R_min,sum_min` with 9 significant digits.
inline void write_region_csv(std::ostream& os, const std::vector<RateRegionPoint>& pts) {
  os << "r,R_min,sum_min\n";
  char buf[96];
  for (const auto& q : pts) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", q.r, q.R_min, q.sum_min);
    os << buf;
  }
}

}  // namespace cet
