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

// Brute-force grid oracle for tiny alphabets (smaller side <= 3).
//
// For each family of distinct nonempty support patterns, one candidate
// Y-conditional per pattern is placed on a lattice of interior points of
// its face. For a fixed set of columns the
// objective is concave in p(w|x), so the minimum sits on a tuple of per-x
// vertices; all tuples are enumerated. The lattice is then refined around
// the best seeds. Shares no numerical code with the general solver.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "cet/error.hpp"
#include "cet/factorization.hpp"
#include "cet/prob_core.hpp"
#include "cet/solver.hpp"

namespace cet {

struct OracleConfig {
  int initial_resolution = 64;      // lattice denominator, lowered to fit grid_budget
  std::size_t grid_budget = 12000;  // lattice points per support family
  std::size_t refine_budget = 729;  // above this, refine one pattern at a time
  int refine_rounds = 6;            // each divides the step by 4
  int seeds = 2;                    // best lattice points refined per round
};

namespace oracle_detail {

using Col = std::vector<double>;

struct Pattern {
  std::vector<int> ys;  // support
};

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
  return r;
}

/// All compositions of n into k positive parts.
inline void compositions(int n, int k, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (k == 1) {
    cur.push_back(n);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int a = 1; a <= n - (k - 1); ++a) {
    cur.push_back(a);
    compositions(n - a, k - 1, cur, out);
    cur.pop_back();
  }
}

/// Solves the square system a z = b (n x n, row-major, n <= 3) by Gaussian
/// elimination with partial pivoting. False if singular.
inline bool gauss(double* a, double* b, int n, double* z) {
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    if (std::abs(a[piv * n + c]) < 1e-12) return false;
    if (piv != c) {
      for (int k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
      std::swap(b[c], b[piv]);
    }
    for (int r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      for (int k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
      b[r] -= f * b[c];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < n; ++k) s -= a[r * n + k] * z[k];
    z[r] = s / a[r * n + r];
  }
  return true;
}

struct Vertex {
  std::vector<int> idx;
  std::vector<double> q;
};

/// Vertices of {q >= 0 : sum_w q_w col_w = t}. Supports have at most d
/// columns; coefficients are strictly positive so each vertex appears once.
inline std::vector<Vertex> vertices(const std::vector<Col>& cols, const Col& t, int d) {
  std::vector<Vertex> out;
  const int k = static_cast<int>(cols.size());
  std::vector<int> sub;
  auto try_subset = [&]() {
    const int s = static_cast<int>(sub.size());
    // Normal equations restricted to the support; exact for consistent systems.
    double a[9] = {}, b[3] = {}, z[3] = {};
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j)
        for (int y = 0; y < d; ++y) a[i * s + j] += cols[sub[i]][y] * cols[sub[j]][y];
      for (int y = 0; y < d; ++y) b[i] += cols[sub[i]][y] * t[y];
    }
    if (!gauss(a, b, s, z)) return;
    for (int i = 0; i < s; ++i)
      if (!(z[i] > 1e-15)) return;
    for (int y = 0; y < d; ++y) {
      double r = -t[y];
      for (int i = 0; i < s; ++i) r += z[i] * cols[sub[i]][y];
      if (std::abs(r) > 1e-12) return;
    }
    out.push_back({sub, std::vector<double>(z, z + s)});
  };
  auto rec = [&](auto&& self, int start) -> void {
    if (!sub.empty()) try_subset();
    if (static_cast<int>(sub.size()) == d) return;
    for (int w = start; w < k; ++w) {
      sub.push_back(w);
      self(self, w + 1);
      sub.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

struct Inner {
  double h = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> choice;  // vertex index per x
};

/// Exact minimum of H(W) for fixed columns by enumerating vertex tuples.
inline Inner solve_inner(const std::vector<Col>& cols, const std::vector<Col>& targets, const std::vector<double>& px,
                         int d, std::vector<std::vector<Vertex>>* keep = nullptr) {
  const auto nx = targets.size();
  std::vector<std::vector<Vertex>> lists(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    lists[x] = vertices(cols, targets[x], d);
    if (lists[x].empty()) return {};
  }
  Inner best;
  std::vector<double> pw(cols.size(), 0.0);
  std::vector<std::size_t> choice(nx, 0);
  auto rec = [&](auto&& self, std::size_t x) -> void {
    if (x == nx) {
      double h = 0.0;
      for (double v : pw)
        if (v > 0.0) h -= v * std::log2(v);
      if (h < best.h - 1e-15) {
        best.h = h;
        best.choice = choice;
      }
      return;
    }
    for (std::size_t v = 0; v < lists[x].size(); ++v) {
      const auto& vx = lists[x][v];
      for (std::size_t i = 0; i < vx.idx.size(); ++i) pw[vx.idx[i]] += px[x] * vx.q[i];
      choice[x] = v;
      self(self, x + 1);
      for (std::size_t i = 0; i < vx.idx.size(); ++i) pw[vx.idx[i]] -= px[x] * vx.q[i];
    }
  };
  rec(rec, 0);
  if (keep) *keep = std::move(lists);
  return best;
}

struct Point {
  std::vector<Col> free;  // per pattern: coordinates on its support
  double h = std::numeric_limits<double>::infinity();
};

}  // namespace oracle_detail

/// Grid-search value of G with a certificate. Every family of distinct
/// support patterns gets its own lattice, as fine as the budget allows for
/// its number of free coordinates. Sources whose smaller side exceeds 3
/// symbols raise BudgetError.
inline SolveReport g_oracle_grid(const JointPmf& source, const OracleConfig& cfg = {}) {
  using namespace oracle_detail;
  const bool flip = source.ny() > source.nx();
  const JointPmf j = flip ? source.transposed() : source;
  const int d = static_cast<int>(j.ny());
  const auto nx = static_cast<std::size_t>(j.nx());
  if (d > 3) throw BudgetError("g_oracle_grid: source too large for the grid oracle");

  std::vector<double> px(nx);
  std::vector<Col> targets(nx, Col(static_cast<std::size_t>(d)));
  std::vector<int> target_mask(nx, 0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (int y = 0; y < d; ++y) px[x] += j(static_cast<Eigen::Index>(x), y);
    for (int y = 0; y < d; ++y) {
      targets[x][y] = j(static_cast<Eigen::Index>(x), y) / px[x];
      if (targets[x][y] > 0.0) target_mask[x] |= 1 << y;
    }
  }

  std::vector<int> all_masks;
  for (int mask = 1; mask < (1 << d); ++mask) all_masks.push_back(mask);
  const auto card_bound = static_cast<std::size_t>(cardinality_bound(source.nx(), source.ny()));

  std::vector<Pattern> best_patterns;
  Point best_point;

  for (int fam = 1; fam < (1 << all_masks.size()); ++fam) {
    std::vector<Pattern> patterns;
    std::vector<int> masks;
    for (std::size_t i = 0; i < all_masks.size(); ++i) {
      if (!(fam & (1 << i))) continue;
      masks.push_back(all_masks[i]);
      Pattern p;
      for (int y = 0; y < d; ++y)
        if (all_masks[i] & (1 << y)) p.ys.push_back(y);
      patterns.push_back(p);
    }
    if (patterns.size() > card_bound) continue;
    // Each conditional must be a mixture of columns supported inside it.
    bool coverable = true;
    for (std::size_t x = 0; x < nx && coverable; ++x) {
      int cover = 0;
      for (int m : masks)
        if ((m & ~target_mask[x]) == 0) cover |= m;
      coverable = cover == target_mask[x];
    }
    if (!coverable) continue;

    // Largest lattice within the budget.
    auto grid_size = [&](int res) {
      double total = 1.0;
      for (const auto& p : patterns) total *= binom(res - 1, static_cast<int>(p.ys.size()) - 1);
      return total;
    };
    int n = cfg.initial_resolution;
    while (n > d && grid_size(n) > static_cast<double>(cfg.grid_budget)) --n;
    if (grid_size(n) > static_cast<double>(cfg.grid_budget)) continue;

    auto to_cols = [&](const std::vector<Col>& free) {
      std::vector<Col> cols;
      for (std::size_t i = 0; i < patterns.size(); ++i) {
        Col c(static_cast<std::size_t>(d), 0.0);
        for (std::size_t a = 0; a < patterns[i].ys.size(); ++a) c[patterns[i].ys[a]] = free[i][a];
        cols.push_back(c);
      }
      return cols;
    };

    // Full product of per-pattern candidate lists.
    auto search = [&](const std::vector<std::vector<Col>>& options, std::vector<Point>& top) {
      std::vector<std::size_t> radix(options.size(), 0);
      std::vector<Col> free(options.size());
      while (true) {
        for (std::size_t i = 0; i < options.size(); ++i) free[i] = options[i][radix[i]];
        const Inner in = solve_inner(to_cols(free), targets, px, d);
        if (in.h < std::numeric_limits<double>::infinity()) {
          Point p{free, in.h};
          auto pos = std::find_if(top.begin(), top.end(), [&](const Point& o) { return p.h < o.h - 1e-15; });
          top.insert(pos, p);
          if (static_cast<int>(top.size()) > cfg.seeds) top.pop_back();
        }
        std::size_t i = 0;
        while (i < options.size() && ++radix[i] == options[i].size()) radix[i++] = 0;
        if (i == options.size()) break;
      }
    };

    std::vector<std::vector<Col>> options;
    for (const auto& p : patterns) {
      std::vector<std::vector<int>> comps;
      std::vector<int> cur;
      compositions(n, static_cast<int>(p.ys.size()), cur, comps);
      std::vector<Col> o;
      for (const auto& c : comps) {
        Col v;
        for (int a : c) v.push_back(static_cast<double>(a) / n);
        o.push_back(v);
      }
      for (const auto& t : targets) {
        Col v;
        bool match = true;
        for (int y = 0; y < d; ++y) {
          const bool in = std::find(p.ys.begin(), p.ys.end(), y) != p.ys.end();
          match = match && (t[y] > 0.0) == in;
          if (in) v.push_back(t[y]);
        }
        if (match) o.push_back(v);
      }
      options.push_back(o);
    }
    std::vector<Point> top;
    search(options, top);
    if (top.empty()) continue;

    double step = 1.0 / n;
    // Offsets of +-4 fine steps on the free coordinates of pattern i.
    auto local_options = [&](const Point& seed, std::size_t i, double fine) {
      const int k = static_cast<int>(patterns[i].ys.size());
      const int free_dims = k - 1;
      int count = 1;
      for (int f = 0; f < free_dims; ++f) count *= 9;
      std::vector<Col> o;
      for (int code = 0; code < count; ++code) {
        Col v(static_cast<std::size_t>(k));
        int c = code;
        double rest = 1.0;
        bool ok = true;
        for (int f = 0; f < free_dims; ++f) {
          v[f] = seed.free[i][f] + (c % 9 - 4) * fine;
          c /= 9;
          rest -= v[f];
          ok = ok && v[f] > 0.0;
        }
        v[k - 1] = rest;
        if (ok && rest > 0.0) o.push_back(v);
      }
      if (o.empty()) o.push_back(seed.free[i]);
      return o;
    };
    for (int round = 0; round < cfg.refine_rounds; ++round) {
      const double fine = step / 4.0;
      std::vector<Point> next = top;
      for (const auto& seed : top) {
        std::vector<std::vector<Col>> local;
        double product = 1.0;
        for (std::size_t i = 0; i < patterns.size(); ++i) {
          local.push_back(local_options(seed, i, fine));
          product *= static_cast<double>(local.back().size());
        }
        if (product <= static_cast<double>(cfg.refine_budget)) {
          search(local, next);
          continue;
        }
        // Too many combinations: sweep one pattern at a time.
        Point cur = seed;
        for (int sweep = 0; sweep < 50; ++sweep) {
          const double before = cur.h;
          for (std::size_t i = 0; i < patterns.size(); ++i) {
            std::vector<std::vector<Col>> single;
            for (std::size_t a = 0; a < patterns.size(); ++a)
              single.push_back(a == i ? local_options(cur, i, fine) : std::vector<Col>{cur.free[a]});
            std::vector<Point> best{cur};
            search(single, best);
            cur = best.front();
          }
          if (!(cur.h < before - 1e-15)) break;
        }
        std::vector<std::vector<Col>> single;
        for (const auto& c : cur.free) single.push_back({c});
        search(single, next);
      }
      top = std::move(next);
      step = fine;
    }
    if (top.front().h < best_point.h - 1e-15) {
      best_point = top.front();
      best_patterns = patterns;
    }
    if (best_point.h <= 0.0) break;
  }
  if (best_patterns.empty()) throw InfeasibleError("g_oracle_grid: no feasible lattice point");

  // Certificate from the best point.
  std::vector<Col> cols;
  for (std::size_t i = 0; i < best_patterns.size(); ++i) {
    Col c(static_cast<std::size_t>(d), 0.0);
    for (std::size_t a = 0; a < best_patterns[i].ys.size(); ++a) c[best_patterns[i].ys[a]] = best_point.free[i][a];
    cols.push_back(c);
  }
  std::vector<std::vector<Vertex>> lists;
  const Inner in = solve_inner(cols, targets, px, d, &lists);
  const auto k = static_cast<Eigen::Index>(cols.size());
  Vector pw = Vector::Zero(k);
  Matrix q = Matrix::Zero(k, static_cast<Eigen::Index>(nx));
  for (std::size_t x = 0; x < nx; ++x) {
    const auto& v = lists[x][in.choice[x]];
    for (std::size_t i = 0; i < v.idx.size(); ++i) q(v.idx[i], static_cast<Eigen::Index>(x)) = v.q[i];
  }
  for (std::size_t x = 0; x < nx; ++x) pw += px[x] * q.col(static_cast<Eigen::Index>(x));
  Matrix pxw(static_cast<Eigen::Index>(nx), k), pyw(d, k);
  for (Eigen::Index w = 0; w < k; ++w) {
    for (std::size_t x = 0; x < nx; ++x)
      pxw(static_cast<Eigen::Index>(x), w) =
          pw(w) > 0.0 ? px[x] * q(w, static_cast<Eigen::Index>(x)) / pw(w) : 1.0 / static_cast<double>(nx);
    for (int y = 0; y < d; ++y) pyw(y, w) = cols[static_cast<std::size_t>(w)][y];
  }
  MarkovFactorization cert(pw, pxw, pyw);
  if (flip) cert = cert.transposed();
  SolveReport r = detail::finish(source, cert, Method::oracle, tol::kNumeric);
  r.card_limit = static_cast<int>(card_bound);
  return r;
}

}  // namespace cet
