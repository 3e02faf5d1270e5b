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

// Randomized property checks shared by the unit suite and the acceptance
// binary. Each returns how many instances ran and the worst violation seen.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "cet/multiletter.hpp"
#include "cet/solver.hpp"
#include "test_util.hpp"

namespace cet::testing {

struct PropertyResult {
  int instances = 0;
  int failures = 0;
  double worst = 0.0;  // largest violation, property-specific units
  std::string first_failure;

  void fail(const std::string& what, double amount) {
    if (failures++ == 0) first_failure = what;
    worst = std::max(worst, amount);
  }
  [[nodiscard]] bool ok() const { return instances > 0 && failures == 0; }
};

inline SolveConfig property_config(std::uint64_t seed, int restarts = 16) {
  SolveConfig c;
  c.restarts = restarts;
  c.seed = seed;
  return c;
}

inline std::string describe(const Matrix& m) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << (r ? ",[" : "[");
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << (c ? "," : "") << m(r, c);
    os << "]";
  }
  return os.str() + "]";
}

/// G < tol exactly when the source is independent.
inline PropertyResult zero_iff_independent(int n, std::uint64_t seed, double tol = 1e-6) {
  Gen g(seed);
  PropertyResult r;
  for (int i = 0; i < n; ++i) {
    const int nx = g.integer(2, 3), ny = g.integer(2, 3);
    const Matrix m = i % 2 == 0 ? g.independent(nx, ny) : (i % 4 == 1 ? g.positive(nx, ny) : g.sparse(nx, ny, 0.3));
    const JointPmf j = validate(m, true);
    const double v = g_best(j, property_config(seed + static_cast<std::uint64_t>(i), 8)).g_bits;
    const bool indep = is_independent(j, 1e-12);
    ++r.instances;
    if ((v < tol) != indep) r.fail(describe(m), v);
  }
  return r;
}

/// p(u, y) = sum_x q(u|x) p(x, y) with q column-stochastic |U| x |X|.
inline Matrix garble(const Matrix& q, const Matrix& p) { return q * p; }

/// G(U;Y) <= G(X;Y) + slack for a random channel U <- X.
inline PropertyResult data_processing(int n, std::uint64_t seed, double slack = 2e-3) {
  Gen g(seed);
  PropertyResult r;
  for (int i = 0; i < n; ++i) {
    const int nx = g.integer(2, 3), ny = 2, nu = g.integer(2, 3);
    const Matrix p = i % 2 == 0 ? g.positive(nx, ny) : g.sparse(nx, ny, 0.3);
    const Matrix q = g.channel(nu, nx);
    const Matrix pu = garble(q, p);
    const SolveConfig cfg = property_config(seed + static_cast<std::uint64_t>(i));
    const double gx = g_best(validate(p, true), cfg).g_bits;
    const double gu = g_best(validate(pu, true), cfg).g_bits;
    ++r.instances;
    if (gu > gx + slack) r.fail(describe(p) + " garbled by " + describe(q), gu - gx);
  }
  return r;
}

/// g_2 <= 2 g_1 + slack, with the concatenated certificate verifying.
inline PropertyResult subadditivity(int n, std::uint64_t seed, double slack = 2e-3) {
  Gen g(seed);
  PropertyResult r;
  for (int i = 0; i < n; ++i) {
    const Matrix p = i % 3 == 0 ? g.sparse(2, 2, 0.25) : g.positive(2, 2);
    const JointPmf j = validate(p, true);
    const SubadditivityReport s = subadditivity_check(j, 1, 1, property_config(seed + static_cast<std::uint64_t>(i), 4), slack);
    ++r.instances;
    if (!s.ok) r.fail(describe(p), std::max(0.0, s.g_sum - s.g_m - s.g_n));
  }
  return r;
}

/// Certificates verify at feas_tol and have pairwise-distinct Y supports.
inline PropertyResult distinct_supports(int n, std::uint64_t seed) {
  Gen g(seed);
  PropertyResult r;
  for (int i = 0; i < n; ++i) {
    const int nx = g.integer(2, 3), ny = g.integer(2, 3);
    const Matrix p = i % 2 == 0 ? g.positive(nx, ny) : g.sparse(nx, ny, 0.35);
    const JointPmf j = validate(p, true);
    const SolveConfig cfg = property_config(seed + static_cast<std::uint64_t>(i), 8);
    const SolveReport s = g_general(j, cfg);
    ++r.instances;
    if (!has_distinct_y_supports(s.certificate)) r.fail(describe(p) + " shares a support", 1.0);
    const VerifyReport v = verify(s.certificate, j, cfg.feas_tol);
    if (!v.ok) r.fail(describe(p) + " fails verification", v.max_abs_error);
  }
  return r;
}

/// Random block-diagonal source with 2 or 3 blocks of at most 2 x 2.
inline Matrix block_source(Gen& g, std::vector<Matrix>& blocks, std::vector<double>& weights) {
  const int k = g.integer(2, 3);
  blocks.clear();
  const Vector w = g.simplex(k);
  weights.assign(w.data(), w.data() + w.size());
  for (int b = 0; b < k; ++b) blocks.push_back(g.positive(g.integer(1, 2), g.integer(1, 2)));
  return block_diagonal(blocks, weights);
}

/// Value of a block of at most 2 x 2 from first principles: zero when it is
/// a row or column, the two-candidate closed form otherwise.
inline double small_block_value(const Matrix& block) {
  const Matrix m = block / block.sum();
  if (m.rows() == 1 || m.cols() == 1) return 0.0;
  const double px[2] = {m.row(0).sum(), m.row(1).sum()};
  const double t[2] = {m(0, 0) / px[0], m(1, 0) / px[1]};
  if (std::abs(t[0] - t[1]) < 1e-15) return 0.0;
  double best = 1e9;
  for (int keep = 0; keep < 2; ++keep) {
    const int other = 1 - keep;
    const double corner = t[other] > t[keep] ? 1.0 : 0.0;
    const double lambda = (corner - t[other]) / (corner - t[keep]);
    const double w0 = px[keep] + lambda * px[other];
    best = std::min(best, ref_h({w0, 1.0 - w0}));
  }
  return best;
}

/// G = H(Z) + sum_z p(z) G_z for the common part Z of a block source.
inline PropertyResult common_part_identity(int n, std::uint64_t seed, double tol = 2e-3) {
  Gen g(seed);
  PropertyResult r;
  std::vector<Matrix> blocks;
  std::vector<double> weights;
  for (int i = 0; i < n; ++i) {
    const Matrix m = block_source(g, blocks, weights);
    double expect = ref_h(weights);
    for (std::size_t b = 0; b < blocks.size(); ++b) expect += weights[b] * small_block_value(blocks[b]);
    const double got = g_general(validate(m, true), property_config(seed + static_cast<std::uint64_t>(i), 8)).g_bits;
    ++r.instances;
    if (std::abs(got - expect) > tol) r.fail(describe(m), std::abs(got - expect));
  }
  return r;
}

/// G(X;Y) <= H(Z) + sum_z p(z) G(X;Y|Z=z) for a random labelling Z = f(X).
inline PropertyResult conditioning_bound(int n, std::uint64_t seed, double slack = 2e-3) {
  Gen g(seed);
  PropertyResult r;
  std::vector<Matrix> blocks;
  std::vector<double> weights;
  for (int i = 0; i < n; ++i) {
    const Matrix m = validate(block_source(g, blocks, weights), true).matrix();
    const int nz = g.integer(1, 2);
    std::vector<int> f(static_cast<std::size_t>(m.rows()));
    for (auto& z : f) z = g.integer(0, nz - 1);
    const SolveConfig cfg = property_config(seed + static_cast<std::uint64_t>(i), 8);
    double bound = 0.0;
    std::vector<double> pz;
    for (int z = 0; z < nz; ++z) {
      std::vector<Eigen::Index> rows;
      for (std::size_t x = 0; x < f.size(); ++x)
        if (f[x] == z) rows.push_back(static_cast<Eigen::Index>(x));
      if (rows.empty()) continue;
      Matrix sub(static_cast<Eigen::Index>(rows.size()), m.cols());
      for (std::size_t a = 0; a < rows.size(); ++a) sub.row(static_cast<Eigen::Index>(a)) = m.row(rows[a]);
      const double mass = sub.sum();
      pz.push_back(mass);
      bound += mass * g_best(validate(sub / mass, true), cfg).g_bits;
    }
    bound += ref_h(pz);
    const double gj = g_best(validate(m, true), cfg).g_bits;
    ++r.instances;
    if (gj > bound + slack) r.fail(describe(m), gj - bound);
  }
  return r;
}

/// Feasible factorization with exactly |X||Y| + 3 components: a mixture of
/// W = X and W = (X, Y), padded by splitting the heaviest component.
inline MarkovFactorization inflated(const JointPmf& j, Gen& g) {
  const Eigen::Index k = j.nx() * j.ny() + 3;
  const Vector px = j.marginal_x();
  const Matrix cond = j.y_given_x();
  // Mix: fraction a of the mass through W = X, the rest through W = (X, Y).
  const double a = 0.2 + 0.6 * g.uniform();
  std::vector<double> pw;
  std::vector<Vector> xs, ys;
  for (Eigen::Index x = 0; x < j.nx(); ++x) {
    pw.push_back(a * px(x));
    xs.push_back(Vector::Unit(j.nx(), x));
    ys.push_back(cond.col(x));
  }
  for (Eigen::Index x = 0; x < j.nx(); ++x)
    for (Eigen::Index y = 0; y < j.ny(); ++y) {
      if (j(x, y) <= 0.0) continue;
      pw.push_back((1.0 - a) * j(x, y));
      xs.push_back(Vector::Unit(j.nx(), x));
      ys.push_back(Vector::Unit(j.ny(), y));
    }
  // Pad by splitting the heaviest component until the target size.
  while (static_cast<Eigen::Index>(pw.size()) < k) {
    const auto big = static_cast<std::size_t>(std::max_element(pw.begin(), pw.end()) - pw.begin());
    const double u = 0.1 + 0.8 * g.uniform();
    pw.push_back(pw[big] * (1.0 - u));
    pw[big] *= u;
    xs.push_back(xs[big]);
    ys.push_back(ys[big]);
  }
  Vector w(static_cast<Eigen::Index>(pw.size()));
  Matrix mx(j.nx(), w.size()), my(j.ny(), w.size());
  for (Eigen::Index c = 0; c < w.size(); ++c) {
    w(c) = pw[static_cast<std::size_t>(c)];
    mx.col(c) = xs[static_cast<std::size_t>(c)];
    my.col(c) = ys[static_cast<std::size_t>(c)];
  }
  return {w, mx, my};
}

/// reduce_support brings inflated factorizations to |W| <= |X||Y| without
/// raising H(W) or breaking reconstruction.
inline PropertyResult support_reduction(int n, std::uint64_t seed) {
  Gen g(seed);
  PropertyResult r;
  for (int i = 0; i < n; ++i) {
    const int nx = g.integer(2, 3), ny = g.integer(2, 3);
    const JointPmf j = validate(i % 2 == 0 ? g.positive(nx, ny) : g.sparse(nx, ny, 0.3), true);
    const MarkovFactorization f = inflated(j, g);
    const MarkovFactorization red = reduce_support(f, j);
    ++r.instances;
    if (f.card() != j.nx() * j.ny() + 3) r.fail("inflation missed its size", 1.0);
    if (red.card() > j.nx() * j.ny()) r.fail(describe(j.matrix()) + " card", static_cast<double>(red.card()));
    if (weight_entropy(red) > weight_entropy(f) + 1e-12)
      r.fail(describe(j.matrix()) + " entropy", weight_entropy(red) - weight_entropy(f));
    const double err = verify(red, j, 1e-8).max_abs_error;
    if (!(err < 1e-8)) r.fail(describe(j.matrix()) + " reconstruction", err);
  }
  return r;
}

}  // namespace cet::testing
