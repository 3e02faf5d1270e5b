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

// Shared generators and reference formulas for the tests. Reference values
// here are computed from first principles, not through the library.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "cet/prob_core.hpp"

namespace cet::testing {

inline double ref_h(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v) / std::log(2.0);
  return h;
}

inline double ref_h2(double p) { return ref_h({p, 1.0 - p}); }

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// Strictly positive random pmf (bounded away from zero).
  Matrix positive(int nx, int ny) {
    Matrix m(nx, ny);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = 0.02 + uniform();
    return m / m.sum();
  }

  /// Random pmf where each cell is zero with probability `zero_prob`; every
  /// row and column keeps at least one positive entry.
  Matrix sparse(int nx, int ny, double zero_prob) {
    while (true) {
      Matrix m(nx, ny);
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = uniform() < zero_prob ? 0.0 : 0.02 + uniform();
      if ((m.rowwise().sum().array() > 0).all() && (m.colwise().sum().array() > 0).all()) return m / m.sum();
    }
  }

  Vector simplex(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = -std::log(1.0 - uniform() * 0.999);
    return v / v.sum();
  }

  /// Product pmf p(x) q(y).
  Matrix independent(int nx, int ny) { return simplex(nx) * simplex(ny).transpose(); }

  /// Column-stochastic channel, |out| x |in|.
  Matrix channel(int out, int in) {
    Matrix c(out, in);
    for (int i = 0; i < in; ++i) c.col(i) = simplex(out);
    return c;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Block-diagonal pmf from the given blocks weighted by `weights`.
inline Matrix block_diagonal(const std::vector<Matrix>& blocks, const std::vector<double>& weights) {
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  Matrix m = Matrix::Zero(r, c);
  r = c = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    m.block(r, c, blocks[i].rows(), blocks[i].cols()) = weights[i] * blocks[i] / blocks[i].sum();
    r += blocks[i].rows();
    c += blocks[i].cols();
  }
  return m;
}

}  // namespace cet::testing
