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

// Concave minimisation over a product of transportation-like polytopes.
//
// Fix candidate conditionals M (d x K, columns on the simplex). For each
// source symbol i with weight a_i and conditional c_i we look for
// q_i >= 0 with M q_i = c_i; the mixing weights are p_W = sum_i a_i q_i and
// the objective is H(p_W). H is concave, so a minimiser sits at a tuple of
// vertices (basic solutions). Small instances are enumerated exactly, larger
// ones use coordinate descent over vertex lists, and the largest fall back
// to simplex-style pivoting between adjacent vertices.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "cet/prob_core.hpp"

namespace cet::detail {

/// Lexicographic score: first the number of used columns above the limit,
/// then entropy.
struct Score {
  int excess = 0;
  double h = 0.0;
  [[nodiscard]] bool better_than(const Score& o, double margin = 1e-13) const {
    if (excess != o.excess) return excess < o.excess;
    return h < o.h - margin;
  }
};

struct VertexLimits {
  std::size_t enumerate_subsets = 6000;  // per source symbol
  std::size_t exhaustive_tuples = 100000;
  int max_sweeps = 200;
};

class VertexSearch {
 public:
  using Limits = VertexLimits;

  VertexSearch(Matrix cols, Matrix targets, Vector weights, int card_limit, Limits limits = {})
      : cols_(std::move(cols)), targets_(std::move(targets)), weights_(std::move(weights)),
        card_limit_(card_limit), limits_(limits) {
    Eigen::JacobiSVD<Matrix> svd(cols_, Eigen::ComputeThinU);
    const Vector& sv = svd.singularValues();
    const double thr = 1e-11 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    rank_ = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > thr) ++rank_;
    const Matrix basis = svd.matrixU().leftCols(rank_);
    red_cols_ = basis.transpose() * cols_;
    red_targets_ = basis.transpose() * targets_;
  }

  [[nodiscard]] Eigen::Index rank() const noexcept { return rank_; }

  [[nodiscard]] Score score(const Matrix& q) const { return score_of(q * weights_); }

  /// Improves a feasible q (K x n) in place and returns its score.
  Score run(Matrix& q) {
    for (Eigen::Index i = 0; i < q.cols(); ++i) purify(q, i);
    Score best = score(q);

    std::vector<std::vector<Vertex>> lists;
    if (enumerable()) {
      lists.resize(static_cast<std::size_t>(q.cols()));
      double product = 1.0;
      for (Eigen::Index i = 0; i < q.cols(); ++i) {
        lists[static_cast<std::size_t>(i)] = enumerate(i);
        product *= static_cast<double>(lists[static_cast<std::size_t>(i)].size());
      }
      if (product <= static_cast<double>(limits_.exhaustive_tuples)) {
        exhaustive(lists, q, best);
      } else {
        descend_lists(lists, q, best);
      }
    } else {
      pivot_search(q, best);
    }
    return best;
  }

 private:
  struct Vertex {
    std::vector<Eigen::Index> support;
    std::vector<double> values;
  };

  [[nodiscard]] Score score_of(const Vector& pw) const {
    Score s;
    int used = 0;
    for (Eigen::Index k = 0; k < pw.size(); ++k) {
      if (pw(k) > 1e-15) {
        ++used;
        s.h += plogp(pw(k));
      }
    }
    if (card_limit_ > 0) s.excess = std::max(0, used - card_limit_);
    return s;
  }

  /// Exact solve on a support; empty result when singular or infeasible.
  [[nodiscard]] bool solve_support(const std::vector<Eigen::Index>& support, Eigen::Index i,
                                   std::vector<double>& out, bool require_positive) const {
    const auto s = static_cast<Eigen::Index>(support.size());
    Matrix a(rank_, s);
    for (Eigen::Index c = 0; c < s; ++c) a.col(c) = red_cols_.col(support[static_cast<std::size_t>(c)]);
    Eigen::ColPivHouseholderQR<Matrix> qr(a);
    qr.setThreshold(1e-10);
    if (qr.rank() < s) return false;
    const Vector sol = qr.solve(red_targets_.col(i));
    if ((a * sol - red_targets_.col(i)).cwiseAbs().maxCoeff() > 1e-10) return false;
    out.assign(sol.data(), sol.data() + s);
    for (double& v : out) {
      if (v < -1e-11) return false;
      if (require_positive && v <= 1e-14) return false;
      v = std::max(v, 0.0);
    }
    return true;
  }

  /// Moves q_i to a vertex of its polytope without worsening the score.
  void purify(Matrix& q, Eigen::Index i) const {
    for (int guard = 0; guard < 4 * static_cast<int>(q.rows()) + 4; ++guard) {
      std::vector<Eigen::Index> support;
      for (Eigen::Index k = 0; k < q.rows(); ++k)
        if (q(k, i) > 1e-15) support.push_back(k);
        else q(k, i) = 0.0;
      const auto s = static_cast<Eigen::Index>(support.size());
      Matrix a(rank_, s);
      for (Eigen::Index c = 0; c < s; ++c) a.col(c) = red_cols_.col(support[static_cast<std::size_t>(c)]);
      Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
      const Vector& sv = svd.singularValues();
      Eigen::Index r = 0;
      for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > 1e-11) ++r;
      if (r == s) {
        std::vector<double> vals;
        if (solve_support(support, i, vals, false)) {
          q.col(i).setZero();
          for (std::size_t c = 0; c < support.size(); ++c) q(support[c], i) = vals[c];
        }
        return;
      }
      const Vector z = svd.matrixV().col(s - 1);
      double t_hi = std::numeric_limits<double>::infinity(), t_lo = -t_hi;
      Eigen::Index hi_hit = -1, lo_hit = -1;
      for (Eigen::Index c = 0; c < s; ++c) {
        const double qv = q(support[static_cast<std::size_t>(c)], i);
        if (z(c) < -1e-14 && qv / -z(c) < t_hi) { t_hi = qv / -z(c); hi_hit = c; }
        if (z(c) > 1e-14 && -qv / z(c) > t_lo) { t_lo = -qv / z(c); lo_hit = c; }
      }
      Matrix cand_hi = q, cand_lo = q;
      for (Eigen::Index c = 0; c < s; ++c) {
        const auto k = support[static_cast<std::size_t>(c)];
        if (hi_hit >= 0) cand_hi(k, i) = std::max(0.0, q(k, i) + t_hi * z(c));
        if (lo_hit >= 0) cand_lo(k, i) = std::max(0.0, q(k, i) + t_lo * z(c));
      }
      if (hi_hit >= 0) cand_hi(support[static_cast<std::size_t>(hi_hit)], i) = 0.0;
      if (lo_hit >= 0) cand_lo(support[static_cast<std::size_t>(lo_hit)], i) = 0.0;
      if (hi_hit < 0) { q = cand_lo; continue; }
      if (lo_hit < 0) { q = cand_hi; continue; }
      q = score(cand_hi).better_than(score(cand_lo), 0.0) ? cand_hi : cand_lo;
    }
  }

  [[nodiscard]] bool enumerable() const {
    const auto k = static_cast<std::size_t>(cols_.cols());
    double count = 0.0, c = 1.0;
    for (Eigen::Index s = 1; s <= rank_; ++s) {
      c = c * static_cast<double>(k - static_cast<std::size_t>(s) + 1) / static_cast<double>(s);
      count += c;
    }
    return count <= static_cast<double>(limits_.enumerate_subsets);
  }

  [[nodiscard]] std::vector<Vertex> enumerate(Eigen::Index i) const {
    std::vector<Vertex> out;
    const auto k = cols_.cols();
    std::vector<Eigen::Index> subset;
    std::vector<double> vals;
    // Depth-first enumeration of subsets of size <= rank.
    auto rec = [&](auto&& self, Eigen::Index start) -> void {
      if (!subset.empty() && solve_support(subset, i, vals, true)) out.push_back({subset, vals});
      if (static_cast<Eigen::Index>(subset.size()) == rank_) return;
      for (Eigen::Index c = start; c < k; ++c) {
        subset.push_back(c);
        self(self, c + 1);
        subset.pop_back();
      }
    };
    rec(rec, 0);
    return out;
  }

  void exhaustive(const std::vector<std::vector<Vertex>>& lists, Matrix& q, Score& best) const {
    const auto n = static_cast<Eigen::Index>(lists.size());
    std::vector<std::size_t> choice(static_cast<std::size_t>(n), 0), best_choice;
    Vector pw = Vector::Zero(cols_.cols());
    auto rec = [&](auto&& self, Eigen::Index i) -> void {
      if (i == n) {
        const Score s = score_of(pw);
        if (s.better_than(best)) {
          best = s;
          best_choice = choice;
        }
        return;
      }
      const auto& li = lists[static_cast<std::size_t>(i)];
      for (std::size_t v = 0; v < li.size(); ++v) {
        choice[static_cast<std::size_t>(i)] = v;
        for (std::size_t c = 0; c < li[v].support.size(); ++c) pw(li[v].support[c]) += weights_(i) * li[v].values[c];
        self(self, i + 1);
        for (std::size_t c = 0; c < li[v].support.size(); ++c) pw(li[v].support[c]) -= weights_(i) * li[v].values[c];
      }
    };
    rec(rec, 0);
    if (!best_choice.empty()) {
      q.setZero();
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto& v = lists[static_cast<std::size_t>(i)][best_choice[static_cast<std::size_t>(i)]];
        for (std::size_t c = 0; c < v.support.size(); ++c) q(v.support[c], i) = v.values[c];
      }
    }
  }

  void descend_lists(const std::vector<std::vector<Vertex>>& lists, Matrix& q, Score& best) const {
    Vector pw = q * weights_;
    for (int sweep = 0; sweep < limits_.max_sweeps; ++sweep) {
      bool moved = false;
      for (Eigen::Index i = 0; i < q.cols(); ++i) {
        const Vector rest = pw - weights_(i) * q.col(i);
        const Vertex* pick = nullptr;
        for (const auto& v : lists[static_cast<std::size_t>(i)]) {
          Vector cand = rest;
          for (std::size_t c = 0; c < v.support.size(); ++c) cand(v.support[c]) += weights_(i) * v.values[c];
          const Score s = score_of(cand);
          if (s.better_than(best)) {
            best = s;
            pick = &v;
          }
        }
        if (pick) {
          q.col(i).setZero();
          for (std::size_t c = 0; c < pick->support.size(); ++c) q(pick->support[c], i) = pick->values[c];
          pw = q * weights_;
          moved = true;
        }
      }
      if (!moved) break;
    }
  }

  /// Adjacent-vertex local search: complete the support of q_i to a basis
  /// and try every entering column with a positive ratio-test step.
  void pivot_search(Matrix& q, Score& best) const {
    const auto k = cols_.cols();
    for (int sweep = 0; sweep < limits_.max_sweeps; ++sweep) {
      bool moved = false;
      for (Eigen::Index i = 0; i < q.cols(); ++i) {
        std::vector<Eigen::Index> basis;
        for (Eigen::Index c = 0; c < k; ++c)
          if (q(c, i) > 0.0) basis.push_back(c);
        // Greedy completion to rank_ independent columns.
        for (Eigen::Index c = 0; c < k && static_cast<Eigen::Index>(basis.size()) < rank_; ++c) {
          if (std::find(basis.begin(), basis.end(), c) != basis.end()) continue;
          basis.push_back(c);
          Matrix a(rank_, static_cast<Eigen::Index>(basis.size()));
          for (std::size_t b = 0; b < basis.size(); ++b) a.col(static_cast<Eigen::Index>(b)) = red_cols_.col(basis[b]);
          Eigen::ColPivHouseholderQR<Matrix> qr(a);
          qr.setThreshold(1e-10);
          if (qr.rank() < static_cast<Eigen::Index>(basis.size())) basis.pop_back();
        }
        if (static_cast<Eigen::Index>(basis.size()) != rank_) continue;
        Matrix a(rank_, rank_);
        for (Eigen::Index b = 0; b < rank_; ++b) a.col(b) = red_cols_.col(basis[static_cast<std::size_t>(b)]);
        const Eigen::PartialPivLU<Matrix> lu(a);

        const Vector pw = q * weights_;
        Matrix best_col;
        for (Eigen::Index j = 0; j < k; ++j) {
          if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
          const Vector dir = -lu.solve(red_cols_.col(j));
          double t = std::numeric_limits<double>::infinity();
          Eigen::Index leave = -1;
          for (Eigen::Index b = 0; b < rank_; ++b) {
            if (dir(b) < -1e-13) {
              const double r = q(basis[static_cast<std::size_t>(b)], i) / -dir(b);
              if (r < t) { t = r; leave = b; }
            }
          }
          if (leave < 0 || t <= 1e-14 || !std::isfinite(t)) continue;
          Vector col = q.col(i);
          col(j) += t;
          for (Eigen::Index b = 0; b < rank_; ++b) {
            const auto idx = basis[static_cast<std::size_t>(b)];
            col(idx) = std::max(0.0, col(idx) + t * dir(b));
          }
          col(basis[static_cast<std::size_t>(leave)]) = 0.0;
          const Vector cand = pw + weights_(i) * (col - q.col(i));
          const Score s = score_of(cand);
          if (s.better_than(best)) {
            best = s;
            best_col = col;
          }
        }
        if (best_col.size() > 0) {
          q.col(i) = best_col;
          purify(q, i);
          best = score(q);
          moved = true;
        }
      }
      if (!moved) break;
    }
  }

  Matrix cols_;
  Matrix targets_;
  Vector weights_;
  int card_limit_;
  Limits limits_;
  Eigen::Index rank_ = 0;
  Matrix red_cols_;
  Matrix red_targets_;
};

}  // namespace cet::detail
