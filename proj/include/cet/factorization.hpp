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

// Markov factorizations p(x,y) = sum_w p(w) p(x|w) p(y|w) and the structural
// moves on them: support reduction along null-space perturbations, the
// same-support segment extension, sufficient-statistic collapse and the
// common-part decomposition.

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cet/error.hpp"
#include "cet/prob_core.hpp"

namespace cet {

namespace tol {
inline constexpr double kColumn = 1e-12;
inline constexpr double kDropWeight = 1e-14;
inline constexpr double kSupport = 1e-13;
inline constexpr double kClosedForm = 1e-10;
inline constexpr double kNumeric = 1e-8;
}  // namespace tol

/// (p_W, p_{X|W}, p_{Y|W}) witnessing X -> W -> Y. Conditionals are stored
/// column-stochastic: px_given_w() is |X| x |W|, py_given_w() is |Y| x |W|.
///
/// Construction clips round-off negatives, renormalizes columns, drops
/// components with weight below 1e-14 and sorts components by descending
/// weight (ties: lexicographic p_{Y|W} column).
class MarkovFactorization {
 public:
  MarkovFactorization() = default;

  MarkovFactorization(Vector p_w, Matrix px_given_w, Matrix py_given_w) {
    const Eigen::Index k = p_w.size();
    if (k == 0) throw ValidationError("factorization has no components");
    if (px_given_w.cols() != k || py_given_w.cols() != k) {
      throw ValidationError("factorization: conditional matrices need one column per component");
    }
    if (px_given_w.rows() == 0 || py_given_w.rows() == 0) {
      throw ValidationError("factorization: empty alphabet");
    }
    clean_columns(px_given_w, "p_x_given_w");
    clean_columns(py_given_w, "p_y_given_w");
    for (Eigen::Index w = 0; w < k; ++w) {
      if (!(p_w(w) >= -tol::kColumn)) throw ValidationError("factorization: negative weight");
      p_w(w) = std::max(0.0, p_w(w));
    }
    const double total = p_w.sum();
    if (std::abs(total - 1.0) > 1e-9) {
      throw ValidationError("factorization: weights sum to " + std::to_string(total));
    }
    p_w /= total;

    std::vector<Eigen::Index> order;
    for (Eigen::Index w = 0; w < k; ++w)
      if (p_w(w) >= tol::kDropWeight) order.push_back(w);
    if (order.empty()) throw ValidationError("factorization: all weights vanish");
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      if (std::abs(p_w(a) - p_w(b)) > 1e-15) return p_w(a) > p_w(b);
      for (Eigen::Index y = 0; y < py_given_w.rows(); ++y) {
        if (py_given_w(y, a) != py_given_w(y, b)) return py_given_w(y, a) < py_given_w(y, b);
      }
      return false;
    });

    const auto kk = static_cast<Eigen::Index>(order.size());
    p_w_.resize(kk);
    px_.resize(px_given_w.rows(), kk);
    py_.resize(py_given_w.rows(), kk);
    for (Eigen::Index i = 0; i < kk; ++i) {
      p_w_(i) = p_w(order[static_cast<std::size_t>(i)]);
      px_.col(i) = px_given_w.col(order[static_cast<std::size_t>(i)]);
      py_.col(i) = py_given_w.col(order[static_cast<std::size_t>(i)]);
    }
    p_w_ /= p_w_.sum();
  }

  [[nodiscard]] Eigen::Index card() const noexcept { return p_w_.size(); }
  [[nodiscard]] Eigen::Index nx() const noexcept { return px_.rows(); }
  [[nodiscard]] Eigen::Index ny() const noexcept { return py_.rows(); }
  [[nodiscard]] const Vector& p_w() const noexcept { return p_w_; }
  [[nodiscard]] double p_w(Eigen::Index w) const { return p_w_(w); }
  [[nodiscard]] const Matrix& px_given_w() const noexcept { return px_; }
  [[nodiscard]] const Matrix& py_given_w() const noexcept { return py_; }

  /// Swaps the roles of X and Y.
  [[nodiscard]] MarkovFactorization transposed() const { return {p_w_, py_, px_}; }

 private:
  static void clean_columns(Matrix& m, const char* name) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const double v = m(r, c);
        if (!std::isfinite(v) || v < -tol::kColumn) {
          throw ValidationError(std::string("factorization: invalid entry in ") + name);
        }
        if (v < 0.0) m(r, c) = 0.0;
      }
      const double s = m.col(c).sum();
      if (std::abs(s - 1.0) > 1e-9) {
        throw ValidationError(std::string("factorization: column of ") + name + " sums to " +
                              std::to_string(s));
      }
      m.col(c) /= s;
    }
  }

  Vector p_w_;
  Matrix px_;
  Matrix py_;
};

/// p(x,y) = sum_w p(w) p(x|w) p(y|w) as a raw matrix.
inline Matrix induced_matrix(const MarkovFactorization& f) {
  return f.px_given_w() * f.p_w().asDiagonal() * f.py_given_w().transpose();
}

inline JointPmf induced_joint(const MarkovFactorization& f, std::vector<std::string> x_labels,
                              std::vector<std::string> y_labels) {
  return validate(induced_matrix(f), std::move(x_labels), std::move(y_labels), true);
}

inline JointPmf induced_joint(const MarkovFactorization& f) {
  return validate(induced_matrix(f), true);
}

struct VerifyReport {
  double max_abs_error = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};

inline VerifyReport verify(const MarkovFactorization& f, const Matrix& target,
                           double tolerance = tol::kClosedForm) {
  if (f.nx() != target.rows() || f.ny() != target.cols()) {
    throw ValidationError("verify: factorization is " + std::to_string(f.nx()) + "x" +
                          std::to_string(f.ny()) + " but target is " + std::to_string(target.rows()) +
                          "x" + std::to_string(target.cols()));
  }
  VerifyReport r;
  r.max_abs_error = (induced_matrix(f) - target).cwiseAbs().maxCoeff();
  r.tolerance = tolerance;
  r.ok = r.max_abs_error <= tolerance;
  return r;
}

inline VerifyReport verify(const MarkovFactorization& f, const JointPmf& target,
                           double tolerance = tol::kClosedForm) {
  return verify(f, target.matrix(), tolerance);
}

inline double weight_entropy(const MarkovFactorization& f) { return entropy(f.p_w()); }

/// I(W;X,Y) = H(W) + H(X,Y) - H(W,X,Y) over the joint the certificate induces.
inline double wyner_objective(const MarkovFactorization& f) {
  const Matrix joint = induced_matrix(f);
  const double hxy = entropy(std::span<const double>(joint.data(), static_cast<std::size_t>(joint.size())));
  double hwxy = 0.0;
  for (Eigen::Index w = 0; w < f.card(); ++w) {
    hwxy += plogp(f.p_w(w));
    hwxy += f.p_w(w) * (entropy(Vector(f.px_given_w().col(w))) + entropy(Vector(f.py_given_w().col(w))));
  }
  return std::max(0.0, weight_entropy(f) + hxy - hwxy);
}

/// Boolean support pattern of each column (entries above 1e-13).
inline std::vector<std::vector<bool>> column_supports(const Matrix& m) {
  std::vector<std::vector<bool>> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    auto& s = out[static_cast<std::size_t>(c)];
    s.resize(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) s[static_cast<std::size_t>(r)] = m(r, c) > tol::kSupport;
  }
  return out;
}

/// True when no two components share the support of p_{Y|W}(.|w).
inline bool has_distinct_y_supports(const MarkovFactorization& f) {
  auto s = column_supports(f.py_given_w());
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

// ---------------------------------------------------------------------------
// Support reduction

/// Direction phi over W with sum_w p(x,y,w) phi(w) = 0 for every (x,y).
/// Weights p(w)(1 + eps phi(w)) stay non-negative for eps in [eps_neg, eps_pos].
struct Perturbation {
  Vector phi;
  double eps_neg = 0.0;
  double eps_pos = 0.0;
};

/// The |X||Y| x |W| matrix A[(x,y),w] = p(x,y,w), row index x*|Y| + y.
inline Matrix mass_matrix(const MarkovFactorization& f) {
  Matrix a(f.nx() * f.ny(), f.card());
  for (Eigen::Index w = 0; w < f.card(); ++w) {
    for (Eigen::Index x = 0; x < f.nx(); ++x)
      for (Eigen::Index y = 0; y < f.ny(); ++y)
        a(x * f.ny() + y, w) = f.p_w(w) * f.px_given_w()(x, w) * f.py_given_w()(y, w);
  }
  return a;
}

/// Null-space basis of the mass matrix, each direction scaled to max |phi| = 1.
inline std::vector<Perturbation> null_space_perturbations(const MarkovFactorization& f,
                                                          const JointPmf& target) {
  if (f.nx() != target.nx() || f.ny() != target.ny()) {
    throw ValidationError("null_space_perturbations: dimension mismatch");
  }
  const Matrix a = mass_matrix(f);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double threshold = 1e-12 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++rank;

  std::vector<Perturbation> out;
  for (Eigen::Index c = rank; c < f.card(); ++c) {
    Perturbation p;
    p.phi = svd.matrixV().col(c);
    p.phi /= p.phi.cwiseAbs().maxCoeff();
    p.eps_pos = std::numeric_limits<double>::infinity();
    p.eps_neg = -std::numeric_limits<double>::infinity();
    for (Eigen::Index w = 0; w < p.phi.size(); ++w) {
      if (p.phi(w) < 0.0) p.eps_pos = std::min(p.eps_pos, -1.0 / p.phi(w));
      if (p.phi(w) > 0.0) p.eps_neg = std::max(p.eps_neg, -1.0 / p.phi(w));
    }
    out.push_back(std::move(p));
  }
  return out;
}

/// Moves along null-space perturbations to an extreme step (one weight hits
/// zero) until the mass matrix has full column rank. Never increases H(W);
/// the induced joint is unchanged up to round-off. Afterwards |W| <= |X||Y|.
inline MarkovFactorization reduce_support(const MarkovFactorization& f, const JointPmf& target) {
  MarkovFactorization cur = f;
  for (;;) {
    const auto basis = null_space_perturbations(cur, target);
    if (basis.empty()) return cur;

    const double h0 = weight_entropy(cur);
    Vector best_w;
    double best_h = std::numeric_limits<double>::infinity();
    Eigen::Index best_zeroed = std::numeric_limits<Eigen::Index>::max();
    for (const auto& p : basis) {
      for (double eps : {p.eps_neg, p.eps_pos}) {
        if (!std::isfinite(eps)) continue;
        Vector w = cur.p_w().array() * (1.0 + eps * p.phi.array());
        Eigen::Index zeroed = std::numeric_limits<Eigen::Index>::max();
        for (Eigen::Index i = 0; i < w.size(); ++i) {
          if (std::abs(1.0 + eps * p.phi(i)) < 1e-12) {
            w(i) = 0.0;
            zeroed = std::min(zeroed, i);
          }
          w(i) = std::max(0.0, w(i));
        }
        const double h = entropy(Vector(w / w.sum()));
        if (h < best_h - 1e-15 || (std::abs(h - best_h) <= 1e-15 && zeroed < best_zeroed)) {
          best_h = h;
          best_w = w;
          best_zeroed = zeroed;
        }
      }
    }
    // A concave function on an interval is minimised at an end, so best_h <= h0.
    if (best_w.size() == 0 || best_h > h0 + 1e-12) return cur;
    cur = MarkovFactorization(best_w / best_w.sum(), cur.px_given_w(), cur.py_given_w());
  }
}

// ---------------------------------------------------------------------------
// Same-support improvement

namespace detail {

/// One segment-extension move on the Y side for components i and j.
inline MarkovFactorization extend_segment(const MarkovFactorization& f, Eigen::Index i, Eigen::Index j) {
  const Vector u = f.py_given_w().col(i);
  const Vector v = f.py_given_w().col(j);
  const Vector d = u - v;
  const double pi = f.p_w(i);
  const double pj = f.p_w(j);

  Vector p_w = f.p_w();
  Matrix px = f.px_given_w();
  Matrix py = f.py_given_w();

  if (d.cwiseAbs().maxCoeff() <= tol::kColumn) {
    // Identical columns: merge j into i.
    px.col(i) = (pi * px.col(i) + pj * px.col(j)) / (pi + pj);
    p_w(i) = pi + pj;
    p_w(j) = 0.0;
    return {p_w, px, py};
  }

  double a_max = std::numeric_limits<double>::infinity();
  double b_max = std::numeric_limits<double>::infinity();
  Eigen::Index a_hit = -1, b_hit = -1;
  for (Eigen::Index y = 0; y < d.size(); ++y) {
    if (d(y) < 0.0 && u(y) / -d(y) < a_max) { a_max = u(y) / -d(y); a_hit = y; }
    if (d(y) > 0.0 && v(y) / d(y) < b_max) { b_max = v(y) / d(y); b_hit = y; }
  }
  const double share = pi / (pi + pj);
  const double q_a = share / (a_max + 1.0);               // a = a_max, b = 0
  const double q_b = (b_max + share) / (b_max + 1.0);     // a = 0, b = b_max
  const bool use_a = binary_entropy(q_a) <= binary_entropy(q_b);
  const double a = use_a ? a_max : 0.0;
  const double b = use_a ? 0.0 : b_max;
  const double s = a + b + 1.0;

  Vector u2 = u + a * d;
  Vector v2 = v - b * d;
  if (use_a) u2(a_hit) = 0.0; else v2(b_hit) = 0.0;
  u2 = u2.cwiseMax(0.0);
  v2 = v2.cwiseMax(0.0);
  u2 /= u2.sum();
  v2 /= v2.sum();

  const double w1 = ((b + 1.0) * pi + b * pj) / s;
  const double w2 = (a * pi + (a + 1.0) * pj) / s;
  const Vector x1 = ((b + 1.0) / s * pi * px.col(i) + b / s * pj * px.col(j)) / w1;
  const Vector x2 = (a / s * pi * px.col(i) + (a + 1.0) / s * pj * px.col(j)) / w2;
  p_w(i) = w1;
  p_w(j) = w2;
  px.col(i) = x1;
  px.col(j) = x2;
  py.col(i) = u2;
  py.col(j) = v2;
  return {p_w, px, py};
}

inline std::optional<std::pair<Eigen::Index, Eigen::Index>> shared_support_pair(const Matrix& cond) {
  const auto s = column_supports(cond);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (s[i] == s[j]) return std::make_pair(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return std::nullopt;
}

}  // namespace detail

/// While two components share the support of p_{Y|W} (or of p_{X|W}),
/// extends the segment between their conditionals to the simplex boundary
/// at whichever end lowers H(W) more. Each move keeps the induced joint and
/// strictly lowers H(W) or merges identical components.
inline MarkovFactorization same_support_improve(const MarkovFactorization& f, const JointPmf& target,
                                                int max_moves = 1000) {
  if (f.nx() != target.nx() || f.ny() != target.ny()) {
    throw ValidationError("same_support_improve: dimension mismatch");
  }
  MarkovFactorization cur = f;
  for (int move = 0; move < max_moves; ++move) {
    if (auto pair = detail::shared_support_pair(cur.py_given_w())) {
      cur = detail::extend_segment(cur, pair->first, pair->second);
      continue;
    }
    if (auto pair = detail::shared_support_pair(cur.px_given_w())) {
      cur = detail::extend_segment(cur.transposed(), pair->first, pair->second).transposed();
      continue;
    }
    break;
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Source decompositions

struct Collapse {
  std::vector<int> class_of_x;  // original x -> collapsed symbol
  JointPmf collapsed;
};

/// Merges x symbols whose conditionals p(.|x) agree within 1e-12.
inline Collapse sufficient_statistic_collapse(const JointPmf& j) {
  const Matrix cond = j.y_given_x();
  Collapse out;
  out.class_of_x.assign(static_cast<std::size_t>(j.nx()), -1);
  std::vector<Eigen::Index> reps;
  for (Eigen::Index x = 0; x < j.nx(); ++x) {
    for (std::size_t c = 0; c < reps.size(); ++c) {
      if ((cond.col(x) - cond.col(reps[c])).cwiseAbs().maxCoeff() <= tol::kColumn) {
        out.class_of_x[static_cast<std::size_t>(x)] = static_cast<int>(c);
        break;
      }
    }
    if (out.class_of_x[static_cast<std::size_t>(x)] < 0) {
      out.class_of_x[static_cast<std::size_t>(x)] = static_cast<int>(reps.size());
      reps.push_back(x);
    }
  }
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(reps.size()), j.ny());
  std::vector<std::string> labels(reps.size());
  for (Eigen::Index x = 0; x < j.nx(); ++x) {
    const int c = out.class_of_x[static_cast<std::size_t>(x)];
    m.row(c) += j.matrix().row(x);
    auto& l = labels[static_cast<std::size_t>(c)];
    l += (l.empty() ? "" : "|") + j.x_labels()[static_cast<std::size_t>(x)];
  }
  out.collapsed = validate(m, labels, j.y_labels(), true);
  return out;
}

struct CommonPart {
  std::vector<int> z_of_x;
  std::vector<int> z_of_y;
  Dist p_z;
};

/// Connected components of the bipartite support graph, numbered by first
/// appearance in x order. Z is the finest variable that is a function of X
/// and of Y alone.
inline CommonPart common_part(const JointPmf& j) {
  const auto nx = static_cast<std::size_t>(j.nx());
  const auto ny = static_cast<std::size_t>(j.ny());
  // Union-find over nx + ny nodes.
  std::vector<std::size_t> parent(nx + ny);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      if (j(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) > 0.0) parent[find(x)] = find(nx + y);

  CommonPart cp;
  std::vector<int> label(nx + ny, -1);
  int next = 0;
  auto id = [&](std::size_t node) {
    const std::size_t r = find(node);
    if (label[r] < 0) label[r] = next++;
    return label[r];
  };
  for (std::size_t x = 0; x < nx; ++x) cp.z_of_x.push_back(id(x));
  for (std::size_t y = 0; y < ny; ++y) cp.z_of_y.push_back(id(nx + y));
  std::vector<double> pz(static_cast<std::size_t>(next), 0.0);
  const Vector px = j.marginal_x();
  for (std::size_t x = 0; x < nx; ++x) pz[static_cast<std::size_t>(cp.z_of_x[x])] += px(static_cast<Eigen::Index>(x));
  cp.p_z = Dist::normalized(std::move(pz));
  return cp;
}

/// Symbols of the source restricted to Z = z, renormalized. Returns the pmf
/// and the original indices of the kept x and y symbols.
struct Block {
  JointPmf pmf;
  std::vector<Eigen::Index> xs;
  std::vector<Eigen::Index> ys;
};

inline Block component_block(const JointPmf& j, const std::vector<int>& z_of_x,
                             const std::vector<int>& z_of_y, int z) {
  Block b;
  for (std::size_t x = 0; x < z_of_x.size(); ++x)
    if (z_of_x[x] == z) b.xs.push_back(static_cast<Eigen::Index>(x));
  for (std::size_t y = 0; y < z_of_y.size(); ++y)
    if (z_of_y[y] == z) b.ys.push_back(static_cast<Eigen::Index>(y));
  Matrix m(static_cast<Eigen::Index>(b.xs.size()), static_cast<Eigen::Index>(b.ys.size()));
  std::vector<std::string> xl, yl;
  for (std::size_t a = 0; a < b.xs.size(); ++a) {
    xl.push_back(j.x_labels()[static_cast<std::size_t>(b.xs[a])]);
    for (std::size_t c = 0; c < b.ys.size(); ++c)
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) = j(b.xs[a], b.ys[c]);
  }
  for (auto y : b.ys) yl.push_back(j.y_labels()[static_cast<std::size_t>(y)]);
  b.pmf = validate(m, xl, yl, true);
  return b;
}

/// Kronecker product of two certificates: W = (W1, W2) for the tensor source.
inline MarkovFactorization concatenate(const MarkovFactorization& a, const MarkovFactorization& b) {
  const Eigen::Index k = a.card() * b.card();
  Vector pw(k);
  Matrix px(a.nx() * b.nx(), k);
  Matrix py(a.ny() * b.ny(), k);
  for (Eigen::Index i = 0; i < a.card(); ++i) {
    for (Eigen::Index l = 0; l < b.card(); ++l) {
      const Eigen::Index w = i * b.card() + l;
      pw(w) = a.p_w(i) * b.p_w(l);
      for (Eigen::Index x1 = 0; x1 < a.nx(); ++x1)
        px.col(w).segment(x1 * b.nx(), b.nx()) = a.px_given_w()(x1, i) * b.px_given_w().col(l);
      for (Eigen::Index y1 = 0; y1 < a.ny(); ++y1)
        py.col(w).segment(y1 * b.ny(), b.ny()) = a.py_given_w()(y1, i) * b.py_given_w().col(l);
    }
  }
  return {pw, px, py};
}

// ---------------------------------------------------------------------------
// Restriction audit

struct RestrictionReport {
  JointPmf restricted;
  double g_restricted = 0.0;
  double h_conditional = 0.0;
  double gap = 0.0;
  bool ok = false;
};

/// Builds the source generated by the components in `subset` (weights
/// renormalized), solves it with `solve` (JointPmf -> bits) and compares
/// against H(W | W in subset). For an optimal certificate the two agree; a
/// solver value below H(W | W in subset) by more than `tolerance` proves the
/// certificate was not optimal.
template <typename SolveFn>
  requires std::invocable<SolveFn&, const JointPmf&>
RestrictionReport restriction_check(const MarkovFactorization& f, const JointPmf& target,
                                    const std::vector<Eigen::Index>& subset, SolveFn&& solve,
                                    double tolerance = 1e-6) {
  if (subset.empty()) throw ValidationError("restriction_check: empty subset");
  if (f.nx() != target.nx() || f.ny() != target.ny()) {
    throw ValidationError("restriction_check: dimension mismatch");
  }
  Vector pw(static_cast<Eigen::Index>(subset.size()));
  Matrix px(f.nx(), pw.size()), py(f.ny(), pw.size());
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const Eigen::Index w = subset[i];
    if (w < 0 || w >= f.card()) throw ValidationError("restriction_check: component index out of range");
    const auto c = static_cast<Eigen::Index>(i);
    pw(c) = f.p_w(w);
    px.col(c) = f.px_given_w().col(w);
    py.col(c) = f.py_given_w().col(w);
  }
  pw /= pw.sum();
  const MarkovFactorization sub(pw, px, py);

  RestrictionReport r;
  r.restricted = induced_joint(sub, target.x_labels(), target.y_labels());
  r.h_conditional = weight_entropy(sub);
  r.g_restricted = solve(r.restricted);
  r.gap = std::abs(r.g_restricted - r.h_conditional);
  r.ok = r.gap <= tolerance;
  return r;
}

}  // namespace cet
