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

// Exact finite-probability primitives. All entropies are in bits and use the
// convention 0 log 0 = 0.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cet/error.hpp"

namespace cet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace tol {
inline constexpr double kInputMass = 1e-9;
inline constexpr double kDist = 1e-12;
}  // namespace tol

/// -p log2 p with the 0 log 0 = 0 convention.
inline double plogp(double p) noexcept { return p > 0.0 ? -p * std::log2(p) : 0.0; }

inline double entropy(std::span<const double> weights) noexcept {
  double h = 0.0;
  for (double p : weights) h += plogp(p);
  return h;
}

inline double entropy(const Vector& weights) noexcept {
  return entropy(std::span<const double>(weights.data(), static_cast<std::size_t>(weights.size())));
}

/// A probability vector. Immutable once built.
class Dist {
 public:
  Dist() = default;

  /// Throws if any entry is negative or the total is off by more than 1e-12.
  explicit Dist(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw ValidationError("distribution must be non-empty");
    double total = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0)) throw ValidationError("distribution has a negative or NaN entry");
      total += w;
    }
    if (std::abs(total - 1.0) > tol::kDist) {
      throw ValidationError("distribution sums to " + std::to_string(total) + ", not 1");
    }
  }

  /// Normalizes non-negative weights with a positive total.
  static Dist normalized(std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw ValidationError("distribution has a negative or NaN entry");
      total += w;
    }
    if (!(total > 0.0)) throw ValidationError("distribution has zero total mass");
    for (double& w : weights) w /= total;
    return Dist(std::move(weights));
  }

  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return weights_[i]; }
  [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::vector<double> weights_;
};

inline double entropy(const Dist& d) noexcept { return entropy(std::span<const double>(d.weights())); }

/// Binary entropy function H(p) in bits.
inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("binary_entropy: p outside [0,1]");
  return plogp(p) + plogp(1.0 - p);
}

/// A validated joint pmf p(x,y) with labeled alphabets. Rows are X, columns Y.
/// Every row and column has positive mass; zero-probability symbols are
/// stripped at construction and listed in dropped_x()/dropped_y().
class JointPmf {
 public:
  JointPmf() = default;

  [[nodiscard]] Eigen::Index nx() const noexcept { return p_.rows(); }
  [[nodiscard]] Eigen::Index ny() const noexcept { return p_.cols(); }
  [[nodiscard]] double operator()(Eigen::Index x, Eigen::Index y) const { return p_(x, y); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return p_; }
  [[nodiscard]] const std::vector<std::string>& x_labels() const noexcept { return x_labels_; }
  [[nodiscard]] const std::vector<std::string>& y_labels() const noexcept { return y_labels_; }
  [[nodiscard]] const std::vector<std::string>& dropped_x() const noexcept { return dropped_x_; }
  [[nodiscard]] const std::vector<std::string>& dropped_y() const noexcept { return dropped_y_; }

  [[nodiscard]] Vector marginal_x() const { return p_.rowwise().sum(); }
  [[nodiscard]] Vector marginal_y() const { return p_.colwise().sum().transpose(); }

  /// |Y| x |X| column-stochastic matrix, column x is p(.|x).
  [[nodiscard]] Matrix y_given_x() const {
    Matrix c = p_.transpose();
    const Vector px = marginal_x();
    for (Eigen::Index x = 0; x < nx(); ++x) c.col(x) /= px(x);
    return c;
  }

  /// |X| x |Y| column-stochastic matrix, column y is p(.|y).
  [[nodiscard]] Matrix x_given_y() const {
    Matrix c = p_;
    const Vector py = marginal_y();
    for (Eigen::Index y = 0; y < ny(); ++y) c.col(y) /= py(y);
    return c;
  }

  [[nodiscard]] JointPmf transposed() const {
    JointPmf t;
    t.p_ = p_.transpose();
    t.x_labels_ = y_labels_;
    t.y_labels_ = x_labels_;
    t.dropped_x_ = dropped_y_;
    t.dropped_y_ = dropped_x_;
    return t;
  }

  friend JointPmf validate(const Matrix& m, std::vector<std::string> x_labels,
                           std::vector<std::string> y_labels, bool normalize);

 private:
  Matrix p_;
  std::vector<std::string> x_labels_;
  std::vector<std::string> y_labels_;
  std::vector<std::string> dropped_x_;
  std::vector<std::string> dropped_y_;
};

inline std::vector<std::string> index_labels(Eigen::Index n) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return labels;
}

/// Builds the canonical JointPmf: checks sign and mass (1e-9 unless
/// normalize), renormalizes to exact unit mass and strips zero rows/columns.
inline JointPmf validate(const Matrix& m, std::vector<std::string> x_labels,
                         std::vector<std::string> y_labels, bool normalize = false) {
  if (m.rows() == 0 || m.cols() == 0) throw ValidationError("pmf matrix is empty");
  if (static_cast<Eigen::Index>(x_labels.size()) != m.rows() ||
      static_cast<Eigen::Index>(y_labels.size()) != m.cols()) {
    throw ValidationError("pmf is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                          " but labels are " + std::to_string(x_labels.size()) + "x" +
                          std::to_string(y_labels.size()));
  }
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double v = m.data()[i];
    if (!std::isfinite(v)) throw ValidationError("pmf has a non-finite entry");
    if (v < 0.0) throw ValidationError("pmf has a negative entry");
  }
  const double total = m.sum();
  if (!(total > 0.0)) throw ValidationError("pmf has zero total mass");
  if (!normalize && std::abs(total - 1.0) > tol::kInputMass) {
    throw ValidationError("pmf sums to " + std::to_string(total) + ", not 1");
  }

  std::vector<Eigen::Index> keep_x, keep_y;
  JointPmf j;
  for (Eigen::Index x = 0; x < m.rows(); ++x) {
    if (m.row(x).sum() > 0.0) keep_x.push_back(x);
    else j.dropped_x_.push_back(x_labels[static_cast<std::size_t>(x)]);
  }
  for (Eigen::Index y = 0; y < m.cols(); ++y) {
    if (m.col(y).sum() > 0.0) keep_y.push_back(y);
    else j.dropped_y_.push_back(y_labels[static_cast<std::size_t>(y)]);
  }
  j.p_.resize(static_cast<Eigen::Index>(keep_x.size()), static_cast<Eigen::Index>(keep_y.size()));
  for (std::size_t a = 0; a < keep_x.size(); ++a) {
    j.x_labels_.push_back(std::move(x_labels[static_cast<std::size_t>(keep_x[a])]));
    for (std::size_t b = 0; b < keep_y.size(); ++b) {
      j.p_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = m(keep_x[a], keep_y[b]);
    }
  }
  for (auto y : keep_y) j.y_labels_.push_back(std::move(y_labels[static_cast<std::size_t>(y)]));
  j.p_ /= j.p_.sum();
  return j;
}

/// Validation with index labels "0", "1", ...
inline JointPmf validate(const Matrix& m, bool normalize = false) {
  return validate(m, index_labels(m.rows()), index_labels(m.cols()), normalize);
}

inline Dist flat_dist(const JointPmf& j) {
  const Matrix& p = j.matrix();
  return Dist::normalized(std::vector<double>(p.data(), p.data() + p.size()));
}

inline Dist marginal_x(const JointPmf& j) {
  const Vector v = j.marginal_x();
  return Dist::normalized(std::vector<double>(v.data(), v.data() + v.size()));
}

inline Dist marginal_y(const JointPmf& j) {
  const Vector v = j.marginal_y();
  return Dist::normalized(std::vector<double>(v.data(), v.data() + v.size()));
}

inline double joint_entropy(const JointPmf& j) {
  const Matrix& p = j.matrix();
  return entropy(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

/// I(X;Y) in bits, computed as sum p log(p / (p_x p_y)); clamped at 0.
inline double mutual_information(const JointPmf& j) {
  const Vector px = j.marginal_x();
  const Vector py = j.marginal_y();
  double mi = 0.0;
  for (Eigen::Index x = 0; x < j.nx(); ++x) {
    for (Eigen::Index y = 0; y < j.ny(); ++y) {
      const double p = j(x, y);
      if (p > 0.0) mi += p * std::log2(p / (px(x) * py(y)));
    }
  }
  return std::max(0.0, mi);
}

/// Half the L1 distance. Alphabets must agree in size.
inline double total_variation(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("total_variation: alphabet mismatch");
  }
  return 0.5 * (a - b).cwiseAbs().sum();
}

inline double total_variation(const JointPmf& a, const JointPmf& b) {
  if (a.x_labels() != b.x_labels() || a.y_labels() != b.y_labels()) {
    throw ValidationError("total_variation: alphabet mismatch");
  }
  return total_variation(a.matrix(), b.matrix());
}

/// Max |p(x,y) - p(x)p(y)| <= tolerance.
inline bool is_independent(const JointPmf& j, double tolerance = 1e-12) {
  const Matrix outer = j.marginal_x() * j.marginal_y().transpose();
  return (j.matrix() - outer).cwiseAbs().maxCoeff() <= tolerance;
}

namespace detail {
inline std::vector<std::string> join_labels(const std::vector<std::string>& a,
                                            const std::vector<std::string>& b) {
  std::vector<std::string> out;
  out.reserve(a.size() * b.size());
  for (const auto& s : a)
    for (const auto& t : b) out.push_back(s + "," + t);
  return out;
}
}  // namespace detail

/// Tensor product of two sources: (X1,X2) x (Y1,Y2), lexicographic order,
/// labels joined with ','.
inline JointPmf kron(const JointPmf& a, const JointPmf& b) {
  Matrix m(a.nx() * b.nx(), a.ny() * b.ny());
  for (Eigen::Index x1 = 0; x1 < a.nx(); ++x1)
    for (Eigen::Index y1 = 0; y1 < a.ny(); ++y1)
      m.block(x1 * b.nx(), y1 * b.ny(), b.nx(), b.ny()) = a(x1, y1) * b.matrix();
  return validate(m, detail::join_labels(a.x_labels(), b.x_labels()),
                  detail::join_labels(a.y_labels(), b.y_labels()), true);
}

inline constexpr std::size_t kDefaultCellBudget = 4096;

/// The n-letter i.i.d. source p(x^n, y^n) = prod p(x_i, y_i).
inline JointPmf product_source(const JointPmf& j, int n, std::size_t cell_budget = kDefaultCellBudget) {
  if (n < 1) throw ValidationError("product_source: n must be positive");
  double cells = 1.0;
  for (int i = 0; i < n; ++i) cells *= static_cast<double>(j.nx() * j.ny());
  if (cells > static_cast<double>(cell_budget)) {
    throw BudgetError("product_source: " + std::to_string(static_cast<long long>(cells)) +
                      " cells exceeds budget " + std::to_string(cell_budget));
  }
  JointPmf out = j;
  for (int i = 1; i < n; ++i) out = kron(out, j);
  return out;
}

/// Symmetric binary erasure source: X ~ Bern(1/2), Y = X w.p. 1-p, else e.
inline JointPmf sbes(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("sbes: erasure probability outside [0,1]");
  Matrix m(2, 3);
  m << (1.0 - p) / 2.0, 0.0, p / 2.0,  //
      0.0, (1.0 - p) / 2.0, p / 2.0;
  return validate(m, {"0", "1"}, {"0", "1", "e"});
}

}  // namespace cet
