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

// Common entropy G(X;Y) = min H(W) over X -> W -> Y.
//
// Closed forms cover binary 2x2 sources and the symmetric binary erasure
// source. g_general handles arbitrary small alphabets: it strips sufficient
// statistics, splits along the common part, and runs seeded restarts of
//   KL multiplicative factorization -> penalised entropy descent ->
//   exact vertex polishing -> support reduction -> same-support moves.
// Global optimality is not certified.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "cet/error.hpp"
#include "cet/factorization.hpp"
#include "cet/prob_core.hpp"
#include "cet/vertex_search.hpp"

namespace cet {

enum class Method { closed_form_2x2, closed_form_sbes, general, oracle };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::closed_form_2x2: return "closed_form_2x2";
    case Method::closed_form_sbes: return "closed_form_sbes";
    case Method::general: return "general";
    case Method::oracle: return "oracle";
  }
  return "unknown";
}

struct SolveConfig {
  int max_card = 0;  // 0: cardinality_bound of the alphabets
  int restarts = 64;
  std::uint64_t seed = 0;
  double feas_tol = 1e-10;
  std::vector<double> penalty_schedule{10.0, 1e2, 1e3, 1e4};
  int descent_iters = 500;
  int nmf_iters = 1000;
  std::optional<double> time_budget;  // seconds; restarts stop once exceeded
  int threads = 0;                    // 0: CET_THREADS or hardware concurrency
  /// Extra feasible certificates to polish and compete with the restarts.
  std::vector<MarkovFactorization> warm_starts;

  void check() const {
    if (restarts < 1) throw ValidationError("restarts must be >= 1");
    if (max_card < 0) throw ValidationError("max_card must be >= 1");
    if (!(feas_tol > 0.0)) throw ValidationError("feas_tol must be positive");
    if (descent_iters < 0 || nmf_iters < 0) throw ValidationError("iteration counts must be >= 0");
  }
};

struct SolveReport {
  double g_bits = 0.0;
  MarkovFactorization certificate;
  double mutual_info = 0.0;             // I(X;Y), a lower bound on G
  std::optional<double> closed_form;    // when a closed form applies
  std::vector<double> per_restart;      // H(W) per restart, NaN if infeasible
  Method method = Method::general;
  bool feasible = true;
  int card_limit = 0;
  VerifyReport verification;
  std::vector<std::string> warnings;
};

/// min(|X||Y|, 2^min(|X|,|Y|) - 1).
inline long long cardinality_bound(long long nx, long long ny) {
  if (nx < 1 || ny < 1) throw ValidationError("cardinality_bound: alphabet sizes must be >= 1");
  const long long m = std::min(nx, ny);
  const long long support_bound = m >= 62 ? std::numeric_limits<long long>::max() : (1LL << m) - 1;
  return std::min(nx * ny, support_bound);
}

namespace detail {

inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline int thread_count(const SolveConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("CET_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline SolveReport finish(const JointPmf& j, MarkovFactorization cert, Method method, double feas_tol) {
  SolveReport r;
  r.certificate = std::move(cert);
  r.g_bits = weight_entropy(r.certificate);
  r.mutual_info = mutual_information(j);
  r.method = method;
  r.verification = verify(r.certificate, j, feas_tol);
  r.feasible = r.verification.ok;
  return r;
}

inline MarkovFactorization constant_certificate(const JointPmf& j) {
  Vector pw(1);
  pw << 1.0;
  return {pw, Matrix(j.marginal_x()), Matrix(j.marginal_y())};
}

inline MarkovFactorization w_equals_x(const JointPmf& j) {
  return {j.marginal_x(), Matrix::Identity(j.nx(), j.nx()), j.y_given_x()};
}

inline MarkovFactorization w_equals_xy(const JointPmf& j) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> cells;
  for (Eigen::Index x = 0; x < j.nx(); ++x)
    for (Eigen::Index y = 0; y < j.ny(); ++y)
      if (j(x, y) > 0.0) cells.emplace_back(x, y);
  const auto k = static_cast<Eigen::Index>(cells.size());
  Vector pw(k);
  Matrix px = Matrix::Zero(j.nx(), k), py = Matrix::Zero(j.ny(), k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto [x, y] = cells[static_cast<std::size_t>(c)];
    pw(c) = j(x, y);
    px(x, c) = 1.0;
    py(y, c) = 1.0;
  }
  return {pw, px, py};
}

/// Certificate of the common part W = Z, with Z = f(X) = g(Y).
inline MarkovFactorization common_part_certificate(const JointPmf& j, const CommonPart& cp) {
  const auto k = static_cast<Eigen::Index>(cp.p_z.size());
  Vector pw(k);
  Matrix px = Matrix::Zero(j.nx(), k), py = Matrix::Zero(j.ny(), k);
  const Vector mx = j.marginal_x(), my = j.marginal_y();
  for (Eigen::Index z = 0; z < k; ++z) pw(z) = cp.p_z[static_cast<std::size_t>(z)];
  for (Eigen::Index x = 0; x < j.nx(); ++x) px(x, cp.z_of_x[static_cast<std::size_t>(x)]) = mx(x);
  for (Eigen::Index y = 0; y < j.ny(); ++y) py(y, cp.z_of_y[static_cast<std::size_t>(y)]) = my(y);
  for (Eigen::Index z = 0; z < k; ++z) {
    px.col(z) /= px.col(z).sum();
    py.col(z) /= py.col(z).sum();
  }
  return {pw, px, py};
}

/// One nonzero per row (Y = f(X)) or one per column (X = g(Y)).
inline bool is_deterministic(const JointPmf& j) {
  auto one_per = [](const Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      int nz = 0;
      for (Eigen::Index c = 0; c < m.cols(); ++c) nz += m(r, c) > 0.0;
      if (nz != 1) return false;
    }
    return true;
  };
  return one_per(j.matrix()) || one_per(j.matrix().transpose());
}

/// Lifts a certificate on collapsed x-classes back to the original symbols:
/// p(x|w) = p(class(x)|w) p(x) / p(class(x)).
inline Matrix expand_rows(const Matrix& collapsed_cond, const std::vector<int>& class_of_x, const Vector& px) {
  Vector class_mass = Vector::Zero(collapsed_cond.rows());
  for (std::size_t x = 0; x < class_of_x.size(); ++x) class_mass(class_of_x[x]) += px(static_cast<Eigen::Index>(x));
  Matrix out(static_cast<Eigen::Index>(class_of_x.size()), collapsed_cond.cols());
  for (std::size_t x = 0; x < class_of_x.size(); ++x) {
    const int c = class_of_x[x];
    out.row(static_cast<Eigen::Index>(x)) = collapsed_cond.row(c) * (px(static_cast<Eigen::Index>(x)) / class_mass(c));
  }
  return out;
}

/// p(w|x) for every x as a K x |X| matrix (columns sum to one).
inline Matrix w_given_x(const MarkovFactorization& f, const Vector& px) {
  Matrix q(f.card(), f.nx());
  for (Eigen::Index x = 0; x < f.nx(); ++x)
    for (Eigen::Index w = 0; w < f.card(); ++w) q(w, x) = f.p_w(w) * f.px_given_w()(x, w) / px(x);
  for (Eigen::Index x = 0; x < f.nx(); ++x) q.col(x) /= q.col(x).sum();
  return q;
}

inline void append_unique(std::vector<Vector>& cols, const Vector& c) {
  for (const auto& e : cols)
    if ((e - c).cwiseAbs().maxCoeff() <= 1e-12) return;
  cols.push_back(c);
}

/// Re-optimises p(w|x) with the candidate Y-conditionals fixed: the current
/// columns, the rows p(.|x), the simplex corners and `extra`.
inline MarkovFactorization x_step(const JointPmf& j, const MarkovFactorization& f,
                                  const std::vector<Vector>& extra, int card_limit) {
  const Vector px = j.marginal_x();
  const Matrix targets = j.y_given_x();
  std::vector<Vector> cols;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(f.card()));
  for (Eigen::Index w = 0; w < f.card(); ++w) {
    const Vector c = f.py_given_w().col(w);
    Eigen::Index found = -1;
    for (std::size_t e = 0; e < cols.size(); ++e)
      if ((cols[e] - c).cwiseAbs().maxCoeff() <= 1e-12) found = static_cast<Eigen::Index>(e);
    if (found < 0) {
      found = static_cast<Eigen::Index>(cols.size());
      cols.push_back(c);
    }
    slot[static_cast<std::size_t>(w)] = found;
  }
  for (Eigen::Index x = 0; x < j.nx(); ++x) append_unique(cols, targets.col(x));
  for (Eigen::Index y = 0; y < j.ny(); ++y) append_unique(cols, Vector::Unit(j.ny(), y));
  for (const auto& c : extra) append_unique(cols, c);

  Matrix m(j.ny(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) m.col(static_cast<Eigen::Index>(c)) = cols[c];

  const Matrix qf = w_given_x(f, px);
  Matrix q = Matrix::Zero(m.cols(), j.nx());
  for (Eigen::Index w = 0; w < f.card(); ++w) q.row(slot[static_cast<std::size_t>(w)]) += qf.row(w);

  VertexSearch search(m, targets, px, card_limit);
  search.run(q);

  const Vector pw = q * px;
  Matrix pxw(j.nx(), m.cols());
  for (Eigen::Index w = 0; w < m.cols(); ++w) {
    for (Eigen::Index x = 0; x < j.nx(); ++x) pxw(x, w) = pw(w) > 0.0 ? px(x) * q(w, x) / pw(w) : 1.0 / static_cast<double>(j.nx());
  }
  return {pw, pxw, m};
}

/// Alternates exact re-optimisation of p(w|x) and p(w|y). Never increases H(W).
inline MarkovFactorization alternate(const JointPmf& j, MarkovFactorization f, const std::vector<Vector>& extra_y,
                                     const std::vector<Vector>& extra_x, int card_limit, int max_rounds = 40) {
  const JointPmf jt = j.transposed();
  double h = weight_entropy(f);
  for (int round = 0; round < max_rounds; ++round) {
    MarkovFactorization g = x_step(j, f, extra_y, card_limit);
    g = x_step(jt, g.transposed(), extra_x, card_limit).transposed();
    const double hg = weight_entropy(g);
    const bool card_ok = card_limit <= 0 || g.card() <= card_limit;
    const bool was_ok = card_limit <= 0 || f.card() <= card_limit;
    if ((card_ok && !was_ok) || (card_ok && hg < h - 1e-13)) {
      f = std::move(g);
      h = hg;
    } else {
      break;
    }
  }
  return f;
}

/// Everything after the continuous stage: exact polish, support reduction
/// and same-support moves, repeated while H(W) keeps dropping.
inline MarkovFactorization polish(const JointPmf& j, MarkovFactorization f, const std::vector<Vector>& extra_y,
                                  const std::vector<Vector>& extra_x, int card_limit) {
  for (int pass = 0; pass < 4; ++pass) {
    const double before = weight_entropy(f);
    f = alternate(j, std::move(f), extra_y, extra_x, card_limit);
    f = reduce_support(f, j);
    f = same_support_improve(f, j);
    if (weight_entropy(f) > before - 1e-12 && pass > 0) break;
  }
  return f;
}

struct ContinuousFactors {
  Vector w;
  Matrix a;  // |X| x K
  Matrix b;  // |Y| x K
};

/// KL-divergence multiplicative updates on P ~ F G with K components.
inline ContinuousFactors kl_factorize(const Matrix& p, Eigen::Index k, int iters, double tol, std::mt19937_64& rng) {
  Matrix f(p.rows(), k), g(k, p.cols());
  for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = 0.05 + uniform01(rng);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = 0.05 + uniform01(rng);
  f /= f.sum();
  for (int it = 0; it < iters; ++it) {
    Matrix approx = f * g;
    if ((approx - p).cwiseAbs().maxCoeff() < tol) break;
    Matrix ratio = p.cwiseQuotient(approx.cwiseMax(1e-300));
    const Vector gsum = g.rowwise().sum();
    f = f.cwiseProduct(ratio * g.transpose());
    for (Eigen::Index c = 0; c < k; ++c) f.col(c) /= std::max(gsum(c), 1e-300);
    approx = f * g;
    ratio = p.cwiseQuotient(approx.cwiseMax(1e-300));
    const Vector fsum = f.colwise().sum().transpose();
    g = g.cwiseProduct(f.transpose() * ratio);
    for (Eigen::Index c = 0; c < k; ++c) g.row(c) /= std::max(fsum(c), 1e-300);
  }
  ContinuousFactors out;
  out.w.resize(k);
  out.a.resize(p.rows(), k);
  out.b.resize(p.cols(), k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const double fs = f.col(c).sum(), gs = g.row(c).sum();
    out.w(c) = fs * gs;
    out.a.col(c) = fs > 0.0 ? Vector(f.col(c) / fs) : Vector::Constant(p.rows(), 1.0 / static_cast<double>(p.rows()));
    out.b.col(c) = gs > 0.0 ? Vector(g.row(c).transpose() / gs) : Vector::Constant(p.cols(), 1.0 / static_cast<double>(p.cols()));
  }
  out.w /= std::max(out.w.sum(), 1e-300);
  return out;
}

inline Vector softmax(const Vector& z) {
  const Vector e = (z.array() - z.maxCoeff()).exp();
  return e / e.sum();
}

/// Minimises H(w) + lambda * ||A diag(w) B^T - P||_F^2 over softmax
/// parameters with Adam, for each lambda of the schedule in turn.
inline ContinuousFactors penalty_descent(const Matrix& p, ContinuousFactors init, const std::vector<double>& schedule,
                                         int iters) {
  const Eigen::Index k = init.w.size();
  const double floor = 1e-12;
  Vector th = init.w.array().max(floor).log().matrix();
  Matrix ph = init.a.array().max(floor).log().matrix();
  Matrix ps = init.b.array().max(floor).log().matrix();
  Vector m_th = Vector::Zero(k), v_th = Vector::Zero(k);
  Matrix m_ph = Matrix::Zero(ph.rows(), k), v_ph = m_ph;
  Matrix m_ps = Matrix::Zero(ps.rows(), k), v_ps = m_ps;
  const double lr = 0.05, b1 = 0.9, b2 = 0.999, eps = 1e-10;
  int t = 0;
  ContinuousFactors cur = init;
  auto adam = [&](auto& param, auto& m, auto& v, const auto& grad) {
    m = b1 * m + (1.0 - b1) * grad;
    v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(b1, t), c2 = 1.0 - std::pow(b2, t);
    param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  };
  for (double lambda : schedule) {
    for (int it = 0; it < iters; ++it) {
      ++t;
      cur.w = softmax(th);
      for (Eigen::Index c = 0; c < k; ++c) {
        cur.a.col(c) = softmax(ph.col(c));
        cur.b.col(c) = softmax(ps.col(c));
      }
      const Matrix resid = cur.a * cur.w.asDiagonal() * cur.b.transpose() - p;
      const Matrix g = 2.0 * lambda * resid;
      Vector gw(k);
      Matrix ga(cur.a.rows(), k), gb(cur.b.rows(), k);
      for (Eigen::Index c = 0; c < k; ++c) {
        const double wc = cur.w(c);
        const double dh = wc > 0.0 ? -(std::log2(wc) + 1.0 / std::log(2.0)) : 0.0;
        gw(c) = dh + cur.a.col(c).dot(g * cur.b.col(c));
        ga.col(c) = wc * (g * cur.b.col(c));
        gb.col(c) = wc * (g.transpose() * cur.a.col(c));
      }
      // Back through the softmaxes: dz = s * (g - s.g).
      Vector dth = cur.w.cwiseProduct((gw.array() - cur.w.dot(gw)).matrix());
      Matrix dph(ph.rows(), k), dps(ps.rows(), k);
      for (Eigen::Index c = 0; c < k; ++c) {
        dph.col(c) = cur.a.col(c).cwiseProduct((ga.col(c).array() - cur.a.col(c).dot(ga.col(c))).matrix());
        dps.col(c) = cur.b.col(c).cwiseProduct((gb.col(c).array() - cur.b.col(c).dot(gb.col(c))).matrix());
      }
      adam(th, m_th, v_th, dth);
      adam(ph, m_ph, v_ph, dph);
      adam(ps, m_ps, v_ps, dps);
    }
  }
  cur.w = softmax(th);
  for (Eigen::Index c = 0; c < k; ++c) {
    cur.a.col(c) = softmax(ph.col(c));
    cur.b.col(c) = softmax(ps.col(c));
  }
  return cur;
}

inline bool admissible(const MarkovFactorization& f, const JointPmf& j, int card_limit, double feas_tol) {
  return (card_limit <= 0 || f.card() <= card_limit) && verify(f, j, feas_tol).ok;
}

struct CoreResult {
  std::optional<MarkovFactorization> best;
  std::vector<double> per_restart;
};

/// Seeded multistart on a source with no collapsible symbols.
inline CoreResult multistart(const JointPmf& j, const SolveConfig& cfg, int card_limit) {
  CoreResult out;
  const int restarts = cfg.restarts;
  out.per_restart.assign(static_cast<std::size_t>(restarts), std::numeric_limits<double>::quiet_NaN());
  std::vector<std::optional<MarkovFactorization>> found(static_cast<std::size_t>(restarts));
  const Eigen::Index k = std::clamp<Eigen::Index>(card_limit, 1, 16);
  const auto start = std::chrono::steady_clock::now();
  const MarkovFactorization base = w_equals_x(j);

  auto run_one = [&](int r) {
    if (cfg.time_budget) {
      const std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
      if (el.count() > *cfg.time_budget && r > 0) return;
    }
    std::mt19937_64 rng(cfg.seed ^ static_cast<std::uint64_t>(r));
    ContinuousFactors c = kl_factorize(j.matrix(), k, cfg.nmf_iters, cfg.feas_tol, rng);
    c = penalty_descent(j.matrix(), c, cfg.penalty_schedule, cfg.descent_iters);
    std::vector<Vector> extra_y, extra_x;
    for (Eigen::Index w = 0; w < c.w.size(); ++w) {
      if (c.w(w) < 1e-6) continue;
      append_unique(extra_y, c.b.col(w));
      append_unique(extra_x, c.a.col(w));
    }
    MarkovFactorization f = polish(j, base, extra_y, extra_x, card_limit);
    if (admissible(f, j, card_limit, cfg.feas_tol)) {
      out.per_restart[static_cast<std::size_t>(r)] = weight_entropy(f);
      found[static_cast<std::size_t>(r)] = std::move(f);
    }
  };

  const int threads = std::min(thread_count(cfg), restarts);
  if (threads <= 1) {
    for (int r = 0; r < restarts; ++r) run_one(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int r = next++; r < restarts; r = next++) run_one(r);
      });
    }
    for (auto& th : pool) th.join();
  }
  // Lowest H wins; ties go to the lowest restart index.
  for (int r = 0; r < restarts; ++r) {
    auto& f = found[static_cast<std::size_t>(r)];
    if (f && (!out.best || weight_entropy(*f) < weight_entropy(*out.best) - 1e-12)) out.best = f;
  }
  return out;
}

inline std::optional<MarkovFactorization> pick(std::optional<MarkovFactorization> a, const MarkovFactorization& b,
                                               const JointPmf& j, int card_limit, double feas_tol) {
  if (!admissible(b, j, card_limit, feas_tol)) return a;
  if (!a || weight_entropy(b) < weight_entropy(*a) - 1e-12) return b;
  return a;
}

struct Solved {
  std::optional<MarkovFactorization> cert;
  std::vector<double> per_restart;
};

inline Solved solve_impl(const JointPmf& j, const SolveConfig& cfg, int card_limit, bool decompose) {
  Solved s;
  if (j.nx() == 1 || j.ny() == 1 || is_independent(j, 1e-15)) {
    s.cert = constant_certificate(j);
    return s;
  }
  if (is_deterministic(j)) {
    MarkovFactorization c = common_part_certificate(j, common_part(j));
    if (card_limit <= 0 || c.card() <= card_limit) s.cert = std::move(c);
    return s;
  }

  // Sufficient statistics on both sides.
  const Collapse cx = sufficient_statistic_collapse(j);
  const Collapse cy = sufficient_statistic_collapse(cx.collapsed.transposed());
  const JointPmf reduced = cy.collapsed.transposed();
  if (reduced.nx() < j.nx() || reduced.ny() < j.ny()) {
    Solved inner = solve_impl(reduced, cfg, card_limit, decompose);
    s.per_restart = std::move(inner.per_restart);
    if (inner.cert) {
      const Matrix px = expand_rows(inner.cert->px_given_w(), cx.class_of_x, j.marginal_x());
      const Matrix py = expand_rows(inner.cert->py_given_w(), cy.class_of_x, j.marginal_y());
      s.cert = MarkovFactorization(inner.cert->p_w(), px, py);
    }
    return s;
  }

  if (decompose) {
    const CommonPart cp = common_part(j);
    if (cp.p_z.size() > 1) {
      std::vector<double> pw;
      std::vector<Vector> xs, ys;
      for (int z = 0; z < static_cast<int>(cp.p_z.size()); ++z) {
        const Block b = component_block(j, cp.z_of_x, cp.z_of_y, z);
        Solved inner = solve_impl(b.pmf, cfg, card_limit, true);
        if (!inner.cert) return s;
        s.per_restart.insert(s.per_restart.end(), inner.per_restart.begin(), inner.per_restart.end());
        const auto& c = *inner.cert;
        for (Eigen::Index w = 0; w < c.card(); ++w) {
          pw.push_back(cp.p_z[static_cast<std::size_t>(z)] * c.p_w(w));
          Vector x = Vector::Zero(j.nx()), y = Vector::Zero(j.ny());
          for (std::size_t a = 0; a < b.xs.size(); ++a) x(b.xs[a]) = c.px_given_w()(static_cast<Eigen::Index>(a), w);
          for (std::size_t a = 0; a < b.ys.size(); ++a) y(b.ys[a]) = c.py_given_w()(static_cast<Eigen::Index>(a), w);
          xs.push_back(x);
          ys.push_back(y);
        }
      }
      const auto k = static_cast<Eigen::Index>(pw.size());
      Matrix px(j.nx(), k), py(j.ny(), k);
      for (Eigen::Index w = 0; w < k; ++w) {
        px.col(w) = xs[static_cast<std::size_t>(w)];
        py.col(w) = ys[static_cast<std::size_t>(w)];
      }
      s.cert = MarkovFactorization(Eigen::Map<Vector>(pw.data(), k), px, py);
      return s;
    }
  }

  CoreResult core = multistart(j, cfg, card_limit);
  s.per_restart = std::move(core.per_restart);
  s.cert = core.best;
  for (const auto& baseline : {w_equals_x(j), w_equals_x(j.transposed()).transposed(), w_equals_xy(j)}) {
    s.cert = pick(s.cert, same_support_improve(baseline, j), j, card_limit, cfg.feas_tol);
  }
  return s;
}

}  // namespace detail

/// Closed form for |X| = |Y| = 2. Two candidate structures: keep the
/// conditional p(.|x) of one x as a component and pair it with the simplex
/// corner the other conditional lies towards. p_W is computed as p_{W|X} p_X
/// and each candidate is verified; the lower-entropy valid one is returned.
inline SolveReport g_closed_form_2x2(const JointPmf& j) {
  if (j.nx() != 2 || j.ny() != 2) throw ValidationError("g_closed_form_2x2: source is not 2x2");
  if (is_independent(j, 1e-15)) {
    SolveReport r = detail::finish(j, detail::constant_certificate(j), Method::closed_form_2x2, tol::kClosedForm);
    r.closed_form = r.g_bits;
    return r;
  }
  const Vector px = j.marginal_x();
  const Matrix cond = j.y_given_x();
  std::optional<MarkovFactorization> best;
  for (Eigen::Index keep = 0; keep < 2; ++keep) {
    const Eigen::Index other = 1 - keep;
    const double t_keep = cond(0, keep), t_other = cond(0, other);
    if (t_keep == t_other) continue;
    // Corner towards which the other conditional lies, as P(Y = y0).
    const double t_corner = t_other > t_keep ? 1.0 : 0.0;
    const double lambda = (t_corner - t_other) / (t_corner - t_keep);
    Matrix w_given_x = Matrix::Zero(2, 2);  // rows: kept component, corner
    w_given_x(0, keep) = 1.0;
    w_given_x(0, other) = lambda;
    w_given_x(1, other) = 1.0 - lambda;
    const Vector pw = w_given_x * px;
    Matrix pxw(2, 2), pyw(2, 2);
    for (Eigen::Index w = 0; w < 2; ++w)
      for (Eigen::Index x = 0; x < 2; ++x) pxw(x, w) = pw(w) > 0.0 ? w_given_x(w, x) * px(x) / pw(w) : 0.5;
    pyw.col(0) = cond.col(keep);
    pyw.col(1) << t_corner, 1.0 - t_corner;
    MarkovFactorization cand(pw, pxw, pyw);
    if (!verify(cand, j, tol::kClosedForm).ok) continue;
    if (!best || weight_entropy(cand) < weight_entropy(*best)) best = cand;
  }
  if (!best) throw InfeasibleError("g_closed_form_2x2: no candidate verified");
  SolveReport r = detail::finish(j, *best, Method::closed_form_2x2, tol::kClosedForm);
  r.closed_form = r.g_bits;
  return r;
}

/// G for the symmetric binary erasure source: the minimum of
/// H(1/2 - c1, 1/2 - c2, c1 + c2) over the four corners of [0, p/2]^2,
/// which equals min{1, H(p) + 1 - p}.
inline SolveReport g_closed_form_sbes(double p) {
  const JointPmf j = sbes(p);
  const std::vector<std::pair<double, double>> corners{{0.0, 0.0}, {p / 2, p / 2}, {0.0, p / 2}, {p / 2, 0.0}};
  std::optional<MarkovFactorization> best;
  for (const auto& [c1, c2] : corners) {
    std::vector<double> pw;
    std::vector<Vector> xs, ys;
    // Y order: 0, 1, e
    if (0.5 - c1 > 0.0) {
      pw.push_back(0.5 - c1);
      xs.push_back(Vector::Unit(2, 0));
      ys.push_back((Vector(3) << (1.0 - p) / 2, 0.0, p / 2 - c1).finished() / (0.5 - c1));
    }
    if (0.5 - c2 > 0.0) {
      pw.push_back(0.5 - c2);
      xs.push_back(Vector::Unit(2, 1));
      ys.push_back((Vector(3) << 0.0, (1.0 - p) / 2, p / 2 - c2).finished() / (0.5 - c2));
    }
    if (c1 + c2 > 0.0) {
      pw.push_back(c1 + c2);
      xs.push_back((Vector(2) << c1, c2).finished() / (c1 + c2));
      ys.push_back(Vector::Unit(3, 2));
    }
    // Restrict to the Y symbols the validated source keeps.
    std::vector<Eigen::Index> keep_y;
    const std::vector<std::string> all_y{"0", "1", "e"};
    for (Eigen::Index y = 0; y < 3; ++y)
      if (std::find(j.y_labels().begin(), j.y_labels().end(), all_y[static_cast<std::size_t>(y)]) != j.y_labels().end())
        keep_y.push_back(y);
    const auto k = static_cast<Eigen::Index>(pw.size());
    Matrix px(2, k), py(static_cast<Eigen::Index>(keep_y.size()), k);
    for (Eigen::Index w = 0; w < k; ++w) {
      px.col(w) = xs[static_cast<std::size_t>(w)];
      for (std::size_t a = 0; a < keep_y.size(); ++a) py(static_cast<Eigen::Index>(a), w) = ys[static_cast<std::size_t>(w)](keep_y[a]);
    }
    MarkovFactorization cand(Eigen::Map<Vector>(pw.data(), k), px, py);
    if (!best || weight_entropy(cand) < weight_entropy(*best) - 1e-15) best = cand;
  }
  SolveReport r = detail::finish(j, *best, Method::closed_form_sbes, tol::kClosedForm);
  r.closed_form = std::min(1.0, binary_entropy(p) + 1.0 - p);
  return r;
}

/// General multistart solver. Returned certificates verify at cfg.feas_tol,
/// respect the cardinality limit and have pairwise-distinct Y supports.
/// Throws InfeasibleError when nothing satisfies the limit.
inline SolveReport g_general(const JointPmf& j, const SolveConfig& cfg = {}) {
  cfg.check();
  if (static_cast<double>(j.nx()) * static_cast<double>(j.ny()) > static_cast<double>(kDefaultCellBudget)) {
    throw BudgetError("g_general: source exceeds 4096 cells");
  }
  const long long bound = cardinality_bound(j.nx(), j.ny());
  const int card_limit = cfg.max_card > 0 ? cfg.max_card : static_cast<int>(std::min<long long>(bound, 1 << 20));
  const bool decompose = cfg.max_card == 0 || cfg.max_card >= bound;

  detail::Solved s = detail::solve_impl(j, cfg, card_limit, decompose);
  for (const auto& ws : cfg.warm_starts) {
    if (ws.nx() != j.nx() || ws.ny() != j.ny()) throw ValidationError("g_general: warm start dimension mismatch");
    if (!verify(ws, j, cfg.feas_tol).ok) continue;
    MarkovFactorization f = detail::polish(j, ws, {}, {}, card_limit);
    s.cert = detail::pick(s.cert, f, j, card_limit, cfg.feas_tol);
  }
  if (!s.cert) {
    throw InfeasibleError("g_general: no factorization with |W| <= " + std::to_string(card_limit) + " found");
  }
  MarkovFactorization cert = same_support_improve(reduce_support(*s.cert, j), j);
  if (!detail::admissible(cert, j, card_limit, cfg.feas_tol)) cert = *s.cert;
  SolveReport r = detail::finish(j, cert, Method::general, cfg.feas_tol);
  r.per_restart = std::move(s.per_restart);
  r.card_limit = card_limit;
  return r;
}

/// Closed form when one applies (2x2), otherwise g_general.
inline SolveReport g_best(const JointPmf& j, const SolveConfig& cfg = {}) {
  if (j.nx() == 2 && j.ny() == 2 && (cfg.max_card == 0 || cfg.max_card >= 2) && cfg.warm_starts.empty()) {
    return g_closed_form_2x2(j);
  }
  return g_general(j, cfg);
}

/// restriction_check wired to the general solver.
inline RestrictionReport restriction_check(const MarkovFactorization& f, const JointPmf& target,
                                           const std::vector<Eigen::Index>& subset, const SolveConfig& cfg = {},
                                           double tolerance = 1e-6) {
  return restriction_check(f, target, subset, [&](const JointPmf& p) { return g_general(p, cfg).g_bits; }, tolerance);
}

}  // namespace cet
