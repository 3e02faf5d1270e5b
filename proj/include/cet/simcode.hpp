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

// Simulation codes: a Huffman code for the common variable W plus the two
// stochastic decoders p(x|w), p(y|w) of a factorization.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "cet/error.hpp"
#include "cet/factorization.hpp"
#include "cet/prob_core.hpp"
#include "cet/solver.hpp"

namespace cet {

struct PrefixCode {
  std::vector<std::string> codewords;  // indexed by W symbol
  double expected_length = 0.0;

  [[nodiscard]] double kraft_sum() const {
    double s = 0.0;
    for (const auto& c : codewords) s += std::ldexp(1.0, -static_cast<int>(c.size()));
    return s;
  }

  [[nodiscard]] bool is_prefix_free() const {
    for (std::size_t a = 0; a < codewords.size(); ++a)
      for (std::size_t b = 0; b < codewords.size(); ++b)
        if (a != b && codewords[b].compare(0, codewords[a].size(), codewords[a]) == 0) return false;
    return true;
  }
};

/// Huffman code. Ties between equal weights go to the lower node id (leaves
/// first, merged nodes numbered in creation order); the first node popped
/// takes bit 0. A single symbol gets the empty codeword.
inline PrefixCode build_prefix_code(const Dist& p_w) {
  const std::size_t k = p_w.size();
  PrefixCode code;
  code.codewords.assign(k, "");
  if (k <= 1) return code;

  struct Node {
    double weight;
    std::size_t id;
  };
  auto cmp = [](const Node& a, const Node& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.id > b.id;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);
  std::vector<std::pair<std::size_t, std::size_t>> children;  // for ids >= k
  for (std::size_t i = 0; i < k; ++i) heap.push({p_w[i], i});
  while (heap.size() > 1) {
    const Node a = heap.top();
    heap.pop();
    const Node b = heap.top();
    heap.pop();
    children.emplace_back(a.id, b.id);
    heap.push({a.weight + b.weight, k + children.size() - 1});
  }
  std::vector<std::pair<std::size_t, std::string>> stack{{heap.top().id, ""}};
  while (!stack.empty()) {
    auto [id, prefix] = stack.back();
    stack.pop_back();
    if (id < k) {
      code.codewords[id] = prefix;
      continue;
    }
    const auto [left, right] = children[id - k];
    stack.emplace_back(right, prefix + "1");
    stack.emplace_back(left, prefix + "0");
  }
  for (std::size_t i = 0; i < k; ++i) code.expected_length += p_w[i] * static_cast<double>(code.codewords[i].size());
  return code;
}

inline PrefixCode build_prefix_code(const Vector& p_w) {
  return build_prefix_code(Dist::normalized(std::vector<double>(p_w.data(), p_w.data() + p_w.size())));
}

struct SimulationCode {
  MarkovFactorization factorization;
  PrefixCode code;
  std::vector<std::string> x_labels;
  std::vector<std::string> y_labels;
};

struct SimulationBuild {
  SimulationCode code;
  SolveReport report;
  double rate_lower = 0.0;  // H(W) of the certificate
  double rate_upper = 0.0;  // expected codeword length
};

/// Solves for W (closed form when one applies) and attaches a Huffman code.
inline SimulationBuild build_simulation_code(const JointPmf& j, const SolveConfig& cfg = {}) {
  SimulationBuild b;
  b.report = g_best(j, cfg);
  b.code.factorization = b.report.certificate;
  b.code.code = build_prefix_code(b.report.certificate.p_w());
  b.code.x_labels = j.x_labels();
  b.code.y_labels = j.y_labels();
  b.rate_lower = b.report.g_bits;
  b.rate_upper = b.code.code.expected_length;
  return b;
}

struct GenerationReport {
  double tv = 0.0;
  double tolerance = 1e-10;
  bool ok = false;
};

inline GenerationReport exact_generation_check(const SimulationCode& s, const JointPmf& target,
                                               double tolerance = 1e-10) {
  if (s.factorization.nx() != target.nx() || s.factorization.ny() != target.ny()) {
    throw ValidationError("exact_generation_check: alphabet mismatch");
  }
  if ((!s.x_labels.empty() && s.x_labels != target.x_labels()) ||
      (!s.y_labels.empty() && s.y_labels != target.y_labels())) {
    throw ValidationError("exact_generation_check: label mismatch");
  }
  GenerationReport r;
  r.tv = total_variation(induced_matrix(s.factorization), target.matrix());
  r.tolerance = tolerance;
  r.ok = r.tv <= tolerance;
  return r;
}

// ---------------------------------------------------------------------------
// Sampling

inline constexpr const char* kSamplerName = "cet-splitmix64-v1";

/// SplitMix64 output for counter `index` under `seed`: the state after
/// index + 1 increments of the golden gamma, then the standard finalizer.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Uniform double in [0,1) from the top 53 bits.
inline double uniform_at(std::uint64_t seed, std::uint64_t index) {
  return static_cast<double>(splitmix64_at(seed, index) >> 11) * 0x1.0p-53;
}

namespace detail {

/// Inverse CDF; the last positive entry absorbs rounding at the top.
template <typename Weights>
Eigen::Index inverse_cdf(const Weights& w, double u) {
  double acc = 0.0;
  Eigen::Index last = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) <= 0.0) continue;
    last = i;
    acc += w(i);
    if (u < acc) return i;
  }
  return last;
}

}  // namespace detail

struct SampleReport {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> samples;
  double empirical_tv = 0.0;
  double mean_code_length = 0.0;
};

/// Sample k uses draws 3k, 3k+1, 3k+2 for W, X and Y.
inline SampleReport sample_pairs(const SimulationCode& s, std::uint64_t n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("sample_pairs: n must be >= 1");
  const auto& f = s.factorization;
  SampleReport r;
  r.samples.reserve(n);
  Matrix counts = Matrix::Zero(f.nx(), f.ny());
  double total_len = 0.0;
  for (std::uint64_t k = 0; k < n; ++k) {
    const Eigen::Index w = detail::inverse_cdf(f.p_w(), uniform_at(seed, 3 * k));
    const Eigen::Index x = detail::inverse_cdf(f.px_given_w().col(w), uniform_at(seed, 3 * k + 1));
    const Eigen::Index y = detail::inverse_cdf(f.py_given_w().col(w), uniform_at(seed, 3 * k + 2));
    r.samples.emplace_back(x, y);
    counts(x, y) += 1.0;
    if (static_cast<std::size_t>(w) < s.code.codewords.size())
      total_len += static_cast<double>(s.code.codewords[static_cast<std::size_t>(w)].size());
  }
  counts /= static_cast<double>(n);
  r.empirical_tv = total_variation(counts, induced_matrix(f));
  r.mean_code_length = total_len / static_cast<double>(n);
  return r;
}

}  // namespace cet
