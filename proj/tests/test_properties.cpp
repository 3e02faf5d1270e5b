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
#include <gtest/gtest.h>

#include "properties.hpp"

namespace cet::testing {
namespace {

constexpr int kInstances = 40;

void expect_ok(const PropertyResult& r) {
  EXPECT_EQ(r.instances, kInstances);
  EXPECT_EQ(r.failures, 0) << "worst " << r.worst << " first " << r.first_failure;
}

TEST(Properties, ZeroIffIndependent) { expect_ok(zero_iff_independent(kInstances, 101)); }
TEST(Properties, DataProcessing) { expect_ok(data_processing(kInstances, 102)); }
TEST(Properties, Subadditivity) { expect_ok(subadditivity(kInstances, 103)); }
TEST(Properties, DistinctSupports) { expect_ok(distinct_supports(kInstances, 104)); }
TEST(Properties, CommonPartIdentity) { expect_ok(common_part_identity(kInstances, 105)); }
TEST(Properties, ConditioningBound) { expect_ok(conditioning_bound(kInstances, 106)); }
TEST(Properties, SupportReduction) { expect_ok(support_reduction(kInstances, 107)); }

TEST(Properties, ValueRange) {
  Gen g(108);
  for (int i = 0; i < kInstances; ++i) {
    const JointPmf j = validate(g.sparse(g.integer(2, 4), g.integer(2, 4), 0.3), true);
    const double v = g_best(j, property_config(static_cast<std::uint64_t>(i), 8)).g_bits;
    EXPECT_GE(v, 0.0);
    EXPECT_GE(v, mutual_information(j) - 1e-9);
    EXPECT_LE(v, std::min(entropy(j.marginal_x()), entropy(j.marginal_y())) + 1e-9);
  }
}

TEST(Properties, SymmetricInXAndY) {
  Gen g(109);
  for (int i = 0; i < 10; ++i) {
    const JointPmf j = validate(g.positive(2, 3), true);
    const SolveConfig cfg = property_config(static_cast<std::uint64_t>(i));
    EXPECT_NEAR(g_general(j, cfg).g_bits, g_general(j.transposed(), cfg).g_bits, 1e-6);
  }
}

}  // namespace
}  // namespace cet::testing
