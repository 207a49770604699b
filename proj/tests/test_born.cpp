// Copyright 2026 The psiont Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "psiont/born.hpp"
#include "psiont/random.hpp"
#include "psiont/states.hpp"

namespace {

using namespace psiont;

TEST(Born, QubitMaximallyEntangledIsUniform) {
  const auto t = born_joint(phi_state(2), alice_family(1, 2, 0), bob_family(1, 2, 1));
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) EXPECT_NEAR(t(x, y), 0.25, 1e-12);
  }
  EXPECT_NEAR(t.row(2).sum() + t.col(2).sum(), 0.0, 1e-15);
}

TEST(Born, MatchesTensorProductOracle) {
  Rng rng(21);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 1 + trial % 3;
    const int d = 2 + trial % 3;
    const ComplexVector state = random_unit_vector((d + 1) * (d + 1), rng);
    for (int a : alice_settings(n)) {
      for (int b : bob_settings(n)) {
        const auto fast = born_joint(state, alice_family(n, d, a), bob_family(n, d, b));
        const auto slow = oracle::born_table(state, n, d, a, b);
        EXPECT_LT((fast - slow).cwiseAbs().maxCoeff(), 1e-12);
      }
    }
  }
}

TEST(Born, GeneralPathAgreesWithRankOnePath) {
  Rng rng(4);
  const int d = 3;
  const ComplexVector state = random_unit_vector(16, rng);
  auto fa = alice_family(2, d, 2);
  auto fb = bob_family(2, d, 3);
  const auto fast = born_joint(state, fa, fb);
  fa.directions.clear();
  fb.directions.clear();
  const auto slow = born_joint(state, fa, fb);
  EXPECT_LT((fast - slow).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Born, TablesAreDistributions) {
  Rng rng(9);
  const int n = 3, d = 4;
  const ComplexVector state = random_unit_vector(25, rng);
  const auto p = assemble_joint_conditional(state, n, d);
  EXPECT_EQ(p.tables().size(), static_cast<std::size_t>(n * n));
  EXPECT_LT(p.normalization_defect(), 1e-12);
  for (const auto& [key, t] : p.tables()) EXPECT_GE(t.minCoeff(), 0.0);
}

TEST(Born, NoSignalling) {
  Rng rng(13);
  const int n = 3, d = 3;
  const ComplexVector state = random_unit_vector(16, rng);
  const auto p = assemble_joint_conditional(state, n, d);
  for (int a : alice_settings(n)) {
    const auto ref = row_marginal(p.at(a, 1));
    for (int b : bob_settings(n)) {
      const auto m = row_marginal(p.at(a, b));
      for (int x = 0; x <= d; ++x) EXPECT_NEAR(m[x], ref[x], 1e-12);
    }
  }
}

TEST(Born, ChainedAssemblyHoldsOnlyChainPairs) {
  const auto p = assemble_joint_conditional(phi_state(3), 3, 3, Assembly::kChainedPairs);
  EXPECT_EQ(p.tables().size(), 6u);
  EXPECT_TRUE(p.has(0, 5));
  EXPECT_FALSE(p.has(0, 3));
  EXPECT_EQ(chained_pairs(3).front(), (SettingPair{0, 5}));
}

TEST(Born, ChainedPairsForSingleSetting) {
  const auto pairs = chained_pairs(1);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0], (SettingPair{0, 1}));
  EXPECT_EQ(pairs[1], (SettingPair{0, 1}));
}

TEST(Born, RejectsBadState) {
  const auto fa = alice_family(1, 2, 0);
  const auto fb = bob_family(1, 2, 1);
  EXPECT_THROW(born_joint(ComplexVector::Ones(8), fa, fb), DimensionError);
  EXPECT_THROW(born_joint(ComplexVector::Ones(9), fa, fb), std::invalid_argument);
  ComplexVector bad = phi_state(2);
  bad(0) = std::nan("");
  EXPECT_THROW(born_joint(bad, fa, fb), std::invalid_argument);
}

TEST(Born, JointConditionalValidatesKeys) {
  JointConditional p(2, 2);
  EXPECT_THROW(p.set(1, 1, OutcomeTable::Zero(3, 3)), std::invalid_argument);
  EXPECT_THROW(p.set(0, 1, OutcomeTable::Zero(2, 2)), DimensionError);
  EXPECT_THROW(p.at(0, 1), std::out_of_range);
}

TEST(Born, MixIsConvexCombination) {
  const auto p = assemble_joint_conditional(phi_state(2), 2, 2);
  const auto q = assemble_joint_conditional(phi_prime_state({2, 1, 0.5}), 2, 2);
  const auto m = mix({0.25, 0.75}, {p, q});
  for (const auto& [key, t] : m.tables()) {
    EXPECT_LT((t - (0.25 * p.at(key.first, key.second) + 0.75 * q.at(key.first, key.second))).cwiseAbs().maxCoeff(),
              1e-15);
  }
}

}  // namespace
