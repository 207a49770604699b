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

#include <numbers>

#include "oracle.hpp"
#include "psiont/chained.hpp"
#include "psiont/random.hpp"

namespace {

using namespace psiont;

struct Frozen {
  int n;
  int d;
  double value;
};

// Computed once with an independent dense-matrix implementation.
constexpr Frozen kFrozen[] = {
    {1, 2, 1.0},
    {2, 3, 0.6826215043832171},
    {3, 4, 0.4972986992830266},
    {4, 5, 0.3872301094286842},
    {2, 2, 0.5857864376269091},
    {8, 3, 0.18198915898064905},
    {5, 7, 0.31818926894939403},
};

TEST(Chained, FrozenValues) {
  for (const auto& f : kFrozen) {
    const auto r = evaluate_chained(f.n, f.d);
    EXPECT_NEAR(r.i_value, f.value, 1e-10) << f.n << "," << f.d;
  }
}

TEST(Chained, SingleSettingQubit) {
  const auto r = evaluate_chained(1, 2);
  EXPECT_NEAR(r.i_value, 1.0, 1e-12);
  EXPECT_NEAR(r.bound, 1.6449340668482264, 1e-12);
  EXPECT_GT(r.margin(), 0.0);
}

TEST(Chained, ClosedFormSample) {
  EXPECT_NEAR(i_nd_closed_form(2, 3), 0.6826215043832202, 1e-12);
  EXPECT_NEAR(i_nd_closed_form(1, 2), 1.0, 1e-14);
}

TEST(Chained, MatchesOracleSummation) {
  for (int n = 1; n <= 3; ++n) {
    for (int d = 2; d <= 4; ++d) {
      EXPECT_NEAR(evaluate_chained(n, d).i_value, oracle::chained_value(phi_state(d), n, d), 1e-11);
    }
  }
}

TEST(Chained, OracleOnRandomStates) {
  Rng rng(17);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 1 + trial % 3, d = 2 + trial % 2;
    const ComplexVector s = random_unit_vector((d + 1) * (d + 1), rng);
    EXPECT_NEAR(i_nd(assemble_joint_conditional(s, n, d), n, d), oracle::chained_value(s, n, d), 1e-11);
  }
}

TEST(Chained, ClosedFormAndBoundOnGrid) {
  for (int n = 1; n <= 12; ++n) {
    for (int d = 2; d <= 8; ++d) {
      const auto r = evaluate_chained(n, d);
      EXPECT_NEAR(r.i_value, r.closed_form, 1e-9);
      EXPECT_LE(r.i_value, r.bound + 1e-12);
    }
  }
}

TEST(Chained, DecreasesWithN) {
  for (int d = 2; d <= 5; ++d) {
    double prev = evaluate_chained(1, d).i_value;
    for (int n = 2; n <= 20; ++n) {
      const double v = evaluate_chained(n, d).i_value;
      EXPECT_LT(v, prev);
      prev = v;
    }
  }
}

TEST(Chained, LinearUnderMixtures) {
  Rng rng(2);
  const int n = 2, d = 3;
  const auto p = assemble_joint_conditional(random_unit_vector(16, rng), n, d);
  const auto q = assemble_joint_conditional(random_unit_vector(16, rng), n, d);
  const double w = 0.3;
  EXPECT_NEAR(i_nd(mix({w, 1 - w}, {p, q}), n, d), w * i_nd(p, n, d) + (1 - w) * i_nd(q, n, d), 1e-12);
}

TEST(Chained, NonNegativeOnNoSignallingTables) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 4, d = 2 + trial % 3;
    const auto p = assemble_joint_conditional(random_unit_vector((d + 1) * (d + 1), rng), n, d);
    EXPECT_GE(i_nd(p, n, d), -1e-12);
  }
}

TEST(Chained, ExtraLevelIsIgnored) {
  // |dd> only fires the extra outcome, so every sum misses it.
  const int n = 2, d = 2;
  const auto p = assemble_joint_conditional(basis_vector(9, 8), n, d);
  EXPECT_NEAR(i_nd(p, n, d), 2.0 * n, 1e-12);
}

TEST(Chained, InputValidation) {
  const auto p = assemble_joint_conditional(phi_state(2), 2, 2);
  EXPECT_THROW(i_nd(p, 3, 2), std::invalid_argument);
  EXPECT_THROW(i_nd(p, 2, 4), DimensionError);
  EXPECT_THROW(i_nd_closed_form(0, 2), std::invalid_argument);
  EXPECT_THROW(quantum_bound(0), std::invalid_argument);
  JointConditional partial(2, 2);
  EXPECT_THROW(i_nd(partial, 2, 2), std::out_of_range);
}

}  // namespace
