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

#include "fixtures.hpp"
#include "psiont/ontology.hpp"

namespace {

using namespace psiont;

TEST(Ontology, PsiOnticModelPassesChecks) {
  const auto def = psi_ontic_model(fixtures::three_state_catalog(), 4);
  const auto checks = check_model_definition(def, 4);
  EXPECT_TRUE(checks.violations(1e-9).empty());
  EXPECT_LT(checks.born, 1e-12);
}

TEST(Ontology, PsiOnticRecoversF) {
  const auto def = psi_ontic_model(fixtures::three_state_catalog(), 16);
  const auto reports = run_all_pairs(def, 16);
  ASSERT_EQ(reports.size(), 6u);
  for (const auto& r : reports) {
    EXPECT_EQ(r.measure_on_psi, 1.0);
    EXPECT_EQ(r.measure_on_psi_prime, 0.0);
    EXPECT_LE(r.lemma3_lhs, r.lemma3_rhs + 1e-9);
    EXPECT_LE(r.i_value, r.quantum_bound + 1e-12);
    EXPECT_LE(r.eq9_margin, 1e-9);
    EXPECT_GE(r.measure_on_psi, r.measure_floor);
  }
  const auto f = build_psi_function(def, reports);
  EXPECT_TRUE(f.full_measure());
  EXPECT_TRUE(f.unmapped.empty());
  for (int p = 0; p < 3; ++p) {
    ASSERT_EQ(f.inverse_sets[p].size(), 1u);
    EXPECT_EQ(f.inverse_sets[p][0], "psi" + std::to_string(p));
    for (int q = 0; q < 3; ++q) EXPECT_EQ(f.measure[p][q], p == q ? 1.0 : 0.0);
  }
}

TEST(Ontology, PairSetupUsesOverlapPhase) {
  ComplexVector a = basis_vector(2, 0);
  ComplexVector b(2);
  b << std::polar(0.6, 0.4), 0.8;
  const auto s = prepare_pair(a, b);
  EXPECT_NEAR(s.alpha, 0.6, 1e-12);
  EXPECT_NEAR(s.gamma, 0.4, 1e-12);
  EXPECT_LT((s.isometry * a - phi_state(s.params.d)).norm(), 1e-10);
  EXPECT_LT((s.isometry * b - std::polar(1.0, 0.4) * phi_prime_state(s.params)).norm(), 1e-10);
}

TEST(Ontology, PairSetupRaisesDimensionForLargeCatalog) {
  // C^10 does not fit into C^3 ⊗ C^3.
  const auto s = prepare_pair(basis_vector(10, 0), basis_vector(10, 1));
  EXPECT_GE((s.params.d + 1) * (s.params.d + 1), 10);
  EXPECT_LT(isometry_defect(s.isometry), 1e-12);
}

TEST(Ontology, PairSetupRejectsEqualStates) {
  EXPECT_THROW(prepare_pair(basis_vector(2, 0), basis_vector(2, 0)), std::invalid_argument);
  EXPECT_THROW(prepare_pair(basis_vector(2, 0), Complex(0, 1) * basis_vector(2, 0)), std::invalid_argument);
}

TEST(Ontology, ConstantLambdaFailsCompletenessOnly) {
  const auto def = constant_lambda_model(fixtures::three_state_catalog(), 3);
  const auto v = check_model_definition(def, 3).violations(1e-9);
  EXPECT_EQ(v, std::vector<std::string>{kCompletenessCondition});
  try {
    run_uniqueness_pipeline(def, 0, 1, 3);
    FAIL() << "expected a violation";
  } catch (const ConditionViolation& e) {
    EXPECT_EQ(e.conditions(), std::vector<std::string>{kCompletenessCondition});
  }
}

TEST(Ontology, CorrelatedLambdaFailsFreeChoiceOnly) {
  const auto def = lambda_a_correlated_model(fixtures::qubit_pair(), 2);
  const auto checks = check_model_definition(def, 2);
  EXPECT_EQ(checks.violations(1e-9), std::vector<std::string>{kFreeChoiceCondition});
  EXPECT_GT(checks.free_choice_product, 0.1);
  EXPECT_THROW(run_uniqueness_pipeline(def, 0, 1, 2), ConditionViolation);
}

TEST(Ontology, MixedPriorFailsBornRule) {
  auto def = psi_ontic_model(fixtures::qubit_pair(), 2);
  def.prior[0] = {0.9, 0.1};
  const auto v = check_model_definition(def, 2).violations(1e-9);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front(), kBornCondition);
}

TEST(Ontology, PerturbedPriorDegradesContinuously) {
  const auto catalog = fixtures::three_state_catalog();
  double prev_measure = 1.0;
  for (double eps : {1e-6, 1e-4, 1e-3, 1e-2}) {
    auto def = psi_ontic_model(catalog, 8);
    def.prior[0] = {1.0 - eps, eps, 0.0};
    const auto r = run_uniqueness_pipeline(def, 0, 1, 8, 4.0 * eps);
    EXPECT_NEAR(r.measure_on_psi, 1.0 - eps, 1e-12) << eps;
    EXPECT_LE(r.measure_on_psi, prev_measure);
    EXPECT_LE(r.checks.born, 2.0 * eps);
    prev_measure = r.measure_on_psi;
  }
}

TEST(Ontology, ExplicitTablesForOnePair) {
  const auto catalog = fixtures::qubit_pair();
  const auto onto = psi_ontic_model(catalog, 2);
  const auto setup = prepare_pair(catalog[0], catalog[1]);
  const auto m = onto.instantiate({2, setup.params.d, setup.isometry});

  ModelDefinition def = onto;
  def.rule = ResponseRule::kExplicitTables;
  def.d = setup.params.d;
  def.tables = m.response;
  def.lambda_state.clear();
  const auto r = run_uniqueness_pipeline(def, 0, 1, 2);
  EXPECT_EQ(r.measure_on_psi, 1.0);
  EXPECT_EQ(r.support_set_L, std::vector<std::string>{"psi0"});

  def.d = setup.params.d + 1;
  EXPECT_THROW(run_uniqueness_pipeline(def, 0, 1, 2), std::invalid_argument);
}

TEST(Ontology, ModelValidationRejectsBadPriors) {
  auto def = psi_ontic_model(fixtures::qubit_pair(), 2);
  def.prior[1] = {0.5, 0.6};
  const auto setup = prepare_pair(def.psi_catalog[0], def.psi_catalog[1]);
  EXPECT_THROW(def.instantiate({2, setup.params.d, setup.isometry}).validate(), std::invalid_argument);
}

TEST(Ontology, PipelineRejectsSamePsi) {
  const auto def = psi_ontic_model(fixtures::qubit_pair(), 2);
  EXPECT_THROW(run_uniqueness_pipeline(def, 1, 1, 2), std::invalid_argument);
}

TEST(Ontology, PsiFunctionNeedsEveryPair) {
  const auto def = psi_ontic_model(fixtures::three_state_catalog(), 4);
  auto reports = run_all_pairs(def, 4);
  reports.pop_back();
  EXPECT_THROW(build_psi_function(def, reports), std::invalid_argument);
}

TEST(Ontology, DevTolShrinksWithN) {
  EXPECT_NEAR(support_tolerance(12, 1), std::sqrt(std::numbers::pi * std::numbers::pi / 144.0), 1e-15);
  EXPECT_LT(support_tolerance(64, 2), support_tolerance(16, 2));
}

}  // namespace
