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

#pragma once

// Finite ontological models for the two-party experiment Psi -> Lambda -> (A, B)
// -> (X, Y), the checkers for the Born rule, free choice and completeness,
// and the pipeline that extracts the support set L for a pair of catalog
// states and assembles the map lambda -> psi.

#include <algorithm>
#include <cmath>
#include <compare>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "psiont/born.hpp"
#include "psiont/chained.hpp"
#include "psiont/distance.hpp"
#include "psiont/linalg.hpp"
#include "psiont/measurements.hpp"
#include "psiont/states.hpp"

namespace psiont {

inline constexpr double kDefaultModelTolerance = 1e-9;

/// Response table index. psi is -1 for responses that do not depend on psi.
struct ResponseKey {
  int a = 0;
  int b = 1;
  int lambda = 0;
  int psi = -1;

  friend auto operator<=>(const ResponseKey&, const ResponseKey&) = default;
};

/// P_A over A_n and P_B over B_n, in setting order.
struct SettingPriors {
  std::vector<double> a;
  std::vector<double> b;

  static SettingPriors uniform(int n) {
    return {std::vector<double>(static_cast<std::size_t>(n), 1.0 / n),
            std::vector<double>(static_cast<std::size_t>(n), 1.0 / n)};
  }
};

/// Explicit P(a, b, lambda | psi), flattened as ((ia * n) + ib) * |Lambda| + lambda.
using JointSettingTable = std::vector<double>;

/// A model instantiated for one experiment: fixed n, d and response tables.
struct FiniteOntologicalModel {
  int n = 1;
  int d = 2;
  std::vector<ComplexVector> psi_catalog;
  std::vector<std::string> lambda_range;
  std::vector<std::vector<double>> prior;  // prior[psi][lambda] = P(lambda | psi)
  std::map<ResponseKey, OutcomeTable> response;
  bool psi_indexed = false;
  SettingPriors setting_priors;
  std::optional<std::vector<JointSettingTable>> joint;  // one table per psi

  int catalog_size() const { return static_cast<int>(psi_catalog.size()); }
  int lambda_count() const { return static_cast<int>(lambda_range.size()); }

  const OutcomeTable& response_at(int a, int b, int lambda, int psi) const {
    auto it = response.find({a, b, lambda, psi_indexed ? psi : -1});
    if (it == response.end()) {
      throw std::out_of_range("model: no response for a=" + std::to_string(a) + " b=" + std::to_string(b) +
                              " lambda=" + lambda_range.at(lambda) +
                              (psi_indexed ? " psi=" + std::to_string(psi) : std::string()));
    }
    return it->second;
  }

  /// P(a, b, lambda | psi) for setting indices ia, ib.
  double joint_weight(int psi, int ia, int ib, int lambda) const {
    if (joint) return (*joint)[psi][(static_cast<std::size_t>(ia) * n + ib) * lambda_count() + lambda];
    return setting_priors.a[ia] * setting_priors.b[ib] * prior[psi][lambda];
  }

  /// P(lambda | a, b, psi) over all lambda; the prior when no joint is given.
  std::vector<double> lambda_posterior(int psi, int ia, int ib) const {
    if (!joint) return prior[psi];
    std::vector<double> w(static_cast<std::size_t>(lambda_count()));
    double total = 0.0;
    for (int l = 0; l < lambda_count(); ++l) total += (w[l] = joint_weight(psi, ia, ib, l));
    if (total <= 0.0) return prior[psi];
    for (double& x : w) x /= total;
    return w;
  }

  /// P(b | a, lambda, psi) over B_n.
  std::vector<double> bob_posterior(int psi, int ia, int lambda) const {
    if (!joint) return setting_priors.b;
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (int ib = 0; ib < n; ++ib) total += (w[ib] = joint_weight(psi, ia, ib, lambda));
    if (total <= 0.0) return setting_priors.b;
    for (double& x : w) x /= total;
    return w;
  }

  void validate() const;
};

namespace detail {

inline void require_distribution(const std::vector<double>& p, std::size_t size, const std::string& what,
                                 bool full_support = false) {
  if (p.size() != size) {
    throw std::invalid_argument(what + ": expected " + std::to_string(size) + " entries, got " +
                                std::to_string(p.size()));
  }
  double total = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < -kEntrySlack) throw std::invalid_argument(what + ": negative or non-finite entry");
    if (full_support && x <= 0.0) throw std::invalid_argument(what + ": support must cover every setting");
    total += x;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) throw std::invalid_argument(what + ": not normalized");
}

}  // namespace detail

inline void FiniteOntologicalModel::validate() const {
  if (n < 1 || d < 1) throw std::invalid_argument("model: n and d must be positive");
  if (psi_catalog.empty()) throw std::invalid_argument("model: empty psi catalog");
  if (lambda_range.empty()) throw std::invalid_argument("model: empty lambda range");
  std::set<std::string> labels(lambda_range.begin(), lambda_range.end());
  if (labels.size() != lambda_range.size()) throw std::invalid_argument("model: duplicate lambda labels");
  if (prior.size() != psi_catalog.size()) throw std::invalid_argument("model: one prior row per catalog state required");
  for (std::size_t i = 0; i < prior.size(); ++i) {
    detail::require_distribution(prior[i], lambda_range.size(), "prior[" + std::to_string(i) + "]");
  }
  detail::require_distribution(setting_priors.a, static_cast<std::size_t>(n), "setting_priors.a", true);
  detail::require_distribution(setting_priors.b, static_cast<std::size_t>(n), "setting_priors.b", true);
  if (joint) {
    if (joint->size() != psi_catalog.size()) throw std::invalid_argument("model: one joint table per catalog state");
    for (std::size_t i = 0; i < joint->size(); ++i) {
      detail::require_distribution((*joint)[i], static_cast<std::size_t>(n) * n * lambda_range.size(),
                                   "joint[" + std::to_string(i) + "]");
    }
  }
  for (const auto& [key, t] : response) {
    if (t.rows() != d + 1 || t.cols() != d + 1) throw DimensionError("model: response table shape must be (d+1)x(d+1)");
    if (t.minCoeff() < -kEntrySlack || std::abs(t.sum() - 1.0) > kNormalizationTolerance) {
      throw std::invalid_argument("model: response table for lambda " + lambda_range.at(key.lambda) +
                                  " is not a probability table");
    }
  }
}

/// An isometry from the catalog space into C^{d+1} ⊗ C^{d+1}, with the
/// chained measurements at (n, d).
struct Experiment {
  int n = 1;
  int d = 2;
  ComplexMatrix isometry;
};

enum class ResponseRule {
  kExplicitTables,   // fixed tables, valid for one (n, d)
  kBornLambdaState,  // lambda carries a catalog state; response = Born(U psi_lambda)
  kBornPsi,          // psi-indexed: response(lambda, psi) = Born(U psi)
};

/// A model before an experiment is chosen: catalog, lambda range and priors
/// are fixed, responses are produced per experiment.
struct ModelDefinition {
  int n = 1;  // default number of settings; binding when tables, setting priors or a joint are explicit
  int d = 2;  // measurement dimension of explicit tables; lower bound for rule-based responses
  std::vector<ComplexVector> psi_catalog;
  std::vector<std::string> lambda_range;
  std::vector<std::vector<double>> prior;
  std::optional<SettingPriors> setting_priors;
  std::optional<std::vector<JointSettingTable>> joint;
  ResponseRule rule = ResponseRule::kBornLambdaState;
  std::vector<int> lambda_state;                 // kBornLambdaState
  std::map<ResponseKey, OutcomeTable> tables;    // kExplicitTables
  bool tables_psi_indexed = false;

  bool fixes_n() const { return rule == ResponseRule::kExplicitTables || setting_priors || joint; }
  bool fixes_d() const { return rule == ResponseRule::kExplicitTables; }

  FiniteOntologicalModel instantiate(const Experiment& e) const;
};

/// U psi_i for every catalog state.
inline std::vector<ComplexVector> experiment_states(const std::vector<ComplexVector>& catalog, const Experiment& e) {
  std::vector<ComplexVector> out;
  out.reserve(catalog.size());
  for (const auto& psi : catalog) {
    if (psi.size() != e.isometry.cols()) throw DimensionError("experiment: catalog state dimension mismatch");
    out.push_back(e.isometry * psi);
  }
  return out;
}

inline std::vector<JointConditional> born_tables(const std::vector<ComplexVector>& states, int n, int d) {
  const FamilyCache families(n, d);
  std::vector<JointConditional> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(assemble_joint_conditional(s, families));
  return out;
}

inline FiniteOntologicalModel ModelDefinition::instantiate(const Experiment& e) const {
  if (fixes_n() && e.n != n) {
    throw std::invalid_argument("model: explicit tables/priors are given for n=" + std::to_string(n) +
                                ", experiment uses n=" + std::to_string(e.n));
  }
  if (fixes_d() && e.d != d) {
    throw std::invalid_argument("model: explicit response tables are given for d=" + std::to_string(d) +
                                ", experiment uses d=" + std::to_string(e.d));
  }
  FiniteOntologicalModel m;
  m.n = e.n;
  m.d = e.d;
  m.psi_catalog = psi_catalog;
  m.lambda_range = lambda_range;
  m.prior = prior;
  m.setting_priors = setting_priors.value_or(SettingPriors::uniform(e.n));
  m.joint = joint;

  switch (rule) {
    case ResponseRule::kExplicitTables:
      m.response = tables;
      m.psi_indexed = tables_psi_indexed;
      break;
    case ResponseRule::kBornLambdaState: {
      if (lambda_state.size() != lambda_range.size()) {
        throw std::invalid_argument("model: lambda_state must name a catalog state for every lambda");
      }
      const auto states = experiment_states(psi_catalog, e);
      std::map<int, JointConditional> per_state;
      const FamilyCache families(e.n, e.d);
      for (int l = 0; l < static_cast<int>(lambda_range.size()); ++l) {
        const int s = lambda_state[l];
        if (s < 0 || s >= static_cast<int>(states.size())) throw std::out_of_range("model: lambda_state index");
        if (!per_state.contains(s)) per_state.emplace(s, assemble_joint_conditional(states[s], families));
        for (const auto& [key, t] : per_state.at(s).tables()) m.response[{key.first, key.second, l, -1}] = t;
      }
      break;
    }
    case ResponseRule::kBornPsi: {
      const auto tables_per_psi = born_tables(experiment_states(psi_catalog, e), e.n, e.d);
      m.psi_indexed = true;
      for (int psi = 0; psi < static_cast<int>(psi_catalog.size()); ++psi) {
        for (int l = 0; l < static_cast<int>(lambda_range.size()); ++l) {
          if (prior.at(psi).at(l) <= 0.0) continue;
          for (const auto& [key, t] : tables_per_psi[psi].tables()) m.response[{key.first, key.second, l, psi}] = t;
        }
      }
      break;
    }
  }
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------
// Checkers

/// sum_lambda P(lambda | a, b, psi) P(x, y | a, b, lambda[, psi]) as a JointConditional.
inline JointConditional predicted_table(const FiniteOntologicalModel& m, int psi) {
  const auto as = alice_settings(m.n);
  const auto bs = bob_settings(m.n);
  JointConditional out(m.n, m.d);
  for (int ia = 0; ia < m.n; ++ia) {
    for (int ib = 0; ib < m.n; ++ib) {
      const auto w = m.lambda_posterior(psi, ia, ib);
      OutcomeTable acc = OutcomeTable::Zero(m.d + 1, m.d + 1);
      for (int l = 0; l < m.lambda_count(); ++l) {
        if (w[l] > 0.0) acc += w[l] * m.response_at(as[ia], bs[ib], l, psi);
      }
      out.set(as[ia], bs[ib], std::move(acc));
    }
  }
  return out;
}

/// max over (psi, a, b, x, y) of |model prediction - Born(state_psi)|.
inline double check_born_consistency(const FiniteOntologicalModel& m, const std::vector<JointConditional>& born) {
  if (static_cast<int>(born.size()) != m.catalog_size()) {
    throw std::invalid_argument("check_born_consistency: one Born table per catalog state required");
  }
  double worst = 0.0;
  for (int psi = 0; psi < m.catalog_size(); ++psi) {
    const JointConditional pred = predicted_table(m, psi);
    for (const auto& [key, t] : pred.tables()) {
      worst = std::max(worst, (t - born[psi].at(key.first, key.second)).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

/// As above, with the post-isometry state of every catalog entry.
inline double check_born_consistency(const FiniteOntologicalModel& m, const std::vector<ComplexVector>& state_map) {
  if (static_cast<int>(state_map.size()) != m.catalog_size()) {
    throw std::invalid_argument("check_born_consistency: one state per catalog entry required");
  }
  return check_born_consistency(m, born_tables(state_map, m.n, m.d));
}

struct ParameterDeviation {
  double dev_x = 0.0;  // max |P_{X Lambda|a b} - P_{X Lambda|a b'}|
  double dev_y = 0.0;  // max |P_{Y Lambda|a b} - P_{Y Lambda|a' b}|
};

/// Checks P_{X Lambda|AB} = P_{X Lambda|A} and P_{Y Lambda|AB} = P_{Y Lambda|B} for one psi.
inline ParameterDeviation check_parameter_conditions(const FiniteOntologicalModel& m, int psi) {
  const auto as = alice_settings(m.n);
  const auto bs = bob_settings(m.n);
  const int outcomes = m.d + 1;
  const int lambdas = m.lambda_count();
  // marg_x[ia][ib] is a (outcomes x lambdas) matrix of P(x, lambda | a, b).
  std::vector<std::vector<RealMatrix>> marg_x(m.n, std::vector<RealMatrix>(m.n));
  std::vector<std::vector<RealMatrix>> marg_y(m.n, std::vector<RealMatrix>(m.n));
  for (int ia = 0; ia < m.n; ++ia) {
    for (int ib = 0; ib < m.n; ++ib) {
      const auto w = m.lambda_posterior(psi, ia, ib);
      RealMatrix mx = RealMatrix::Zero(outcomes, lambdas);
      RealMatrix my = RealMatrix::Zero(outcomes, lambdas);
      for (int l = 0; l < lambdas; ++l) {
        if (w[l] <= 0.0) continue;
        const OutcomeTable& t = m.response_at(as[ia], bs[ib], l, psi);
        mx.col(l) = w[l] * t.rowwise().sum();
        my.col(l) = w[l] * t.colwise().sum().transpose();
      }
      marg_x[ia][ib] = std::move(mx);
      marg_y[ia][ib] = std::move(my);
    }
  }
  ParameterDeviation dev;
  for (int ia = 0; ia < m.n; ++ia) {
    for (int ib = 1; ib < m.n; ++ib) {
      dev.dev_x = std::max(dev.dev_x, (marg_x[ia][ib] - marg_x[ia][0]).cwiseAbs().maxCoeff());
    }
  }
  for (int ib = 0; ib < m.n; ++ib) {
    for (int ia = 1; ia < m.n; ++ia) {
      dev.dev_y = std::max(dev.dev_y, (marg_y[ia][ib] - marg_y[0][ib]).cwiseAbs().maxCoeff());
    }
  }
  return dev;
}

/// max over psi of the max-norm distance between P(a, b, lambda | psi) and
/// P_A x P_B x P(lambda | psi). Zero when no explicit joint is given.
inline double check_free_choice_product(const FiniteOntologicalModel& m) {
  if (!m.joint) return 0.0;
  double worst = 0.0;
  for (int psi = 0; psi < m.catalog_size(); ++psi) {
    for (int ia = 0; ia < m.n; ++ia) {
      for (int ib = 0; ib < m.n; ++ib) {
        for (int l = 0; l < m.lambda_count(); ++l) {
          const double product = m.setting_priors.a[ia] * m.setting_priors.b[ib] * m.prior[psi][l];
          worst = std::max(worst, std::abs(m.joint_weight(psi, ia, ib, l) - product));
        }
      }
    }
  }
  return worst;
}

/// max |response(lambda, psi) - response(lambda, psi')| over lambda supported by both priors.
inline double check_completeness(const FiniteOntologicalModel& m) {
  if (!m.psi_indexed) return 0.0;
  const auto as = alice_settings(m.n);
  const auto bs = bob_settings(m.n);
  double worst = 0.0;
  for (int l = 0; l < m.lambda_count(); ++l) {
    for (int p = 0; p < m.catalog_size(); ++p) {
      if (m.prior[p][l] <= 0.0) continue;
      for (int q = p + 1; q < m.catalog_size(); ++q) {
        if (m.prior[q][l] <= 0.0) continue;
        for (int a : as) {
          for (int b : bs) {
            const double diff = (m.response_at(a, b, l, p) - m.response_at(a, b, l, q)).cwiseAbs().maxCoeff();
            worst = std::max(worst, diff);
          }
        }
      }
    }
  }
  return worst;
}

inline constexpr const char* kBornCondition = "born-rule";
inline constexpr const char* kFreeChoiceCondition = "free-choice";
inline constexpr const char* kCompletenessCondition = "completeness";

struct ModelChecks {
  double born = 0.0;
  double parameter_x = 0.0;
  double parameter_y = 0.0;
  double free_choice_product = 0.0;
  double completeness = 0.0;

  /// Names of the violated conditions. Parameter independence is a
  /// consequence of free choice and is reported under it.
  std::vector<std::string> violations(double tol) const {
    std::vector<std::string> out;
    if (born > tol) out.emplace_back(kBornCondition);
    if (std::max({parameter_x, parameter_y, free_choice_product}) > tol) out.emplace_back(kFreeChoiceCondition);
    if (completeness > tol) out.emplace_back(kCompletenessCondition);
    return out;
  }

  void absorb(const ModelChecks& o) {
    born = std::max(born, o.born);
    parameter_x = std::max(parameter_x, o.parameter_x);
    parameter_y = std::max(parameter_y, o.parameter_y);
    free_choice_product = std::max(free_choice_product, o.free_choice_product);
    completeness = std::max(completeness, o.completeness);
  }

  friend bool operator==(const ModelChecks&, const ModelChecks&) = default;
};

inline ModelChecks run_model_checks(const FiniteOntologicalModel& m, const std::vector<JointConditional>& born) {
  ModelChecks c;
  c.born = check_born_consistency(m, born);
  for (int psi = 0; psi < m.catalog_size(); ++psi) {
    const auto dev = check_parameter_conditions(m, psi);
    c.parameter_x = std::max(c.parameter_x, dev.dev_x);
    c.parameter_y = std::max(c.parameter_y, dev.dev_y);
  }
  c.free_choice_product = check_free_choice_product(m);
  c.completeness = check_completeness(m);
  return c;
}

/// A model that fails born-rule, free-choice or completeness.
class ConditionViolation : public std::runtime_error {
 public:
  ConditionViolation(std::vector<std::string> conditions, ModelChecks checks)
      : std::runtime_error(describe(conditions)), conditions_(std::move(conditions)), checks_(checks) {}

  const std::vector<std::string>& conditions() const { return conditions_; }
  const ModelChecks& checks() const { return checks_; }

 private:
  static std::string describe(const std::vector<std::string>& c) {
    std::string s = "model violates:";
    for (const auto& x : c) s += " " + x;
    return s;
  }
  std::vector<std::string> conditions_;
  ModelChecks checks_;
};

// ---------------------------------------------------------------------------
// Pipeline

/// Overlap, phase and isometry that route (psi, psi') onto (phi, e^{i gamma} phi').
struct PairSetup {
  double alpha = 0.0;
  double gamma = 0.0;
  OverlapParams params;
  ComplexMatrix isometry;
};

/// Smallest d whose product space (d+1)^2 holds a catalog of dimension dim.
inline int min_dimension_for(Eigen::Index dim) {
  int d = 1;
  while (static_cast<Eigen::Index>(d + 1) * (d + 1) < dim) ++d;
  return d;
}

inline PairSetup prepare_pair(const ComplexVector& psi, const ComplexVector& psi_p, int min_d = 2) {
  const Complex ov = inner(psi, psi_p);
  const double alpha = std::abs(ov);
  if (alpha >= 1.0 - 1e-12) throw std::invalid_argument("pipeline: |<psi|psi'>| must be below 1");
  PairSetup s;
  s.alpha = alpha;
  s.gamma = alpha > 0.0 ? std::arg(ov) : 0.0;
  s.params = solve_overlap(alpha, std::max(min_d, min_dimension_for(psi.size())));
  const ComplexVector phi = phi_state(s.params.d);
  const ComplexVector phi_p = std::polar(1.0, s.gamma) * phi_prime_state(s.params);
  s.isometry = build_isometry(psi, psi_p, phi, phi_p);
  return s;
}

/// Threshold on |P(k|0,lambda) - 1/d| defining L at finite n: sqrt(d pi^2 / (12 n)).
inline double support_tolerance(int n, int d) {
  return std::sqrt(d * std::numbers::pi * std::numbers::pi / (12.0 * n));
}

struct UniquenessReport {
  int psi = 0;
  int psi_prime = 1;
  int n_used = 1;
  int d = 2;
  int k = 1;
  double xi = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double dev_tol = 0.0;
  std::vector<std::string> support_set_L;
  double measure_on_psi = 0.0;
  double measure_on_psi_prime = 0.0;
  std::map<std::string, double> per_lambda_deviation;  // lambda in supp P(.|psi)
  double i_value = 0.0;         // I_{n,d}(P_{XY|AB psi})
  double quantum_bound = 0.0;   // pi^2 / (6n)
  double lemma3_lhs = 0.0;
  double lemma3_rhs = 0.0;
  double measure_floor = 0.0;   // 1 - lemma3_rhs / dev_tol, a lower bound on measure_on_psi
  double born_k_psi_prime = 0.0;  // P_{X|A Psi}(k | 0, psi') from the Born rule
  double eq9_margin = 0.0;        // measure_on_psi_prime / d - born_k_psi_prime
  ModelChecks checks;

  friend bool operator==(const UniquenessReport&, const UniquenessReport&) = default;
};

using ModelInstantiator = std::function<FiniteOntologicalModel(const Experiment&)>;

/// P(x | a, lambda, psi) = sum_b P(b | a, lambda, psi) sum_y P(x, y | a, b, lambda, psi).
inline std::vector<double> local_marginal_x(const FiniteOntologicalModel& m, int psi, int a, int lambda) {
  const int ia = a / 2;
  const auto wb = m.bob_posterior(psi, ia, lambda);
  const auto bs = bob_settings(m.n);
  std::vector<double> px(static_cast<std::size_t>(m.d + 1), 0.0);
  for (int ib = 0; ib < m.n; ++ib) {
    if (wb[ib] <= 0.0) continue;
    const auto row = row_marginal(m.response_at(a, bs[ib], lambda, psi));
    for (int x = 0; x <= m.d; ++x) px[x] += wb[ib] * row[x];
  }
  return px;
}

/// Support-set analysis for catalog entries psi and psi_prime.
///
/// Throws ConditionViolation when a checker exceeds tol.
inline UniquenessReport run_uniqueness_pipeline(const std::vector<ComplexVector>& catalog, int psi, int psi_prime,
                                                const ModelInstantiator& instantiate, int n, double tol,
                                                int min_d = 2) {
  if (psi == psi_prime) throw std::invalid_argument("pipeline: psi and psi' must differ");
  if (!(tol > 0.0)) throw std::invalid_argument("pipeline: tol must be positive");
  const PairSetup setup = prepare_pair(catalog.at(psi), catalog.at(psi_prime), min_d);
  const int d = setup.params.d;
  const int k = setup.params.k;
  const Experiment experiment{n, d, setup.isometry};
  const FiniteOntologicalModel model = instantiate(experiment);
  if (model.n != n || model.d != d) throw std::logic_error("pipeline: instantiated model does not match experiment");

  const auto born = born_tables(experiment_states(catalog, experiment), n, d);
  const ModelChecks checks = run_model_checks(model, born);
  if (auto v = checks.violations(tol); !v.empty()) throw ConditionViolation(std::move(v), checks);

  UniquenessReport r;
  r.psi = psi;
  r.psi_prime = psi_prime;
  r.n_used = n;
  r.d = d;
  r.k = k;
  r.xi = setup.params.xi;
  r.alpha = setup.alpha;
  r.gamma = setup.gamma;
  r.dev_tol = support_tolerance(n, d);
  r.checks = checks;

  LambdaMixture mixture;
  for (int l = 0; l < model.lambda_count(); ++l) {
    const double w = model.prior[psi][l];
    if (w <= 0.0) continue;  // P(k|0,lambda,psi) undefined
    const double p_k = local_marginal_x(model, psi, 0, l)[k];
    const double dev = std::abs(p_k - 1.0 / d);
    r.per_lambda_deviation[model.lambda_range[l]] = dev;
    if (dev <= r.dev_tol) {
      r.support_set_L.push_back(model.lambda_range[l]);
      r.measure_on_psi += w;
      r.measure_on_psi_prime += model.prior[psi_prime][l];
    }
    JointConditional per_lambda(n, d);
    for (int a : alice_settings(n)) {
      for (int b : bob_settings(n)) per_lambda.set(a, b, model.response_at(a, b, l, psi));
    }
    mixture.weights.push_back(w);
    mixture.tables.push_back(std::move(per_lambda));
  }

  const DeviationCertificate cert = lemma3_certificate(mixture, n, d);
  r.lemma3_lhs = cert.lhs;
  r.lemma3_rhs = cert.rhs;
  r.i_value = i_nd(predicted_table(model, psi), n, d);
  r.quantum_bound = quantum_bound(n);
  r.measure_floor = std::max(0.0, 1.0 - cert.rhs / r.dev_tol);
  r.born_k_psi_prime = row_marginal(born[psi_prime].at(0, 2 * n - 1))[k];
  r.eq9_margin = r.measure_on_psi_prime / d - r.born_k_psi_prime;
  return r;
}

/// The minimum measurement dimension a definition asks the pipeline to use.
inline int definition_min_d(const ModelDefinition& def) { return std::max(2, def.d); }

inline UniquenessReport run_uniqueness_pipeline(const ModelDefinition& def, int psi, int psi_prime, int n,
                                                double tol = kDefaultModelTolerance) {
  auto inst = [&def](const Experiment& e) { return def.instantiate(e); };
  const int min_d = definition_min_d(def);
  if (def.fixes_d()) {
    const PairSetup s = prepare_pair(def.psi_catalog.at(psi), def.psi_catalog.at(psi_prime), min_d);
    if (s.params.d != def.d) {
      throw std::invalid_argument("model: explicit tables use d=" + std::to_string(def.d) + " but the pair (" +
                                  std::to_string(psi) + "," + std::to_string(psi_prime) + ") needs d=" +
                                  std::to_string(s.params.d));
    }
  }
  return run_uniqueness_pipeline(def.psi_catalog, psi, psi_prime, inst, n, tol, min_d);
}

/// Reports for every ordered pair of distinct catalog entries.
inline std::vector<UniquenessReport> run_all_pairs(const ModelDefinition& def, int n,
                                                   double tol = kDefaultModelTolerance) {
  std::vector<UniquenessReport> out;
  const int size = static_cast<int>(def.psi_catalog.size());
  for (int p = 0; p < size; ++p) {
    for (int q = 0; q < size; ++q) {
      if (p != q) out.push_back(run_uniqueness_pipeline(def, p, q, n, tol));
    }
  }
  return out;
}

/// Checker deviations maximised over every ordered pair experiment.
inline ModelChecks check_model_definition(const ModelDefinition& def, int n) {
  ModelChecks worst;
  const int size = static_cast<int>(def.psi_catalog.size());
  if (size < 2) throw std::invalid_argument("model: at least two catalog states are needed");
  for (int p = 0; p < size; ++p) {
    for (int q = 0; q < size; ++q) {
      if (p == q) continue;
      const PairSetup s = prepare_pair(def.psi_catalog[p], def.psi_catalog[q], definition_min_d(def));
      const Experiment e{n, s.params.d, s.isometry};
      const FiniteOntologicalModel m = def.instantiate(e);
      worst.absorb(run_model_checks(m, born_tables(experiment_states(def.psi_catalog, e), n, e.d)));
    }
  }
  return worst;
}

/// Partial map lambda -> psi built from the pairwise support sets.
struct PsiFunction {
  std::vector<std::vector<std::string>> inverse_sets;  // f^{-1}(psi)
  std::map<std::string, int> mapping;
  std::vector<std::string> unmapped;
  std::vector<std::vector<double>> measure;  // measure[psi][psi'] = P(f^{-1}(psi) | psi')

  bool full_measure(double tol = 0.0) const {
    for (std::size_t p = 0; p < measure.size(); ++p) {
      if (measure[p][p] < 1.0 - tol) return false;
    }
    return true;
  }

  friend bool operator==(const PsiFunction&, const PsiFunction&) = default;
};

/// f^{-1}(psi) = L_psi \ union_{psi' != psi} L_{psi'}, with L_psi the
/// intersection of L_{psi, psi'} over psi' != psi.
inline PsiFunction build_psi_function(const std::vector<std::string>& lambda_range,
                                      const std::vector<std::vector<double>>& prior,
                                      const std::vector<UniquenessReport>& reports) {
  const int size = static_cast<int>(prior.size());
  std::map<std::pair<int, int>, const UniquenessReport*> by_pair;
  for (const auto& r : reports) by_pair[{r.psi, r.psi_prime}] = &r;

  std::vector<std::set<std::string>> l_psi(static_cast<std::size_t>(size));
  for (int p = 0; p < size; ++p) {
    std::set<std::string> acc(lambda_range.begin(), lambda_range.end());
    for (int q = 0; q < size; ++q) {
      if (p == q) continue;
      auto it = by_pair.find({p, q});
      if (it == by_pair.end()) {
        throw std::invalid_argument("build_psi_function: missing report for pair (" + std::to_string(p) + "," +
                                    std::to_string(q) + ")");
      }
      const std::set<std::string> lpq(it->second->support_set_L.begin(), it->second->support_set_L.end());
      std::set<std::string> next;
      std::set_intersection(acc.begin(), acc.end(), lpq.begin(), lpq.end(), std::inserter(next, next.end()));
      acc = std::move(next);
    }
    l_psi[p] = std::move(acc);
  }

  PsiFunction f;
  f.inverse_sets.resize(size);
  for (int p = 0; p < size; ++p) {
    for (const auto& label : l_psi[p]) {
      bool elsewhere = false;
      for (int q = 0; q < size && !elsewhere; ++q) elsewhere = q != p && l_psi[q].contains(label);
      if (!elsewhere) {
        f.inverse_sets[p].push_back(label);
        f.mapping[label] = p;
      }
    }
  }
  std::map<std::string, int> index;
  for (int l = 0; l < static_cast<int>(lambda_range.size()); ++l) index[lambda_range[l]] = l;
  for (const auto& label : lambda_range) {
    if (!f.mapping.contains(label)) f.unmapped.push_back(label);
  }
  f.measure.assign(size, std::vector<double>(static_cast<std::size_t>(size), 0.0));
  for (int p = 0; p < size; ++p) {
    for (int q = 0; q < size; ++q) {
      for (const auto& label : f.inverse_sets[p]) f.measure[p][q] += prior[q][index.at(label)];
    }
  }
  return f;
}

inline PsiFunction build_psi_function(const ModelDefinition& def, const std::vector<UniquenessReport>& reports) {
  return build_psi_function(def.lambda_range, def.prior, reports);
}

// ---------------------------------------------------------------------------
// Canonical models

inline std::vector<std::vector<double>> point_mass_priors(int size) {
  std::vector<std::vector<double>> prior(size, std::vector<double>(static_cast<std::size_t>(size), 0.0));
  for (int i = 0; i < size; ++i) prior[i][i] = 1.0;
  return prior;
}

/// Lambda is the state itself: lambda_i = psi_i with Born responses.
inline ModelDefinition psi_ontic_model(std::vector<ComplexVector> catalog, int n) {
  ModelDefinition def;
  def.n = n;
  def.d = 2;
  const int size = static_cast<int>(catalog.size());
  def.psi_catalog = std::move(catalog);
  for (int i = 0; i < size; ++i) {
    def.lambda_range.push_back("psi" + std::to_string(i));
    def.lambda_state.push_back(i);
  }
  def.prior = point_mass_priors(size);
  def.rule = ResponseRule::kBornLambdaState;
  return def;
}

/// A single lambda value; responses read psi directly, so Lambda is not complete.
inline ModelDefinition constant_lambda_model(std::vector<ComplexVector> catalog, int n) {
  ModelDefinition def;
  def.n = n;
  def.d = 2;
  def.prior.assign(catalog.size(), std::vector<double>{1.0});
  def.psi_catalog = std::move(catalog);
  def.lambda_range = {"const"};
  def.rule = ResponseRule::kBornPsi;
  return def;
}

/// psi-ontic responses, but lambda carries a tag t in {0..n-1} with
/// P(a, b, (i, t) | psi_i) = [t = index of a] / n^2, so Lambda and A are correlated.
inline ModelDefinition lambda_a_correlated_model(std::vector<ComplexVector> catalog, int n) {
  if (n < 2) throw std::invalid_argument("lambda_a_correlated_model: needs at least two settings per side");
  ModelDefinition def;
  def.n = n;
  def.d = 2;
  const int size = static_cast<int>(catalog.size());
  def.psi_catalog = std::move(catalog);
  for (int i = 0; i < size; ++i) {
    for (int t = 0; t < n; ++t) {
      def.lambda_range.push_back("psi" + std::to_string(i) + "_t" + std::to_string(t));
      def.lambda_state.push_back(i);
    }
  }
  const int lambdas = size * n;
  def.prior.assign(size, std::vector<double>(static_cast<std::size_t>(lambdas), 0.0));
  std::vector<JointSettingTable> joint(size, JointSettingTable(static_cast<std::size_t>(n) * n * lambdas, 0.0));
  for (int i = 0; i < size; ++i) {
    for (int t = 0; t < n; ++t) def.prior[i][i * n + t] = 1.0 / n;
    for (int ia = 0; ia < n; ++ia) {
      for (int ib = 0; ib < n; ++ib) {
        joint[i][(static_cast<std::size_t>(ia) * n + ib) * lambdas + i * n + ia] = 1.0 / (static_cast<double>(n) * n);
      }
    }
  }
  def.joint = std::move(joint);
  def.rule = ResponseRule::kBornLambdaState;
  return def;
}

}  // namespace psiont
