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

// JSON and CSV encodings of pipeline reports and table rows. Numbers are
// written with std::to_chars (shortest round-trip, '.' separator, no locale).

#include <charconv>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "psiont/chained.hpp"
#include "psiont/ontology.hpp"

namespace psiont {

using ordered_json = nlohmann::ordered_json;

inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

/// Writes rows of already formatted cells as comma-separated lines.
inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

inline ordered_json to_json(const ModelChecks& c) {
  return ordered_json{{"born", c.born},
                      {"parameter_x", c.parameter_x},
                      {"parameter_y", c.parameter_y},
                      {"free_choice_product", c.free_choice_product},
                      {"completeness", c.completeness}};
}

inline ModelChecks checks_from_json(const ordered_json& j) {
  ModelChecks c;
  c.born = j.at("born").get<double>();
  c.parameter_x = j.at("parameter_x").get<double>();
  c.parameter_y = j.at("parameter_y").get<double>();
  c.free_choice_product = j.at("free_choice_product").get<double>();
  c.completeness = j.at("completeness").get<double>();
  return c;
}

inline ordered_json to_json(const UniquenessReport& r) {
  ordered_json dev = ordered_json::object();
  for (const auto& [label, v] : r.per_lambda_deviation) dev[label] = v;
  return ordered_json{{"psi", r.psi},
                      {"psi_prime", r.psi_prime},
                      {"n_used", r.n_used},
                      {"d", r.d},
                      {"k", r.k},
                      {"xi", r.xi},
                      {"alpha", r.alpha},
                      {"gamma", r.gamma},
                      {"dev_tol", r.dev_tol},
                      {"support_set_L", r.support_set_L},
                      {"measure_on_psi", r.measure_on_psi},
                      {"measure_on_psi_prime", r.measure_on_psi_prime},
                      {"per_lambda_deviation", dev},
                      {"i_value", r.i_value},
                      {"quantum_bound", r.quantum_bound},
                      {"lemma3_lhs", r.lemma3_lhs},
                      {"lemma3_rhs", r.lemma3_rhs},
                      {"measure_floor", r.measure_floor},
                      {"born_k_psi_prime", r.born_k_psi_prime},
                      {"eq9_margin", r.eq9_margin},
                      {"checks", to_json(r.checks)}};
}

inline UniquenessReport report_from_json(const ordered_json& j) {
  UniquenessReport r;
  r.psi = j.at("psi").get<int>();
  r.psi_prime = j.at("psi_prime").get<int>();
  r.n_used = j.at("n_used").get<int>();
  r.d = j.at("d").get<int>();
  r.k = j.at("k").get<int>();
  r.xi = j.at("xi").get<double>();
  r.alpha = j.at("alpha").get<double>();
  r.gamma = j.at("gamma").get<double>();
  r.dev_tol = j.at("dev_tol").get<double>();
  r.support_set_L = j.at("support_set_L").get<std::vector<std::string>>();
  r.measure_on_psi = j.at("measure_on_psi").get<double>();
  r.measure_on_psi_prime = j.at("measure_on_psi_prime").get<double>();
  for (const auto& [label, v] : j.at("per_lambda_deviation").items()) r.per_lambda_deviation[label] = v.get<double>();
  r.i_value = j.at("i_value").get<double>();
  r.quantum_bound = j.at("quantum_bound").get<double>();
  r.lemma3_lhs = j.at("lemma3_lhs").get<double>();
  r.lemma3_rhs = j.at("lemma3_rhs").get<double>();
  r.measure_floor = j.at("measure_floor").get<double>();
  r.born_k_psi_prime = j.at("born_k_psi_prime").get<double>();
  r.eq9_margin = j.at("eq9_margin").get<double>();
  r.checks = checks_from_json(j.at("checks"));
  return r;
}

inline ordered_json to_json(const PsiFunction& f) {
  ordered_json mapping = ordered_json::object();
  for (const auto& [label, psi] : f.mapping) mapping[label] = psi;
  return ordered_json{{"inverse_sets", f.inverse_sets},
                      {"mapping", mapping},
                      {"unmapped", f.unmapped},
                      {"measure", f.measure}};
}

inline PsiFunction psi_function_from_json(const ordered_json& j) {
  PsiFunction f;
  f.inverse_sets = j.at("inverse_sets").get<std::vector<std::vector<std::string>>>();
  for (const auto& [label, psi] : j.at("mapping").items()) f.mapping[label] = psi.get<int>();
  f.unmapped = j.at("unmapped").get<std::vector<std::string>>();
  f.measure = j.at("measure").get<std::vector<std::vector<double>>>();
  return f;
}

inline ordered_json to_json(const ChainedResult& c) {
  return ordered_json{{"n", c.n},
                      {"d", c.d},
                      {"i_value", c.i_value},
                      {"closed_form", c.closed_form},
                      {"bound", c.bound},
                      {"margin", c.margin()}};
}

inline std::vector<std::string> csv_cells(const ChainedResult& c) {
  return {std::to_string(c.n), std::to_string(c.d), format_number(c.i_value), format_number(c.closed_form),
          format_number(c.bound), format_number(c.margin())};
}

}  // namespace psiont
