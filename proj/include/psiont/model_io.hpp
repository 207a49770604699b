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

// JSON model files.
//
//   {
//     "dims": {"n": 4, "d": 2},
//     "psi_catalog": [[[re, im], ...], ...],
//     "lambda_range": ["l0", "l1"],
//     "prior": {"0": [p(l0|psi0), p(l1|psi0)], "1": [...]},
//     "response": {"a,b,lambda": [p(0,0), p(0,1), ..., p(d,d)], "a,b,lambda,psi": [...]}
//              or {"rule": "born_lambda_state", "lambda_state": [0, 1]}
//              or {"rule": "born_psi"},
//     "setting_priors": {"a": [...], "b": [...]},        (optional, uniform otherwise)
//     "joint": {"0": [P(a,b,lambda|psi0) ...], ...}       (optional)
//   }
//
// Response tables are flattened row-major over (x, y). Joint tables are
// flattened over (a index, b index, lambda). Amplitudes must be normalized to
// within 1e-8 and are renormalized on load.

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "psiont/ontology.hpp"

namespace psiont {

inline constexpr double kAmplitudeTolerance = 1e-8;

class ModelParseError : public std::runtime_error {
 public:
  ModelParseError(const std::string& location, const std::string& message)
      : std::runtime_error(location + ": " + message), location_(location) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

namespace detail {

using nlohmann::json;

inline const json& member(const json& node, const std::string& key, const std::string& path) {
  if (!node.is_object() || !node.contains(key)) throw ModelParseError(path, "missing field \"" + key + "\"");
  return node.at(key);
}

inline int as_int(const json& node, const std::string& path) {
  if (!node.is_number_integer()) throw ModelParseError(path, "expected an integer");
  return node.get<int>();
}

inline double as_double(const json& node, const std::string& path) {
  if (!node.is_number()) throw ModelParseError(path, "expected a number");
  return node.get<double>();
}

inline std::vector<double> as_doubles(const json& node, const std::string& path) {
  if (!node.is_array()) throw ModelParseError(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(as_double(node[i], path + "/" + std::to_string(i)));
  return out;
}

inline int parse_index(std::string_view text, const std::string& path) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ModelParseError(path, "expected an integer, got \"" + std::string(text) + "\"");
  }
  return value;
}

inline std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(',', start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

// "0": [...], "1": [...] keyed by catalog index.
inline std::vector<std::vector<double>> per_psi_rows(const json& node, int catalog_size, const std::string& path) {
  if (!node.is_object()) throw ModelParseError(path, "expected an object keyed by catalog index");
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(catalog_size));
  std::vector<bool> seen(static_cast<std::size_t>(catalog_size), false);
  for (const auto& [key, value] : node.items()) {
    const std::string p = path + "/" + key;
    const int idx = parse_index(key, p);
    if (idx < 0 || idx >= catalog_size) throw ModelParseError(p, "catalog index out of range");
    rows[idx] = as_doubles(value, p);
    seen[idx] = true;
  }
  for (int i = 0; i < catalog_size; ++i) {
    if (!seen[i]) throw ModelParseError(path, "missing entry for catalog index " + std::to_string(i));
  }
  return rows;
}

}  // namespace detail

/// Parses a model document. Errors name a JSON pointer or a line/column.
inline ModelDefinition parse_model(const std::string& text, const std::string& source = "model") {
  using nlohmann::json;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelParseError(source + " " + detail::line_column(text, e.byte), "malformed JSON");
  }
  const std::string at = source + ":";
  ModelDefinition def;

  const json& dims = detail::member(root, "dims", at + "/");
  def.n = detail::as_int(detail::member(dims, "n", at + "/dims"), at + "/dims/n");
  def.d = detail::as_int(detail::member(dims, "d", at + "/dims"), at + "/dims/d");
  if (def.n < 1) throw ModelParseError(at + "/dims/n", "must be positive");
  if (def.d < 2) throw ModelParseError(at + "/dims/d", "must be at least 2");

  const json& catalog = detail::member(root, "psi_catalog", at + "/");
  if (!catalog.is_array() || catalog.size() < 2) throw ModelParseError(at + "/psi_catalog", "need at least two states");
  Eigen::Index dim = -1;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const std::string p = at + "/psi_catalog/" + std::to_string(i);
    const json& amps = catalog[i];
    if (!amps.is_array() || amps.empty()) throw ModelParseError(p, "expected an array of [re, im] pairs");
    if (dim >= 0 && static_cast<Eigen::Index>(amps.size()) != dim) throw ModelParseError(p, "dimension differs from state 0");
    dim = static_cast<Eigen::Index>(amps.size());
    ComplexVector v(dim);
    for (std::size_t j = 0; j < amps.size(); ++j) {
      const std::string pj = p + "/" + std::to_string(j);
      const auto pair = detail::as_doubles(amps[j], pj);
      if (pair.size() != 2) throw ModelParseError(pj, "expected [re, im]");
      v(static_cast<Eigen::Index>(j)) = Complex(pair[0], pair[1]);
    }
    if (std::abs(v.norm() - 1.0) > kAmplitudeTolerance) throw ModelParseError(p, "state is not normalized");
    def.psi_catalog.push_back(v / v.norm());
  }
  const int catalog_size = static_cast<int>(def.psi_catalog.size());

  const json& labels = detail::member(root, "lambda_range", at + "/");
  if (!labels.is_array() || labels.empty()) throw ModelParseError(at + "/lambda_range", "expected a nonempty array");
  std::map<std::string, int> label_index;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string p = at + "/lambda_range/" + std::to_string(i);
    if (!labels[i].is_string()) throw ModelParseError(p, "expected a string label");
    const auto label = labels[i].get<std::string>();
    if (label.empty() || label.find(',') != std::string::npos) throw ModelParseError(p, "labels must be nonempty and comma-free");
    if (!label_index.emplace(label, static_cast<int>(i)).second) throw ModelParseError(p, "duplicate label");
    def.lambda_range.push_back(label);
  }

  def.prior = detail::per_psi_rows(detail::member(root, "prior", at + "/"), catalog_size, at + "/prior");

  if (root.contains("setting_priors")) {
    const json& sp = root.at("setting_priors");
    SettingPriors priors;
    priors.a = detail::as_doubles(detail::member(sp, "a", at + "/setting_priors"), at + "/setting_priors/a");
    priors.b = detail::as_doubles(detail::member(sp, "b", at + "/setting_priors"), at + "/setting_priors/b");
    def.setting_priors = std::move(priors);
  }
  if (root.contains("joint")) def.joint = detail::per_psi_rows(root.at("joint"), catalog_size, at + "/joint");

  const json& response = detail::member(root, "response", at + "/");
  const std::string rp = at + "/response";
  if (!response.is_object()) throw ModelParseError(rp, "expected an object");
  if (response.contains("rule")) {
    const json& rule = response.at("rule");
    if (!rule.is_string()) throw ModelParseError(rp + "/rule", "expected a string");
    const auto name = rule.get<std::string>();
    if (name == "born_lambda_state") {
      def.rule = ResponseRule::kBornLambdaState;
      const json& ls = detail::member(response, "lambda_state", rp);
      if (!ls.is_array() || ls.size() != def.lambda_range.size()) {
        throw ModelParseError(rp + "/lambda_state", "expected one catalog index per lambda");
      }
      for (std::size_t i = 0; i < ls.size(); ++i) {
        const std::string p = rp + "/lambda_state/" + std::to_string(i);
        const int idx = detail::as_int(ls[i], p);
        if (idx < 0 || idx >= catalog_size) throw ModelParseError(p, "catalog index out of range");
        def.lambda_state.push_back(idx);
      }
    } else if (name == "born_psi") {
      def.rule = ResponseRule::kBornPsi;
    } else {
      throw ModelParseError(rp + "/rule", "unknown rule \"" + name + "\"");
    }
  } else {
    def.rule = ResponseRule::kExplicitTables;
    const int outcomes = def.d + 1;
    std::optional<bool> indexed;
    for (const auto& [key, value] : response.items()) {
      const std::string p = rp + "/" + key;
      const auto parts = detail::split_commas(key);
      if (parts.size() != 3 && parts.size() != 4) throw ModelParseError(p, "key must be \"a,b,lambda[,psi]\"");
      const bool has_psi = parts.size() == 4;
      if (indexed && *indexed != has_psi) throw ModelParseError(p, "mixing psi-indexed and plain response keys");
      indexed = has_psi;
      ResponseKey rk;
      rk.a = detail::parse_index(parts[0], p);
      rk.b = detail::parse_index(parts[1], p);
      if (!is_alice_setting(def.n, rk.a) || !is_bob_setting(def.n, rk.b)) throw ModelParseError(p, "setting pair outside A_n x B_n");
      auto li = label_index.find(std::string(parts[2]));
      if (li == label_index.end()) throw ModelParseError(p, "unknown lambda label");
      rk.lambda = li->second;
      if (has_psi) {
        rk.psi = detail::parse_index(parts[3], p);
        if (rk.psi < 0 || rk.psi >= catalog_size) throw ModelParseError(p, "catalog index out of range");
      }
      const auto flat = detail::as_doubles(value, p);
      if (flat.size() != static_cast<std::size_t>(outcomes) * outcomes) {
        throw ModelParseError(p, "expected " + std::to_string(outcomes * outcomes) + " probabilities");
      }
      OutcomeTable t(outcomes, outcomes);
      for (int x = 0; x < outcomes; ++x) {
        for (int y = 0; y < outcomes; ++y) t(x, y) = flat[static_cast<std::size_t>(x) * outcomes + y];
      }
      def.tables[rk] = std::move(t);
    }
    def.tables_psi_indexed = indexed.value_or(false);
  }

  // Shape-level validation of priors and joints happens on a trial instantiation.
  try {
    FiniteOntologicalModel probe;
    probe.n = def.n;
    probe.d = def.d;
    probe.psi_catalog = def.psi_catalog;
    probe.lambda_range = def.lambda_range;
    probe.prior = def.prior;
    probe.setting_priors = def.setting_priors.value_or(SettingPriors::uniform(def.n));
    probe.joint = def.joint;
    probe.response = def.tables;
    probe.psi_indexed = def.tables_psi_indexed;
    probe.validate();
  } catch (const std::exception& e) {
    throw ModelParseError(at + "/", e.what());
  }
  return def;
}

inline ModelDefinition load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelParseError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str(), path);
}

inline nlohmann::ordered_json model_to_json(const ModelDefinition& def) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["dims"] = {{"n", def.n}, {"d", def.d}};
  ordered_json catalog = ordered_json::array();
  for (const auto& v : def.psi_catalog) {
    ordered_json amps = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) amps.push_back({v(i).real(), v(i).imag()});
    catalog.push_back(std::move(amps));
  }
  j["psi_catalog"] = std::move(catalog);
  j["lambda_range"] = def.lambda_range;
  ordered_json prior = ordered_json::object();
  for (std::size_t i = 0; i < def.prior.size(); ++i) prior[std::to_string(i)] = def.prior[i];
  j["prior"] = std::move(prior);
  ordered_json response = ordered_json::object();
  switch (def.rule) {
    case ResponseRule::kBornLambdaState:
      response["rule"] = "born_lambda_state";
      response["lambda_state"] = def.lambda_state;
      break;
    case ResponseRule::kBornPsi:
      response["rule"] = "born_psi";
      break;
    case ResponseRule::kExplicitTables:
      for (const auto& [key, t] : def.tables) {
        std::string name = std::to_string(key.a) + "," + std::to_string(key.b) + "," + def.lambda_range.at(key.lambda);
        if (key.psi >= 0) name += "," + std::to_string(key.psi);
        std::vector<double> flat;
        for (Eigen::Index x = 0; x < t.rows(); ++x) {
          for (Eigen::Index y = 0; y < t.cols(); ++y) flat.push_back(t(x, y));
        }
        response[name] = flat;
      }
      break;
  }
  j["response"] = std::move(response);
  if (def.setting_priors) j["setting_priors"] = {{"a", def.setting_priors->a}, {"b", def.setting_priors->b}};
  if (def.joint) {
    ordered_json joint = ordered_json::object();
    for (std::size_t i = 0; i < def.joint->size(); ++i) joint[std::to_string(i)] = (*def.joint)[i];
    j["joint"] = std::move(joint);
  }
  return j;
}

}  // namespace psiont
