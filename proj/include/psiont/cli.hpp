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

// Command implementations behind the psiont executable. Each command writes
// its table or report to `out`, diagnostics to `err`, and returns the exit
// code: 0 when every assertion holds, 1 when one fails, 2 on usage or input
// errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "psiont/chained.hpp"
#include "psiont/inequality_suite.hpp"
#include "psiont/model_io.hpp"
#include "psiont/ontology.hpp"
#include "psiont/report_io.hpp"
#include "psiont/states.hpp"

namespace psiont::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

enum class Command { kBoundTable, kOverlap, kVerifyLemmas, kUniqueness, kModelCheck };
enum class Format { kCsv, kJson };

struct IntRange {
  int lo = 1;
  int hi = 1;
  bool empty() const { return hi < lo; }
};

/// Parses "lo..hi" or a single integer.
inline IntRange parse_range(const std::string& text) {
  auto to_int = [&text](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw std::invalid_argument("bad range \"" + text + "\"");
    return v;
  };
  const auto pos = text.find("..");
  if (pos == std::string::npos) {
    const int v = to_int(text);
    return {v, v};
  }
  return {to_int(text.substr(0, pos)), to_int(text.substr(pos + 2))};
}

struct RunConfig {
  Command command = Command::kBoundTable;
  IntRange n_range{1, 4};
  IntRange d_range{2, 4};
  bool n_given = false;
  double alpha = 0.0;
  std::string model_path;
  std::string output_path;
  Format format = Format::kCsv;
  std::uint64_t seed = 0;
  double tol = kDefaultModelTolerance;
};

namespace detail {

inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output_path);
  if (!f) throw std::runtime_error("cannot write " + cfg.output_path);
  f << text;
}

}  // namespace detail

inline int cmd_bound_table(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.n_range.empty() || cfg.d_range.empty() || cfg.n_range.lo < 1 || cfg.d_range.lo < 2) {
    err << "bound-table: --n needs lo >= 1, --d needs lo >= 2, ranges must be nonempty\n";
    return kExitUsage;
  }
  std::vector<ChainedResult> rows;
  bool ok = true;
  for (int n = cfg.n_range.lo; n <= cfg.n_range.hi; ++n) {
    for (int d = cfg.d_range.lo; d <= cfg.d_range.hi; ++d) {
      const ChainedResult r = evaluate_chained(n, d);
      ok = ok && r.i_value <= r.bound && std::abs(r.i_value - r.closed_form) <= cfg.tol;
      rows.push_back(r);
    }
  }
  std::ostringstream s;
  if (cfg.format == Format::kJson) {
    ordered_json j = ordered_json::array();
    for (const auto& r : rows) j.push_back(to_json(r));
    s << j.dump(2) << '\n';
  } else {
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) cells.push_back(csv_cells(r));
    write_csv(s, {"n", "d", "i_value", "closed_form", "bound", "margin"}, cells);
  }
  detail::emit(cfg, out, s.str());
  if (!ok) err << "bound-table: a row violates the bound or the closed form\n";
  return ok ? kExitOk : kExitFailed;
}

inline int cmd_overlap(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  OverlapParams p;
  try {
    p = solve_overlap(cfg.alpha);
  } catch (const std::invalid_argument& e) {
    err << "overlap: " << e.what() << '\n';
    return kExitUsage;
  }
  const double achieved = overlap(phi_state(p.d), phi_prime_state(p)).real();
  const double residual = std::abs(achieved - cfg.alpha);
  std::ostringstream s;
  if (cfg.format == Format::kJson) {
    s << ordered_json{{"alpha", cfg.alpha}, {"d", p.d}, {"k", p.k}, {"xi", p.xi},
                      {"overlap", achieved}, {"residual", residual}}.dump(2)
      << '\n';
  } else {
    write_csv(s, {"alpha", "d", "k", "xi", "overlap", "residual"},
              {{format_number(cfg.alpha), std::to_string(p.d), std::to_string(p.k), format_number(p.xi),
                format_number(achieved), format_number(residual)}});
  }
  detail::emit(cfg, out, s.str());
  return residual <= cfg.tol ? kExitOk : kExitFailed;
}

inline ordered_json to_json(const InequalityTally& t) {
  return ordered_json{{"trials", t.trials}, {"violations", t.violations}, {"max_excess", t.max_excess}};
}

inline int cmd_verify_lemmas(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const InequalitySuiteReport rep = run_inequality_suites(cfg.seed);
  std::ostringstream s;
  if (cfg.format == Format::kJson) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : rep.tightness) {
      rows.push_back({{"d", r.d},
                      {"distance_to_uniform", r.distance_to_uniform},
                      {"shift_distance", r.shift_distance},
                      {"bound", r.bound},
                      {"equality_margin", r.equality_margin}});
    }
    s << ordered_json{{"seed", rep.seed},
                      {"coupling_gap", to_json(rep.coupling)},
                      {"uniform_distance", to_json(rep.uniform)},
                      {"tightness", rows},
                      {"passed", rep.passed()}}
             .dump(2)
      << '\n';
  } else {
    std::vector<std::vector<std::string>> cells;
    auto tally_row = [&cells](const char* name, const InequalityTally& t) {
      cells.push_back({name, "", std::to_string(t.trials), std::to_string(t.violations), format_number(t.max_excess)});
    };
    tally_row("coupling_gap", rep.coupling);
    tally_row("uniform_distance", rep.uniform);
    for (const auto& r : rep.tightness) {
      cells.push_back({"tightness", std::to_string(r.d), "1", r.equality_margin <= 1e-12 ? "0" : "1",
                       format_number(r.equality_margin)});
    }
    write_csv(s, {"suite", "d", "trials", "violations", "max_excess"}, cells);
  }
  detail::emit(cfg, out, s.str());
  if (!rep.passed()) err << "verify-lemmas: violations found\n";
  return rep.passed() ? kExitOk : kExitFailed;
}

namespace detail {

inline std::optional<ModelDefinition> load_or_report(const RunConfig& cfg, std::ostream& err) {
  if (cfg.model_path.empty()) {
    err << "--model is required\n";
    return std::nullopt;
  }
  try {
    return load_model(cfg.model_path);
  } catch (const ModelParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return std::nullopt;
  }
}

inline int resolve_n(const RunConfig& cfg, const ModelDefinition& def) {
  if (!cfg.n_given) return def.n;
  if (cfg.n_range.lo != cfg.n_range.hi) throw std::invalid_argument("--n must be a single value for model commands");
  return cfg.n_range.lo;
}

inline void report_violations(std::ostream& err, const std::vector<std::string>& v) {
  for (const auto& c : v) err << "violated condition: " << c << '\n';
}

}  // namespace detail

inline int cmd_model_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto def = detail::load_or_report(cfg, err);
  if (!def) return kExitUsage;
  ModelChecks checks;
  try {
    checks = check_model_definition(*def, detail::resolve_n(cfg, *def));
  } catch (const std::exception& e) {
    err << "model-check: " << e.what() << '\n';
    return kExitUsage;
  }
  const auto violations = checks.violations(cfg.tol);
  std::ostringstream s;
  if (cfg.format == Format::kJson) {
    s << ordered_json{{"checks", to_json(checks)}, {"violations", violations}, {"passed", violations.empty()}}.dump(2)
      << '\n';
  } else {
    write_csv(s, {"check", "deviation"},
              {{"born", format_number(checks.born)},
               {"parameter_x", format_number(checks.parameter_x)},
               {"parameter_y", format_number(checks.parameter_y)},
               {"free_choice_product", format_number(checks.free_choice_product)},
               {"completeness", format_number(checks.completeness)}});
  }
  detail::emit(cfg, out, s.str());
  detail::report_violations(err, violations);
  return violations.empty() ? kExitOk : kExitFailed;
}

/// Output of the uniqueness command, kept whole so it can be re-read.
struct UniquenessRun {
  int n = 1;
  std::vector<UniquenessReport> reports;
  PsiFunction psi_function;
  bool passed = false;
};

inline ordered_json to_json(const UniquenessRun& run) {
  ordered_json reports = ordered_json::array();
  for (const auto& r : run.reports) reports.push_back(psiont::to_json(r));
  return ordered_json{{"n", run.n},
                      {"reports", reports},
                      {"psi_function", psiont::to_json(run.psi_function)},
                      {"passed", run.passed}};
}

inline UniquenessRun uniqueness_run_from_json(const ordered_json& j) {
  UniquenessRun run;
  run.n = j.at("n").get<int>();
  for (const auto& r : j.at("reports")) run.reports.push_back(report_from_json(r));
  run.psi_function = psi_function_from_json(j.at("psi_function"));
  run.passed = j.at("passed").get<bool>();
  return run;
}

inline UniquenessRun run_uniqueness(const ModelDefinition& def, int n, double tol) {
  UniquenessRun run;
  run.n = n;
  run.reports = run_all_pairs(def, n, tol);
  run.psi_function = build_psi_function(def, run.reports);
  run.passed = run.psi_function.full_measure(tol);
  return run;
}

inline int cmd_uniqueness(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto def = detail::load_or_report(cfg, err);
  if (!def) return kExitUsage;
  UniquenessRun run;
  try {
    run = run_uniqueness(*def, detail::resolve_n(cfg, *def), cfg.tol);
  } catch (const ConditionViolation& e) {
    detail::report_violations(err, e.conditions());
    return kExitFailed;
  } catch (const std::exception& e) {
    err << "uniqueness: " << e.what() << '\n';
    return kExitUsage;
  }
  std::ostringstream s;
  if (cfg.format == Format::kJson) {
    s << to_json(run).dump(2) << '\n';
  } else {
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : run.reports) {
      std::string support;
      for (const auto& l : r.support_set_L) support += (support.empty() ? "" : ";") + l;
      cells.push_back({std::to_string(r.psi), std::to_string(r.psi_prime), std::to_string(r.d), std::to_string(r.k),
                       format_number(r.alpha), format_number(r.gamma), format_number(r.dev_tol), support,
                       format_number(r.measure_on_psi), format_number(r.measure_on_psi_prime),
                       format_number(r.eq9_margin), format_number(r.lemma3_lhs), format_number(r.lemma3_rhs)});
    }
    write_csv(s,
              {"psi", "psi_prime", "d", "k", "alpha", "gamma", "dev_tol", "support_set_L", "measure_on_psi",
               "measure_on_psi_prime", "eq9_margin", "lemma3_lhs", "lemma3_rhs"},
              cells);
    s << '\n';
    std::vector<std::vector<std::string>> f_rows;
    for (std::size_t p = 0; p < run.psi_function.inverse_sets.size(); ++p) {
      for (const auto& l : run.psi_function.inverse_sets[p]) {
        f_rows.push_back({l, std::to_string(p), format_number(run.psi_function.measure[p][p])});
      }
    }
    for (const auto& l : run.psi_function.unmapped) f_rows.push_back({l, "", ""});
    write_csv(s, {"lambda", "psi", "measure_of_preimage"}, f_rows);
  }
  detail::emit(cfg, out, s.str());
  if (!run.passed) err << "uniqueness: f does not carry full measure for every psi\n";
  return run.passed ? kExitOk : kExitFailed;
}

inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    switch (cfg.command) {
      case Command::kBoundTable: return cmd_bound_table(cfg, out, err);
      case Command::kOverlap: return cmd_overlap(cfg, out, err);
      case Command::kVerifyLemmas: return cmd_verify_lemmas(cfg, out, err);
      case Command::kUniqueness: return cmd_uniqueness(cfg, out, err);
      case Command::kModelCheck: return cmd_model_check(cfg, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}

}  // namespace psiont::cli
