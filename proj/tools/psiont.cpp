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

#include <CLI11.hpp>

#include "psiont/cli.hpp"

namespace {

using psiont::cli::Command;
using psiont::cli::Format;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"psiont: chained Bell bounds and psi-ontology checks for finite models"};
  app.require_subcommand(1);

  psiont::cli::RunConfig cfg;
  std::string n_text;
  std::string model_n_text;
  std::string d_text;
  std::string format_text = "csv";
  const std::map<std::string, Format> formats{{"csv", Format::kCsv}, {"json", Format::kJson}};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.output_path, "Write output to this file instead of stdout");
    sub->add_option("--format", format_text, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--tol", cfg.tol, "Numeric tolerance")->check(CLI::PositiveNumber);
  };

  auto* bound = app.add_subcommand("bound-table", "Tabulate I_{n,d}, its closed form and pi^2/(6n)");
  bound->add_option("--n", n_text, "Range lo..hi of n")->default_val("1..4");
  bound->add_option("--d", d_text, "Range lo..hi of d")->default_val("2..4");
  add_common(bound);

  auto* overlap = app.add_subcommand("overlap", "Solve (d, k, xi) for a target overlap");
  overlap->add_option("--alpha", cfg.alpha, "Target overlap in [0, 1)")->required();
  add_common(overlap);

  auto* verify = app.add_subcommand("verify-verify", "Randomised total-variation inequality checks");
  verify->add_option("--seed", cfg.seed, "RNG seed")->default_val(0);
  add_common(verify);

  auto* uniq = app.add_subcommand("uniqueness", "Run the pairwise support analysis on a model file");
  uniq->add_option("--model", cfg.model_path, "Model JSON file")->required();
  uniq->add_option("--n", model_n_text, "Override the number of settings");
  add_common(uniq);

  auto* check = app.add_subcommand("model-check", "Check born-rule, free-choice and completeness");
  check->add_option("--model", cfg.model_path, "Model JSON file")->required();
  check->add_option("--n", model_n_text, "Override the number of settings");
  add_common(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : psiont::cli::kExitUsage;
  }

  if (app.got_subcommand(bound)) cfg.command = Command::kBoundTable;
  if (app.got_subcommand(overlap)) cfg.command = Command::kOverlap;
  if (app.got_subcommand(verify)) cfg.command = Command::kVerifyLemmas;
  if (app.got_subcommand(uniq)) cfg.command = Command::kUniqueness;
  if (app.got_subcommand(check)) cfg.command = Command::kModelCheck;
  cfg.format = formats.at(format_text);

  try {
    if (!model_n_text.empty()) {
      cfg.n_range = psiont::cli::parse_range(model_n_text);
      cfg.n_given = true;
    } else if (!n_text.empty()) {
      cfg.n_range = psiont::cli::parse_range(n_text);
    }
    if (!d_text.empty()) cfg.d_range = psiont::cli::parse_range(d_text);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return psiont::cli::kExitUsage;
  }
  return psiont::cli::run(cfg);
}
