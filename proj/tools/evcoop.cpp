// Copyright 2026 The evcoop Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// evcoop: coalition costs, Core/Shapley analysis, benchmarks and sweeps.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

#include "evcoop.hpp"

int main(int argc, char** argv) {
  CLI::App app{"EV fleet aggregator cooperation engine"};
  app.require_subcommand(1);

  evcoop::RunConfig cfg;
  std::string out_dir;
  long long node_budget = cfg.solve.node_budget;
  double time_budget = 0.0;
  std::string solve_log;

  auto common = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("input", cfg.input, what)->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (default: out)");
    sub->add_option("--node-budget", node_budget, "branch-and-bound node budget per solve")
        ->check(CLI::PositiveNumber);
    sub->add_option("--time-budget", time_budget, "seconds per solve (0 = none)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--solve-log", solve_log, "write solver progress ticks to this file");
  };

  auto* game = app.add_subcommand("game", "characteristic function, Shapley and Core");
  common(game, "scenario file");
  std::string cfn_override;
  game->add_option("--cfn-override", cfn_override,
                   "use coalition values from this characteristic-function file")
      ->check(CLI::ExistingFile);

  auto* bench = app.add_subcommand("bench", "aggregator-aware or aggregator-blind benchmark");
  common(bench, "scenario file");
  std::string mode = "aware";
  long long samples = 0;
  bench->add_option("--mode", mode, "aware or blind")
      ->check(CLI::IsMember({"aware", "blind"}));
  bench->add_option("--samples", samples, "Monte Carlo samples (aware; default exact)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", cfg.seed, "Monte Carlo seed");

  auto* sweep = app.add_subcommand("sweep", "grand-coalition energy over (J, n)");
  common(sweep, "sweep spec file");

  auto* shap = app.add_subcommand("shapley", "Shapley value and Core of a characteristic-function file");
  shap->add_option("input", cfg.input, "characteristic-function file")
      ->required()
      ->check(CLI::ExistingFile);
  shap->add_option("--out", out_dir, "also write shapley.csv and core files here");

  evcoop::IngestConfig ing;
  auto* ingest = app.add_subcommand("ingest", "trip CSV to scenario requests");
  ingest->add_option("csv", ing.csv, "trip records")->required()->check(CLI::ExistingFile);
  ingest->add_option("--scenario", ing.scenario, "scenario with geolocated nodes")
      ->required()
      ->check(CLI::ExistingFile);
  ingest->add_option("--window-start", ing.window_start, "YYYY-MM-DD HH:MM[:SS], UTC")->required();
  ingest->add_option("--window-end", ing.window_end, "YYYY-MM-DD HH:MM[:SS], UTC")->required();
  std::vector<double> bbox;
  ingest->add_option("--bbox", bbox, "min_lat max_lat min_lon max_lon")->expected(4);
  ingest->add_option("--distance-column", ing.columns.trip_distance, "empty to ignore");
  ingest->add_option("--km-per-unit", ing.columns.km_per_distance_unit, "1.609344 for miles");
  ingest->add_option("--out", out_dir, "write requests.scn and ingest_report.txt here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : evcoop::kExitUsage;
  }

  if (!out_dir.empty()) cfg.out_dir = out_dir;
  cfg.solve.node_budget = node_budget;
  cfg.solve.time_budget_seconds = time_budget;
  std::unique_ptr<std::ofstream> log;
  if (!solve_log.empty()) {
    log = std::make_unique<std::ofstream>(solve_log);
    cfg.solve.log = log.get();
  }
  if (!cfn_override.empty()) cfg.cfn_override = cfn_override;
  cfg.mode = mode == "blind" ? evcoop::BenchMode::kBlind : evcoop::BenchMode::kAware;
  if (samples > 0) cfg.samples = samples;

  try {
    if (*game) return evcoop::cmd_game(cfg, std::cout, std::cerr);
    if (*bench) return evcoop::cmd_bench(cfg, std::cout, std::cerr);
    if (*sweep) return evcoop::cmd_sweep(cfg, std::cout, std::cerr);
    if (*shap) return evcoop::cmd_shapley_file(cfg, std::cout, std::cerr);
    if (*ingest) {
      if (bbox.size() == 4) ing.box = {bbox[0], bbox[1], bbox[2], bbox[3]};
      if (!out_dir.empty()) ing.out_dir = out_dir;
      return evcoop::cmd_ingest(ing, std::cout, std::cerr);
    }
  } catch (const evcoop::Error& e) {
    std::cerr << evcoop::to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == evcoop::Errc::kEmptyCore ? evcoop::kExitEmptyCore : evcoop::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return evcoop::kExitUsage;
  }
  return evcoop::kExitUsage;
}
