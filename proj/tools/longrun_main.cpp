// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

// longrun: audit, average-reward and risk-sensitive sweeps from a config.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "longrun/experiments/commands.hpp"
#include "longrun/util/parallel.hpp"
#include "longrun/version.hpp"

namespace ex = longrun::experiments;

int main(int argc, char** argv) {
  CLI::App app{"Long-run average and risk-sensitive evaluation of sampled-control models"};
  app.set_version_flag("--version", std::string(longrun::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  unsigned threads = 1;
  app.add_option("--config", config_path, "Experiment config (JSON)");
  app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--threads", threads, "Worker threads (0 = all cores); results do not depend on it");

  auto* audit = app.add_subcommand("audit", "Certify ergodicity conditions of the kernel family");
  auto* avg = app.add_subcommand("avg", "Average-reward sweep");
  auto* risk = app.add_subcommand("risk", "Risk-sensitive sweep");
  auto* manifest = app.add_subcommand("manifest", "Checksum manifest of an output directory");

  // Global flags may follow the subcommand.
  for (auto* sub : {audit, avg, risk, manifest}) sub->fallthrough();

  ex::Overrides overrides;
  risk->add_option("--alpha", overrides.alpha, "Risk factor (replaces the config list)");
  risk->add_option("--tol", overrides.tolerance, "Span-residual tolerance");
  risk->add_option("--max-iters", overrides.max_iterations, "Iteration cap");
  risk->add_option("--x-ref", overrides.x_ref, "Reference state index");
  bool verify = false;
  manifest->add_flag("--verify", verify, "Check files against an existing manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ex::kExitOk : ex::kExitUsage;
  }

  try {
    threads = longrun::util::resolve_threads(threads);
    overrides.seed = seed;
    overrides.out_dir = out_dir;
    if (manifest->parsed()) {
      ex::ManifestRequest request;
      if (!config_path.empty()) request.config = config_path;
      request.seed = seed;
      request.verify = verify;
      if (out_dir) {
        request.dir = *out_dir;
      } else if (request.config) {
        request.dir = ex::output_dir(ex::load_config(*request.config));
      } else {
        std::cerr << "manifest: --out or --config is required\n";
        return ex::kExitUsage;
      }
      return ex::cmd_manifest(request, std::cout);
    }
    if (config_path.empty()) {
      std::cerr << "--config is required\n";
      return ex::kExitUsage;
    }
    const auto config = ex::apply_overrides(ex::load_config(config_path), overrides);
    if (audit->parsed()) return ex::cmd_audit(config, threads, std::cout);
    if (avg->parsed()) return ex::cmd_avg(config, threads, std::cout);
    return ex::cmd_risk(config, threads, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ex::exit_code_for(e);
  }
}
