// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "longrun/experiments/config.hpp"

namespace longrun::experiments {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitFailure = 2 };

/// Command-line overrides applied on top of a config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> alpha;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> max_iterations;
  std::optional<std::size_t> x_ref;
};

ExperimentConfig apply_overrides(ExperimentConfig config, const Overrides& overrides);

/// Output directory of a resolved config ("longrun-out" when unset).
std::filesystem::path output_dir(const ExperimentConfig& config);

/// Each command writes its CSVs under output_dir(config), echoes a short
/// summary to `log`, and returns an ExitCode. Library errors propagate.
int cmd_audit(const ExperimentConfig& config, unsigned threads, std::ostream& log);
int cmd_avg(const ExperimentConfig& config, unsigned threads, std::ostream& log);
int cmd_risk(const ExperimentConfig& config, unsigned threads, std::ostream& log);

struct ManifestRequest {
  std::filesystem::path dir;
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  bool verify = false;
};

/// Writes dir/manifest.json (or checks it when `verify`). The timestamp is
/// taken from SOURCE_DATE_EPOCH when set, so manifests can be reproduced.
int cmd_manifest(const ManifestRequest& request, std::ostream& log);

/// 1 for configuration and input errors, 2 for numerical or ergodicity
/// failures.
int exit_code_for(const std::exception& error) noexcept;

}  // namespace longrun::experiments
