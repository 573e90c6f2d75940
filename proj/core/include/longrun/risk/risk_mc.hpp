// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "longrun/avg/average_reward.hpp"

namespace longrun::risk {

struct RiskMcResult {
  double value = 0.0;
  double std_error = 0.0;  ///< bootstrap over replicates
  double effective_sample_size = 0.0;
  std::optional<std::string> warning;
};

struct RiskMcOptions {
  double horizon = 50.0;
  std::size_t replicates = 256;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t bootstrap = 200;
  /// ESS below this raises the weight-collapse warning.
  double min_ess = 10.0;
};

/// (1/(alpha T)) log mean_r exp(alpha S_r) from per-replicate reward sums
/// S_r over [0, T].
RiskMcResult risk_from_sums(std::span<const double> sums, double alpha,
                            const RiskMcOptions& options);

RiskMcResult risk_mc(const sde::SDEModel& model, const sde::MarkovControl& control,
                     const RewardFunction& reward, const sde::DiscretizationLevel& level,
                     std::span<const double> x0, double alpha,
                     const RiskMcOptions& options);

RiskMcResult risk_mc(const avg::ControlledChain& chain, const avg::ChainControl& control,
                     unsigned m, std::size_t x0, double alpha,
                     const RiskMcOptions& options);

}  // namespace longrun::risk
