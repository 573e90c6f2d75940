// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "longrun/avg/average_reward.hpp"
#include "longrun/markov/weight.hpp"
#include "longrun/sde/kernel_extraction.hpp"

namespace longrun::avg {

/// One line of a sweep table. `sweep_var` is m for convergence sweeps and n
/// for stability sweeps (+inf marks the limit row of a stability sweep).
struct SweepRow {
  double sweep_var = 0.0;
  AverageRewardResult result;
  std::uint64_t seed = 0;
  /// |J_k - J_{k-1}| (convergence) or |J(u_n) - J(u)| (stability).
  std::optional<double> difference;
  /// Error bar of `difference` from paired replicates or paired batches.
  double difference_se = 0.0;
  /// ||mu^{u_n} - mu^u||_V for exact stability sweeps.
  std::optional<double> measure_gap;
};

struct SweepOptions {
  Method method = Method::monte_carlo;
  McOptions mc;
  std::vector<double> x0;       ///< SDE start state (Monte Carlo)
  std::size_t chain_start = 0;  ///< chain start state (Monte Carlo)
  /// Grid and sampling for exact mode on SDE models.
  std::optional<markov::StateSpace> grid;
  std::size_t samples_per_state = 2000;
  std::size_t batches = 8;
  unsigned base_substeps = 16;
  /// Keep the inner Euler step equal across levels (h / substeps at the
  /// finest level) so that levels share their Brownian increments.
  bool couple_levels = true;
};

/// Substeps per control interval at level m when a sweep spans up to m_max.
unsigned substeps_for(unsigned m, unsigned m_max, const SweepOptions& options);

/// J^{2^-m} for each m in `levels` (strictly increasing), with successive
/// differences. Exact mode estimates the unit kernel and C_m on the grid.
std::vector<SweepRow> convergence_sweep(const sde::SDEModel& model,
                                        const sde::MarkovControl& control,
                                        const RewardFunction& reward,
                                        const std::vector<unsigned>& levels,
                                        const SweepOptions& options);

std::vector<SweepRow> convergence_sweep(const ControlledChain& chain,
                                        const ChainControl& control,
                                        const std::vector<unsigned>& levels,
                                        const SweepOptions& options);

using SdeControlFamily = std::function<sde::MarkovControl(std::uint64_t n)>;
using ChainControlFamily = std::function<ChainControl(std::uint64_t n)>;

/// J^m(u_n) for n in `indices` followed by the limit row J^m(u).
std::vector<SweepRow> stability_sweep(const sde::SDEModel& model,
                                      const SdeControlFamily& family,
                                      const sde::MarkovControl& limit,
                                      const RewardFunction& reward, unsigned m,
                                      const std::vector<std::uint64_t>& indices,
                                      const SweepOptions& options);

/// Exact mode also reports ||mu^{u_n} - mu^u||_V under `weight` (unit
/// weight when omitted).
std::vector<SweepRow> stability_sweep(
    const ControlledChain& chain, const ChainControlFamily& family,
    const ChainControl& limit, unsigned m,
    const std::vector<std::uint64_t>& indices, const SweepOptions& options,
    const std::optional<markov::LyapunovWeight>& weight = std::nullopt);

}  // namespace longrun::avg
