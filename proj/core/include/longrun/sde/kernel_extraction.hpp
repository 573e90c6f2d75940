// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "longrun/markov/kernel.hpp"
#include "longrun/markov/state_space.hpp"
#include "longrun/reward.hpp"
#include "longrun/sde/path.hpp"

namespace longrun::sde {

/// Tensor grid over a box with `nodes_per_axis` equispaced nodes per axis
/// (endpoints included). Labels are the node coordinates.
markov::StateSpace make_grid(const Box& box, std::size_t nodes_per_axis);

/// Index of the grid node nearest to x; ties go to the lower index.
std::size_t nearest_node(const markov::StateSpace& grid,
                         std::span<const double> x);

/// Outcome of one simulated unit-time block.
struct UnitBlock {
  std::uint32_t end_node = 0;
  double reward_sum = 0.0;  ///< sum_{i<2^m} 2^-m c(X_{i 2^-m}, u(X_{i 2^-m}))
};

/// Unit-time blocks started from every grid node: blocks[x][r] uses stream
/// (seed, x, r), so results do not depend on `threads`.
struct UnitBlockSample {
  markov::StateSpace grid;
  unsigned m = 0;
  std::vector<std::vector<UnitBlock>> blocks;

  std::size_t samples_per_state() const noexcept {
    return blocks.empty() ? 0 : blocks.front().size();
  }
};

/// Requires a box-domain model and a grid inside its box (ConfigError
/// otherwise). `reward` may be null when only endpoints are needed.
UnitBlockSample sample_unit_blocks(const SDEModel& model,
                                   const MarkovControl& control,
                                   const RewardFunction* reward,
                                   const markov::StateSpace& grid,
                                   const DiscretizationLevel& level,
                                   std::size_t samples_per_state,
                                   std::uint64_t seed, unsigned threads = 1);

/// Row x is the empirical law of the nearest node to X_1 started from node x.
/// Rows are exactly stochastic (counts divided by the sample count).
markov::TransitionKernel empirical_unit_kernel(const UnitBlockSample& sample);
markov::TransitionKernel empirical_unit_kernel(
    const SDEModel& model, const MarkovControl& control,
    const markov::StateSpace& grid, const DiscretizationLevel& level,
    std::size_t samples_per_state, std::uint64_t seed, unsigned threads = 1);

/// Per-node sample mean of the unit-block reward sums (C_m on the grid).
Eigen::VectorXd unit_reward_means(const UnitBlockSample& sample);

/// Restriction of the sample to replicates r with r % batches == batch.
UnitBlockSample batch_of(const UnitBlockSample& sample, std::size_t batch,
                         std::size_t batches);

}  // namespace longrun::sde
