// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "longrun/avg/chain.hpp"
#include "longrun/markov/invariant.hpp"
#include "longrun/reward.hpp"
#include "longrun/sde/path.hpp"

namespace longrun::avg {

enum class Method { exact_invariant, monte_carlo };

std::string to_string(Method method);

struct AverageRewardResult {
  double value = 0.0;
  Method method = Method::exact_invariant;
  double std_error = 0.0;
  unsigned m = 0;
  std::string control_id;
};

/// J^m = sum_x mu_m(x) C_m(x) with mu_m the invariant law of the unit-time
/// kernel. Independent of the start state. Propagates ErgodicityError.
AverageRewardResult average_reward_exact(const markov::TransitionKernel& unit,
                                         const Eigen::VectorXd& aggregate,
                                         unsigned m = 0,
                                         std::string control_id = {});

struct McOptions {
  double horizon = 200.0;
  std::size_t replicates = 64;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// Fraction of each path discarded before averaging.
  double burn_in = 0.2;
};

/// Time average of h c(X_ih, u(X_ih)) after burn-in, one value per
/// replicate r (stream (seed, 0, r)).
std::vector<double> average_reward_replicates(
    const sde::SDEModel& model, const sde::MarkovControl& control,
    const RewardFunction& reward, const sde::DiscretizationLevel& level,
    std::span<const double> x0, const McOptions& options);

std::vector<double> average_reward_replicates(const ControlledChain& chain,
                                              const ChainControl& control,
                                              unsigned m, std::size_t x0,
                                              const McOptions& options);

/// Mean over replicates with the replicate standard error.
AverageRewardResult average_reward_mc(const sde::SDEModel& model,
                                      const sde::MarkovControl& control,
                                      const RewardFunction& reward,
                                      const sde::DiscretizationLevel& level,
                                      std::span<const double> x0,
                                      const McOptions& options);

AverageRewardResult average_reward_mc(const ControlledChain& chain,
                                      const ChainControl& control, unsigned m,
                                      std::size_t x0, const McOptions& options);

}  // namespace longrun::avg
