// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "longrun/markov/kernel.hpp"

namespace longrun::avg {

/// Per-state control values a(x) of a finite controlled chain.
struct ChainControl {
  std::string id;
  Eigen::VectorXd values;
};

/// Finite controlled chain used as its own simulator.
///
/// The 2^-m-step kernel at control a mixes two stochastic matrices row by row,
///   P_a(x, .) = (1 - a(x)) base(x, .) + a(x) alt(x, .),   a(x) in [0, 1],
/// and the reward is c(x, a) = reward_base(x) + reward_slope(x) a(x).
/// Without `alt` the kernel ignores the control.
struct ControlledChain {
  markov::StateSpace space;
  Eigen::MatrixXd base;
  std::optional<Eigen::MatrixXd> alt;
  Eigen::VectorXd reward_base;
  Eigen::VectorXd reward_slope;

  ControlledChain(markov::StateSpace space, Eigen::MatrixXd base,
                  Eigen::VectorXd reward_base,
                  std::optional<Eigen::MatrixXd> alt = std::nullopt,
                  std::optional<Eigen::VectorXd> reward_slope = std::nullopt);

  void check_control(const ChainControl& control) const;
  /// Substep kernel under `control`, with step 2^-m.
  markov::TransitionKernel substep_kernel(const ChainControl& control,
                                          unsigned m) const;
  /// c_u(x) = c(x, u(x)).
  Eigen::VectorXd reward(const ChainControl& control) const;
  /// sup |c| over states and admissible controls.
  double reward_bound() const;
};

/// Unit-time kernel P^(2^m) of a 2^-m-step kernel.
markov::TransitionKernel unit_kernel(const markov::TransitionKernel& substep,
                                     unsigned m);

/// C_m(x) = sum_{i < 2^m} 2^-m (P^i c_u)(x), exactly.
Eigen::VectorXd unit_aggregate(const markov::TransitionKernel& substep,
                               const Eigen::VectorXd& reward, unsigned m);

}  // namespace longrun::avg
