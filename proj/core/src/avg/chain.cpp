// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/avg/chain.hpp"

#include <cmath>

#include <fmt/format.h>

#include "longrun/error.hpp"

namespace longrun::avg {

ControlledChain::ControlledChain(markov::StateSpace space_, Eigen::MatrixXd base_,
                                 Eigen::VectorXd reward_base_,
                                 std::optional<Eigen::MatrixXd> alt_,
                                 std::optional<Eigen::VectorXd> reward_slope_)
    : space(std::move(space_)),
      base(std::move(base_)),
      alt(std::move(alt_)),
      reward_base(std::move(reward_base_)) {
  const auto n = static_cast<Eigen::Index>(space.size());
  // Constructing kernels validates stochasticity of both matrices.
  markov::TransitionKernel(space, base);
  if (alt) markov::TransitionKernel(space, *alt);
  if (reward_base.size() != n)
    throw DimensionError("chain reward table must have one entry per state");
  reward_slope = reward_slope_ ? std::move(*reward_slope_) : Eigen::VectorXd::Zero(n);
  if (reward_slope.size() != n)
    throw DimensionError("chain reward slope must have one entry per state");
}

void ControlledChain::check_control(const ChainControl& control) const {
  if (static_cast<std::size_t>(control.values.size()) != space.size())
    throw DimensionError("chain control must give one value per state");
  for (Eigen::Index x = 0; x < control.values.size(); ++x) {
    const double a = control.values(x);
    if (!std::isfinite(a) || (alt && (a < 0.0 || a > 1.0)))
      throw DomainError(fmt::format("control '{}' value {} at state {} is outside U = [0,1]",
                                    control.id, a, x));
  }
}

markov::TransitionKernel ControlledChain::substep_kernel(const ChainControl& control,
                                                         unsigned m) const {
  check_control(control);
  Eigen::MatrixXd rows = base;
  if (alt) {
    for (Eigen::Index x = 0; x < rows.rows(); ++x) {
      const double a = control.values(x);
      rows.row(x) = (1.0 - a) * base.row(x) + a * alt->row(x);
    }
  }
  return markov::TransitionKernel(space, std::move(rows),
                                  markov::StepLength(1, std::int64_t{1} << m));
}

Eigen::VectorXd ControlledChain::reward(const ChainControl& control) const {
  check_control(control);
  return reward_base + reward_slope.cwiseProduct(control.values);
}

double ControlledChain::reward_bound() const {
  // On a = 0 and a = 1 (the extremes of an affine reward).
  double bound = reward_base.cwiseAbs().maxCoeff();
  if (alt) bound = std::max(bound, (reward_base + reward_slope).cwiseAbs().maxCoeff());
  return bound;
}

markov::TransitionKernel unit_kernel(const markov::TransitionKernel& substep,
                                     unsigned m) {
  markov::TransitionKernel k = substep;
  for (unsigned i = 0; i < m; ++i) k = markov::compose(k, k);
  return k;
}

Eigen::VectorXd unit_aggregate(const markov::TransitionKernel& substep,
                               const Eigen::VectorXd& reward, unsigned m) {
  if (static_cast<std::size_t>(reward.size()) != substep.size())
    throw DimensionError("reward length does not match the kernel");
  const std::uint64_t steps = std::uint64_t{1} << m;
  Eigen::VectorXd term = reward;
  Eigen::VectorXd total = Eigen::VectorXd::Zero(reward.size());
  for (std::uint64_t i = 0; i < steps; ++i) {
    total += term;
    if (i + 1 < steps) term = substep.rows() * term;
  }
  return std::ldexp(1.0, -static_cast<int>(m)) * total;
}

}  // namespace longrun::avg
