// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include "longrun/markov/kernel.hpp"
#include "longrun/sde/kernel_extraction.hpp"

namespace longrun::risk {

/// Nonnegative matrix
///   M(x, y) = E_x[ exp(alpha sum_{i<2^m} 2^-m c(X_{i 2^-m}, u(X_{i 2^-m})))
///                  1{X_1 = y} ].
///
/// Stored as M(x, y) = exp(row_log_scale(x)) * scaled(x, y), so exponents
/// far outside double range stay representable.
class TiltedKernel {
 public:
  TiltedKernel(markov::StateSpace space, Eigen::MatrixXd scaled,
               Eigen::VectorXd row_log_scale, double alpha, unsigned m);

  const markov::StateSpace& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return space_.size(); }
  double alpha() const noexcept { return alpha_; }
  unsigned m() const noexcept { return m_; }

  const Eigen::MatrixXd& scaled() const noexcept { return scaled_; }
  const Eigen::VectorXd& row_log_scale() const noexcept { return row_log_scale_; }
  /// log M(x, y); -inf where M(x, y) = 0.
  const Eigen::MatrixXd& log_entries() const noexcept { return log_entries_; }

  /// M(x, y) in linear scale (may overflow to inf for extreme tilts).
  double entry(std::size_t x, std::size_t y) const;
  Eigen::MatrixXd dense() const;
  /// log sum_y M(x, y) = log E_x[exp(alpha * unit reward)].
  double log_row_sum(std::size_t x) const;

 private:
  markov::StateSpace space_;
  Eigen::MatrixXd scaled_;
  Eigen::VectorXd row_log_scale_;
  Eigen::MatrixXd log_entries_;
  double alpha_;
  unsigned m_;
};

/// Exact construction from the 2^-m-step kernel and c_u(x) = c(x, u(x)):
/// M = prod_{i=1}^{2^m} (D P) with D = diag(exp(alpha 2^-m c_u)), the reward
/// weight taken at the pre-transition state.
TiltedKernel build_tilted_kernel(const markov::TransitionKernel& substep,
                                 const Eigen::VectorXd& reward, double alpha,
                                 unsigned m);

/// Monte-Carlo construction from simulated unit blocks:
/// M(x, y) = mean_r exp(alpha S_r) 1{end_r = y}.
TiltedKernel build_tilted_kernel(const sde::UnitBlockSample& sample, double alpha);

}  // namespace longrun::risk
