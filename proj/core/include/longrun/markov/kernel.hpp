// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include <Eigen/Dense>
#include <boost/rational.hpp>

#include "longrun/markov/state_space.hpp"

namespace longrun::markov {

/// Time covered by one application of a kernel, e.g. 1 or 2^-m.
using StepLength = boost::rational<std::int64_t>;

/// Largest row-sum deviation accepted without touching the data.
inline constexpr double kStochasticTolerance = 1e-12;
/// Rows deviating by less than this (but more than the tolerance above) are
/// renormalized; anything larger is rejected.
inline constexpr double kRenormalizeLimit = 1e-9;

/// Row-stochastic matrix over a finite state space.
class TransitionKernel {
 public:
  /// Throws InvalidArgument for entries outside [0,1], rows that are not
  /// stochastic, or a non-positive step; DimensionError on a shape mismatch.
  TransitionKernel(StateSpace space, Eigen::MatrixXd rows,
                   StepLength step = StepLength(1));

  static TransitionKernel identity(StateSpace space,
                                   StepLength step = StepLength(1));

  const StateSpace& space() const noexcept { return space_; }
  const Eigen::MatrixXd& rows() const noexcept { return rows_; }
  double operator()(std::size_t x, std::size_t y) const { return rows_(x, y); }
  std::size_t size() const noexcept { return space_.size(); }
  StepLength step() const noexcept { return step_; }

  /// (Kf)(x) = sum_y K(x,y) f(y).
  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;

 private:
  StateSpace space_;
  Eigen::MatrixXd rows_;
  StepLength step_;
};

/// Two-step kernel K1 followed by K2.
TransitionKernel compose(const TransitionKernel& first,
                         const TransitionKernel& second);

/// n-fold composition; n >= 1.
TransitionKernel power(const TransitionKernel& kernel, unsigned n);

}  // namespace longrun::markov
