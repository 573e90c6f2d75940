// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "longrun/markov/kernel.hpp"

namespace longrun::markov {

enum class InvariantMethod { linear_solve, power_iteration };

struct InvariantMeasure {
  StateSpace space;
  Eigen::VectorXd weights;
  InvariantMethod method = InvariantMethod::linear_solve;
  /// Power iterations spent confirming (or computing) the measure.
  std::uint64_t power_iterations = 0;
};

struct PowerIterationOptions {
  double tolerance = 1e-12;          ///< L1 change between iterates
  std::uint64_t max_iterations = 1'000'000;
};

/// Unique invariant law of an ergodic kernel.
///
/// The dense solve of (K^T - I) mu = 0 with one equation replaced by
/// sum(mu) = 1 is the primary path. Power iteration from a point mass runs
/// either as the fallback (singular or invalid solve) or as the aperiodicity
/// check on a successful solve; non-convergence raises ErgodicityError
/// naming (ERd). Periodicity is detected only through that non-convergence.
InvariantMeasure invariant_measure(const TransitionKernel& kernel,
                                   const PowerIterationOptions& options = {});

/// Dense-solve path alone; throws ErgodicityError when singular.
Eigen::VectorXd invariant_measure_linear(const TransitionKernel& kernel);

/// Power-iteration path alone, started from the point mass at `start`.
Eigen::VectorXd invariant_measure_power(const TransitionKernel& kernel,
                                        const PowerIterationOptions& options = {},
                                        std::size_t start = 0,
                                        std::uint64_t* iterations = nullptr);

}  // namespace longrun::markov
