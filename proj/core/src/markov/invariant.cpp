// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/markov/invariant.hpp"

#include <cmath>

#include <fmt/format.h>

#include "longrun/error.hpp"

namespace longrun::markov {

namespace {

constexpr double kSolveResidualLimit = 1e-10;

bool valid_probability(const Eigen::VectorXd& mu) {
  if (!mu.allFinite()) return false;
  if (mu.minCoeff() < -kSolveResidualLimit) return false;
  return std::abs(mu.sum() - 1.0) <= kSolveResidualLimit;
}

Eigen::VectorXd clean(Eigen::VectorXd mu) {
  mu = mu.cwiseMax(0.0);
  return mu / mu.sum();
}

}  // namespace

Eigen::VectorXd invariant_measure_linear(const TransitionKernel& kernel) {
  const Eigen::Index n = kernel.rows().rows();
  Eigen::MatrixXd a = kernel.rows().transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible())
    throw ErgodicityError("ERd", "invariant-measure system is singular: "
                                 "the invariant law is not unique");
  Eigen::VectorXd mu = lu.solve(rhs);
  const double residual =
      (mu.transpose() * kernel.rows() - mu.transpose()).cwiseAbs().sum();
  if (!valid_probability(mu) || residual > kSolveResidualLimit)
    throw ErgodicityError(
        "ERd", fmt::format("linear solve is ill-conditioned (residual {:.3g})",
                           residual));
  return clean(std::move(mu));
}

Eigen::VectorXd invariant_measure_power(const TransitionKernel& kernel,
                                        const PowerIterationOptions& options,
                                        std::size_t start,
                                        std::uint64_t* iterations) {
  const Eigen::Index n = kernel.rows().rows();
  if (start >= static_cast<std::size_t>(n))
    throw DimensionError("power iteration start state out of range");
  const Eigen::MatrixXd pt = kernel.rows().transpose();
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
  mu(static_cast<Eigen::Index>(start)) = 1.0;
  Eigen::VectorXd next(n);
  for (std::uint64_t it = 1; it <= options.max_iterations; ++it) {
    next.noalias() = pt * mu;
    next /= next.sum();
    const double change = (next - mu).cwiseAbs().sum();
    mu.swap(next);
    if (change <= options.tolerance) {
      if (iterations) *iterations = it;
      return mu;
    }
  }
  if (iterations) *iterations = options.max_iterations;
  throw ErgodicityError(
      "ERd", fmt::format("power iteration did not converge in {} iterations; "
                         "the chain looks periodic or reducible",
                         options.max_iterations));
}

InvariantMeasure invariant_measure(const TransitionKernel& kernel,
                                   const PowerIterationOptions& options) {
  InvariantMeasure result{kernel.space(), {}, InvariantMethod::linear_solve, 0};
  std::uint64_t iterations = 0;
  try {
    result.weights = invariant_measure_linear(kernel);
  } catch (const ErgodicityError&) {
    result.weights = invariant_measure_power(kernel, options, 0, &iterations);
    // A reducible chain converges from each point mass, to different limits.
    const std::size_t last = kernel.size() - 1;
    const Eigen::VectorXd other = invariant_measure_power(kernel, options, last, nullptr);
    const double gap = (other - result.weights).cwiseAbs().sum();
    if (gap > 1e3 * options.tolerance)
      throw ErgodicityError(
          "ERd", fmt::format("power iteration from states 0 and {} disagrees by {:.3g}; "
                             "the chain is reducible",
                             last, gap));
    result.method = InvariantMethod::power_iteration;
    result.power_iterations = iterations;
    return result;
  }
  // Aperiodicity: the chain must actually mix from a point mass.
  invariant_measure_power(kernel, options, 0, &iterations);
  result.power_iterations = iterations;
  return result;
}

}  // namespace longrun::markov
