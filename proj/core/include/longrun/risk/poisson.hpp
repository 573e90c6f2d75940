// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "longrun/risk/tilted_kernel.hpp"

namespace longrun::risk {

/// (Psi g)(x) = (1/alpha) log sum_y M(x, y) exp(alpha g(y)), evaluated with
/// log-sum-exp.
Eigen::VectorXd psi_apply(const TiltedKernel& kernel, const Eigen::VectorXd& g);

struct RiskParams {
  double alpha = -1.0;
  double tolerance = 1e-10;       ///< on the span residual ||Psi g - g||_sp
  std::uint64_t max_iterations = 100'000;
  std::size_t x_ref = 0;

  void validate(std::size_t states) const;
};

/// Solution (lambda, w) of e^{alpha w} = e^{-alpha lambda} M e^{alpha w},
/// normalized by w(x_ref) = 0.
struct PoissonSolution {
  double lambda = 0.0;
  Eigen::VectorXd w;
  double span_w = 0.0;
  std::uint64_t iterations = 0;
  /// max_x |Psi w(x) - w(x) - lambda|
  double residual = 0.0;
  /// Geometric mean of successive span-residual ratios over the last
  /// iterations; a measured stand-in for the contraction modulus.
  double contraction = 0.0;
};

/// Relative fixed-point iteration g <- Psi g - (Psi g)(x_ref) from g = 0.
/// Throws ConvergenceError (with the last residual and measured contraction)
/// after params.max_iterations. The kernel's alpha must equal params.alpha.
PoissonSolution solve_poisson(const TiltedKernel& kernel, const RiskParams& params);

struct PerronOptions {
  double tolerance = 1e-13;  ///< L1 change of the normalized iterate
  std::uint64_t max_iterations = 1'000'000;
};

struct PerronResult {
  double lambda = 0.0;              ///< (1/alpha) log rho(M)
  double log_spectral_radius = 0.0;
  std::uint64_t iterations = 0;
};

/// Power iteration on M with L1 normalization, sharing no numerics with
/// solve_poisson. Throws ConvergenceError when the iterate does not settle
/// (periodic or reducible M).
PerronResult perron_oracle(const TiltedKernel& kernel, const PerronOptions& options = {});

struct FiniteHorizonRow {
  std::uint64_t k = 0;
  double max_gap = 0.0;  ///< max_x |(1/(alpha k)) log (M^k 1)(x) - lambda|
  double bound = 0.0;    ///< 2 ||w||_sp / k
  bool pass = false;
  Eigen::VectorXd estimate;
};

/// Finite-horizon values from M^k 1 (per-step renormalized, log factor
/// accumulated) against the Poisson solution. `ks` must be increasing.
std::vector<FiniteHorizonRow> finite_horizon_gap(const TiltedKernel& kernel,
                                                 const PoissonSolution& solution,
                                                 const std::vector<std::uint64_t>& ks);

}  // namespace longrun::risk
