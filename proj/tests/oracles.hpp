// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

// Reference computations for tests. Nothing here calls the library's
// numerical paths; the dense eigen solves stand on their own.

#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace longrun::testing {

using Rng = std::mt19937_64;

/// Random row-stochastic n x n matrix; entries are zeroed with probability
/// `zero_prob` but the diagonal and the cycle x -> x+1 stay positive, so the
/// chain is irreducible and aperiodic.
Eigen::MatrixXd random_ergodic(Rng& rng, int n, double zero_prob = 0.3);

/// Dense positive stochastic matrix (all entries > 0).
Eigen::MatrixXd random_positive(Rng& rng, int n);

Eigen::VectorXd random_vector(Rng& rng, int n, double lo, double hi);

/// Left eigenvector of P for the eigenvalue closest to 1, normalized.
Eigen::VectorXd stationary_eig(const Eigen::MatrixXd& p);

/// max |eigenvalue| of a square matrix.
double spectral_radius_eig(const Eigen::MatrixXd& m);

/// prod_{i < 2^m} diag(exp(alpha 2^-m c)) P, in plain linear arithmetic.
Eigen::MatrixXd tilted_linear(const Eigen::MatrixXd& p_sub, const Eigen::VectorXd& c,
                              double alpha, unsigned m);

/// Exact long-run average of a finite chain at level m:
/// mu_m . sum_{i<2^m} 2^-m P^i c, with mu_m from stationary_eig(P^(2^m)).
double average_reward_eig(const Eigen::MatrixXd& p_sub, const Eigen::VectorXd& c, unsigned m);

}  // namespace longrun::testing
