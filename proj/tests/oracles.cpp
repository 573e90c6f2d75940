// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace longrun::testing {

Eigen::MatrixXd random_ergodic(Rng& rng, int n, double zero_prob) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd p(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const bool keep = y == x || y == (x + 1) % n || u(rng) >= zero_prob;
      p(x, y) = keep ? 0.05 + u(rng) : 0.0;
    }
    p.row(x) /= p.row(x).sum();
  }
  return p;
}

Eigen::MatrixXd random_positive(Rng& rng, int n) { return random_ergodic(rng, n, 0.0); }

Eigen::VectorXd random_vector(Rng& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

Eigen::VectorXd stationary_eig(const Eigen::MatrixXd& p) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(p.transpose());
  int best = 0;
  for (int i = 1; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()(i) - 1.0) < std::abs(es.eigenvalues()(best) - 1.0)) best = i;
  }
  Eigen::VectorXd v = es.eigenvectors().col(best).real();
  return v / v.sum();
}

double spectral_radius_eig(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd tilted_linear(const Eigen::MatrixXd& p_sub, const Eigen::VectorXd& c,
                              double alpha, unsigned m) {
  const double h = std::ldexp(1.0, -static_cast<int>(m));
  Eigen::MatrixXd dp = (alpha * h * c.array()).exp().matrix().asDiagonal() * p_sub;
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(p_sub.rows(), p_sub.cols());
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << m); ++i) out = out * dp;
  return out;
}

double average_reward_eig(const Eigen::MatrixXd& p_sub, const Eigen::VectorXd& c, unsigned m) {
  const double h = std::ldexp(1.0, -static_cast<int>(m));
  Eigen::MatrixXd pi = Eigen::MatrixXd::Identity(p_sub.rows(), p_sub.cols());
  Eigen::VectorXd agg = Eigen::VectorXd::Zero(c.size());
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << m); ++i) {
    agg += h * (pi * c);
    pi = pi * p_sub;
  }
  return stationary_eig(pi).dot(agg);
}

}  // namespace longrun::testing
