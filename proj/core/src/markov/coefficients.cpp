// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/markov/coefficients.hpp"

#include <algorithm>

#include "longrun/error.hpp"

namespace longrun::markov {

double dobrushin_delta(const TransitionKernel& kernel) {
  const auto& p = kernel.rows();
  const Eigen::Index n = p.rows();
  double delta = 0.0;
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index x2 = x + 1; x2 < n; ++x2) {
      // sup_B [P(x,B) - P(x',B)] is the positive part of the row difference.
      const double tv = 0.5 * (p.row(x) - p.row(x2)).cwiseAbs().sum();
      delta = std::max(delta, tv);
    }
  }
  return std::min(delta, 1.0);
}

double kartashov_rho(const TransitionKernel& kernel,
                     const LyapunovWeight& weight) {
  if (weight.size() != kernel.size())
    throw DimensionError("weight and kernel sizes differ");
  const auto& p = kernel.rows();
  const auto& v = weight.values();
  const Eigen::Index n = p.rows();
  double rho = 0.0;
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index x2 = x + 1; x2 < n; ++x2) {
      const double num =
          (v.transpose().array() * (p.row(x) - p.row(x2)).array().abs()).sum();
      rho = std::max(rho, num / (v(x) + v(x2)));
    }
  }
  return rho;
}

}  // namespace longrun::markov
