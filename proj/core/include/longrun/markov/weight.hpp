// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace longrun::markov {

/// Lyapunov weight V >= 1 defining the weighted norms.
class LyapunovWeight {
 public:
  explicit LyapunovWeight(Eigen::VectorXd values);

  /// V == 1 on n states.
  static LyapunovWeight unit(std::size_t n);

  const Eigen::VectorXd& values() const noexcept { return values_; }
  double operator()(std::size_t x) const { return values_(x); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }

 private:
  Eigen::VectorXd values_;
};

/// Function bundled with the weight its norm is measured against.
struct WeightedFn {
  Eigen::VectorXd values;
  LyapunovWeight weight;
};

/// ||f||_V = max_x |f(x)| / V(x).
double v_norm_fn(const WeightedFn& f);
double v_norm_fn(const Eigen::VectorXd& f, const LyapunovWeight& weight);

/// ||nu1 - nu2||_V for signed measures on a finite space, via the closed
/// form sum_x V(x) |nu1(x) - nu2(x)| (the dual sup is attained at f = +-V).
double v_norm_measure_diff(const Eigen::VectorXd& nu1,
                           const Eigen::VectorXd& nu2,
                           const LyapunovWeight& weight);

/// max g - min g.
double span_seminorm(const Eigen::VectorXd& g);

}  // namespace longrun::markov
