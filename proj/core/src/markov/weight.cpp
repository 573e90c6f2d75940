// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/markov/weight.hpp"

#include <cmath>

#include <fmt/format.h>

#include "longrun/error.hpp"

namespace longrun::markov {

LyapunovWeight::LyapunovWeight(Eigen::VectorXd values)
    : values_(std::move(values)) {
  if (values_.size() == 0) throw InvalidArgument("weight must be nonempty");
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!(values_(i) >= 1.0) || !std::isfinite(values_(i)))
      throw InvalidArgument(
          fmt::format("Lyapunov weight V({}) = {} must be >= 1", i, values_(i)));
  }
}

LyapunovWeight LyapunovWeight::unit(std::size_t n) {
  return LyapunovWeight(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)));
}

double v_norm_fn(const Eigen::VectorXd& f, const LyapunovWeight& weight) {
  if (static_cast<std::size_t>(f.size()) != weight.size())
    throw DimensionError("function and weight sizes differ");
  return (f.array().abs() / weight.values().array()).maxCoeff();
}

double v_norm_fn(const WeightedFn& f) { return v_norm_fn(f.values, f.weight); }

double v_norm_measure_diff(const Eigen::VectorXd& nu1,
                           const Eigen::VectorXd& nu2,
                           const LyapunovWeight& weight) {
  if (nu1.size() != nu2.size() ||
      static_cast<std::size_t>(nu1.size()) != weight.size())
    throw DimensionError("measures and weight must share one state space");
  return (weight.values().array() * (nu1 - nu2).array().abs()).sum();
}

double span_seminorm(const Eigen::VectorXd& g) {
  if (g.size() == 0) return 0.0;
  return g.maxCoeff() - g.minCoeff();
}

}  // namespace longrun::markov
