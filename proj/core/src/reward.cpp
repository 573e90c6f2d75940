// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/reward.hpp"

#include <cmath>

#include <fmt/format.h>

#include "longrun/error.hpp"

namespace longrun {

RewardFunction::RewardFunction(std::string id, Fn fn, BoundKind kind,
                               double bound, WeightFn weight)
    : id_(std::move(id)),
      fn_(std::move(fn)),
      kind_(kind),
      bound_(bound),
      weight_(std::move(weight)) {
  if (!fn_) throw InvalidArgument("reward function is empty");
  if (!(bound_ >= 0.0)) throw InvalidArgument("reward bound must be >= 0");
}

RewardFunction RewardFunction::bounded(std::string id, Fn fn, double bound) {
  return RewardFunction(std::move(id), std::move(fn), BoundKind::bounded, bound,
                        {});
}

RewardFunction RewardFunction::v_dominated(std::string id, Fn fn, double bound,
                                           WeightFn weight) {
  if (!weight) throw InvalidArgument("V-dominated reward needs a weight");
  return RewardFunction(std::move(id), std::move(fn), BoundKind::v_dominated,
                        bound, std::move(weight));
}

double RewardFunction::operator()(std::span<const double> x,
                                  std::span<const double> a) const {
  const double value = fn_(x, a);
  double limit = bound_;
  if (kind_ == BoundKind::v_dominated) limit *= weight_(x);
  if (!(std::abs(value) <= limit * (1.0 + 1e-12))) {
    throw DomainError(fmt::format("reward '{}' = {} exceeds its declared bound {}",
                                  id_, value, limit));
  }
  return value;
}

}  // namespace longrun
