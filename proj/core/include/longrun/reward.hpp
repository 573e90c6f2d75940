// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <string>

namespace longrun {

/// Running reward c(x, a) with its declared growth bound.
///
/// Bounded rewards promise |c| <= bound everywhere; V-dominated rewards
/// promise |c(x,a)| <= bound * V(x). The declaration is checked at every
/// evaluation through operator().
class RewardFunction {
 public:
  using Fn = std::function<double(std::span<const double> x,
                                  std::span<const double> a)>;
  using WeightFn = std::function<double(std::span<const double> x)>;

  enum class BoundKind { bounded, v_dominated };

  static RewardFunction bounded(std::string id, Fn fn, double bound);
  static RewardFunction v_dominated(std::string id, Fn fn, double bound,
                                    WeightFn weight);

  /// Throws DomainError when the value breaks the declared bound.
  double operator()(std::span<const double> x, std::span<const double> a) const;

  const std::string& id() const noexcept { return id_; }
  BoundKind bound_kind() const noexcept { return kind_; }
  double bound() const noexcept { return bound_; }

 private:
  RewardFunction(std::string id, Fn fn, BoundKind kind, double bound,
                 WeightFn weight);

  std::string id_;
  Fn fn_;
  BoundKind kind_;
  double bound_;
  WeightFn weight_;
};

}  // namespace longrun
