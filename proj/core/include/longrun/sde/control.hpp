// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace longrun::sde {

struct ControlBox {
  std::vector<double> lower;
  std::vector<double> upper;
};

struct ControlList {
  std::vector<std::vector<double>> points;
};

/// Compact control set U.
using ControlSet = std::variant<ControlBox, ControlList>;

bool control_set_contains(const ControlSet& set, std::span<const double> a,
                          double slack = 1e-12);
std::size_t control_set_dim(const ControlSet& set);

/// Feedback map u: R^d -> U.
class MarkovControl {
 public:
  using Map = std::function<void(std::span<const double> x, std::span<double> a)>;

  MarkovControl(std::string id, ControlSet set, Map map);

  /// Constant control a0 (which must lie in `set`).
  static MarkovControl constant(std::vector<double> a0, ControlSet set);

  /// Writes u(x) into `a`; throws DomainError when u(x) is not in U.
  void operator()(std::span<const double> x, std::span<double> a) const;

  const std::string& id() const noexcept { return id_; }
  const ControlSet& set() const noexcept { return set_; }
  std::size_t dim() const noexcept { return control_set_dim(set_); }

 private:
  std::string id_;
  ControlSet set_;
  Map map_;
};

}  // namespace longrun::sde
