// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace longrun::sde {

/// Axis-aligned box; states are reflected back inside by folding.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dim() const noexcept { return lower.size(); }
  bool contains(std::span<const double> x, double slack = 0.0) const;
  /// Throws DomainError for zero or negative width along any axis.
  void validate() const;
};

struct WholeSpace {};

using Domain = std::variant<WholeSpace, Box>;

/// Controlled diffusion dX = b(X, a) dt + sigma(X) dW in R^d.
///
/// Coefficients write into caller-provided buffers so the integrator does not
/// allocate per step. `diffusion` fills a row-major d x d matrix.
struct SDEModel {
  using Drift = std::function<void(std::span<const double> x,
                                   std::span<const double> a,
                                   std::span<double> out)>;
  using Diffusion =
      std::function<void(std::span<const double> x, std::span<double> out)>;

  std::string name;
  std::size_t dim = 1;
  std::size_t control_dim = 1;
  Drift drift;
  Diffusion diffusion;
  Domain domain = WholeSpace{};
  /// Declared K in |b(x,a)|^2 + ||sigma(x)||^2 <= K (1 + |x|^2).
  double growth_constant = 0.0;
  bool nondegenerate = true;

  bool reflected() const noexcept { return std::holds_alternative<Box>(domain); }
  const Box& box() const;
};

/// Largest observed (|b|^2 + ||sigma||_F^2) / (1 + |x|^2) over the given
/// states and control points, to compare against the declared constant.
struct GrowthCheck {
  double worst_ratio = 0.0;
  bool within_declared = true;
  /// Smallest eigenvalue of sigma sigma^T seen (nondegeneracy spot check).
  double min_diffusion_eigenvalue = 0.0;
};

GrowthCheck spot_check_growth(const SDEModel& model,
                              const std::vector<std::vector<double>>& states,
                              const std::vector<std::vector<double>>& controls);

}  // namespace longrun::sde
