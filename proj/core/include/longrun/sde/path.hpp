// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "longrun/reward.hpp"
#include "longrun/sde/control.hpp"
#include "longrun/sde/model.hpp"
#include "longrun/sde/rng.hpp"

namespace longrun::sde {

/// Control interval h = 2^-m, integrated with `inner_substeps` Euler steps.
struct DiscretizationLevel {
  unsigned m = 0;
  unsigned inner_substeps = 16;

  double h() const noexcept;
  std::uint64_t intervals_per_unit() const noexcept { return std::uint64_t{1} << m; }
  double dt() const noexcept { return h() / inner_substeps; }
  void validate() const;
};

struct SamplePath {
  std::size_t dim = 0;
  std::vector<double> times;                  ///< inner Euler grid, t0 = 0
  std::vector<std::vector<double>> states;    ///< X at each time
  std::vector<std::vector<double>> controls;  ///< control held on [kh,(k+1)h)
  unsigned inner_substeps = 1;

  std::size_t intervals() const noexcept { return controls.size(); }
};

/// Euler-Maruyama path of the piecewise-constant-control scheme: the control
/// argument of the drift is frozen at u(X_{kh}) over [kh, (k+1)h) while the
/// state argument of b and sigma is updated every inner step. Box-domain
/// models are reflected by coordinatewise folding after each inner step.
/// Throws DivergenceError on a non-finite state.
SamplePath simulate_path(const SDEModel& model, const MarkovControl& control,
                         const DiscretizationLevel& level,
                         std::span<const double> x0, double horizon,
                         std::uint64_t seed);
SamplePath simulate_path(const SDEModel& model, const MarkovControl& control,
                         const DiscretizationLevel& level,
                         std::span<const double> x0, double horizon,
                         const StreamKey& key);

/// Same scheme, requiring a box domain (DomainError otherwise, or for a
/// degenerate box).
SamplePath simulate_reflected_path(const SDEModel& model,
                                   const MarkovControl& control,
                                   const DiscretizationLevel& level,
                                   std::span<const double> x0, double horizon,
                                   std::uint64_t seed);

/// Maps x into [lower, upper] by repeated mirror reflection at the faces.
void fold_into_box(const Box& box, std::span<double> x);

/// Running totals collected along a path without storing it.
struct PathSummary {
  std::vector<double> final_state;
  /// sum over control instants k*h (k >= first_interval) of h * c(X_kh, u(X_kh))
  double reward_sum = 0.0;
  std::uint64_t intervals = 0;
};

/// Streams `intervals` control intervals from x0. Rewards are accumulated
/// from interval index `first_interval` on (burn-in); pass reward = nullptr
/// to skip them.
PathSummary run_path(const SDEModel& model, const MarkovControl& control,
                     const DiscretizationLevel& level,
                     std::span<const double> x0, std::uint64_t intervals,
                     Engine& engine, const RewardFunction* reward = nullptr,
                     std::uint64_t first_interval = 0);

/// Monte-Carlo mean and standard error.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// C_m(x, u) = E_x[ sum_{i < 2^m} 2^-m c(X_{i 2^-m}, u(X_{i 2^-m})) ] over
/// `samples` independent unit-time blocks (streams (seed, 0, r)).
Estimate unit_reward_aggregate(const SDEModel& model,
                               const MarkovControl& control,
                               const RewardFunction& reward,
                               std::span<const double> x0,
                               const DiscretizationLevel& level,
                               std::size_t samples, std::uint64_t seed,
                               unsigned threads = 1);

/// Mean and standard error of a sample (zero error for n < 2 or zero spread).
Estimate summarize(std::span<const double> values);

}  // namespace longrun::sde
