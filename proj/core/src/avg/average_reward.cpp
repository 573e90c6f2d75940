// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/avg/average_reward.hpp"

#include <cmath>
#include <random>

#include "longrun/error.hpp"
#include "longrun/util/parallel.hpp"

namespace longrun::avg {

std::string to_string(Method method) {
  return method == Method::exact_invariant ? "exact-invariant" : "monte-carlo";
}

AverageRewardResult average_reward_exact(const markov::TransitionKernel& unit,
                                         const Eigen::VectorXd& aggregate,
                                         unsigned m, std::string control_id) {
  if (static_cast<std::size_t>(aggregate.size()) != unit.size())
    throw DimensionError("aggregate length does not match the kernel");
  const auto mu = markov::invariant_measure(unit);
  return AverageRewardResult{mu.weights.dot(aggregate), Method::exact_invariant,
                             0.0, m, std::move(control_id)};
}

namespace {

struct Horizon {
  std::uint64_t intervals;
  std::uint64_t first;
};

Horizon split_horizon(double horizon, double h, double burn_in) {
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  if (!(burn_in >= 0.0 && burn_in < 1.0))
    throw InvalidArgument("burn-in fraction must lie in [0, 1)");
  const double n = horizon / h;
  const double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-9 * std::max(1.0, n))
    throw InvalidArgument("horizon must be a multiple of h");
  const auto intervals = static_cast<std::uint64_t>(rounded);
  const auto first = static_cast<std::uint64_t>(std::floor(burn_in * rounded));
  if (first >= intervals) throw InvalidArgument("burn-in leaves no intervals");
  return {intervals, first};
}

AverageRewardResult from_replicates(const std::vector<double>& values, unsigned m,
                                    std::string id) {
  const auto e = sde::summarize(values);
  return AverageRewardResult{e.mean, Method::monte_carlo, e.std_error, m, std::move(id)};
}

}  // namespace

std::vector<double> average_reward_replicates(
    const sde::SDEModel& model, const sde::MarkovControl& control,
    const RewardFunction& reward, const sde::DiscretizationLevel& level,
    std::span<const double> x0, const McOptions& options) {
  if (options.replicates < 1) throw InvalidArgument("replicates must be >= 1");
  const Horizon hz = split_horizon(options.horizon, level.h(), options.burn_in);
  const double averaged_time = static_cast<double>(hz.intervals - hz.first) * level.h();
  std::vector<double> values(options.replicates);
  util::parallel_for(options.replicates, options.threads, [&](std::size_t r) {
    sde::Engine engine = sde::make_engine(sde::StreamKey{options.seed, 0, r});
    const auto summary =
        sde::run_path(model, control, level, x0, hz.intervals, engine, &reward, hz.first);
    values[r] = summary.reward_sum / averaged_time;
  });
  return values;
}

std::vector<double> average_reward_replicates(const ControlledChain& chain,
                                              const ChainControl& control,
                                              unsigned m, std::size_t x0,
                                              const McOptions& options) {
  if (options.replicates < 1) throw InvalidArgument("replicates must be >= 1");
  if (x0 >= chain.space.size()) throw DimensionError("chain start state out of range");
  const auto substep = chain.substep_kernel(control, m);
  const Eigen::VectorXd c = chain.reward(control);
  const double h = std::ldexp(1.0, -static_cast<int>(m));
  const Horizon hz = split_horizon(options.horizon, h, options.burn_in);

  std::vector<std::discrete_distribution<std::size_t>> rows;
  rows.reserve(substep.size());
  for (std::size_t x = 0; x < substep.size(); ++x) {
    const Eigen::RowVectorXd row = substep.rows().row(static_cast<Eigen::Index>(x));
    rows.emplace_back(row.data(), row.data() + row.size());
  }

  std::vector<double> values(options.replicates);
  util::parallel_for(options.replicates, options.threads, [&](std::size_t r) {
    sde::Engine engine = sde::make_engine(sde::StreamKey{options.seed, 0, r});
    auto local_rows = rows;
    std::size_t x = x0;
    double total = 0.0;
    for (std::uint64_t k = 0; k < hz.intervals; ++k) {
      if (k >= hz.first) total += c(static_cast<Eigen::Index>(x));
      x = local_rows[x](engine);
    }
    values[r] = total / static_cast<double>(hz.intervals - hz.first);
  });
  return values;
}

AverageRewardResult average_reward_mc(const sde::SDEModel& model,
                                      const sde::MarkovControl& control,
                                      const RewardFunction& reward,
                                      const sde::DiscretizationLevel& level,
                                      std::span<const double> x0,
                                      const McOptions& options) {
  return from_replicates(
      average_reward_replicates(model, control, reward, level, x0, options), level.m,
      control.id());
}

AverageRewardResult average_reward_mc(const ControlledChain& chain,
                                      const ChainControl& control, unsigned m,
                                      std::size_t x0, const McOptions& options) {
  return from_replicates(average_reward_replicates(chain, control, m, x0, options), m,
                         control.id);
}

}  // namespace longrun::avg
