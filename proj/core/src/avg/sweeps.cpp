// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/avg/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "longrun/error.hpp"

namespace longrun::avg {

unsigned substeps_for(unsigned m, unsigned m_max, const SweepOptions& options) {
  if (!options.couple_levels || m >= m_max) return options.base_substeps;
  return options.base_substeps << (m_max - m);
}

namespace {

void check_levels(const std::vector<unsigned>& levels) {
  if (levels.empty()) throw ConfigError("level list must be nonempty");
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] <= levels[i - 1])
      throw ConfigError("level list must be strictly increasing");
  }
}

/// Point estimate plus per-replicate (or per-batch) values used for paired
/// error bars.
struct LevelEstimate {
  AverageRewardResult result;
  std::vector<double> paired;
};

double paired_se(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) return 0.0;
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return sde::summarize(d).std_error;
}

LevelEstimate grid_estimate(const sde::SDEModel& model,
                            const sde::MarkovControl& control,
                            const RewardFunction& reward,
                            const sde::DiscretizationLevel& level,
                            const SweepOptions& options) {
  if (!options.grid) throw ConfigError("exact mode on an SDE model needs a grid");
  const auto sample = sde::sample_unit_blocks(model, control, &reward, *options.grid,
                                              level, options.samples_per_state,
                                              options.mc.seed, options.mc.threads);
  LevelEstimate out;
  out.result = average_reward_exact(sde::empirical_unit_kernel(sample),
                                   sde::unit_reward_means(sample), level.m, control.id());
  if (options.batches >= 2) {
    for (std::size_t b = 0; b < options.batches; ++b) {
      const auto part = sde::batch_of(sample, b, options.batches);
      out.paired.push_back(average_reward_exact(sde::empirical_unit_kernel(part),
                                                sde::unit_reward_means(part))
                               .value);
    }
    out.result.std_error = sde::summarize(out.paired).std_error;
  }
  return out;
}

LevelEstimate sde_estimate(const sde::SDEModel& model, const sde::MarkovControl& control,
                           const RewardFunction& reward,
                           const sde::DiscretizationLevel& level,
                           const SweepOptions& options) {
  if (options.method == Method::exact_invariant)
    return grid_estimate(model, control, reward, level, options);
  LevelEstimate out;
  out.paired =
      average_reward_replicates(model, control, reward, level, options.x0, options.mc);
  const auto e = sde::summarize(out.paired);
  out.result = AverageRewardResult{e.mean, Method::monte_carlo, e.std_error, level.m,
                                   control.id()};
  return out;
}

LevelEstimate chain_estimate(const ControlledChain& chain, const ChainControl& control,
                             unsigned m, const SweepOptions& options) {
  LevelEstimate out;
  if (options.method == Method::exact_invariant) {
    const auto sub = chain.substep_kernel(control, m);
    out.result = average_reward_exact(unit_kernel(sub, m),
                                      unit_aggregate(sub, chain.reward(control), m), m,
                                      control.id);
    return out;
  }
  out.paired = average_reward_replicates(chain, control, m, options.chain_start, options.mc);
  const auto e = sde::summarize(out.paired);
  out.result = AverageRewardResult{e.mean, Method::monte_carlo, e.std_error, m, control.id};
  return out;
}

SweepRow make_row(double var, const LevelEstimate& est, const SweepOptions& options,
                  const LevelEstimate* reference) {
  SweepRow row;
  row.sweep_var = var;
  row.result = est.result;
  row.seed = options.mc.seed;
  if (reference) {
    row.difference = std::abs(est.result.value - reference->result.value);
    row.difference_se = paired_se(est.paired, reference->paired);
  }
  return row;
}

}  // namespace

std::vector<SweepRow> convergence_sweep(const sde::SDEModel& model,
                                        const sde::MarkovControl& control,
                                        const RewardFunction& reward,
                                        const std::vector<unsigned>& levels,
                                        const SweepOptions& options) {
  check_levels(levels);
  std::vector<SweepRow> rows;
  std::optional<LevelEstimate> previous;
  for (unsigned m : levels) {
    const sde::DiscretizationLevel level{m, substeps_for(m, levels.back(), options)};
    auto est = sde_estimate(model, control, reward, level, options);
    rows.push_back(make_row(m, est, options, previous ? &*previous : nullptr));
    previous = std::move(est);
  }
  return rows;
}

std::vector<SweepRow> convergence_sweep(const ControlledChain& chain,
                                        const ChainControl& control,
                                        const std::vector<unsigned>& levels,
                                        const SweepOptions& options) {
  check_levels(levels);
  std::vector<SweepRow> rows;
  std::optional<LevelEstimate> previous;
  for (unsigned m : levels) {
    auto est = chain_estimate(chain, control, m, options);
    rows.push_back(make_row(m, est, options, previous ? &*previous : nullptr));
    previous = std::move(est);
  }
  return rows;
}

std::vector<SweepRow> stability_sweep(const sde::SDEModel& model,
                                      const SdeControlFamily& family,
                                      const sde::MarkovControl& limit,
                                      const RewardFunction& reward, unsigned m,
                                      const std::vector<std::uint64_t>& indices,
                                      const SweepOptions& options) {
  if (indices.empty()) throw ConfigError("stability sweep needs sequence indices");
  const sde::DiscretizationLevel level{m, options.base_substeps};
  const auto limit_est = sde_estimate(model, limit, reward, level, options);
  std::vector<SweepRow> rows;
  for (auto n : indices) {
    const auto est = sde_estimate(model, family(n), reward, level, options);
    rows.push_back(make_row(static_cast<double>(n), est, options, &limit_est));
  }
  rows.push_back(make_row(std::numeric_limits<double>::infinity(), limit_est, options,
                          nullptr));
  return rows;
}

std::vector<SweepRow> stability_sweep(
    const ControlledChain& chain, const ChainControlFamily& family,
    const ChainControl& limit, unsigned m,
    const std::vector<std::uint64_t>& indices, const SweepOptions& options,
    const std::optional<markov::LyapunovWeight>& weight) {
  if (indices.empty()) throw ConfigError("stability sweep needs sequence indices");
  const auto limit_est = chain_estimate(chain, limit, m, options);
  const bool exact = options.method == Method::exact_invariant;
  const markov::LyapunovWeight v = weight ? *weight : markov::LyapunovWeight::unit(chain.space.size());
  Eigen::VectorXd limit_mu;
  if (exact)
    limit_mu = markov::invariant_measure(unit_kernel(chain.substep_kernel(limit, m), m)).weights;

  std::vector<SweepRow> rows;
  for (auto n : indices) {
    const ChainControl control = family(n);
    const auto est = chain_estimate(chain, control, m, options);
    auto row = make_row(static_cast<double>(n), est, options, &limit_est);
    if (exact) {
      const auto mu =
          markov::invariant_measure(unit_kernel(chain.substep_kernel(control, m), m));
      row.measure_gap = markov::v_norm_measure_diff(mu.weights, limit_mu, v);
    }
    rows.push_back(std::move(row));
  }
  auto last = make_row(std::numeric_limits<double>::infinity(), limit_est, options, nullptr);
  if (exact) last.measure_gap = 0.0;
  rows.push_back(std::move(last));
  return rows;
}

}  // namespace longrun::avg
