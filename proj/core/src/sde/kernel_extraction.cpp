// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/sde/kernel_extraction.hpp"

#include <limits>

#include <fmt/format.h>

#include "longrun/error.hpp"
#include "longrun/util/parallel.hpp"

namespace longrun::sde {

markov::StateSpace make_grid(const Box& box, std::size_t nodes_per_axis) {
  box.validate();
  if (nodes_per_axis < 2) throw ConfigError("grid needs at least 2 nodes per axis");
  const std::size_t d = box.dim();
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= nodes_per_axis;

  std::vector<std::string> labels;
  std::vector<std::vector<double>> points;
  labels.reserve(total);
  points.reserve(total);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::vector<double> p(d);
    std::string label;
    for (std::size_t i = 0; i < d; ++i) {
      const double frac = static_cast<double>(idx[i]) / (nodes_per_axis - 1);
      p[i] = idx[i] + 1 == nodes_per_axis
                 ? box.upper[i]
                 : box.lower[i] + frac * (box.upper[i] - box.lower[i]);
      if (i) label += ':';
      label += fmt::format("{:.6g}", p[i]);
    }
    labels.push_back(std::move(label));
    points.push_back(std::move(p));
    // Last axis varies fastest.
    for (std::size_t i = d; i-- > 0;) {
      if (++idx[i] < nodes_per_axis) break;
      idx[i] = 0;
    }
  }
  return markov::StateSpace(std::move(labels), std::move(points));
}

std::size_t nearest_node(const markov::StateSpace& grid,
                         std::span<const double> x) {
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto p = grid.point(i);
    double dist = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) dist += (p[k] - x[k]) * (p[k] - x[k]);
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return best;
}

UnitBlockSample sample_unit_blocks(const SDEModel& model,
                                   const MarkovControl& control,
                                   const RewardFunction* reward,
                                   const markov::StateSpace& grid,
                                   const DiscretizationLevel& level,
                                   std::size_t samples_per_state,
                                   std::uint64_t seed, unsigned threads) {
  if (samples_per_state < 1) throw ConfigError("samples_per_state must be >= 1");
  if (!model.reflected())
    throw ConfigError("kernel extraction needs a box-domain model; '" +
                      model.name + "' lives on the whole space");
  if (!grid.has_embedding() || grid.dim() != model.dim)
    throw ConfigError("grid embedding must match the model dimension");
  const Box& box = model.box();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!box.contains(grid.point(i), 1e-12))
      throw ConfigError(fmt::format("grid node '{}' lies outside the model domain",
                                    grid.label(i)));
  }

  UnitBlockSample sample{grid, level.m, {}};
  sample.blocks.assign(grid.size(), std::vector<UnitBlock>(samples_per_state));
  const std::size_t total = grid.size() * samples_per_state;
  util::parallel_for(total, threads, [&](std::size_t job) {
    const std::size_t x = job / samples_per_state;
    const std::size_t r = job % samples_per_state;
    Engine engine = make_engine(StreamKey{seed, x, r});
    const auto summary = run_path(model, control, level, grid.point(x),
                                  level.intervals_per_unit(), engine, reward);
    sample.blocks[x][r] = UnitBlock{
        static_cast<std::uint32_t>(nearest_node(grid, summary.final_state)),
        summary.reward_sum};
  });
  return sample;
}

markov::TransitionKernel empirical_unit_kernel(const UnitBlockSample& sample) {
  const std::size_t n = sample.grid.size();
  const double count = static_cast<double>(sample.samples_per_state());
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    for (const auto& block : sample.blocks[x]) rows(x, block.end_node) += 1.0;
  }
  rows /= count;
  return markov::TransitionKernel(sample.grid, std::move(rows));
}

markov::TransitionKernel empirical_unit_kernel(
    const SDEModel& model, const MarkovControl& control,
    const markov::StateSpace& grid, const DiscretizationLevel& level,
    std::size_t samples_per_state, std::uint64_t seed, unsigned threads) {
  return empirical_unit_kernel(sample_unit_blocks(
      model, control, nullptr, grid, level, samples_per_state, seed, threads));
}

Eigen::VectorXd unit_reward_means(const UnitBlockSample& sample) {
  const std::size_t n = sample.grid.size();
  Eigen::VectorXd means(n);
  for (std::size_t x = 0; x < n; ++x) {
    double total = 0.0;
    for (const auto& block : sample.blocks[x]) total += block.reward_sum;
    means(x) = total / static_cast<double>(sample.blocks[x].size());
  }
  return means;
}

UnitBlockSample batch_of(const UnitBlockSample& sample, std::size_t batch,
                         std::size_t batches) {
  if (batches == 0 || batch >= batches || sample.samples_per_state() < batches)
    throw InvalidArgument("invalid batch split of unit-block sample");
  UnitBlockSample out{sample.grid, sample.m, {}};
  out.blocks.resize(sample.blocks.size());
  for (std::size_t x = 0; x < sample.blocks.size(); ++x) {
    for (std::size_t r = batch; r < sample.blocks[x].size(); r += batches)
      out.blocks[x].push_back(sample.blocks[x][r]);
  }
  return out;
}

}  // namespace longrun::sde
