// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "longrun/avg/average_reward.hpp"
#include "longrun/avg/sweeps.hpp"
#include "longrun/markov/weight.hpp"
#include "longrun/sde/registry.hpp"

namespace longrun::experiments {

struct ModelSpec {
  std::string name;  ///< registry name, or "chain"
  sde::ModelParams params;
};

/// Finite chain given by its substep kernels (see avg::ControlledChain).
struct ChainSpec {
  std::vector<std::string> labels;
  Eigen::MatrixXd base;
  std::optional<Eigen::MatrixXd> alt;
};

struct ControlSpec {
  enum class Kind { constant, linear, table };
  Kind kind = Kind::constant;
  std::vector<double> value;   ///< constant a0, or linear offset
  double gain = 0.0;           ///< linear: a = offset + gain (x - center)
  std::vector<double> center;
  std::vector<double> table;   ///< per chain state, or per grid node
};

struct RewardSpec {
  enum class Kind { constant, coordinate, quadratic, table };
  Kind kind = Kind::constant;
  double value = 0.0;
  std::size_t index = 0;
  double x_weight = 1.0;       ///< quadratic: x_weight |x - center|^2 + a_weight |a|^2
  std::vector<double> center;
  double a_weight = 0.0;
  std::vector<double> table;   ///< per chain state, or per grid node
  std::vector<double> slope;   ///< chains: c(x, a) = table(x) + slope(x) a(x)
};

struct SweepSpec {
  enum class Kind { convergence, stability };
  Kind kind = Kind::convergence;
  unsigned level = 0;                 ///< stability: fixed m
  std::vector<std::uint64_t> indices; ///< stability: n values of u_n = u (1 - 1/n)
};

struct McSpec {
  double horizon = 200.0;
  std::size_t replicates = 64;
  double burn_in = 0.2;
  std::vector<double> x0;
  std::size_t start_state = 0;
};

struct GridSpec {
  std::size_t nodes = 21;
  std::size_t samples_per_state = 2000;
  std::size_t batches = 8;
  unsigned base_substeps = 16;
  bool couple_levels = true;
};

struct RiskSpec {
  std::vector<double> alphas;
  double tolerance = 1e-10;
  std::uint64_t max_iterations = 100'000;
  std::size_t x_ref = 0;
  bool oracle = true;
};

struct WeightSpec {
  enum class Kind { unit, table, quadratic };
  Kind kind = Kind::unit;
  std::vector<double> table;
  double scale = 1.0;  ///< quadratic: V(x) = 1 + scale |x|^2 on grid nodes
};

struct AuditSpec {
  unsigned k = 1;
  unsigned fpv_horizon = 20;
  WeightSpec weight;
  std::optional<unsigned> limit_level;  ///< proxy limit for convergence gaps
  std::uint64_t gap_horizon = 5;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  ModelSpec model;
  std::optional<ChainSpec> chain;
  ControlSpec control;
  RewardSpec reward;
  std::vector<unsigned> levels;
  avg::Method method = avg::Method::monte_carlo;
  SweepSpec sweep;
  McSpec mc;
  std::optional<GridSpec> grid;
  RiskSpec risk;
  AuditSpec audit;
  std::string output_dir;

  bool is_chain() const noexcept { return model.name == "chain"; }
};

/// Parses a JSON experiment config. Unknown keys, wrong types and out-of-range
/// values raise ConfigError naming the field path (e.g. "control.value[1]").
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Runtime objects described by a config.
avg::ControlledChain make_chain(const ExperimentConfig& config);
avg::ChainControl make_chain_control(const ExperimentConfig& config,
                                     const avg::ControlledChain& chain);
sde::SDEModel make_sde_model(const ExperimentConfig& config);
/// Grid over the model's box (nullopt without a grid section).
std::optional<markov::StateSpace> make_grid(const ExperimentConfig& config,
                                            const sde::SDEModel& model);
sde::MarkovControl make_sde_control(const ExperimentConfig& config,
                                    const sde::SDEModel& model,
                                    const std::optional<markov::StateSpace>& grid);
RewardFunction make_reward(const ExperimentConfig& config, const sde::SDEModel& model,
                           const std::optional<markov::StateSpace>& grid);
markov::LyapunovWeight make_weight(const ExperimentConfig& config,
                                   const markov::StateSpace& space);

/// u_n = u (1 - 1/n).
avg::ChainControlFamily scaled_family(const avg::ChainControl& control);
avg::SdeControlFamily scaled_family(const sde::MarkovControl& control);

}  // namespace longrun::experiments
