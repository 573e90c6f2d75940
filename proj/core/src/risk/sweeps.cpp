// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/risk/sweeps.hpp"

#include <cmath>
#include <limits>

#include "longrun/audit/audit.hpp"
#include "longrun/error.hpp"
#include "longrun/markov/coefficients.hpp"

namespace longrun::risk {

namespace {

struct Cell {
  RiskRow row;
  std::vector<double> paired;  ///< per-batch lambdas
};

void check_levels(const std::vector<unsigned>& levels) {
  if (levels.empty()) throw ConfigError("level list must be nonempty");
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] <= levels[i - 1])
      throw ConfigError("level list must be strictly increasing");
  }
}

double paired_se(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) return 0.0;
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return sde::summarize(d).std_error;
}

RiskRow solve_row(double var, const TiltedKernel& kernel, const RiskSweepOptions& options) {
  RiskRow row;
  row.sweep_var = var;
  row.solution = solve_poisson(kernel, options.params);
  if (options.run_oracle) {
    row.oracle = perron_oracle(kernel, options.oracle);
    row.oracle_gap = std::abs(row.oracle->lambda - row.solution.lambda);
  }
  return row;
}

Cell chain_cell(double var, const avg::ControlledChain& chain,
                const avg::ChainControl& control, unsigned m,
                const RiskSweepOptions& options) {
  const auto kernel = build_tilted_kernel(chain.substep_kernel(control, m),
                                          chain.reward(control), options.params.alpha, m);
  return Cell{solve_row(var, kernel, options), {}};
}

Cell grid_cell(double var, const sde::UnitBlockSample& sample,
               const RiskSweepOptions& options) {
  Cell cell{solve_row(var, build_tilted_kernel(sample, options.params.alpha), options), {}};
  const std::size_t batches = options.base.batches;
  if (batches >= 2) {
    for (std::size_t b = 0; b < batches; ++b) {
      const auto part = build_tilted_kernel(sde::batch_of(sample, b, batches),
                                            options.params.alpha);
      cell.paired.push_back(solve_poisson(part, options.params).lambda);
    }
    cell.row.std_error = sde::summarize(cell.paired).std_error;
  }
  return cell;
}

sde::UnitBlockSample grid_sample(const sde::SDEModel& model, const sde::MarkovControl& control,
                                 const RewardFunction& reward,
                                 const sde::DiscretizationLevel& level,
                                 const RiskSweepOptions& options) {
  if (!options.base.grid) throw ConfigError("risk sweeps on SDE models need a grid");
  return sde::sample_unit_blocks(model, control, &reward, *options.base.grid, level,
                                 options.base.samples_per_state, options.base.mc.seed,
                                 options.base.mc.threads);
}

void link(Cell& cell, const Cell& reference) {
  cell.row.difference = std::abs(cell.row.solution.lambda - reference.row.solution.lambda);
  cell.row.difference_se = paired_se(cell.paired, reference.paired);
}

void add_to_gate(UniformGate& gate, const markov::TransitionKernel& unit, unsigned k) {
  const auto kstep = markov::power(unit, k);
  gate.delta_sup = std::max(gate.delta_sup, markov::dobrushin_delta(kstep));
  std::optional<audit::EquivalenceViolation> violation;
  gate.equiv_sup = std::max(gate.equiv_sup, audit::equivalence_constant(kstep, &violation));
  if (violation) gate.equiv_sup = std::numeric_limits<double>::infinity();
}

void close_gate(UniformGate& gate) {
  gate.passed = gate.delta_sup < 1.0 && std::isfinite(gate.equiv_sup);
}

}  // namespace

std::vector<RiskRow> risk_convergence_sweep(const sde::SDEModel& model,
                                            const sde::MarkovControl& control,
                                            const RewardFunction& reward,
                                            const std::vector<unsigned>& levels,
                                            const RiskSweepOptions& options) {
  check_levels(levels);
  std::vector<RiskRow> rows;
  std::optional<Cell> previous;
  for (unsigned m : levels) {
    const sde::DiscretizationLevel level{m,
                                         avg::substeps_for(m, levels.back(), options.base)};
    auto cell = grid_cell(m, grid_sample(model, control, reward, level, options), options);
    if (previous) link(cell, *previous);
    rows.push_back(cell.row);
    previous = std::move(cell);
  }
  return rows;
}

std::vector<RiskRow> risk_convergence_sweep(const avg::ControlledChain& chain,
                                            const avg::ChainControl& control,
                                            const std::vector<unsigned>& levels,
                                            const RiskSweepOptions& options) {
  check_levels(levels);
  std::vector<RiskRow> rows;
  std::optional<Cell> previous;
  for (unsigned m : levels) {
    auto cell = chain_cell(m, chain, control, m, options);
    if (previous) link(cell, *previous);
    rows.push_back(cell.row);
    previous = std::move(cell);
  }
  return rows;
}

RiskStabilityResult risk_stability_sweep(const avg::ControlledChain& chain,
                                         const avg::ChainControlFamily& family,
                                         const avg::ChainControl& limit, unsigned m,
                                         const std::vector<std::uint64_t>& indices,
                                         const RiskSweepOptions& options, unsigned k) {
  if (indices.empty()) throw ConfigError("stability sweep needs sequence indices");
  if (k == 0) throw ConfigError("step count k must be >= 1");
  RiskStabilityResult out;
  std::vector<avg::ChainControl> controls;
  for (auto n : indices) {
    controls.push_back(family(n));
    add_to_gate(out.gate, avg::unit_kernel(chain.substep_kernel(controls.back(), m), m), k);
  }
  add_to_gate(out.gate, avg::unit_kernel(chain.substep_kernel(limit, m), m), k);
  close_gate(out.gate);
  if (!out.gate.passed) return out;

  const auto limit_cell = chain_cell(std::numeric_limits<double>::infinity(), chain, limit,
                                     m, options);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    auto cell = chain_cell(static_cast<double>(indices[i]), chain, controls[i], m, options);
    link(cell, limit_cell);
    out.rows.push_back(cell.row);
  }
  out.rows.push_back(limit_cell.row);
  return out;
}

RiskStabilityResult risk_stability_sweep(const sde::SDEModel& model,
                                         const avg::SdeControlFamily& family,
                                         const sde::MarkovControl& limit,
                                         const RewardFunction& reward, unsigned m,
                                         const std::vector<std::uint64_t>& indices,
                                         const RiskSweepOptions& options, unsigned k) {
  if (indices.empty()) throw ConfigError("stability sweep needs sequence indices");
  if (k == 0) throw ConfigError("step count k must be >= 1");
  const sde::DiscretizationLevel level{m, options.base.base_substeps};
  RiskStabilityResult out;
  std::vector<sde::UnitBlockSample> samples;
  for (auto n : indices) {
    samples.push_back(grid_sample(model, family(n), reward, level, options));
    add_to_gate(out.gate, sde::empirical_unit_kernel(samples.back()), k);
  }
  const auto limit_sample = grid_sample(model, limit, reward, level, options);
  add_to_gate(out.gate, sde::empirical_unit_kernel(limit_sample), k);
  close_gate(out.gate);
  if (!out.gate.passed) return out;

  const auto limit_cell =
      grid_cell(std::numeric_limits<double>::infinity(), limit_sample, options);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    auto cell = grid_cell(static_cast<double>(indices[i]), samples[i], options);
    link(cell, limit_cell);
    out.rows.push_back(cell.row);
  }
  out.rows.push_back(limit_cell.row);
  return out;
}

}  // namespace longrun::risk
