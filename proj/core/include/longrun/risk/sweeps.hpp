// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "longrun/avg/sweeps.hpp"
#include "longrun/risk/poisson.hpp"

namespace longrun::risk {

struct RiskRow {
  double sweep_var = 0.0;  ///< m, or n (+inf for the limit row)
  PoissonSolution solution;
  std::optional<PerronResult> oracle;
  double oracle_gap = 0.0;
  /// Batch-means error bar of lambda (grid models); 0 for exact chains.
  double std_error = 0.0;
  std::optional<double> difference;
  double difference_se = 0.0;
};

struct RiskSweepOptions {
  avg::SweepOptions base;  ///< grid, samples, batches, seed, coupling
  RiskParams params;
  PerronOptions oracle;
  bool run_oracle = true;
};

/// lambda^(m) for each m with successive differences (Cauchy decay in m).
std::vector<RiskRow> risk_convergence_sweep(const sde::SDEModel& model,
                                            const sde::MarkovControl& control,
                                            const RewardFunction& reward,
                                            const std::vector<unsigned>& levels,
                                            const RiskSweepOptions& options);

std::vector<RiskRow> risk_convergence_sweep(const avg::ControlledChain& chain,
                                            const avg::ChainControl& control,
                                            const std::vector<unsigned>& levels,
                                            const RiskSweepOptions& options);

/// Uniform (uUE)/(uEquiv) constants over the control sequence and its limit.
struct UniformGate {
  double delta_sup = 0.0;
  double equiv_sup = 0.0;
  bool passed = false;
};

struct RiskStabilityResult {
  UniformGate gate;
  /// Empty when the gate fails: nothing is solved in that case.
  std::vector<RiskRow> rows;
};

/// lambda^{(m), u_n} for n in `indices` plus the limit row, after checking
/// sup_n Delta_{u_n} < 1 and sup_n K_{u_n} < inf at step count `k`.
RiskStabilityResult risk_stability_sweep(const avg::ControlledChain& chain,
                                         const avg::ChainControlFamily& family,
                                         const avg::ChainControl& limit, unsigned m,
                                         const std::vector<std::uint64_t>& indices,
                                         const RiskSweepOptions& options,
                                         unsigned k = 1);

RiskStabilityResult risk_stability_sweep(const sde::SDEModel& model,
                                         const avg::SdeControlFamily& family,
                                         const sde::MarkovControl& limit,
                                         const RewardFunction& reward, unsigned m,
                                         const std::vector<std::uint64_t>& indices,
                                         const RiskSweepOptions& options,
                                         unsigned k = 1);

}  // namespace longrun::risk
