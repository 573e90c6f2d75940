// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/risk/risk_mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "longrun/error.hpp"

namespace longrun::risk {

namespace {

// Stream id reserved for bootstrap resampling; path replicates use stream 0.
constexpr std::uint64_t kBootstrapStream = 0xB0075ULL;

double log_mean_exp(std::span<const double> xs) {
  double top = -std::numeric_limits<double>::infinity();
  for (double x : xs) top = std::max(top, x);
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - top);
  return top + std::log(acc / static_cast<double>(xs.size()));
}

}  // namespace

RiskMcResult risk_from_sums(std::span<const double> sums, double alpha,
                            const RiskMcOptions& options) {
  if (sums.empty()) throw InvalidArgument("no replicate sums");
  if (!std::isfinite(alpha) || alpha == 0.0)
    throw InvalidArgument("alpha must be finite and nonzero");
  if (!(options.horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  const double scale = alpha * options.horizon;
  std::vector<double> expo(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) expo[i] = alpha * sums[i];

  RiskMcResult out;
  out.value = log_mean_exp(expo) / scale;

  const double top = *std::max_element(expo.begin(), expo.end());
  double s1 = 0.0, s2 = 0.0;
  for (double e : expo) {
    const double w = std::exp(e - top);
    s1 += w;
    s2 += w * w;
  }
  out.effective_sample_size = s1 * s1 / s2;
  if (out.effective_sample_size < options.min_ess) {
    out.warning = fmt::format(
        "weight collapse: effective sample size {:.3g} of {} replicates",
        out.effective_sample_size, sums.size());
  }

  if (options.bootstrap >= 2 && sums.size() >= 2) {
    sde::Engine engine = sde::make_engine(sde::StreamKey{options.seed, kBootstrapStream, 0});
    std::uniform_int_distribution<std::size_t> pick(0, sums.size() - 1);
    std::vector<double> resample(sums.size());
    std::vector<double> stats(options.bootstrap);
    for (auto& s : stats) {
      for (auto& r : resample) r = expo[pick(engine)];
      s = log_mean_exp(resample) / scale;
    }
    out.std_error = sde::summarize(stats).std_error * std::sqrt(static_cast<double>(stats.size()));
  }
  return out;
}

RiskMcResult risk_mc(const sde::SDEModel& model, const sde::MarkovControl& control,
                     const RewardFunction& reward, const sde::DiscretizationLevel& level,
                     std::span<const double> x0, double alpha,
                     const RiskMcOptions& options) {
  avg::McOptions mc{options.horizon, options.replicates, options.seed, options.threads, 0.0};
  auto sums = avg::average_reward_replicates(model, control, reward, level, x0, mc);
  for (auto& s : sums) s *= options.horizon;
  return risk_from_sums(sums, alpha, options);
}

RiskMcResult risk_mc(const avg::ControlledChain& chain, const avg::ChainControl& control,
                     unsigned m, std::size_t x0, double alpha,
                     const RiskMcOptions& options) {
  avg::McOptions mc{options.horizon, options.replicates, options.seed, options.threads, 0.0};
  auto sums = avg::average_reward_replicates(chain, control, m, x0, mc);
  for (auto& s : sums) s *= options.horizon;
  return risk_from_sums(sums, alpha, options);
}

}  // namespace longrun::risk
