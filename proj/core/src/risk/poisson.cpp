// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/risk/poisson.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include <fmt/format.h>

#include "longrun/error.hpp"
#include "longrun/markov/weight.hpp"

namespace longrun::risk {

Eigen::VectorXd psi_apply(const TiltedKernel& kernel, const Eigen::VectorXd& g) {
  const auto n = static_cast<Eigen::Index>(kernel.size());
  if (g.size() != n) throw DimensionError("function length does not match the kernel");
  const double a = kernel.alpha();
  const auto& logm = kernel.log_entries();
  Eigen::VectorXd out(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    double top = -std::numeric_limits<double>::infinity();
    for (Eigen::Index y = 0; y < n; ++y) {
      if (std::isfinite(logm(x, y))) top = std::max(top, logm(x, y) + a * g(y));
    }
    double acc = 0.0;
    for (Eigen::Index y = 0; y < n; ++y) {
      if (std::isfinite(logm(x, y))) acc += std::exp(logm(x, y) + a * g(y) - top);
    }
    out(x) = (top + std::log(acc)) / a;
  }
  return out;
}

void RiskParams::validate(std::size_t states) const {
  if (!std::isfinite(alpha) || alpha == 0.0)
    throw ConfigError("alpha must be finite and nonzero");
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (max_iterations == 0) throw ConfigError("max_iterations must be positive");
  if (x_ref >= states) throw ConfigError("x_ref is outside the state space");
}

PoissonSolution solve_poisson(const TiltedKernel& kernel, const RiskParams& params) {
  params.validate(kernel.size());
  if (kernel.alpha() != params.alpha)
    throw InvalidArgument("tilted kernel was built for a different alpha");
  const auto ref = static_cast<Eigen::Index>(params.x_ref);
  const auto n = static_cast<Eigen::Index>(kernel.size());

  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  std::deque<double> ratios;
  double last = std::numeric_limits<double>::quiet_NaN();
  auto contraction = [&] {
    if (ratios.empty()) return 0.0;
    double s = 0.0;
    for (double r : ratios) s += std::log(std::max(r, 1e-300));
    return std::exp(s / static_cast<double>(ratios.size()));
  };

  for (std::uint64_t it = 1; it <= params.max_iterations; ++it) {
    const Eigen::VectorXd psi = psi_apply(kernel, g);
    const Eigen::VectorXd diff = psi - g;
    if (!diff.allFinite())
      throw ConvergenceError("Psi iteration produced non-finite values", last, contraction());
    const double res = markov::span_seminorm(diff);
    if (std::isfinite(last) && last > 0.0) {
      ratios.push_back(res / last);
      if (ratios.size() > 10) ratios.pop_front();
    }
    last = res;
    if (res <= params.tolerance) {
      PoissonSolution sol;
      sol.lambda = diff(ref);
      sol.w = g;
      sol.span_w = markov::span_seminorm(g);
      sol.iterations = it;
      sol.residual = (diff.array() - sol.lambda).abs().maxCoeff();
      sol.contraction = contraction();
      return sol;
    }
    g = psi.array() - psi(ref);
  }
  throw ConvergenceError(
      fmt::format("relative value iteration did not reach span residual {:g} in {} "
                  "iterations (last {:g})",
                  params.tolerance, params.max_iterations, last),
      last, contraction());
}

namespace {

// Row-shifted linear matrix exp(r_x - r_max) * scaled(x, .) and r_max.
std::pair<Eigen::MatrixXd, double> shifted_linear(const TiltedKernel& kernel) {
  const double top = kernel.row_log_scale().maxCoeff();
  Eigen::MatrixXd lin = kernel.scaled();
  for (Eigen::Index x = 0; x < lin.rows(); ++x)
    lin.row(x) *= std::exp(kernel.row_log_scale()(x) - top);
  return {std::move(lin), top};
}

}  // namespace

PerronResult perron_oracle(const TiltedKernel& kernel, const PerronOptions& options) {
  const auto [lin, top] = shifted_linear(kernel);
  const auto n = lin.rows();
  Eigen::VectorXd v(n);
  for (Eigen::Index x = 0; x < n; ++x) v(x) = static_cast<double>(x + 1);
  v /= v.sum();
  double change = std::numeric_limits<double>::infinity();
  for (std::uint64_t it = 1; it <= options.max_iterations; ++it) {
    Eigen::VectorXd next = lin * v;
    const double norm = next.sum();
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw ConvergenceError("power iteration collapsed", change, 0.0);
    next /= norm;
    change = (next - v).lpNorm<1>();
    v = std::move(next);
    if (change <= options.tolerance) {
      // Rayleigh-type ratio on the converged vector.
      const double rho = (lin * v).sum() / v.sum();
      PerronResult out;
      out.log_spectral_radius = top + std::log(rho);
      out.lambda = out.log_spectral_radius / kernel.alpha();
      out.iterations = it;
      return out;
    }
  }
  throw ConvergenceError(
      fmt::format("power iteration did not settle in {} iterations (L1 change {:g}); "
                  "the tilted kernel may be periodic",
                  options.max_iterations, change),
      change, 0.0);
}

std::vector<FiniteHorizonRow> finite_horizon_gap(const TiltedKernel& kernel,
                                                 const PoissonSolution& solution,
                                                 const std::vector<std::uint64_t>& ks) {
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] == 0 || (i > 0 && ks[i] <= ks[i - 1]))
      throw InvalidArgument("horizons must be positive and increasing");
  }
  const auto [lin, top] = shifted_linear(kernel);
  const auto n = lin.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  double log_factor = 0.0;
  std::uint64_t k = 0;
  std::vector<FiniteHorizonRow> rows;
  for (auto target : ks) {
    while (k < target) {
      v = lin * v;
      log_factor += top;
      const double s = v.maxCoeff();
      v /= s;
      log_factor += std::log(s);
      ++k;
    }
    FiniteHorizonRow row;
    row.k = k;
    const double denom = kernel.alpha() * static_cast<double>(k);
    row.estimate = (log_factor + v.array().log()) / denom;
    row.max_gap = (row.estimate.array() - solution.lambda).abs().maxCoeff();
    row.bound = 2.0 * solution.span_w / static_cast<double>(k);
    row.pass = row.max_gap <= row.bound + 1e-12;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace longrun::risk
