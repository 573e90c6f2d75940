// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/risk/tilted_kernel.hpp"

#include <cmath>
#include <limits>

#include "longrun/error.hpp"

namespace longrun::risk {

namespace {

constexpr double kRescaleLow = 1e-100;
constexpr double kRescaleHigh = 1e100;

// Pull each row's largest entry into the log scale when it drifts out of
// [1e-100, 1e100].
void rescale_rows(Eigen::MatrixXd& scaled, Eigen::VectorXd& log_scale, bool always) {
  for (Eigen::Index x = 0; x < scaled.rows(); ++x) {
    const double top = scaled.row(x).maxCoeff();
    if (!(top > 0.0)) continue;
    if (always || top < kRescaleLow || top > kRescaleHigh) {
      scaled.row(x) /= top;
      log_scale(x) += std::log(top);
    }
  }
}

}  // namespace

TiltedKernel::TiltedKernel(markov::StateSpace space, Eigen::MatrixXd scaled,
                           Eigen::VectorXd row_log_scale, double alpha, unsigned m)
    : space_(std::move(space)),
      scaled_(std::move(scaled)),
      row_log_scale_(std::move(row_log_scale)),
      alpha_(alpha),
      m_(m) {
  const auto n = static_cast<Eigen::Index>(space_.size());
  if (scaled_.rows() != n || scaled_.cols() != n || row_log_scale_.size() != n)
    throw DimensionError("tilted kernel does not match its state space");
  if (!std::isfinite(alpha_) || alpha_ == 0.0)
    throw InvalidArgument("risk parameter alpha must be finite and nonzero");
  log_entries_.resize(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    if (!std::isfinite(row_log_scale_(x)))
      throw InvalidArgument("tilted kernel row scale is not finite");
    bool any = false;
    for (Eigen::Index y = 0; y < n; ++y) {
      const double v = scaled_(x, y);
      if (!(v >= 0.0) || !std::isfinite(v))
        throw InvalidArgument("tilted kernel entries must be finite and nonnegative");
      any = any || v > 0.0;
      log_entries_(x, y) = v > 0.0 ? row_log_scale_(x) + std::log(v)
                                   : -std::numeric_limits<double>::infinity();
    }
    if (!any) throw InvalidArgument("tilted kernel has an empty row");
  }
}

double TiltedKernel::entry(std::size_t x, std::size_t y) const {
  const auto i = static_cast<Eigen::Index>(x);
  return std::exp(row_log_scale_(i)) * scaled_(i, static_cast<Eigen::Index>(y));
}

Eigen::MatrixXd TiltedKernel::dense() const {
  Eigen::MatrixXd out = scaled_;
  for (Eigen::Index x = 0; x < out.rows(); ++x) out.row(x) *= std::exp(row_log_scale_(x));
  return out;
}

double TiltedKernel::log_row_sum(std::size_t x) const {
  const auto i = static_cast<Eigen::Index>(x);
  return row_log_scale_(i) + std::log(scaled_.row(i).sum());
}

TiltedKernel build_tilted_kernel(const markov::TransitionKernel& substep,
                                 const Eigen::VectorXd& reward, double alpha,
                                 unsigned m) {
  const auto n = static_cast<Eigen::Index>(substep.size());
  if (reward.size() != n) throw DimensionError("reward length does not match the kernel");
  if (m > 30) throw InvalidArgument("level m too large");
  const double h = std::ldexp(1.0, -static_cast<int>(m));
  if (substep.step() != markov::StepLength(1, std::int64_t{1} << m))
    throw InvalidArgument("substep kernel step must be 2^-m");

  // D P with the largest exponent factored out so every entry is <= 1.
  const Eigen::ArrayXd expo = alpha * h * reward.array();
  const double shift = expo.maxCoeff();
  const Eigen::VectorXd d = (expo - shift).exp().matrix();
  const Eigen::MatrixXd dp = d.asDiagonal() * substep.rows();

  Eigen::MatrixXd scaled = dp;
  Eigen::VectorXd log_scale = Eigen::VectorXd::Constant(n, shift);
  const std::uint64_t steps = std::uint64_t{1} << m;
  for (std::uint64_t i = 1; i < steps; ++i) {
    scaled = scaled * dp;
    log_scale.array() += shift;
    rescale_rows(scaled, log_scale, false);
  }
  return TiltedKernel(substep.space(), std::move(scaled), std::move(log_scale), alpha, m);
}

TiltedKernel build_tilted_kernel(const sde::UnitBlockSample& sample, double alpha) {
  const auto n = static_cast<Eigen::Index>(sample.grid.size());
  const std::size_t s = sample.samples_per_state();
  if (s == 0) throw InvalidArgument("unit-block sample is empty");
  Eigen::MatrixXd scaled = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd log_scale(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    const auto& row = sample.blocks[static_cast<std::size_t>(x)];
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& b : row) top = std::max(top, alpha * b.reward_sum);
    for (const auto& b : row)
      scaled(x, static_cast<Eigen::Index>(b.end_node)) += std::exp(alpha * b.reward_sum - top);
    scaled.row(x) /= static_cast<double>(s);
    log_scale(x) = top;
  }
  return TiltedKernel(sample.grid, std::move(scaled), std::move(log_scale), alpha, sample.m);
}

}  // namespace longrun::risk
