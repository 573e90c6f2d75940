// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/markov/kernel.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "longrun/error.hpp"

namespace longrun::markov {

namespace {

void validate_and_normalize(Eigen::MatrixXd& rows) {
  for (Eigen::Index x = 0; x < rows.rows(); ++x) {
    for (Eigen::Index y = 0; y < rows.cols(); ++y) {
      const double p = rows(x, y);
      if (!(p >= 0.0 && p <= 1.0 + kStochasticTolerance)) {
        throw InvalidArgument(
            fmt::format("kernel entry ({},{}) = {} outside [0,1]", x, y, p));
      }
    }
    const double sum = rows.row(x).sum();
    const double deviation = std::abs(sum - 1.0);
    if (deviation <= kStochasticTolerance) continue;
    if (deviation < kRenormalizeLimit) {
      rows.row(x) /= sum;
      continue;
    }
    throw InvalidArgument(
        fmt::format("kernel row {} sums to {:.17g}, not 1", x, sum));
  }
}

}  // namespace

TransitionKernel::TransitionKernel(StateSpace space, Eigen::MatrixXd rows,
                                   StepLength step)
    : space_(std::move(space)), rows_(std::move(rows)), step_(step) {
  const auto n = static_cast<Eigen::Index>(space_.size());
  if (rows_.rows() != n || rows_.cols() != n) {
    throw DimensionError(fmt::format("kernel is {}x{} over a {}-state space",
                                     rows_.rows(), rows_.cols(), n));
  }
  if (step_ <= 0) throw InvalidArgument("kernel step must be positive");
  validate_and_normalize(rows_);
}

TransitionKernel TransitionKernel::identity(StateSpace space, StepLength step) {
  const auto n = static_cast<Eigen::Index>(space.size());
  return TransitionKernel(std::move(space), Eigen::MatrixXd::Identity(n, n),
                          step);
}

Eigen::VectorXd TransitionKernel::apply(const Eigen::VectorXd& f) const {
  if (f.size() != rows_.cols())
    throw DimensionError("function length does not match kernel size");
  return rows_ * f;
}

TransitionKernel compose(const TransitionKernel& first,
                         const TransitionKernel& second) {
  if (!(first.space() == second.space()))
    throw DimensionError("compose: kernels live on different state spaces");
  return TransitionKernel(first.space(), first.rows() * second.rows(),
                          first.step() + second.step());
}

TransitionKernel power(const TransitionKernel& kernel, unsigned n) {
  if (n == 0) throw InvalidArgument("kernel power must be >= 1");
  Eigen::MatrixXd result = kernel.rows();
  for (unsigned i = 1; i < n; ++i) result = result * kernel.rows();
  return TransitionKernel(kernel.space(), std::move(result),
                          kernel.step() * static_cast<std::int64_t>(n));
}

}  // namespace longrun::markov
