// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/sde/model.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>

#include "longrun/error.hpp"

namespace longrun::sde {

bool Box::contains(std::span<const double> x, double slack) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i] - slack || x[i] > upper[i] + slack) return false;
  }
  return true;
}

void Box::validate() const {
  if (lower.empty() || lower.size() != upper.size())
    throw DomainError("box bounds must be nonempty and of equal dimension");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(upper[i] > lower[i]))
      throw DomainError(fmt::format("degenerate box along axis {}: [{}, {}]", i,
                                    lower[i], upper[i]));
  }
}

const Box& SDEModel::box() const {
  if (const auto* b = std::get_if<Box>(&domain)) return *b;
  throw DomainError("model '" + name + "' has no box domain");
}

GrowthCheck spot_check_growth(const SDEModel& model,
                              const std::vector<std::vector<double>>& states,
                              const std::vector<std::vector<double>>& controls) {
  const std::size_t d = model.dim;
  GrowthCheck check;
  check.min_diffusion_eigenvalue = std::numeric_limits<double>::infinity();
  std::vector<double> b(d), sigma(d * d);
  for (const auto& x : states) {
    if (x.size() != d) throw DimensionError("growth check state has wrong size");
    model.diffusion(x, sigma);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        s(sigma.data(), d, d);
    const double sigma_sq = s.squaredNorm();
    const Eigen::MatrixXd ss = s * s.transpose();
    const double eig =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(ss).eigenvalues().minCoeff();
    check.min_diffusion_eigenvalue = std::min(check.min_diffusion_eigenvalue, eig);
    double x_sq = 0.0;
    for (double xi : x) x_sq += xi * xi;
    for (const auto& a : controls) {
      model.drift(x, a, b);
      double b_sq = 0.0;
      for (double bi : b) b_sq += bi * bi;
      check.worst_ratio = std::max(check.worst_ratio, (b_sq + sigma_sq) / (1.0 + x_sq));
    }
  }
  check.within_declared = check.worst_ratio <= model.growth_constant * (1.0 + 1e-12);
  if (model.nondegenerate && !(check.min_diffusion_eigenvalue > 0.0))
    check.within_declared = false;
  return check;
}

}  // namespace longrun::sde
