// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "longrun/error.hpp"
#include "longrun/markov/invariant.hpp"
#include "longrun/sde/kernel_extraction.hpp"
#include "longrun/sde/path.hpp"
#include "longrun/sde/registry.hpp"

namespace ls = longrun::sde;

namespace {

const ls::ControlSet kBox = ls::ControlBox{{-10.0}, {10.0}};

// dX = (k x + a) dt + s dW on R.
ls::SDEModel linear_model(double k, double s) {
  ls::SDEModel model;
  model.name = "linear";
  model.drift = [k](std::span<const double> x, std::span<const double> a,
                    std::span<double> out) { out[0] = k * x[0] + a[0]; };
  model.diffusion = [s](std::span<const double>, std::span<double> out) { out[0] = s; };
  model.growth_constant = 2.0 * k * k + 200.0 + s * s;
  model.nondegenerate = s != 0.0;
  return model;
}

ls::SDEModel reflected_bm(double sigma) {
  return ls::make_model("reflected-bm", {{"sigma", {sigma}}});
}

longrun::RewardFunction constant_reward(double v) {
  return longrun::RewardFunction::bounded(
      "const", [v](std::span<const double>, std::span<const double>) { return v; },
      std::abs(v));
}

}  // namespace

TEST(Level, StepAndValidation) {
  const ls::DiscretizationLevel level{3, 4};
  EXPECT_DOUBLE_EQ(level.h(), 0.125);
  EXPECT_DOUBLE_EQ(level.dt(), 0.03125);
  EXPECT_EQ(level.intervals_per_unit(), 8u);
  EXPECT_THROW((ls::DiscretizationLevel{31, 4}.validate()), longrun::InvalidArgument);
  EXPECT_THROW((ls::DiscretizationLevel{0, 0}.validate()), longrun::InvalidArgument);
}

TEST(Path, ZeroDynamicsIsConstant) {
  const auto model = linear_model(0.0, 0.0);
  const auto u = ls::MarkovControl::constant({0.0}, kBox);
  const std::vector<double> x0{1.25};
  const auto path = ls::simulate_path(model, u, {2, 8}, x0, 3.0, 11);
  EXPECT_EQ(path.intervals(), 12u);
  EXPECT_EQ(path.states.size(), 12u * 8u + 1u);
  for (const auto& x : path.states) EXPECT_EQ(x[0], 1.25);
}

TEST(Path, ConstantDriftIsExact) {
  const auto model = linear_model(0.0, 0.0);
  const auto u = ls::MarkovControl::constant({0.7}, kBox);
  const std::vector<double> x0{-0.5};
  const auto path = ls::simulate_path(model, u, {1, 4}, x0, 5.0, 3);
  EXPECT_NEAR(path.states.back()[0], -0.5 + 0.7 * 5.0, 1e-12);
  EXPECT_NEAR(path.times.back(), 5.0, 1e-12);
}

TEST(Path, HorizonMustBeMultipleOfStep) {
  const auto model = linear_model(0.0, 0.0);
  const auto u = ls::MarkovControl::constant({0.0}, kBox);
  const std::vector<double> x0{0.0};
  EXPECT_THROW(ls::simulate_path(model, u, {2, 4}, x0, 0.3, 1), longrun::InvalidArgument);
  const std::vector<double> wrong{0.0, 1.0};
  EXPECT_THROW(ls::simulate_path(model, u, {2, 4}, wrong, 1.0, 1), longrun::DimensionError);
}

TEST(Path, ControlIsFrozenOnEachInterval) {
  const auto model = linear_model(-1.0, 0.5);
  const ls::MarkovControl u("feedback", kBox,
                            [](std::span<const double> x, std::span<double> a) {
                              a[0] = std::clamp(-2.0 * x[0], -10.0, 10.0);
                            });
  const std::vector<double> x0{1.0};
  const ls::DiscretizationLevel level{2, 8};
  const auto path = ls::simulate_path(model, u, level, x0, 4.0, 21);
  ASSERT_EQ(path.intervals(), 16u);
  for (std::size_t k = 0; k < path.intervals(); ++k) {
    const double at_start = path.states[k * level.inner_substeps][0];
    EXPECT_DOUBLE_EQ(path.controls[k][0], std::clamp(-2.0 * at_start, -10.0, 10.0));
  }
}

TEST(Path, ControlLeavingSetThrows) {
  const auto model = linear_model(0.0, 0.0);
  const ls::MarkovControl u("escape", kBox,
                            [](std::span<const double>, std::span<double> a) { a[0] = 50.0; });
  const std::vector<double> x0{0.0};
  EXPECT_THROW(ls::simulate_path(model, u, {0, 4}, x0, 1.0, 1), longrun::DomainError);
  EXPECT_THROW(ls::MarkovControl::constant({20.0}, kBox), longrun::DomainError);
}

TEST(Path, SameKeySamePath) {
  const auto model = linear_model(-1.0, 1.0);
  const auto u = ls::MarkovControl::constant({0.0}, kBox);
  const std::vector<double> x0{0.0};
  const auto a = ls::simulate_path(model, u, {3, 4}, x0, 2.0, ls::StreamKey{5, 1, 2});
  const auto b = ls::simulate_path(model, u, {3, 4}, x0, 2.0, ls::StreamKey{5, 1, 2});
  const auto c = ls::simulate_path(model, u, {3, 4}, x0, 2.0, ls::StreamKey{5, 1, 3});
  EXPECT_EQ(a.states, b.states);
  EXPECT_NE(a.states.back(), c.states.back());
}

TEST(Path, ExplosionIsReported) {
  const auto model = linear_model(400.0, 0.0);
  const auto u = ls::MarkovControl::constant({0.0}, kBox);
  const std::vector<double> x0{1.0};
  EXPECT_THROW(ls::simulate_path(model, u, {0, 1}, x0, 200.0, 1), longrun::DivergenceError);
}

TEST(Path, EulerErrorHalvesWithStep) {
  // x' = -x + a has x(T) = a + (x0 - a) e^{-T}; Euler error is first order in dt.
  const auto model = linear_model(-1.0, 0.0);
  const auto u = ls::MarkovControl::constant({0.5}, kBox);
  const std::vector<double> x0{2.0};
  const double exact = 0.5 + 1.5 * std::exp(-2.0);
  std::vector<double> errors;
  for (unsigned m = 1; m <= 5; ++m) {
    const auto path = ls::simulate_path(model, u, {m, 4}, x0, 2.0, 1);
    errors.push_back(std::abs(path.states.back()[0] - exact));
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double ratio = errors[i] / errors[i - 1];
    EXPECT_GT(ratio, 0.4);
    EXPECT_LT(ratio, 0.6);
  }
}

TEST(Reflection, FoldsIntoBox) {
  const ls::Box box{{0.0}, {1.0}};
  std::vector<double> x{1.3};
  ls::fold_into_box(box, x);
  EXPECT_NEAR(x[0], 0.7, 1e-15);
  x = {-0.25};
  ls::fold_into_box(box, x);
  EXPECT_NEAR(x[0], 0.25, 1e-15);
  x = {2.6};
  ls::fold_into_box(box, x);
  EXPECT_NEAR(x[0], 0.6, 1e-12);
  EXPECT_THROW((ls::Box{{0.0}, {0.0}}.validate()), longrun::DomainError);
}

TEST(Reflection, PathStaysInBox) {
  const auto model = reflected_bm(3.0);
  const auto u = ls::MarkovControl::constant({2.0}, kBox);
  const std::vector<double> x0{0.5};
  const auto path = ls::simulate_reflected_path(model, u, {2, 16}, x0, 20.0, 9);
  for (const auto& x : path.states) {
    EXPECT_GE(x[0], 0.0);
    EXPECT_LE(x[0], 1.0);
  }
  const std::vector<double> outside{1.5};
  EXPECT_THROW(ls::simulate_reflected_path(model, u, {0, 4}, outside, 1.0, 1),
               longrun::DomainError);
  EXPECT_THROW(ls::simulate_reflected_path(linear_model(0, 1), u, {0, 4}, x0, 1.0, 1),
               longrun::DomainError);
}

TEST(Reflection, BrownianMotionIsUniform) {
  // Independent endpoints at t = 2; the law is uniform on [0,1] up to e^{-pi^2}.
  const auto model = reflected_bm(1.0);
  const auto u = ls::MarkovControl::constant({0.0}, kBox);
  const std::vector<double> x0{0.5};
  const ls::DiscretizationLevel level{2, 16};
  constexpr int kBins = 10;
  constexpr int kSamples = 4000;
  std::vector<int> counts(kBins, 0);
  for (int r = 0; r < kSamples; ++r) {
    ls::Engine engine = ls::make_engine({77, 0, static_cast<std::uint64_t>(r)});
    const auto s = ls::run_path(model, u, level, x0, 8, engine);
    const int bin = std::min(kBins - 1, static_cast<int>(s.final_state[0] * kBins));
    ++counts[bin];
  }
  const double expected = static_cast<double>(kSamples) / kBins;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 21.67);  // chi^2_9 at the 1% level
}

TEST(RunPath, RewardSumMatchesPath) {
  const auto model = linear_model(0.0, 0.0);
  const auto u = ls::MarkovControl::constant({1.0}, kBox);
  const auto reward = longrun::RewardFunction::bounded(
      "x", [](std::span<const double> x, std::span<const double>) { return x[0]; }, 100.0);
  const std::vector<double> x0{0.0};
  ls::Engine engine = ls::make_engine({1, 0, 0});
  // x(kh) = kh with h = 1/4, summed over k = 4..7 times h.
  const auto s = ls::run_path(model, u, {2, 4}, x0, 8, engine, &reward, 4);
  EXPECT_NEAR(s.reward_sum, 0.25 * (1.0 + 1.25 + 1.5 + 1.75), 1e-12);
  EXPECT_NEAR(s.final_state[0], 2.0, 1e-12);
}

TEST(UnitAggregate, ConstantRewardIsExact) {
  const auto model = ls::make_model("ou", {});
  const auto u = ls::MarkovControl::constant({0.3}, kBox);
  const std::vector<double> x0{0.1};
  const auto e = ls::unit_reward_aggregate(model, u, constant_reward(2.5), x0, {3, 4}, 50, 8);
  EXPECT_NEAR(e.mean, 2.5, 1e-12);
  EXPECT_NEAR(e.std_error, 0.0, 1e-12);
  EXPECT_EQ(e.samples, 50u);
}

TEST(UnitAggregate, ThreadCountDoesNotChangeResult) {
  const auto model = ls::make_model("ou", {});
  const auto u = ls::MarkovControl::constant({0.3}, kBox);
  const auto reward = longrun::RewardFunction::bounded(
      "clip", [](std::span<const double> x, std::span<const double>) {
        return std::clamp(x[0], -1.0, 1.0);
      }, 1.0);
  const std::vector<double> x0{0.1};
  const auto one = ls::unit_reward_aggregate(model, u, reward, x0, {2, 4}, 64, 8, 1);
  const auto four = ls::unit_reward_aggregate(model, u, reward, x0, {2, 4}, 64, 8, 4);
  EXPECT_EQ(one.mean, four.mean);
  EXPECT_EQ(one.std_error, four.std_error);
}

TEST(Summarize, MeanAndStandardError) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto e = ls::summarize(v);
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_NEAR(e.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
}

TEST(Registry, KnownModelsAndErrors) {
  for (const auto& name : ls::model_names()) {
    const auto model = ls::make_model(name, {});
    EXPECT_EQ(model.name, name);
    std::vector<std::vector<double>> states{{0.0}, {0.5}, {1.0}};
    std::vector<std::vector<double>> controls{{-10.0}, {0.0}, {10.0}};
    const auto g = ls::spot_check_growth(model, states, controls);
    EXPECT_TRUE(g.within_declared) << name;
    EXPECT_GT(g.min_diffusion_eigenvalue, 0.0) << name;
  }
  EXPECT_THROW(ls::make_model("heston", {}), longrun::ConfigError);
  EXPECT_THROW(ls::make_model("ou", {{"kappa", {1.0}}}), longrun::ConfigError);
  EXPECT_THROW(ls::make_model("ou", {{"theta", {-1.0}}}), longrun::ConfigError);
  EXPECT_THROW(ls::make_model("reflected-bm", {{"lower", {1.0}}, {"upper", {1.0}}}),
               longrun::DomainError);
}

TEST(OuModel, TimeAverageApproachesMean) {
  // Stationary mean of dX = (a - theta X) dt + dW is a / theta.
  const auto model = ls::make_model("ou", {{"theta", {2.0}}});
  const auto u = ls::MarkovControl::constant({1.0}, kBox);
  const auto reward = longrun::RewardFunction::v_dominated(
      "x", [](std::span<const double> x, std::span<const double>) { return x[0]; }, 1.0,
      [](std::span<const double> x) { return 1.0 + x[0] * x[0]; });
  const std::vector<double> x0{0.5};
  std::vector<double> means;
  for (std::uint64_t r = 0; r < 32; ++r) {
    ls::Engine engine = ls::make_engine({3, 0, r});
    const auto s = ls::run_path(model, u, {3, 8}, x0, 800, engine, &reward, 0);
    means.push_back(s.reward_sum / 100.0);
  }
  const auto e = ls::summarize(means);
  EXPECT_NEAR(e.mean, 0.5, 3.0 * e.std_error + 0.02);
}

TEST(Grid, NodesAndNearest) {
  const auto grid = ls::make_grid(ls::Box{{0.0}, {1.0}}, 11);
  ASSERT_EQ(grid.size(), 11u);
  EXPECT_NEAR(grid.point(10)[0], 1.0, 1e-15);
  const std::vector<double> q{0.43};
  EXPECT_EQ(ls::nearest_node(grid, q), 4u);
  EXPECT_THROW(ls::make_grid(ls::Box{{0.0}, {1.0}}, 1), longrun::ConfigError);
}

TEST(EmpiricalKernel, ZeroDynamicsGivesIdentity) {
  auto model = linear_model(0.0, 0.0);
  model.domain = ls::Box{{0.0}, {1.0}};
  const auto u = ls::MarkovControl::constant({0.0}, kBox);
  const auto grid = ls::make_grid(model.box(), 6);
  const auto k = ls::empirical_unit_kernel(model, u, grid, {1, 4}, 20, 4);
  EXPECT_TRUE(k.rows().isIdentity(0.0));
}

TEST(EmpiricalKernel, SingleSampleRowsAreOneHot) {
  const auto model = reflected_bm(1.0);
  const auto u = ls::MarkovControl::constant({0.0}, kBox);
  const auto grid = ls::make_grid(model.box(), 9);
  const auto k = ls::empirical_unit_kernel(model, u, grid, {0, 8}, 1, 12);
  for (Eigen::Index x = 0; x < k.rows().rows(); ++x) {
    EXPECT_EQ(k.rows().row(x).maxCoeff(), 1.0);
    EXPECT_EQ((k.rows().row(x).array() > 0.0).count(), 1);
  }
}

TEST(EmpiricalKernel, NeedsBoxModelAndNodesInside) {
  const auto u = ls::MarkovControl::constant({0.0}, kBox);
  const auto grid = ls::make_grid(ls::Box{{0.0}, {1.0}}, 5);
  EXPECT_THROW(ls::empirical_unit_kernel(linear_model(0, 1), u, grid, {0, 4}, 10, 1),
               longrun::ConfigError);
  const auto wide = ls::make_grid(ls::Box{{-1.0}, {2.0}}, 5);
  EXPECT_THROW(ls::empirical_unit_kernel(reflected_bm(1.0), u, wide, {0, 4}, 10, 1),
               longrun::ConfigError);
  EXPECT_THROW(ls::empirical_unit_kernel(reflected_bm(1.0), u, grid, {0, 4}, 0, 1),
               longrun::ConfigError);
}

TEST(EmpiricalKernel, ReflectedBrownianMeasureMatchesProjectedUniform) {
  // Nearest-node projection gives the end nodes half-width cells.
  const auto model = reflected_bm(1.0);
  const auto u = ls::MarkovControl::constant({0.0}, kBox);
  const auto grid = ls::make_grid(model.box(), 21);
  const auto k = ls::empirical_unit_kernel(model, u, grid, {0, 16}, 10000, 2);
  const auto mu = longrun::markov::invariant_measure(k);
  for (Eigen::Index x = 0; x < 21; ++x) {
    const double cell = (x == 0 || x == 20) ? 1.0 / 40.0 : 1.0 / 20.0;
    EXPECT_NEAR(mu.weights(x), cell, 0.02) << "node " << x;
  }
}

TEST(UnitBlocks, ThreadsAndBatches) {
  const auto model = reflected_bm(0.5);
  const auto u = ls::MarkovControl::constant({0.2}, kBox);
  const auto reward = constant_reward(1.0);
  const auto grid = ls::make_grid(model.box(), 5);
  const auto one = ls::sample_unit_blocks(model, u, &reward, grid, {2, 4}, 40, 6, 1);
  const auto three = ls::sample_unit_blocks(model, u, &reward, grid, {2, 4}, 40, 6, 3);
  EXPECT_TRUE(ls::empirical_unit_kernel(one).rows() == ls::empirical_unit_kernel(three).rows());
  const auto means = ls::unit_reward_means(one);
  for (Eigen::Index x = 0; x < means.size(); ++x) EXPECT_NEAR(means(x), 1.0, 1e-12);
  const auto half = ls::batch_of(one, 1, 2);
  EXPECT_EQ(half.samples_per_state(), 20u);
  EXPECT_THROW(ls::batch_of(one, 2, 2), longrun::InvalidArgument);
}
