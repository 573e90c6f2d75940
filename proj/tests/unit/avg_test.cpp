// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <gtest/gtest.h>

#include "longrun/avg/average_reward.hpp"
#include "longrun/avg/chain.hpp"
#include "longrun/avg/sweeps.hpp"
#include "longrun/error.hpp"
#include "longrun/markov/invariant.hpp"
#include "longrun/sde/registry.hpp"
#include "oracles.hpp"

namespace la = longrun::avg;
namespace lm = longrun::markov;
namespace ls = longrun::sde;
namespace lt = longrun::testing;

namespace {

la::ControlledChain two_state_chain() {
  Eigen::MatrixXd p(2, 2);
  p << 0.9, 0.1, 0.2, 0.8;
  Eigen::VectorXd c(2);
  c << 0.0, 1.0;
  return la::ControlledChain(lm::StateSpace::indexed(2), p, c);
}

la::ChainControl zero_control(std::size_t n) {
  return la::ChainControl{"zero", Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))};
}

double exact_j(const la::ControlledChain& chain, const la::ChainControl& u, unsigned m) {
  const auto sub = chain.substep_kernel(u, m);
  return la::average_reward_exact(la::unit_kernel(sub, m),
                                  la::unit_aggregate(sub, chain.reward(u), m), m)
      .value;
}

la::ControlledChain mixture_chain(lt::Rng& rng, int n) {
  return la::ControlledChain(lm::StateSpace::indexed(static_cast<std::size_t>(n)),
                             lt::random_ergodic(rng, n), lt::random_vector(rng, n, -1, 1),
                             lt::random_ergodic(rng, n), lt::random_vector(rng, n, -1, 1));
}

}  // namespace

TEST(ExactAverage, TwoStateExample) {
  const auto chain = two_state_chain();
  const auto u = zero_control(2);
  EXPECT_NEAR(exact_j(chain, u, 0), 1.0 / 3.0, 1e-14);
  const auto r = la::average_reward_exact(chain.substep_kernel(u, 0), chain.reward(u));
  EXPECT_EQ(r.method, la::Method::exact_invariant);
  EXPECT_EQ(r.std_error, 0.0);
}

TEST(ExactAverage, AgreesWithEigenOracle) {
  lt::Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 6;
    const Eigen::MatrixXd p = lt::random_ergodic(rng, n);
    const Eigen::VectorXd c = lt::random_vector(rng, n, -2, 2);
    const unsigned m = static_cast<unsigned>(trial % 4);
    const la::ControlledChain chain(lm::StateSpace::indexed(static_cast<std::size_t>(n)), p, c);
    EXPECT_NEAR(exact_j(chain, zero_control(static_cast<std::size_t>(n)), m),
                lt::average_reward_eig(p, c, m), 1e-10);
  }
}

TEST(ExactAverage, UnitAverageEqualsSubstepStationaryReward) {
  // The unit kernel and the substep kernel share the invariant law, so J^m
  // reduces to pi . c for every m.
  lt::Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 5;
    const Eigen::MatrixXd p = lt::random_ergodic(rng, n);
    const Eigen::VectorXd c = lt::random_vector(rng, n, 0, 3);
    const la::ControlledChain chain(lm::StateSpace::indexed(static_cast<std::size_t>(n)), p, c);
    const double expected = lt::stationary_eig(p).dot(c);
    for (unsigned m = 0; m <= 4; ++m)
      EXPECT_NEAR(exact_j(chain, zero_control(static_cast<std::size_t>(n)), m), expected, 1e-10);
  }
}

TEST(ExactAverage, InvariantUnderRelabelling) {
  lt::Rng rng(9);
  const int n = 5;
  const Eigen::MatrixXd p = lt::random_ergodic(rng, n);
  const Eigen::VectorXd c = lt::random_vector(rng, n, -1, 1);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXd q(n, n);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    d(i) = c(perm[i]);
    for (int j = 0; j < n; ++j) q(i, j) = p(perm[i], perm[j]);
  }
  const la::ControlledChain a(lm::StateSpace::indexed(n), p, c);
  const la::ControlledChain b(lm::StateSpace::indexed(n), q, d);
  EXPECT_NEAR(exact_j(a, zero_control(n), 2), exact_j(b, zero_control(n), 2), 1e-12);
}

TEST(ExactAverage, PeriodicUnitKernelRaises) {
  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  const la::ControlledChain chain(lm::StateSpace::indexed(2), swap, Eigen::VectorXd::Ones(2));
  EXPECT_THROW(exact_j(chain, zero_control(2), 0), longrun::ErgodicityError);
}

TEST(UnitAggregate, MatchesDirectSum) {
  lt::Rng rng(3);
  const Eigen::MatrixXd p = lt::random_ergodic(rng, 4);
  const Eigen::VectorXd c = lt::random_vector(rng, 4, -1, 1);
  const lm::TransitionKernel sub(lm::StateSpace::indexed(4), p, lm::StepLength(1, 8));
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd pc = c;
  for (int i = 0; i < 8; ++i) {
    expected += pc / 8.0;
    pc = p * pc;
  }
  EXPECT_LE((la::unit_aggregate(sub, c, 3) - expected).cwiseAbs().maxCoeff(), 1e-14);
  Eigen::MatrixXd p8 = Eigen::MatrixXd::Identity(4, 4);
  for (int i = 0; i < 8; ++i) p8 = p8 * p;
  EXPECT_LE((la::unit_kernel(sub, 3).rows() - p8).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(ControlledChain, MixesRowsAndChecksControl) {
  lt::Rng rng(1);
  auto chain = mixture_chain(rng, 3);
  la::ChainControl u{"mix", Eigen::Vector3d(0.0, 0.5, 1.0)};
  const auto k = chain.substep_kernel(u, 1);
  EXPECT_LE((k.rows().row(1) - 0.5 * (chain.base.row(1) + chain.alt->row(1))).cwiseAbs().maxCoeff(),
            1e-15);
  EXPECT_LE((k.rows().row(2) - chain.alt->row(2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(chain.reward(u)(2), chain.reward_base(2) + chain.reward_slope(2), 1e-15);
  EXPECT_THROW(chain.check_control({"bad", Eigen::Vector3d(0.0, 1.5, 0.0)}), longrun::DomainError);
  EXPECT_THROW(chain.check_control({"short", Eigen::Vector2d(0.0, 0.0)}), longrun::DimensionError);
}

TEST(MonteCarlo, ChainAgreesWithExact) {
  lt::Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const auto chain = mixture_chain(rng, 4);
    la::ChainControl u{"u", lt::random_vector(rng, 4, 0, 1)};
    la::McOptions opts;
    opts.horizon = 400.0;
    opts.replicates = 64;
    opts.seed = 100 + static_cast<std::uint64_t>(trial);
    const auto mc = la::average_reward_mc(chain, u, 1, 0, opts);
    EXPECT_EQ(mc.method, la::Method::monte_carlo);
    EXPECT_GT(mc.std_error, 0.0);
    EXPECT_NEAR(mc.value, exact_j(chain, u, 1), 3.0 * mc.std_error) << "trial " << trial;
  }
}

TEST(MonteCarlo, ConstantRewardIsExact) {
  auto chain = two_state_chain();
  chain.reward_base.setConstant(0.75);
  la::McOptions opts;
  opts.horizon = 10.0;
  opts.replicates = 8;
  const auto mc = la::average_reward_mc(chain, zero_control(2), 2, 1, opts);
  EXPECT_NEAR(mc.value, 0.75, 1e-14);
  EXPECT_NEAR(mc.std_error, 0.0, 1e-14);
}

TEST(MonteCarlo, DeterministicAcrossThreads) {
  const auto chain = two_state_chain();
  la::McOptions opts;
  opts.horizon = 50.0;
  opts.replicates = 16;
  opts.seed = 4;
  const auto one = la::average_reward_replicates(chain, zero_control(2), 1, 0, opts);
  opts.threads = 4;
  const auto four = la::average_reward_replicates(chain, zero_control(2), 1, 0, opts);
  EXPECT_EQ(one, four);
}

TEST(MonteCarlo, OptionErrors) {
  const auto chain = two_state_chain();
  la::McOptions opts;
  opts.burn_in = 1.0;
  EXPECT_THROW(la::average_reward_mc(chain, zero_control(2), 0, 0, opts),
               longrun::InvalidArgument);
  opts.burn_in = 0.1;
  opts.horizon = 10.3;
  EXPECT_THROW(la::average_reward_mc(chain, zero_control(2), 1, 0, opts),
               longrun::InvalidArgument);
  opts.horizon = 10.0;
  EXPECT_THROW(la::average_reward_mc(chain, zero_control(2), 1, 5, opts),
               longrun::DimensionError);
  opts.replicates = 0;
  EXPECT_THROW(la::average_reward_mc(chain, zero_control(2), 1, 0, opts),
               longrun::InvalidArgument);
}

TEST(MonteCarlo, OuStationaryMean) {
  // J = E[X^2] = a0^2 + sigma^2 / (2 theta) for c(x) = x^2, b = a0 - x.
  const auto model = ls::make_model("ou", {});
  const auto u = ls::MarkovControl::constant({0.5}, ls::ControlBox{{-2.0}, {2.0}});
  const auto reward = longrun::RewardFunction::v_dominated(
      "sq", [](std::span<const double> x, std::span<const double>) { return x[0] * x[0]; },
      1.0, [](std::span<const double> x) { return 1.0 + x[0] * x[0]; });
  la::McOptions opts;
  opts.horizon = 100.0;
  opts.replicates = 32;
  opts.seed = 8;
  const std::vector<double> x0{0.5};
  const auto r = la::average_reward_mc(model, u, reward, {3, 8}, x0, opts);
  EXPECT_NEAR(r.value, 0.75, 3.0 * r.std_error + 0.01);
}

TEST(Sweeps, SubstepsDoubleTowardCoarseLevels) {
  la::SweepOptions opts;
  opts.base_substeps = 4;
  EXPECT_EQ(la::substeps_for(5, 5, opts), 4u);
  EXPECT_EQ(la::substeps_for(3, 5, opts), 16u);
  opts.couple_levels = false;
  EXPECT_EQ(la::substeps_for(3, 5, opts), 4u);
}

TEST(Sweeps, ChainConvergenceRows) {
  lt::Rng rng(2);
  const auto chain = mixture_chain(rng, 3);
  const la::ChainControl u{"u", Eigen::Vector3d(0.2, 0.4, 0.6)};
  la::SweepOptions opts;
  opts.method = la::Method::exact_invariant;
  const auto rows = la::convergence_sweep(chain, u, {0, 1, 3}, opts);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_FALSE(rows[0].difference.has_value());
  EXPECT_EQ(rows[2].sweep_var, 3.0);
  EXPECT_NEAR(*rows[2].difference, std::abs(rows[2].result.value - rows[1].result.value), 1e-15);
  EXPECT_THROW(la::convergence_sweep(chain, u, {1, 1}, opts), longrun::ConfigError);
  EXPECT_THROW(la::convergence_sweep(chain, u, {}, opts), longrun::ConfigError);
}

TEST(Sweeps, ChainStabilityShrinksAndEndsWithLimit) {
  lt::Rng rng(4);
  const auto chain = mixture_chain(rng, 3);
  const la::ChainControl limit{"u", Eigen::Vector3d(0.5, 0.5, 0.5)};
  const la::ChainControlFamily family = [&](std::uint64_t n) {
    return la::ChainControl{"u_n", limit.values * (1.0 - 1.0 / static_cast<double>(n))};
  };
  la::SweepOptions opts;
  opts.method = la::Method::exact_invariant;
  const auto rows = la::stability_sweep(chain, family, limit, 1, {1, 10, 100, 1000}, opts);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_TRUE(std::isinf(rows.back().sweep_var));
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    EXPECT_LT(*rows[i].difference, *rows[i - 1].difference);
    EXPECT_LT(*rows[i].measure_gap, *rows[i - 1].measure_gap);
  }
  EXPECT_LT(*rows[3].difference, 1e-2);
  EXPECT_THROW(la::stability_sweep(chain, family, limit, 1, {}, opts), longrun::ConfigError);
}

TEST(Sweeps, SdeExactModeNeedsGrid) {
  const auto model = ls::make_model("reflected-bm", {});
  const auto u = ls::MarkovControl::constant({0.0}, ls::ControlBox{{-1.0}, {1.0}});
  const auto reward = longrun::RewardFunction::bounded(
      "x", [](std::span<const double> x, std::span<const double>) { return x[0]; }, 1.0);
  la::SweepOptions opts;
  opts.method = la::Method::exact_invariant;
  EXPECT_THROW(la::convergence_sweep(model, u, reward, {0, 1}, opts), longrun::ConfigError);
}
